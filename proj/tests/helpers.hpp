#pragma once

#include <vector>

#include "sharedvol/ar_model.hpp"
#include "sharedvol/random.hpp"
#include "sharedvol/series.hpp"

namespace testing {

inline std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    sharedvol::Rng rng(seed);
    return sharedvol::standard_normal(rng, n);
}

// AR path with a 200-point burn-in discarded.
inline sharedvol::Series ar_path(const std::vector<double>& phi, std::uint64_t seed, std::size_t n) {
    const auto e = white_noise(seed, n + 200);
    const auto y = sharedvol::simulate_ar({phi, 0.0}, sharedvol::Series(e));
    return y.tail(n);
}

}  // namespace testing
