#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sharedvol {

struct NelderMeadOptions {
    double initial_step = 0.5;
    /// Stop when the simplex's objective spread falls below this.
    double f_tolerance = 1e-8;
    /// ...and the simplex diameter (max-norm) falls below this.
    double x_tolerance = 1e-5;
    std::size_t max_evaluations = 20000;
};

struct NelderMeadResult {
    std::vector<double> point;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Unconstrained minimization. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace sharedvol
