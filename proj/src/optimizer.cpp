#include "sharedvol/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sharedvol {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t n = start.size();
    std::size_t evals = 0;
    auto f = [&](const std::vector<double>& x) {
        ++evals;
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    // Adaptive coefficients (Gao & Han) keep the method effective as the dimension grows.
    const double dim = static_cast<double>(n);
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dim;
    const double contract = 0.75 - 1.0 / (2.0 * dim);
    const double shrink = 1.0 - 1.0 / dim;

    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> idx(n + 1);
    bool converged = false;
    while (evals < options.max_evaluations) {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        const std::size_t best = idx.front();
        const std::size_t worst = idx.back();
        const std::size_t second = idx[n - 1];

        double xspread = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                xspread = std::max(xspread, std::abs(simplex[i][j] - simplex[best][j]));
            }
        }
        const double fspread = values[worst] - values[best];
        if (std::isfinite(values[best]) && fspread <= options.f_tolerance &&
            xspread <= options.x_tolerance) {
            converged = true;
            break;
        }
        if (xspread <= 1e-12) {
            // Collapsed simplex: accept only if the objective is flat across it.
            converged = std::isfinite(values[best]) && fspread <= 100.0 * options.f_tolerance;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / dim;
        }
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
            return p;
        };

        auto xr = along(-reflect);
        const double fr = f(xr);
        if (fr < values[best]) {
            auto xe = along(-reflect * expand);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = std::move(xr);
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        auto xc = along(outside ? -reflect * contract : contract);
        const double fc = f(xc);
        if (fc < std::min(fr, values[worst])) {
            simplex[worst] = std::move(xc);
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = f(simplex[i]);
        }
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    return {simplex[best], values[best], evals, converged};
}

}  // namespace sharedvol
