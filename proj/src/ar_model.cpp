#include "sharedvol/ar_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "sharedvol/correlogram.hpp"
#include "sharedvol/errors.hpp"

namespace sharedvol {

bool is_stationary(const std::vector<double>& coefficients) {
    // Step-down (reverse Levinson): stationary iff every reflection coefficient is inside (-1, 1).
    std::vector<double> a = coefficients;
    for (std::size_t k = a.size(); k >= 1; --k) {
        const double kappa = a[k - 1];
        if (!std::isfinite(kappa) || std::abs(kappa) >= 1.0) return false;
        const double denom = 1.0 - kappa * kappa;
        std::vector<double> next(k - 1);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = (a[j - 1] + kappa * a[k - j - 1]) / denom;
        a = std::move(next);
    }
    return true;
}

Series simulate_ar(const ARSpec& spec, const Series& innovations) {
    if (!is_stationary(spec.coefficients)) {
        throw InvalidArgument("AR coefficients are not stationary");
    }
    const std::size_t u = spec.order();
    const std::size_t n = innovations.size();
    if (n < u) throw InvalidArgument("fewer innovations than the AR order");

    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        double v = spec.intercept + innovations[t];
        for (std::size_t i = 1; i <= u; ++i) {
            const double lagged = t >= i ? y[t - i] : spec.intercept;
            v += spec.coefficients[i - 1] * lagged;
        }
        y[t] = v;
    }
    return Series(std::move(y));
}

std::size_t identify_ar_order(const Series& series, const OrderIdentification& options) {
    if (options.max_lag == 0 || options.max_lag >= series.size()) {
        throw InvalidArgument("identification lag must be in [1, T)");
    }
    const auto pacf = sample_pacf(series, options.max_lag);
    const double limit = significance_limit(series.size());
    std::size_t order = 0;
    while (order < pacf.size() && std::abs(pacf[order].value) > limit) ++order;
    return std::min(order, options.order_cap);
}

std::size_t identify_ar_order(const Series& series, std::size_t max_lag) {
    return identify_ar_order(series, OrderIdentification{max_lag, 5});
}

ARFit fit_ar(const Series& series, std::size_t order) {
    const std::size_t n_total = series.size();
    if (4 * order >= n_total) {
        throw InvalidArgument("AR order " + std::to_string(order) + " needs T > " +
                              std::to_string(4 * order) + " observations");
    }
    if (is_constant(series.view())) {
        throw FitFailure("singular AR design: constant series");
    }
    const auto y = series.view();
    const std::size_t u = order;
    const auto n = static_cast<Eigen::Index>(n_total - u);
    const auto cols = static_cast<Eigen::Index>(u + 1);

    Eigen::MatrixXd x(n, cols);
    Eigen::VectorXd target(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + u;
        target(r) = y[t];
        x(r, 0) = 1.0;
        for (std::size_t i = 1; i <= u; ++i) x(r, static_cast<Eigen::Index>(i)) = y[t - i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols) {
        throw FitFailure("singular AR design of order " + std::to_string(u));
    }
    const Eigen::VectorXd beta = qr.solve(target);
    const Eigen::VectorXd resid = target - x * beta;

    const double dof = static_cast<double>(n - cols);
    if (dof <= 0.0) throw FitFailure("no residual degrees of freedom");
    const double rss = resid.squaredNorm();
    const double s2 = rss / dof;

    // (X'X)^{-1} = P R^{-1} R^{-T} P'
    const auto r = qr.matrixR().topLeftCorner(cols, cols).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rinv = r.solve(Eigen::MatrixXd::Identity(cols, cols));
    const Eigen::MatrixXd xtx_inv_perm = rinv * rinv.transpose();
    const Eigen::MatrixXd xtx_inv =
        qr.colsPermutation() * xtx_inv_perm * qr.colsPermutation().transpose();

    ARFit fit;
    fit.spec.intercept = beta(0);
    fit.intercept_standard_error = std::sqrt(std::max(0.0, s2 * xtx_inv(0, 0)));
    fit.spec.coefficients.resize(u);
    fit.coefficient_standard_errors.resize(u);
    for (std::size_t i = 1; i <= u; ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        fit.spec.coefficients[i - 1] = beta(j);
        fit.coefficient_standard_errors[i - 1] = std::sqrt(std::max(0.0, s2 * xtx_inv(j, j)));
    }
    fit.residuals.assign(resid.data(), resid.data() + n);
    fit.residual_variance = s2;
    return fit;
}

}  // namespace sharedvol
