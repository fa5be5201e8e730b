#pragma once

#include <cstddef>
#include <vector>

#include "sharedvol/series.hpp"

namespace sharedvol {

/// Y_t = intercept + sum_i coefficients[i] * Y_{t-1-i} + e_t
struct ARSpec {
    std::vector<double> coefficients;
    double intercept = 0.0;

    std::size_t order() const noexcept { return coefficients.size(); }
};

/// True when every root of 1 - phi_1 z - ... - phi_u z^u lies outside the unit circle.
bool is_stationary(const std::vector<double>& coefficients);

struct ARFit {
    ARSpec spec;
    /// Standard errors of `spec.coefficients` (same order).
    std::vector<double> coefficient_standard_errors;
    double intercept_standard_error = 0.0;
    /// eta_t for t = u..T-1 (length T - u).
    std::vector<double> residuals;
    double residual_variance = 0.0;

    std::size_t order() const noexcept { return spec.order(); }
    /// phi_1, or 0 for a mean-only fit.
    double first_coefficient() const noexcept {
        return spec.coefficients.empty() ? 0.0 : spec.coefficients.front();
    }
};

/// Runs the AR recursion over `innovations` with pre-sample values set to the intercept.
/// No burn-in is discarded here.
Series simulate_ar(const ARSpec& spec, const Series& innovations);

struct OrderIdentification {
    std::size_t max_lag = 20;
    std::size_t order_cap = 5;
};

/// AR order from the PACF cutoff: the number of leading lags whose |phi_{k,k}|
/// exceeds 2/sqrt(T), truncated at the cap.
std::size_t identify_ar_order(const Series& series, const OrderIdentification& options = {});
std::size_t identify_ar_order(const Series& series, std::size_t max_lag);

/// Conditional least squares with intercept. `order == 0` fits the mean only.
/// Throws FitFailure on a rank-deficient design.
ARFit fit_ar(const Series& series, std::size_t order);

}  // namespace sharedvol
