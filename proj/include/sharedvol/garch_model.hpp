#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sharedvol/correlogram.hpp"
#include "sharedvol/optimizer.hpp"
#include "sharedvol/series.hpp"

namespace sharedvol {

/// sigma^2_t = omega + sum_i alpha_i eta^2_{t-i} + sum_j beta_j sigma^2_{t-j}
///
/// q = alpha.size() (ARCH terms), p = beta.size() (GARCH terms).
struct GARCHSpec {
    double omega = 0.1;
    std::vector<double> alpha{0.2};
    std::vector<double> beta{0.5};

    std::size_t p() const noexcept { return beta.size(); }
    std::size_t q() const noexcept { return alpha.size(); }
    double persistence() const noexcept;
    /// omega / (1 - persistence)
    double unconditional_variance() const noexcept;
    /// Parameters flattened as (omega, alpha_1..alpha_q, beta_1..beta_p).
    std::vector<double> flatten() const;
    static GARCHSpec unflatten(std::span<const double> params, std::size_t p, std::size_t q);
};

/// Throws InvalidArgument unless omega > 0, coefficients >= 0, persistence < 1, q >= 1.
void validate(const GARCHSpec& spec);

/// Runs the variance recursion over `data`; pre-sample eta^2 and sigma^2 are `initial_variance`.
/// Does not validate the spec (the Hessian probes slightly infeasible points).
std::vector<double> conditional_variances(const GARCHSpec& spec, std::span<const double> data,
                                          double initial_variance);

/// -(T/2) log(2 pi) - 1/2 sum_t [log sigma2_t + eta_t^2 / sigma2_t]
double gaussian_log_likelihood(std::span<const double> data, std::span<const double> sigma2);

/// Gaussian log-likelihood with the recursion started at the sample variance of `data`.
/// Throws FitFailure when a conditional variance underflows.
double garch_log_likelihood(const GARCHSpec& spec, const Series& data);

struct GarchSimulation {
    std::vector<double> eta;
    std::vector<double> sigma;    ///< conditional standard deviation sigma_{t|t-1}
    std::vector<double> epsilon;  ///< eta_t / sigma_t, i.i.d. N(0,1)
};

/// Simulates T points after a 200-point burn-in; the recursion starts at the
/// unconditional variance.
GarchSimulation simulate_garch(const GARCHSpec& spec, std::size_t length, std::uint64_t seed);

inline constexpr std::size_t kBurnIn = 200;

double aic(double log_likelihood, std::size_t parameter_count);

struct CoefficientRow {
    std::string name;
    double estimate = 0.0;
    std::optional<double> standard_error;
    std::optional<double> t_value;
    std::optional<double> p_value;  ///< two-sided normal
};

struct GARCHFit {
    GARCHSpec spec;
    /// Aligned with spec.flatten(); empty optional = not available (non-PD Hessian).
    std::vector<std::optional<double>> standard_errors;
    std::vector<double> conditional_variances;
    std::vector<double> standardized_residuals;
    double log_likelihood = 0.0;
    double aic = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;

    std::size_t parameter_count() const noexcept { return 1 + spec.p() + spec.q(); }
    std::vector<CoefficientRow> coefficient_table() const;
    /// sqrt of conditional_variances.
    std::vector<double> conditional_sd() const;
};

struct GarchFitOptions {
    std::size_t starts = 5;
    std::uint64_t seed = 20240101;
    NelderMeadOptions optimizer{};
    /// Relative central-difference step for the Hessian.
    double hessian_step = 1e-4;
};

/// Maximum-likelihood GARCH(p, q) fit. Requires T >= 50, p <= 2, 1 <= q <= 2.
/// Throws FitFailure (carrying the best point) when no start converges.
GARCHFit fit_garch(const Series& data, std::size_t p, std::size_t q, const GarchFitOptions& options = {});

struct GarchCandidate {
    std::size_t p = 1;
    std::size_t q = 1;
    std::optional<GARCHFit> fit;
    std::string error;
};

struct GarchOrderSelection {
    std::size_t p = 1;
    std::size_t q = 1;
    std::vector<GarchCandidate> candidates;
    std::vector<CorrelogramPoint> squared_acf;
    std::vector<CorrelogramPoint> squared_pacf;

    const GARCHFit& selected() const;
    std::optional<double> aic_of(std::size_t p, std::size_t q) const;
};

using OrderPair = std::pair<std::size_t, std::size_t>;  ///< (p, q)

/// (1,1), (2,1), (1,2), (2,2)
std::vector<OrderPair> default_garch_candidates();

/// Fits every candidate and keeps the AIC minimizer. Requires T >= 100.
/// Throws FitFailure when all candidates fail.
GarchOrderSelection identify_garch_order(const Series& data,
                                         const std::vector<OrderPair>& candidates = default_garch_candidates(),
                                         const GarchFitOptions& options = {});

}  // namespace sharedvol

namespace sharedvol {

/// Single-series AR(u) + GARCH(p, q) fitted jointly by Gaussian maximum likelihood.
struct ARGARCHFit {
    double intercept = 0.0;
    std::vector<double> ar_coefficients;
    GARCHSpec garch;
    double log_likelihood = 0.0;
    bool converged = false;
};

/// Starts from the two-stage estimate (OLS AR, then GARCH on its residuals) and
/// refines all parameters jointly.
ARGARCHFit fit_ar_garch(const Series& series, std::size_t ar_order, std::size_t p, std::size_t q,
                        const GarchFitOptions& options = {});

}  // namespace sharedvol
