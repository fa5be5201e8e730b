#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sharedvol/series.hpp"

namespace sharedvol {

enum class TestName { ljung_box, mcleod_li, li_mak, qq_normal };

std::string to_string(TestName name);

struct DiagnosticResult {
    TestName test_name = TestName::ljung_box;
    std::vector<std::size_t> lags;
    std::vector<double> statistics;
    std::vector<double> p_values;
    bool reject_null = false;
    double significance_level = 0.05;
    /// Fraction of p-values below the level (McLeod-Li decision input).
    double rejected_fraction = 0.0;
};

/// Ljung-Box Q(m) = T(T+2) sum_{k<=m} rho_k^2 / (T-k) for m = fitted_df+1..max_lag,
/// each referred to chi-square(m - fitted_df). Rejects when the p-value at max_lag
/// is below `level`.
DiagnosticResult ljung_box(const Series& series, std::size_t max_lag, std::size_t fitted_df = 0,
                           double level = 0.05);

/// Ljung-Box on squared residuals, m = 1..max_lag. Rejects (ARCH present) when the
/// fraction of per-lag p-values below `level` exceeds `level`.
DiagnosticResult mcleod_li(const Series& residuals, std::size_t max_lag = 20, double level = 0.05);

/// Portmanteau on squared standardized residuals with df = m - (p + q).
/// Rejects (remaining ARCH) when the p-value at max_lag is below `level`.
DiagnosticResult li_mak(const Series& standardized_residuals, std::size_t max_lag, std::size_t p,
                        std::size_t q, double level = 0.05);

struct QQData {
    std::vector<double> theoretical_quantiles;
    std::vector<double> sample_quantiles;
    std::vector<double> envelope_lower;
    std::vector<double> envelope_upper;

    /// Fraction of sample quantiles inside [lower, upper].
    double coverage() const;
};

/// Normal Q-Q data at plotting positions (i - 0.5)/T with a pointwise 95% envelope.
/// The sample is affinely rescaled to the mean and standard deviation of the
/// theoretical quantile grid, so the result is invariant to affine transforms.
QQData qq_normal(const Series& series);

}  // namespace sharedvol
