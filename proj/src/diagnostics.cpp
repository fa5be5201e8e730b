#include "sharedvol/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sharedvol/correlogram.hpp"
#include "sharedvol/distributions.hpp"
#include "sharedvol/errors.hpp"

namespace sharedvol {

std::string to_string(TestName name) {
    switch (name) {
        case TestName::ljung_box: return "ljung_box";
        case TestName::mcleod_li: return "mcleod_li";
        case TestName::li_mak: return "li_mak";
        case TestName::qq_normal: return "qq_normal";
    }
    return "unknown";
}

namespace {

DiagnosticResult portmanteau(TestName name, const Series& series, std::size_t max_lag, std::size_t fitted_df,
                             double level) {
    if (fitted_df >= max_lag) throw InvalidArgument("fitted degrees of freedom must be below max_lag");
    const auto acf = sample_acf(series, max_lag);
    const double n = static_cast<double>(series.size());

    DiagnosticResult out;
    out.test_name = name;
    out.significance_level = level;
    double q = 0.0;
    std::size_t below = 0;
    for (std::size_t m = 1; m <= max_lag; ++m) {
        const double rho = acf[m - 1].value;
        q += rho * rho / (n - static_cast<double>(m));
        if (m <= fitted_df) continue;
        const double stat = n * (n + 2.0) * q;
        const double pv = chi_square_sf(stat, static_cast<double>(m - fitted_df));
        out.lags.push_back(m);
        out.statistics.push_back(stat);
        out.p_values.push_back(pv);
        if (pv < level) ++below;
    }
    out.rejected_fraction = static_cast<double>(below) / static_cast<double>(out.lags.size());
    out.reject_null = out.p_values.back() < level;
    return out;
}

Series squared(const Series& s) {
    std::vector<double> sq(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) sq[t] = s[t] * s[t];
    if (is_constant(sq)) throw DegenerateInput("squared series is constant");
    return Series(std::move(sq));
}

}  // namespace

DiagnosticResult ljung_box(const Series& series, std::size_t max_lag, std::size_t fitted_df, double level) {
    return portmanteau(TestName::ljung_box, series, max_lag, fitted_df, level);
}

DiagnosticResult mcleod_li(const Series& residuals, std::size_t max_lag, double level) {
    auto out = portmanteau(TestName::mcleod_li, squared(residuals), max_lag, 0, level);
    out.reject_null = out.rejected_fraction > level;
    return out;
}

DiagnosticResult li_mak(const Series& standardized_residuals, std::size_t max_lag, std::size_t p, std::size_t q,
                        double level) {
    if (max_lag <= p + q) throw InvalidArgument("Li-Mak needs max_lag > p + q");
    return portmanteau(TestName::li_mak, squared(standardized_residuals), max_lag, p + q, level);
}

double QQData::coverage() const {
    std::size_t inside = 0;
    for (std::size_t i = 0; i < sample_quantiles.size(); ++i) {
        if (sample_quantiles[i] >= envelope_lower[i] && sample_quantiles[i] <= envelope_upper[i]) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(sample_quantiles.size());
}

QQData qq_normal(const Series& series) {
    const std::size_t n = series.size();
    if (n < 10) throw InvalidArgument("Q-Q plot needs T >= 10");
    if (is_constant(series.view())) throw DegenerateInput("constant series has no Q-Q plot");

    QQData out;
    out.theoretical_quantiles.resize(n);
    out.envelope_lower.resize(n);
    out.envelope_upper.resize(n);
    const double nd = static_cast<double>(n);
    const double z975 = normal_quantile(0.975);
    for (std::size_t i = 0; i < n; ++i) {
        const double prob = (static_cast<double>(i) + 0.5) / nd;
        const double qv = normal_quantile(prob);
        out.theoretical_quantiles[i] = qv;
        // Asymptotic sd of the prob-quantile order statistic of N(0,1).
        const double se = std::sqrt(prob * (1.0 - prob) / nd) / normal_pdf(qv);
        out.envelope_lower[i] = qv - z975 * se;
        out.envelope_upper[i] = qv + z975 * se;
    }

    const double grid_mean = mean(out.theoretical_quantiles);
    const double grid_sd = sample_sd(out.theoretical_quantiles);
    const double m = mean(series.view());
    const double sd = sample_sd(series.view());
    out.sample_quantiles.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.sample_quantiles[i] = grid_mean + grid_sd * (series[i] - m) / sd;
    std::sort(out.sample_quantiles.begin(), out.sample_quantiles.end());
    return out;
}

}  // namespace sharedvol
