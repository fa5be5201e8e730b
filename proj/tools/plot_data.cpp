#include <algorithm>
#include <cmath>
#include <numbers>

#include "commands.hpp"
#include "sharedvol/correlogram.hpp"
#include "sharedvol/errors.hpp"

namespace sharedvol::cli {

using io::CsvTable;
using io::format_double;

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string count_str(std::size_t n) { return std::to_string(n); }

}  // namespace

std::string volatility_trace_csv(const PipelineReport& report) {
    CsvTable t{{"t", "averaged_residual", "squared"}, {}};
    for (std::size_t i = 0; i < report.averaged_residuals.size(); ++i) {
        const double v = report.averaged_residuals[i];
        t.add_row({count_str(report.alignment_offset + i + 1), format_double(v), format_double(v * v)});
    }
    return t.str();
}

std::string series_csv(const PipelineReport& report) {
    const GARCHFit* fit = report.shared_garch();
    std::vector<double> sd;
    if (fit) sd = fit->conditional_sd();
    CsvTable t{{"t", "averaged_residual", "sigma_hat", "standardized_residual"}, {}};
    for (std::size_t i = 0; i < report.averaged_residuals.size(); ++i) {
        t.add_row({count_str(report.alignment_offset + i + 1), format_double(report.averaged_residuals[i]),
                   fit ? format_double(sd[i]) : "", fit ? format_double(fit->standardized_residuals[i]) : ""});
    }
    return t.str();
}

std::string mcleod_li_csv(const DiagnosticResult& r) {
    CsvTable t{{"lag", "statistic", "p_value", "level"}, {}};
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        t.add_row({count_str(r.lags[i]), format_double(r.statistics[i]), format_double(r.p_values[i]),
                   format_double(r.significance_level)});
    }
    return t.str();
}

std::string qq_csv(const QQData& qq) {
    CsvTable t{{"theoretical", "sample", "lower", "upper"}, {}};
    for (std::size_t i = 0; i < qq.theoretical_quantiles.size(); ++i) {
        t.add_row({format_double(qq.theoretical_quantiles[i]), format_double(qq.sample_quantiles[i]),
                   format_double(qq.envelope_lower[i]), format_double(qq.envelope_upper[i])});
    }
    return t.str();
}

std::string squared_correlogram_csv(const std::vector<double>& averaged_residuals, std::size_t max_lag) {
    CsvTable t{{"lag", "acf", "pacf", "limit"}, {}};
    std::vector<double> sq(averaged_residuals.size());
    std::transform(averaged_residuals.begin(), averaged_residuals.end(), sq.begin(), [](double v) { return v * v; });
    max_lag = std::min(max_lag, sq.size() - 1);
    try {
        const Series s(sq);
        const auto acf = sample_acf(s, max_lag);
        const auto pacf = sample_pacf(s, max_lag);
        const double limit = significance_limit(sq.size());
        for (std::size_t k = 0; k < acf.size(); ++k) {
            t.add_row({count_str(acf[k].lag), format_double(acf[k].value), format_double(pacf[k].value),
                       format_double(limit)});
        }
    } catch (const DegenerateInput&) {
        // constant squares: no correlogram, header only
    }
    return t.str();
}

std::string phi_scatter_csv(const PipelineReport& report) {
    CsvTable t{{"label", "weight", "phi_first", "phi_second", "phi_final", "phi_old"}, {}};
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        const auto& est = report.estimates[i];
        std::string old;
        if (i < report.legacy.size() && report.legacy[i].fit && !report.legacy[i].fit->ar_coefficients.empty()) {
            old = format_double(report.legacy[i].fit->ar_coefficients[0]);
        }
        const auto& second = report.second_pass[i].spec.coefficients;
        t.add_row({report.labels[i], format_double(report.weights.values[i]),
                   format_double(report.first_pass[i].first_coefficient()),
                   second.empty() ? "0" : format_double(second[0]), format_double(est.first_coefficient()), old});
    }
    return t.str();
}

std::string cross_correlation_histogram_csv(const CrossCorrelationSummary& s) {
    CsvTable t{{"bin_lower", "bin_upper", "count"}, {}};
    if (!s.available) return t.str();
    for (std::size_t b = 0; b < s.histogram_counts.size(); ++b) {
        t.add_row({format_double(s.histogram_edges[b]), format_double(s.histogram_edges[b + 1]),
                   count_str(s.histogram_counts[b])});
    }
    return t.str();
}

std::string study_summary_csv(const StudySummary& s) {
    CsvTable t{{"metric", "value"}, {}};
    auto add = [&](const std::string& k, double v) { t.add_row({k, format_double(v)}); };
    add("replications", static_cast<double>(s.replications));
    add("phi_mse", s.phi_mse);
    add("phi_bias", s.phi_bias);
    for (const auto& [k, v] : s.regime_mse) add("phi_mse_" + k, v);
    for (const auto& [k, v] : s.regime_first_pass_mse) add("phi_first_pass_mse_" + k, v);
    for (const auto& [k, v] : s.regime_unweighted_mse) add("phi_unweighted_mse_" + k, v);
    if (s.weighted_better_fraction) add("weighted_better_fraction", *s.weighted_better_fraction);
    add("sigma_rmse", s.sigma_rmse);
    add("sigma_correlation", s.sigma_correlation);
    add("garch_fitted", static_cast<double>(s.garch_fitted));
    for (const auto& [k, v] : s.garch_orders_selected) add("selected_" + k, static_cast<double>(v));
    for (const auto& [k, v] : s.aic_comparison) add("mean_aic_" + k, v);
    add("aic11_below_aic22_fraction", s.aic11_below_aic22_fraction);
    add("qq_envelope_coverage", s.qq_envelope_coverage);
    add("qq_coverage_at_least_90_fraction", s.qq_coverage_at_least_90_fraction);
    add("li_mak_pass_fraction", s.li_mak_pass_fraction);
    add("mcleod_li_reject_fraction", s.mcleod_li_reject_fraction);
    add("first_pass_mean_below_truth_fraction", s.first_pass_mean_below_truth_fraction);
    return t.str();
}

std::string replications_csv(const StudySummary& s) {
    std::vector<std::string> regimes;
    if (!s.records.empty()) {
        for (const auto& [k, e] : s.records.front().final_error) regimes.push_back(k);
    }
    CsvTable t{{"replication", "seed", "mean_first_pass_phi", "mcleod_li_reject", "selected_order", "sigma_correlation",
                "sigma_rmse", "qq_coverage", "li_mak_reject"},
               {}};
    for (const auto& r : regimes) t.header.push_back("mse_" + r);
    for (const auto& r : regimes) t.header.push_back("first_pass_mse_" + r);
    if (s.weighted_better_fraction) {
        for (const auto& r : regimes) t.header.push_back("unweighted_mse_" + r);
    }
    for (const auto& rec : s.records) {
        std::vector<std::string> row{count_str(rec.index),
                                     std::to_string(rec.seed),
                                     format_double(rec.mean_first_pass_phi),
                                     rec.mcleod_li_reject ? "1" : "0",
                                     rec.selected_order,
                                     opt(rec.sigma_correlation),
                                     opt(rec.sigma_rmse),
                                     opt(rec.qq_coverage),
                                     rec.li_mak_reject ? (*rec.li_mak_reject ? "1" : "0") : ""};
        for (const auto& r : regimes) row.push_back(format_double(rec.final_error.at(r).mse));
        for (const auto& r : regimes) row.push_back(format_double(rec.first_pass_error.at(r).mse));
        if (s.weighted_better_fraction) {
            for (const auto& r : regimes) row.push_back(format_double(rec.unweighted_final_error.at(r).mse));
        }
        t.add_row(std::move(row));
    }
    return t.str();
}

std::string sigma_overlay_csv(const StudyPlotData& p) {
    CsvTable t{{"t", "sigma_true", "sigma_hat"}, {}};
    for (std::size_t i = 0; i < p.sigma_hat.size(); ++i) {
        t.add_row({count_str(i + 1), format_double(p.sigma_true[i]), format_double(p.sigma_hat[i])});
    }
    return t.str();
}

std::string study_phi_scatter_csv(const StudyPlotData& p) {
    CsvTable t{{"replication", "label", "regime", "phi", "phi_first", "phi_second", "phi_final"}, {}};
    for (const auto& pt : p.phi_points) {
        t.add_row({count_str(pt.replication), pt.label, pt.regime, format_double(pt.phi), format_double(pt.phi_first),
                   format_double(pt.phi_second), format_double(pt.phi_final)});
    }
    return t.str();
}

// Gaussian kernel density of the final estimates per regime, Silverman bandwidth.
std::string phi_density_csv(const StudyPlotData& p, std::size_t grid) {
    std::map<std::string, std::vector<double>> groups;
    for (const auto& pt : p.phi_points) groups[pt.regime].push_back(pt.phi_final);
    CsvTable t{{"regime", "phi", "density"}, {}};
    for (const auto& [regime, xs] : groups) {
        if (xs.size() < 2) continue;
        double m = 0.0;
        for (double x : xs) m += x;
        m /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        const double h = std::max(1.06 * sd * std::pow(static_cast<double>(xs.size()), -0.2), 1e-4);
        const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
        const double lo = *lo_it - 3.0 * h;
        const double hi = *hi_it + 3.0 * h;
        for (std::size_t g = 0; g < grid; ++g) {
            const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid - 1);
            double d = 0.0;
            for (double v : xs) {
                const double z = (x - v) / h;
                d += std::exp(-0.5 * z * z);
            }
            d /= static_cast<double>(xs.size()) * h * std::sqrt(2.0 * std::numbers::pi);
            t.add_row({regime, format_double(x), format_double(d)});
        }
    }
    return t.str();
}

std::string ground_truth_csv(const Panel& panel, const GroundTruth& truth) {
    CsvTable t{{"label", "regime", "phi"}, {}};
    for (std::size_t i = 0; i < panel.size(); ++i) {
        t.add_row({panel.labels()[i], truth.regime[i], format_double(truth.phi[i])});
    }
    return t.str();
}

std::string ground_truth_series_csv(const GroundTruth& truth) {
    CsvTable t{{"t", "eta", "sigma", "epsilon"}, {}};
    for (std::size_t i = 0; i < truth.eta.size(); ++i) {
        t.add_row({count_str(i + 1), format_double(truth.eta[i]), format_double(truth.sigma[i]),
                   format_double(truth.epsilon[i])});
    }
    return t.str();
}

}  // namespace sharedvol::cli
