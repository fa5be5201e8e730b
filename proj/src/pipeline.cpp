#include "sharedvol/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sharedvol/correlogram.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/parallel.hpp"
#include "sharedvol/random.hpp"

namespace sharedvol {

std::string to_string(Weighting w) { return w == Weighting::weighted ? "weighted" : "unweighted"; }

Weighting parse_weighting(const std::string& text) {
    if (text == "weighted") return Weighting::weighted;
    if (text == "unweighted") return Weighting::unweighted;
    throw InvalidArgument("weighting must be 'weighted' or 'unweighted', got '" + text + "'");
}

std::string to_string(GarchGate g) { return g == GarchGate::mcleod_li ? "mcleod_li" : "always"; }

GarchGate parse_garch_gate(const std::string& text) {
    if (text == "mcleod_li") return GarchGate::mcleod_li;
    if (text == "always") return GarchGate::always;
    throw InvalidArgument("garch gate must be 'mcleod_li' or 'always', got '" + text + "'");
}

Weights compute_weights(const std::vector<double>& first_coefficients, double floor) {
    if (first_coefficients.empty()) throw InvalidArgument("weights need at least one coefficient");
    if (!(floor > 0.0)) throw InvalidArgument("weight floor must be positive");
    Weights w;
    w.values.resize(first_coefficients.size());
    double total = 0.0;
    for (std::size_t i = 0; i < first_coefficients.size(); ++i) {
        w.values[i] = 1.0 / std::max(std::abs(first_coefficients[i]), floor);
        total += w.values[i];
    }
    for (double& v : w.values) v /= total;
    return w;
}

Weights equal_weights(std::size_t k) {
    if (k == 0) throw InvalidArgument("weights need at least one series");
    return Weights{std::vector<double>(k, 1.0 / static_cast<double>(k))};
}

namespace {

ARFit identify_and_fit(const Series& series, const PipelineConfig& config) {
    const std::size_t max_lag = std::min(config.max_lag, series.size() - 1);
    const std::size_t order = identify_ar_order(series, OrderIdentification{max_lag, config.ar_order_cap});
    return fit_ar(series, order);
}

// Mean-only fit for a series that is constant up to rounding.
ARFit mean_only(const Series& series) {
    ARFit fit;
    fit.spec.intercept = mean(series.view());
    fit.residuals.resize(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) fit.residuals[t] = series[t] - fit.spec.intercept;
    fit.residual_variance = variance(series.view());
    return fit;
}

// `reference_sd[i]`, when given, is the scale below which series i counts as numerically constant.
std::vector<ARFit> fit_all(const std::vector<Series>& series, const std::vector<std::string>& labels,
                           const PipelineConfig& config, const char* stage,
                           const std::vector<double>& reference_sd = {}) {
    std::vector<ARFit> fits(series.size());
    parallel_for(series.size(), config.threads, [&](std::size_t i) {
        try {
            if (!reference_sd.empty() && std::sqrt(variance(series[i].view())) <= 1e-9 * reference_sd[i]) {
                fits[i] = mean_only(series[i]);
                return;
            }
            fits[i] = identify_and_fit(series[i], config);
        } catch (const std::exception& e) {
            throw PipelineError(std::string(stage) + ": " + e.what(), labels[i]);
        }
    });
    return fits;
}

}  // namespace

std::vector<ARFit> first_pass(const Panel& panel, const PipelineConfig& config) {
    return fit_all(panel.series(), panel.labels(), config, "first-pass AR fit");
}

Series average_residuals(const std::vector<std::vector<double>>& residuals, const Weights& weights) {
    if (residuals.empty()) throw PipelineError("no residual series to average", "");
    if (residuals.size() != weights.values.size()) {
        throw InvalidArgument("residual and weight counts differ");
    }
    std::size_t common = residuals.front().size();
    for (const auto& r : residuals) common = std::min(common, r.size());
    if (common == 0) throw PipelineError("residual series have no common timestamps", "");

    std::vector<double> out(common, 0.0);
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const auto& r = residuals[i];
        const std::size_t offset = r.size() - common;
        for (std::size_t t = 0; t < common; ++t) out[t] += weights.values[i] * r[offset + t];
    }
    return Series(std::move(out));
}

CrossCorrelationSummary summarize_cross_correlation(const Eigen::MatrixXd& matrix, std::size_t bins) {
    CrossCorrelationSummary s;
    std::vector<double> off;
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < matrix.cols(); ++j) off.push_back(matrix(i, j));
    }
    if (off.empty()) return s;
    s.available = true;
    s.matrix = matrix;
    s.mean = mean(off);
    s.sd = off.size() > 1 ? sample_sd(off) : 0.0;
    std::vector<double> sorted = off;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    s.min = sorted.front();
    s.max = sorted.back();
    s.fraction_positive =
        static_cast<double>(std::count_if(off.begin(), off.end(), [](double v) { return v > 0.0; })) /
        static_cast<double>(n);
    s.histogram_edges.resize(bins + 1);
    s.histogram_counts.assign(bins, 0);
    for (std::size_t b = 0; b <= bins; ++b) s.histogram_edges[b] = -1.0 + 2.0 * static_cast<double>(b) / static_cast<double>(bins);
    for (double v : off) {
        auto b = static_cast<std::size_t>((v + 1.0) / 2.0 * static_cast<double>(bins));
        ++s.histogram_counts[std::min(b, bins - 1)];
    }
    return s;
}

const GARCHFit* PipelineReport::shared_garch() const {
    if (!garch_applicable || !garch) return nullptr;
    return &garch->selected();
}

PipelineReport run_pipeline(const Panel& panel, const PipelineConfig& config) {
    const std::size_t k = panel.size();
    PipelineReport report;
    report.labels = panel.labels();
    report.config = config;

    // Step 1: per-series AR fits.
    report.first_pass = first_pass(panel, config);
    std::vector<std::vector<double>> residuals(k);
    std::vector<double> phi1(k);
    for (std::size_t i = 0; i < k; ++i) {
        residuals[i] = report.first_pass[i].residuals;
        phi1[i] = report.first_pass[i].first_coefficient();
        if (config.weighting == Weighting::weighted && std::abs(phi1[i]) < config.weight_floor) {
            report.warnings.push_back("series '" + panel.labels()[i] + "': |phi_1| below " +
                                      std::to_string(config.weight_floor) + ", weight clamped");
        } else if (config.weighting == Weighting::weighted && phi1[i] < 0.0) {
            report.warnings.push_back("series '" + panel.labels()[i] +
                                      "': negative phi_1, weight uses its absolute value");
        }
    }

    // Step 2: weights and the averaged residual.
    report.weights = config.weighting == Weighting::weighted ? compute_weights(phi1, config.weight_floor)
                                                              : equal_weights(k);
    const Series averaged = average_residuals(residuals, report.weights);
    report.averaged_residuals = averaged.values();
    const std::size_t common = averaged.size();
    report.alignment_offset = panel.length() - common;

    // Step 3: ARCH check and the shared GARCH fit.
    try {
        report.mcleod_li = mcleod_li(averaged, std::min(config.mcleod_li_lags, common - 1), config.significance);
    } catch (const DegenerateInput& e) {
        report.warnings.push_back(std::string("McLeod-Li not computable: ") + e.what());
        report.mcleod_li = DiagnosticResult{};
        report.mcleod_li.test_name = TestName::mcleod_li;
    }
    if (report.mcleod_li.reject_null || config.garch_gate == GarchGate::always) {
        GarchFitOptions options;
        options.starts = config.garch_starts;
        options.seed = derive_seed(config.seed, 1);
        try {
            report.garch = identify_garch_order(averaged, config.garch_candidates, options);
            report.garch_applicable = true;
        } catch (const std::exception& e) {
            report.warnings.push_back(std::string("shared GARCH fit failed, reporting AR-only: ") + e.what());
        }
    } else {
        report.warnings.push_back(
            "McLeod-Li does not reject on the averaged residuals: no evidence of ARCH behaviour, GARCH step "
            "skipped");
    }

    // Step 4: remove the averaged residual and refit.
    std::vector<Series> removed;
    removed.reserve(k);
    std::vector<double> reference_sd(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& y = panel[i];
        reference_sd[i] = std::sqrt(variance(y.view()));
        std::vector<double> z(common);
        for (std::size_t t = 0; t < common; ++t) z[t] = y[report.alignment_offset + t] - averaged[t];
        try {
            removed.emplace_back(std::move(z));
        } catch (const std::exception& e) {
            throw PipelineError(std::string("residual removal: ") + e.what(), panel.labels()[i]);
        }
    }
    report.second_pass = fit_all(removed, panel.labels(), config, "second-pass AR fit", reference_sd);
    for (std::size_t i = 0; i < k; ++i) {
        if (std::sqrt(variance(removed[i].view())) <= 1e-9 * reference_sd[i]) {
            report.warnings.push_back("series '" + panel.labels()[i] +
                                      "': averaged residual explains the whole series, second pass is mean-only");
        }
    }

    // Step 5: coefficient averaging.
    report.estimates.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& a = report.first_pass[i];
        const auto& b = report.second_pass[i];
        auto& est = report.estimates[i];
        est.label = panel.labels()[i];
        est.first_pass = a.spec.coefficients;
        est.second_pass = b.spec.coefficients;
        est.orders_disagree = a.order() != b.order();
        const std::size_t n = std::max(a.order(), b.order());
        est.coefficients.resize(n);
        est.standard_errors.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double ca = j < a.order() ? a.spec.coefficients[j] : 0.0;
            const double cb = j < b.order() ? b.spec.coefficients[j] : 0.0;
            const double va = j < a.order() ? a.coefficient_standard_errors[j] * a.coefficient_standard_errors[j] : 0.0;
            const double vb = j < b.order() ? b.coefficient_standard_errors[j] * b.coefficient_standard_errors[j] : 0.0;
            est.coefficients[j] = 0.5 * (ca + cb);
            est.standard_errors[j] = 0.5 * std::sqrt(va + vb);
        }
        if (est.orders_disagree) {
            report.warnings.push_back("series '" + est.label + "': first-pass order " + std::to_string(a.order()) +
                                      " differs from second-pass order " + std::to_string(b.order()));
        }
    }

    // Step 6: diagnostics on the shared fit.
    if (const GARCHFit* shared = report.shared_garch()) {
        const Series standardized(shared->standardized_residuals);
        const std::size_t pq = shared->spec.p() + shared->spec.q();
        const std::size_t lags = std::min(config.li_mak_lags, standardized.size() - 1);
        try {
            if (lags > pq) {
                report.li_mak = li_mak(standardized, lags, shared->spec.p(), shared->spec.q(), config.significance);
            }
            report.qq = qq_normal(standardized);
        } catch (const DegenerateInput& e) {
            report.warnings.push_back(std::string("shared-fit diagnostics not computable: ") + e.what());
        }
    }

    if (config.cross_correlation && k >= 2) {
        std::vector<Series> squares;
        squares.reserve(k);
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            const auto& r = residuals[i];
            std::vector<double> sq(common);
            for (std::size_t t = 0; t < common; ++t) {
                const double v = r[r.size() - common + t];
                sq[t] = v * v;
            }
            if (is_constant(sq)) {
                report.warnings.push_back("series '" + panel.labels()[i] +
                                          "': constant squared residuals, cross-correlation skipped");
                ok = false;
            } else {
                squares.emplace_back(std::move(sq));
            }
        }
        if (ok) {
            report.cross_correlation =
                summarize_cross_correlation(cross_correlation_matrix(Panel(std::move(squares), panel.labels())));
        }
    }

    // Legacy baseline: each series gets its own AR + GARCH(p, q) with the shared orders.
    if (config.legacy_baseline && report.shared_garch()) {
        const auto& sel = *report.garch;
        report.legacy.resize(k);
        GarchFitOptions options;
        options.starts = config.garch_starts;
        parallel_for(k, config.threads, [&](std::size_t i) {
            auto& leg = report.legacy[i];
            leg.label = panel.labels()[i];
            GarchFitOptions local = options;
            local.seed = derive_seed(config.seed, 1000 + i);
            try {
                leg.fit = fit_ar_garch(panel[i], report.first_pass[i].order(), sel.p, sel.q, local);
            } catch (const std::exception& e) {
                leg.error = e.what();
            }
        });
    }
    return report;
}

}  // namespace sharedvol
