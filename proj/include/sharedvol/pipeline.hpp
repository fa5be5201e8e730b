#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sharedvol/ar_model.hpp"
#include "sharedvol/diagnostics.hpp"
#include "sharedvol/garch_model.hpp"
#include "sharedvol/series.hpp"

namespace sharedvol {

enum class Weighting { weighted, unweighted };

/// When the shared GARCH model is fitted: only after McLeod-Li rejects on the
/// averaged residuals, or unconditionally (the McLeod-Li result is still reported).
enum class GarchGate { mcleod_li, always };

std::string to_string(Weighting w);
Weighting parse_weighting(const std::string& text);
std::string to_string(GarchGate g);
GarchGate parse_garch_gate(const std::string& text);

struct PipelineConfig {
    Weighting weighting = Weighting::weighted;
    GarchGate garch_gate = GarchGate::mcleod_li;
    double significance = 0.05;
    std::size_t max_lag = 20;
    std::size_t ar_order_cap = 5;
    std::vector<OrderPair> garch_candidates = default_garch_candidates();
    std::uint64_t seed = 0;
    /// |phi_1| is clamped below at this value before inversion.
    double weight_floor = 0.01;
    std::size_t mcleod_li_lags = 20;
    std::size_t li_mak_lags = 20;
    std::size_t garch_starts = 5;
    /// Per-series AR + GARCH fits without averaging (the comparison baseline).
    bool legacy_baseline = true;
    bool cross_correlation = true;
    unsigned threads = 0;
};

/// Normalized weights summing to 1.
struct Weights {
    std::vector<double> values;
};

/// w_i = 1 / max(|phi_i|, floor), W_i = w_i / sum_j w_j.
Weights compute_weights(const std::vector<double>& first_coefficients, double floor = 0.01);
Weights equal_weights(std::size_t k);

/// Per series: identify the AR order from the PACF and fit it by least squares.
/// Order 0 is a mean-only fit whose residuals are the demeaned series.
std::vector<ARFit> first_pass(const Panel& panel, const PipelineConfig& config = {});

/// Pointwise weighted sum after aligning every residual series on its trailing
/// timestamps (leading entries dropped to the shortest length).
Series average_residuals(const std::vector<std::vector<double>>& residuals, const Weights& weights);

struct SeriesEstimate {
    std::string label;
    std::vector<double> first_pass;
    std::vector<double> second_pass;
    /// Elementwise mean of both passes; a shorter pass is padded with zero
    /// coefficients (an AR(u) is an AR(u') with trailing zeros).
    std::vector<double> coefficients;
    /// 1/2 sqrt(Var_1 + Var_2) per coefficient.
    std::vector<double> standard_errors;
    bool orders_disagree = false;
    double first_coefficient() const noexcept { return coefficients.empty() ? 0.0 : coefficients.front(); }
};

struct LegacyEstimate {
    std::string label;
    std::optional<ARGARCHFit> fit;
    std::string error;
};

struct CrossCorrelationSummary {
    bool available = false;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    double fraction_positive = 0.0;
    std::vector<double> histogram_edges;
    std::vector<std::size_t> histogram_counts;
    Eigen::MatrixXd matrix;
};

/// Summary of the off-diagonal entries of a correlation matrix.
CrossCorrelationSummary summarize_cross_correlation(const Eigen::MatrixXd& matrix, std::size_t bins = 40);

struct PipelineReport {
    std::vector<std::string> labels;
    PipelineConfig config;
    std::vector<ARFit> first_pass;
    std::vector<ARFit> second_pass;
    Weights weights;
    /// Number of leading timestamps dropped when aligning the residuals.
    std::size_t alignment_offset = 0;
    std::vector<double> averaged_residuals;
    DiagnosticResult mcleod_li;
    bool garch_applicable = false;
    std::optional<GarchOrderSelection> garch;
    std::optional<DiagnosticResult> li_mak;
    std::optional<QQData> qq;
    std::vector<SeriesEstimate> estimates;
    CrossCorrelationSummary cross_correlation;
    std::vector<LegacyEstimate> legacy;
    std::vector<std::string> warnings;

    /// Shared GARCH fit, or nullptr when the GARCH step was skipped or failed.
    const GARCHFit* shared_garch() const;
};

/// First pass, weighting, residual averaging, McLeod-Li, shared GARCH fit,
/// residual removal, second pass and coefficient averaging, then diagnostics.
/// Throws PipelineError naming the series when a per-series step fails.
PipelineReport run_pipeline(const Panel& panel, const PipelineConfig& config = {});

}  // namespace sharedvol
