#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sharedvol/io.hpp"

namespace sharedvol::cli {

enum ExitCode : int { ok = 0, input_error = 2, analysis_error = 3 };

struct CommonOptions {
    std::string preset;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<std::string> weighting;
    std::optional<double> alpha;
    std::optional<unsigned> threads;
    std::string command_line;
};

struct SimulateOptions : CommonOptions {
    std::size_t replication = 0;
};

struct AnalyzeOptions : CommonOptions {
    std::string input;
};

struct StudyOptions : CommonOptions {
    std::optional<std::size_t> replications;
};

int run_simulate(const SimulateOptions& options);
int run_analyze(const AnalyzeOptions& options);
int run_study(const StudyOptions& options);

// Plot-data tables
std::string volatility_trace_csv(const PipelineReport& report);
std::string series_csv(const PipelineReport& report);
std::string mcleod_li_csv(const DiagnosticResult& result);
std::string qq_csv(const QQData& qq);
std::string squared_correlogram_csv(const std::vector<double>& averaged_residuals, std::size_t max_lag);
std::string phi_scatter_csv(const PipelineReport& report);
std::string cross_correlation_histogram_csv(const CrossCorrelationSummary& summary);
std::string study_summary_csv(const StudySummary& summary);
std::string replications_csv(const StudySummary& summary);
std::string sigma_overlay_csv(const StudyPlotData& plots);
std::string study_phi_scatter_csv(const StudyPlotData& plots);
std::string phi_density_csv(const StudyPlotData& plots, std::size_t grid = 101);
std::string ground_truth_csv(const Panel& panel, const GroundTruth& truth);
std::string ground_truth_series_csv(const GroundTruth& truth);

}  // namespace sharedvol::cli
