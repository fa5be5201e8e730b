#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sharedvol/diagnostics.hpp"
#include "sharedvol/garch_model.hpp"
#include "sharedvol/pipeline.hpp"
#include "sharedvol/series.hpp"

namespace sharedvol {

/// How the true AR(1) coefficients of a simulated panel are drawn.
struct PhiRule {
    enum class Kind { fixed, uniform, mixed };
    Kind kind = Kind::fixed;
    double value = 0.05;                   ///< fixed
    double low = 0.7, high = 0.9;          ///< uniform
    double mixed_low_a = 0.01, mixed_low_b = 0.05;   ///< first K/2 series
    double mixed_high_a = 0.7, mixed_high_b = 0.9;   ///< remaining series

    static PhiRule fixed(double v);
    static PhiRule uniform(double a, double b);
    static PhiRule mixed();
    std::string describe() const;
};

struct StudyScenario {
    std::string name = "custom";
    std::size_t series_count = 20;
    std::size_t length = 300;
    PhiRule phi;
    GARCHSpec garch{0.1, {0.2}, {0.5}};
    std::size_t replications = 1;
    std::uint64_t master_seed = 1;
    Weighting weighting = Weighting::unweighted;
    /// Also run the unweighted pipeline on every panel and record both MSEs.
    bool compare_unweighted = false;
    /// Studies fit the shared GARCH on every replication by default; the
    /// McLeod-Li outcome is recorded either way.
    GarchGate garch_gate = GarchGate::always;
    std::size_t garch_starts = 5;
    unsigned threads = 0;
};

/// study1-k20, study1-k100, study1-k400, study2, study3.
StudyScenario study_preset(const std::string& name);
std::vector<std::string> study_preset_names();

struct GroundTruth {
    std::vector<double> phi;
    std::vector<double> eta;      ///< shared innovation path
    std::vector<double> sigma;    ///< true sigma_{t|t-1}
    std::vector<double> epsilon;  ///< eta / sigma
    /// Regime name per series ("all", "low", "high").
    std::vector<std::string> regime;
};

struct GeneratedPanel {
    Panel panel;
    GroundTruth truth;
};

/// One shared GARCH path per replication, AR(1)-filtered per series. Deterministic
/// in (master_seed, replication_index).
GeneratedPanel generate_panel(const StudyScenario& scenario, std::size_t replication_index);

struct RegimeError {
    double mse = 0.0;
    double bias = 0.0;
    std::size_t count = 0;
};

struct ReplicationRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    /// Keyed by regime; "all" covers every series.
    std::map<std::string, RegimeError> final_error;
    std::map<std::string, RegimeError> first_pass_error;
    std::map<std::string, RegimeError> second_pass_error;
    std::map<std::string, RegimeError> unweighted_final_error;
    double mean_first_pass_phi = 0.0;
    bool garch_applicable = false;
    std::string selected_order = "none";
    std::map<std::string, double> candidate_aic;
    std::optional<double> sigma_correlation;
    std::optional<double> sigma_rmse;
    std::optional<double> qq_coverage;
    std::optional<bool> li_mak_reject;
    bool mcleod_li_reject = false;
};

struct StudyPlotData {
    std::vector<double> sigma_true;  ///< replication 0, aligned with sigma_hat
    std::vector<double> sigma_hat;
    std::optional<QQData> qq;        ///< replication 0 standardized residuals
    struct PhiPoint {
        std::size_t replication;
        std::string label;
        std::string regime;
        double phi, phi_first, phi_second, phi_final;
    };
    std::vector<PhiPoint> phi_points;
};

struct StudySummary {
    StudyScenario scenario;
    std::size_t replications = 0;
    double phi_mse = 0.0;
    double phi_bias = 0.0;
    std::map<std::string, double> regime_mse;
    std::map<std::string, double> regime_first_pass_mse;
    std::map<std::string, double> regime_unweighted_mse;
    /// Fraction of replications where the weighted MSE beat the unweighted one.
    std::optional<double> weighted_better_fraction;
    double sigma_rmse = 0.0;
    double sigma_correlation = 0.0;
    std::size_t garch_fitted = 0;
    std::map<std::string, std::size_t> garch_orders_selected;
    std::map<std::string, double> aic_comparison;
    double aic11_below_aic22_fraction = 0.0;
    double qq_envelope_coverage = 0.0;
    double qq_coverage_at_least_90_fraction = 0.0;
    double li_mak_pass_fraction = 0.0;
    double mcleod_li_reject_fraction = 0.0;
    double first_pass_mean_below_truth_fraction = 0.0;
    std::vector<ReplicationRecord> records;
    StudyPlotData plots;
};

/// Scores one pipeline report against the ground truth.
ReplicationRecord score_replication(const PipelineReport& report, const GroundTruth& truth);

/// Runs every replication (in parallel) and aggregates the records.
StudySummary run_study(const StudyScenario& scenario);

}  // namespace sharedvol
