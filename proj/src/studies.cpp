#include "sharedvol/studies.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sharedvol/ar_model.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/parallel.hpp"
#include "sharedvol/random.hpp"

namespace sharedvol {

PhiRule PhiRule::fixed(double v) {
    PhiRule r;
    r.kind = Kind::fixed;
    r.value = v;
    return r;
}

PhiRule PhiRule::uniform(double a, double b) {
    PhiRule r;
    r.kind = Kind::uniform;
    r.low = a;
    r.high = b;
    return r;
}

PhiRule PhiRule::mixed() {
    PhiRule r;
    r.kind = Kind::mixed;
    return r;
}

std::string PhiRule::describe() const {
    switch (kind) {
        case Kind::fixed: return "fixed(" + std::to_string(value) + ")";
        case Kind::uniform: return "uniform(" + std::to_string(low) + "," + std::to_string(high) + ")";
        case Kind::mixed:
            return "mixed(uniform(" + std::to_string(mixed_low_a) + "," + std::to_string(mixed_low_b) +
                   "),uniform(" + std::to_string(mixed_high_a) + "," + std::to_string(mixed_high_b) + "))";
    }
    return "unknown";
}

std::vector<std::string> study_preset_names() {
    return {"study1-k20", "study1-k100", "study1-k400", "study2", "study3"};
}

StudyScenario study_preset(const std::string& name) {
    StudyScenario s;
    s.name = name;
    if (name == "study1-k20" || name == "study1-k100" || name == "study1-k400") {
        s.series_count = name == "study1-k20" ? 20 : name == "study1-k100" ? 100 : 400;
        s.phi = PhiRule::fixed(0.05);
        s.weighting = Weighting::unweighted;
    } else if (name == "study2") {
        s.series_count = 400;
        s.phi = PhiRule::uniform(0.7, 0.9);
        s.weighting = Weighting::unweighted;
    } else if (name == "study3") {
        s.series_count = 400;
        s.phi = PhiRule::mixed();
        s.weighting = Weighting::weighted;
        s.compare_unweighted = true;
    } else {
        throw InvalidArgument("unknown study preset '" + name + "'");
    }
    return s;
}

GeneratedPanel generate_panel(const StudyScenario& scenario, std::size_t replication_index) {
    if (scenario.series_count == 0) throw InvalidArgument("scenario needs at least one series");
    if (scenario.length < 2) throw InvalidArgument("scenario length must be >= 2");
    const std::uint64_t seed = derive_seed(scenario.master_seed, replication_index);
    const std::size_t t_total = scenario.length + kBurnIn;
    const auto sim = simulate_garch(scenario.garch, t_total, derive_seed(seed, 0));

    Rng rng(derive_seed(seed, 1));
    const std::size_t k = scenario.series_count;
    GroundTruth truth;
    truth.phi.resize(k);
    truth.regime.resize(k);
    const auto& rule = scenario.phi;
    for (std::size_t i = 0; i < k; ++i) {
        switch (rule.kind) {
            case PhiRule::Kind::fixed:
                truth.phi[i] = rule.value;
                truth.regime[i] = "all";
                break;
            case PhiRule::Kind::uniform:
                truth.phi[i] = std::uniform_real_distribution<double>(rule.low, rule.high)(rng);
                truth.regime[i] = "all";
                break;
            case PhiRule::Kind::mixed: {
                const bool low = i < k / 2;
                truth.phi[i] = low ? std::uniform_real_distribution<double>(rule.mixed_low_a, rule.mixed_low_b)(rng)
                                   : std::uniform_real_distribution<double>(rule.mixed_high_a, rule.mixed_high_b)(rng);
                truth.regime[i] = low ? "low" : "high";
                break;
            }
        }
    }

    const Series innovations(sim.eta);
    std::vector<Series> series;
    series.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Series y = simulate_ar(ARSpec{{truth.phi[i]}, 0.0}, innovations);
        series.push_back(y.tail(scenario.length));
    }
    truth.eta.assign(sim.eta.end() - static_cast<std::ptrdiff_t>(scenario.length), sim.eta.end());
    truth.sigma.assign(sim.sigma.end() - static_cast<std::ptrdiff_t>(scenario.length), sim.sigma.end());
    truth.epsilon.assign(sim.epsilon.end() - static_cast<std::ptrdiff_t>(scenario.length), sim.epsilon.end());
    return {Panel(std::move(series)), std::move(truth)};
}

namespace {

std::string order_key(std::size_t p, std::size_t q) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

template <class Get>
std::map<std::string, RegimeError> regime_errors(const GroundTruth& truth, Get estimate) {
    std::map<std::string, RegimeError> out;
    for (std::size_t i = 0; i < truth.phi.size(); ++i) {
        const double err = estimate(i) - truth.phi[i];
        auto add = [&](const std::string& key) {
            auto& r = out[key];
            r.mse += err * err;
            r.bias += err;
            ++r.count;
        };
        add("all");
        if (truth.regime[i] != "all") add(truth.regime[i]);
    }
    for (auto& [key, r] : out) {
        r.mse /= static_cast<double>(r.count);
        r.bias /= static_cast<double>(r.count);
    }
    return out;
}

double first_or_zero(const std::vector<double>& v) { return v.empty() ? 0.0 : v.front(); }

}  // namespace

ReplicationRecord score_replication(const PipelineReport& report, const GroundTruth& truth) {
    ReplicationRecord rec;
    rec.final_error = regime_errors(truth, [&](std::size_t i) { return report.estimates[i].first_coefficient(); });
    rec.first_pass_error =
        regime_errors(truth, [&](std::size_t i) { return first_or_zero(report.estimates[i].first_pass); });
    rec.second_pass_error =
        regime_errors(truth, [&](std::size_t i) { return first_or_zero(report.estimates[i].second_pass); });
    double s = 0.0;
    for (const auto& e : report.estimates) s += first_or_zero(e.first_pass);
    rec.mean_first_pass_phi = s / static_cast<double>(report.estimates.size());

    rec.mcleod_li_reject = report.mcleod_li.reject_null;
    if (const GARCHFit* fit = report.shared_garch()) {
        rec.garch_applicable = true;
        rec.selected_order = order_key(report.garch->p, report.garch->q);
        for (const auto& c : report.garch->candidates) {
            if (c.fit) rec.candidate_aic[order_key(c.p, c.q)] = c.fit->aic;
        }
        const auto sigma_hat = fit->conditional_sd();
        const std::vector<double> sigma_true(truth.sigma.end() - static_cast<std::ptrdiff_t>(sigma_hat.size()),
                                             truth.sigma.end());
        rec.sigma_correlation = pearson(sigma_true, sigma_hat);
        double se = 0.0;
        for (std::size_t t = 0; t < sigma_hat.size(); ++t) {
            se += (sigma_hat[t] - sigma_true[t]) * (sigma_hat[t] - sigma_true[t]);
        }
        rec.sigma_rmse = std::sqrt(se / static_cast<double>(sigma_hat.size()));
        if (report.qq) rec.qq_coverage = report.qq->coverage();
        if (report.li_mak) rec.li_mak_reject = report.li_mak->reject_null;
    }
    return rec;
}

StudySummary run_study(const StudyScenario& scenario) {
    if (scenario.replications == 0) throw InvalidArgument("study needs at least one replication");
    const std::size_t reps = scenario.replications;

    std::vector<ReplicationRecord> records(reps);
    std::vector<PipelineReport> first_report(1);
    std::vector<GroundTruth> first_truth(1);

    parallel_for(reps, scenario.threads, [&](std::size_t r) {
        try {
            auto generated = generate_panel(scenario, r);
            PipelineConfig config;
            config.weighting = scenario.weighting;
            config.garch_gate = scenario.garch_gate;
            config.seed = derive_seed(scenario.master_seed, r);
            config.legacy_baseline = false;
            config.cross_correlation = false;
            config.garch_starts = scenario.garch_starts;
            config.threads = 1;
            auto report = run_pipeline(generated.panel, config);
            auto rec = score_replication(report, generated.truth);
            rec.index = r;
            rec.seed = config.seed;
            if (scenario.compare_unweighted) {
                PipelineConfig alt = config;
                alt.weighting = Weighting::unweighted;
                const auto alt_report = run_pipeline(generated.panel, alt);
                rec.unweighted_final_error = score_replication(alt_report, generated.truth).final_error;
            }
            records[r] = std::move(rec);
            if (r == 0) {
                first_report[0] = std::move(report);
                first_truth[0] = std::move(generated.truth);
            }
        } catch (const std::exception& e) {
            throw PipelineError(std::string("replication ") + std::to_string(r) + ": " + e.what(), "");
        }
    });

    StudySummary sum;
    sum.scenario = scenario;
    sum.replications = reps;
    const double n = static_cast<double>(reps);
    std::map<std::string, std::vector<double>> aics;
    std::size_t aic_below = 0, qq_count = 0, qq_ok = 0, lm_pass = 0, better = 0,
                below_truth = 0;
    double true_mean = 0.0;
    for (double v : first_truth[0].phi) true_mean += v;
    true_mean /= static_cast<double>(first_truth[0].phi.size());

    for (const auto& rec : records) {
        sum.phi_mse += rec.final_error.at("all").mse / n;
        sum.phi_bias += rec.final_error.at("all").bias / n;
        for (const auto& [key, e] : rec.final_error) sum.regime_mse[key] += e.mse / n;
        for (const auto& [key, e] : rec.first_pass_error) sum.regime_first_pass_mse[key] += e.mse / n;
        for (const auto& [key, e] : rec.unweighted_final_error) sum.regime_unweighted_mse[key] += e.mse / n;
        if (!rec.unweighted_final_error.empty() &&
            rec.final_error.at("all").mse < rec.unweighted_final_error.at("all").mse) {
            ++better;
        }
        // Fixed-phi scenarios compare against the common true value; others against the mean truth.
        const double reference = scenario.phi.kind == PhiRule::Kind::fixed ? scenario.phi.value : true_mean;
        if (rec.mean_first_pass_phi < reference) ++below_truth;
        ++sum.garch_orders_selected[rec.selected_order];
        if (rec.mcleod_li_reject) sum.mcleod_li_reject_fraction += 1.0 / n;
        if (rec.garch_applicable) {
            ++sum.garch_fitted;
            sum.sigma_correlation += *rec.sigma_correlation;
            sum.sigma_rmse += *rec.sigma_rmse;
        }
        for (const auto& [key, v] : rec.candidate_aic) aics[key].push_back(v);
        if (rec.candidate_aic.count("(1,1)") && rec.candidate_aic.count("(2,2)")) {
            if (rec.candidate_aic.at("(1,1)") < rec.candidate_aic.at("(2,2)")) ++aic_below;
        }
        if (rec.qq_coverage) {
            ++qq_count;
            sum.qq_envelope_coverage += *rec.qq_coverage;
            if (*rec.qq_coverage >= 0.9) ++qq_ok;
        }
        if (rec.li_mak_reject && !*rec.li_mak_reject) ++lm_pass;
    }
    if (scenario.compare_unweighted) sum.weighted_better_fraction = static_cast<double>(better) / n;
    if (sum.garch_fitted > 0) {
        sum.sigma_correlation /= static_cast<double>(sum.garch_fitted);
        sum.sigma_rmse /= static_cast<double>(sum.garch_fitted);
    }
    for (auto& [key, v] : aics) sum.aic_comparison[key] = mean(v);
    // Fractions are over all replications; a skipped GARCH step counts as a failure.
    sum.aic11_below_aic22_fraction = static_cast<double>(aic_below) / n;
    sum.qq_envelope_coverage = qq_count ? sum.qq_envelope_coverage / static_cast<double>(qq_count) : 0.0;
    sum.qq_coverage_at_least_90_fraction = static_cast<double>(qq_ok) / n;
    sum.li_mak_pass_fraction = static_cast<double>(lm_pass) / n;
    sum.first_pass_mean_below_truth_fraction = static_cast<double>(below_truth) / n;

    const auto& rep0 = first_report[0];
    const auto& truth0 = first_truth[0];
    if (const GARCHFit* fit = rep0.shared_garch()) {
        sum.plots.sigma_hat = fit->conditional_sd();
        sum.plots.sigma_true.assign(truth0.sigma.end() - static_cast<std::ptrdiff_t>(sum.plots.sigma_hat.size()),
                                    truth0.sigma.end());
        sum.plots.qq = rep0.qq;
    }
    for (std::size_t i = 0; i < rep0.estimates.size(); ++i) {
        const auto& e = rep0.estimates[i];
        sum.plots.phi_points.push_back({0, e.label, truth0.regime[i], truth0.phi[i], first_or_zero(e.first_pass),
                                        first_or_zero(e.second_pass), e.first_coefficient()});
    }
    sum.records = std::move(records);
    return sum;
}

}  // namespace sharedvol
