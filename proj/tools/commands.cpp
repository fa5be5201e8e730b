#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sharedvol/errors.hpp"

namespace sharedvol::cli {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

void stamp(io::ManifestWriter& m, const CommonOptions& o, const json& config, std::uint64_t seed) {
    m.set("command_line", o.command_line);
    m.set("tool_version", SHAREDVOL_VERSION);
    m.set("timestamp", utc_timestamp());
    m.set("config", config);
    m.set("config_hash", io::sha256_hex(config.dump()));
    m.set("master_seed", seed);
    m.set("config_file", o.config_path.empty() ? json(nullptr) : json(o.config_path));
    m.set("config_file_checksum", o.config_path.empty() ? json(nullptr) : json(io::sha256_file(o.config_path)));
}

void require_out(const CommonOptions& o) {
    if (o.out_dir.empty()) throw io::InputError("an output directory is required (-o/--out)");
}

StudyScenario resolve_scenario(const CommonOptions& o) {
    if (o.preset.empty() && o.config_path.empty()) {
        throw io::InputError("one of --preset or --config is required");
    }
    StudyScenario s = o.preset.empty() ? StudyScenario{} : study_preset(o.preset);
    if (!o.config_path.empty()) {
        auto keys = io::read_key_values(o.config_path);
        io::apply_scenario_keys(s, keys);
        io::reject_unknown_keys(keys);
    }
    if (o.seed) s.master_seed = *o.seed;
    if (o.weighting) s.weighting = parse_weighting(*o.weighting);
    if (o.threads) s.threads = *o.threads;
    return s;
}

int report_input_error(const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
}

int report_analysis_error(const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return analysis_error;
}

void print_summary(const PipelineReport& r) {
    std::cout << "series: " << r.labels.size() << ", aligned length: " << r.averaged_residuals.size() << "\n";
    std::map<std::size_t, std::size_t> orders;
    for (const auto& f : r.first_pass) ++orders[f.order()];
    std::cout << "first-pass AR orders:";
    for (const auto& [o, n] : orders) std::cout << " AR(" << o << ") x" << n;
    std::cout << "\n";
    std::cout << "weighting: " << to_string(r.config.weighting) << "\n";
    std::cout << "McLeod-Li: " << (r.mcleod_li.reject_null ? "rejected" : "not rejected") << " (fraction of lags below "
              << r.mcleod_li.significance_level << ": " << r.mcleod_li.rejected_fraction << ")\n";
    if (const GARCHFit* fit = r.shared_garch()) {
        std::cout << "shared GARCH(" << fit->spec.p() << "," << fit->spec.q() << "), AIC " << fit->aic << "\n";
        for (const auto& row : fit->coefficient_table()) {
            std::cout << "  " << std::left << std::setw(8) << row.name << std::right << std::setw(12) << row.estimate;
            if (row.standard_error) {
                std::cout << std::setw(12) << *row.standard_error << std::setw(10) << *row.t_value << std::setw(12)
                          << *row.p_value;
            } else {
                std::cout << "  (standard error not available)";
            }
            std::cout << "\n";
        }
        if (r.li_mak) {
            std::cout << "Li-Mak: " << (r.li_mak->reject_null ? "rejected" : "not rejected") << " (p = "
                      << r.li_mak->p_values.back() << ")\n";
        }
    } else {
        std::cout << "shared GARCH: not applicable\n";
    }
    constexpr std::size_t shown = 8;
    for (std::size_t i = 0; i < r.warnings.size() && i < shown; ++i) std::cout << "warning: " << r.warnings[i] << "\n";
    if (r.warnings.size() > shown) {
        std::cout << "(" << r.warnings.size() - shown << " more warnings in report.json)\n";
    }
}

}  // namespace

int run_simulate(const SimulateOptions& o) {
    StudyScenario scenario;
    try {
        require_out(o);
        scenario = resolve_scenario(o);
    } catch (const std::exception& e) {
        return report_input_error(e);
    }
    std::optional<GeneratedPanel> generated;
    try {
        generated = generate_panel(scenario, o.replication);
    } catch (const std::exception& e) {
        return report_analysis_error(e);
    }
    const GeneratedPanel& gen = *generated;
    try {
        io::ManifestWriter m(o.out_dir, "simulate");
        m.write("panel.csv", io::panel_csv(gen.panel));
        m.write("ground_truth.csv", ground_truth_csv(gen.panel, gen.truth));
        m.write("ground_truth_series.csv", ground_truth_series_csv(gen.truth));
        stamp(m, o, io::to_json(scenario), scenario.master_seed);
        m.set("replication", o.replication);
        m.set("input_checksum", nullptr);
        m.finish();
    } catch (const std::exception& e) {
        return report_input_error(e);
    }
    std::cout << "wrote " << gen.panel.size() << " series of length " << gen.panel.length() << " to " << o.out_dir
              << "\n";
    return ok;
}

int run_analyze(const AnalyzeOptions& o) {
    PipelineConfig config;
    std::optional<Panel> panel;
    std::string input_checksum;
    try {
        require_out(o);
        if (!o.preset.empty()) throw io::InputError("analyze does not take --preset");
        if (!o.config_path.empty()) {
            auto keys = io::read_key_values(o.config_path);
            io::apply_pipeline_keys(config, keys);
            io::reject_unknown_keys(keys);
        }
        if (o.seed) config.seed = *o.seed;
        if (o.weighting) config.weighting = parse_weighting(*o.weighting);
        if (o.alpha) {
            if (!(*o.alpha > 0.0 && *o.alpha < 1.0)) throw io::InputError("--alpha must be in (0, 1)");
            config.significance = *o.alpha;
        }
        if (o.threads) config.threads = *o.threads;
        try {
            panel = io::to_panel(io::read_csv(o.input));
        } catch (const io::InputError& e) {
            throw io::InputError(o.input + ": " + e.what());
        }
        input_checksum = io::sha256_file(o.input);
    } catch (const std::exception& e) {
        return report_input_error(e);
    }

    PipelineReport report;
    try {
        report = run_pipeline(*panel, config);
    } catch (const std::exception& e) {
        return report_analysis_error(e);
    }

    try {
        io::ManifestWriter m(o.out_dir, "analyze");
        m.write("report.json", io::report_json(report).dump(2) + "\n");
        m.write("series.csv", series_csv(report));
        m.write("plot_volatility_trace.csv", volatility_trace_csv(report));
        m.write("plot_mcleod_li.csv", mcleod_li_csv(report.mcleod_li));
        if (report.qq) m.write("plot_qq.csv", qq_csv(*report.qq));
        m.write("plot_squared_acf.csv", squared_correlogram_csv(report.averaged_residuals, config.max_lag));
        m.write("plot_phi_scatter.csv", phi_scatter_csv(report));
        m.write("plot_cross_correlation.csv", cross_correlation_histogram_csv(report.cross_correlation));
        stamp(m, o, io::to_json(config), config.seed);
        m.set("input", o.input);
        m.set("input_checksum", input_checksum);
        m.finish();
    } catch (const std::exception& e) {
        return report_input_error(e);
    }
    print_summary(report);
    return ok;
}

int run_study(const StudyOptions& o) {
    StudyScenario scenario;
    try {
        require_out(o);
        if (o.alpha) throw io::InputError("study does not take --alpha");
        scenario = resolve_scenario(o);
        if (o.replications) {
            if (*o.replications == 0) throw io::InputError("--replications must be positive");
            scenario.replications = *o.replications;
        }
    } catch (const std::exception& e) {
        return report_input_error(e);
    }

    StudySummary summary;
    try {
        summary = sharedvol::run_study(scenario);
    } catch (const std::exception& e) {
        return report_analysis_error(e);
    }

    try {
        io::ManifestWriter m(o.out_dir, "study");
        m.write("summary.json", io::summary_json(summary).dump(2) + "\n");
        m.write("summary.csv", study_summary_csv(summary));
        m.write("replications.csv", replications_csv(summary));
        m.write("plot_sigma_overlay.csv", sigma_overlay_csv(summary.plots));
        if (summary.plots.qq) m.write("plot_qq.csv", qq_csv(*summary.plots.qq));
        m.write("plot_phi_scatter.csv", study_phi_scatter_csv(summary.plots));
        m.write("plot_phi_density.csv", phi_density_csv(summary.plots));
        stamp(m, o, io::to_json(scenario), scenario.master_seed);
        m.set("input_checksum", nullptr);
        m.finish();
    } catch (const std::exception& e) {
        return report_input_error(e);
    }
    std::cout << "study " << scenario.name << ": " << summary.replications << " replications\n";
    std::cout << study_summary_csv(summary);
    return ok;
}

}  // namespace sharedvol::cli
