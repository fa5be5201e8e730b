#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace sharedvol::cli;

void add_common(CLI::App* cmd, CommonOptions& o, bool with_preset) {
    if (with_preset) cmd->add_option("--preset", o.preset, "Named scenario preset");
    cmd->add_option("--config", o.config_path, "Key-value configuration file");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("-o,--out", o.out_dir, "Output directory")->required();
    cmd->add_option("--weighting", o.weighting, "weighted or unweighted")
        ->check(CLI::IsMember({"weighted", "unweighted"}));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-volatility modeling for panels of autoregressive time series"};
    app.set_version_flag("--version", std::string(SHAREDVOL_VERSION));
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a panel from a preset or config");
    add_common(simulate, sim, true);
    simulate->add_option("--replication", sim.replication, "Replication index to generate");

    AnalyzeOptions ana;
    auto* analyze = app.add_subcommand("analyze", "Run the shared-volatility pipeline on a CSV panel");
    analyze->add_option("input", ana.input, "Panel CSV (header row, optional time column)")->required();
    add_common(analyze, ana, false);
    analyze->add_option("--alpha", ana.alpha, "Significance level");

    StudyOptions stu;
    auto* study = app.add_subcommand("study", "Run a Monte Carlo study");
    add_common(study, stu, true);
    study->add_option("-r,--replications", stu.replications, "Number of replications");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : input_error;
    }

    std::string command_line;
    for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);
    sim.command_line = ana.command_line = stu.command_line = command_line;

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (analyze->parsed()) return run_analyze(ana);
        return run_study(stu);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return analysis_error;
    }
}
