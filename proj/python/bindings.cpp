#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sharedvol/correlogram.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/io.hpp"
#include "sharedvol/pipeline.hpp"
#include "sharedvol/studies.hpp"

namespace py = pybind11;
using namespace sharedvol;

namespace {

std::vector<double> values_of(const std::vector<CorrelogramPoint>& pts) {
    std::vector<double> out;
    for (const auto& p : pts) out.push_back(p.value);
    return out;
}

py::dict diagnostic_dict(const DiagnosticResult& r) {
    py::dict d;
    d["test"] = to_string(r.test_name);
    d["lags"] = r.lags;
    d["statistics"] = r.statistics;
    d["p_values"] = r.p_values;
    d["reject_null"] = r.reject_null;
    d["rejected_fraction"] = r.rejected_fraction;
    return d;
}

Panel make_panel(const std::vector<std::vector<double>>& columns, std::vector<std::string> labels) {
    std::vector<Series> series;
    for (const auto& c : columns) series.emplace_back(c);
    if (labels.empty()) return Panel(std::move(series));
    return Panel(std::move(series), std::move(labels));
}

}  // namespace

PYBIND11_MODULE(_sharedvol, m) {
    m.doc() = "Shared-volatility AR + GARCH modeling for panels of time series";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<FitFailure>(m, "FitFailure", PyExc_RuntimeError);
    py::register_exception<PipelineError>(m, "PipelineError", PyExc_RuntimeError);

    m.def("acf", [](const std::vector<double>& x, std::size_t max_lag) { return values_of(sample_acf(Series(x), max_lag)); },
          py::arg("x"), py::arg("max_lag"));
    m.def("pacf", [](const std::vector<double>& x, std::size_t max_lag) { return values_of(sample_pacf(Series(x), max_lag)); },
          py::arg("x"), py::arg("max_lag"));
    m.def("significance_limit", &significance_limit);

    m.def("identify_ar_order",
          [](const std::vector<double>& x, std::size_t max_lag, std::size_t cap) {
              return identify_ar_order(Series(x), OrderIdentification{max_lag, cap});
          },
          py::arg("x"), py::arg("max_lag") = 20, py::arg("cap") = 5);
    m.def("fit_ar",
          [](const std::vector<double>& x, std::size_t order) {
              const auto fit = fit_ar(Series(x), order);
              py::dict d;
              d["intercept"] = fit.spec.intercept;
              d["coefficients"] = fit.spec.coefficients;
              d["standard_errors"] = fit.coefficient_standard_errors;
              d["residuals"] = fit.residuals;
              d["residual_variance"] = fit.residual_variance;
              return d;
          },
          py::arg("x"), py::arg("order"));

    m.def("simulate_garch",
          [](double omega, std::vector<double> alpha, std::vector<double> beta, std::size_t length, std::uint64_t seed) {
              const auto sim = simulate_garch({omega, std::move(alpha), std::move(beta)}, length, seed);
              py::dict d;
              d["eta"] = sim.eta;
              d["sigma"] = sim.sigma;
              d["epsilon"] = sim.epsilon;
              return d;
          },
          py::arg("omega"), py::arg("alpha"), py::arg("beta"), py::arg("length"), py::arg("seed"));
    m.def("garch_log_likelihood",
          [](double omega, std::vector<double> alpha, std::vector<double> beta, const std::vector<double>& x) {
              return garch_log_likelihood({omega, std::move(alpha), std::move(beta)}, Series(x));
          },
          py::arg("omega"), py::arg("alpha"), py::arg("beta"), py::arg("x"));
    m.def("fit_garch",
          [](const std::vector<double>& x, std::size_t p, std::size_t q, std::uint64_t seed) {
              GarchFitOptions options;
              options.seed = seed;
              GARCHFit fit;
              {
                  py::gil_scoped_release release;
                  fit = fit_garch(Series(x), p, q, options);
              }
              return io::to_json(fit).dump();
          },
          py::arg("x"), py::arg("p") = 1, py::arg("q") = 1, py::arg("seed") = 20240101);

    m.def("ljung_box",
          [](const std::vector<double>& x, std::size_t max_lag, std::size_t fitted_df, double level) {
              return diagnostic_dict(ljung_box(Series(x), max_lag, fitted_df, level));
          },
          py::arg("x"), py::arg("max_lag"), py::arg("fitted_df") = 0, py::arg("level") = 0.05);
    m.def("mcleod_li",
          [](const std::vector<double>& x, std::size_t max_lag, double level) {
              return diagnostic_dict(mcleod_li(Series(x), max_lag, level));
          },
          py::arg("x"), py::arg("max_lag") = 20, py::arg("level") = 0.05);
    m.def("li_mak",
          [](const std::vector<double>& x, std::size_t max_lag, std::size_t p, std::size_t q, double level) {
              return diagnostic_dict(li_mak(Series(x), max_lag, p, q, level));
          },
          py::arg("x"), py::arg("max_lag") = 20, py::arg("p") = 1, py::arg("q") = 1, py::arg("level") = 0.05);
    m.def("qq_normal", [](const std::vector<double>& x) {
        const auto qq = qq_normal(Series(x));
        py::dict d;
        d["theoretical"] = qq.theoretical_quantiles;
        d["sample"] = qq.sample_quantiles;
        d["lower"] = qq.envelope_lower;
        d["upper"] = qq.envelope_upper;
        d["coverage"] = qq.coverage();
        return d;
    });

    m.def("run_pipeline",
          [](const std::vector<std::vector<double>>& columns, std::vector<std::string> labels, const std::string& weighting,
             double alpha, std::uint64_t seed, const std::string& garch_gate, bool legacy_baseline) {
              PipelineConfig config;
              config.weighting = parse_weighting(weighting);
              config.significance = alpha;
              config.seed = seed;
              config.garch_gate = parse_garch_gate(garch_gate);
              config.legacy_baseline = legacy_baseline;
              const Panel panel = make_panel(columns, std::move(labels));
              py::gil_scoped_release release;
              return io::report_json(run_pipeline(panel, config)).dump();
          },
          py::arg("columns"), py::arg("labels") = std::vector<std::string>{}, py::arg("weighting") = "weighted",
          py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("garch_gate") = "mcleod_li",
          py::arg("legacy_baseline") = true);

    m.def("study_presets", &study_preset_names);
    m.def("generate_panel",
          [](const std::string& preset, std::size_t replication, std::uint64_t seed) {
              auto s = study_preset(preset);
              s.master_seed = seed;
              const auto gen = generate_panel(s, replication);
              std::vector<std::vector<double>> columns;
              for (const auto& series : gen.panel.series()) columns.push_back(series.values());
              py::dict d;
              d["labels"] = gen.panel.labels();
              d["columns"] = columns;
              d["phi"] = gen.truth.phi;
              d["regime"] = gen.truth.regime;
              d["eta"] = gen.truth.eta;
              d["sigma"] = gen.truth.sigma;
              return d;
          },
          py::arg("preset"), py::arg("replication") = 0, py::arg("seed") = 1);
    m.def("run_study",
          [](const std::string& preset, std::size_t replications, std::uint64_t seed, unsigned threads) {
              auto s = study_preset(preset);
              s.replications = replications;
              s.master_seed = seed;
              s.threads = threads;
              py::gil_scoped_release release;
              return io::summary_json(run_study(s)).dump();
          },
          py::arg("preset"), py::arg("replications") = 1, py::arg("seed") = 1, py::arg("threads") = 0);
}
