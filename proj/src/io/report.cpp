#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "sharedvol/errors.hpp"
#include "sharedvol/io.hpp"

namespace sharedvol::io {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "': '" + v + "' is not a number");
    }
}

std::size_t to_size(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
        const unsigned long long n = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw InputError("config key '" + key + "': '" + v + "' is not a non-negative integer");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

// "1,1;2,1" -> {(1,1),(2,1)}
std::vector<OrderPair> to_orders(const std::string& key, const std::string& v) {
    std::vector<OrderPair> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto parts = to_list(key, item);
        if (parts.size() != 2) throw InputError("config key '" + key + "': expected 'p,q' pairs separated by ';'");
        out.emplace_back(static_cast<std::size_t>(parts[0]), static_cast<std::size_t>(parts[1]));
    }
    if (out.empty()) throw InputError("config key '" + key + "' is empty");
    return out;
}

template <class F>
void take(std::map<std::string, std::string>& keys, const std::string& key, F&& apply) {
    auto it = keys.find(key);
    if (it == keys.end()) return;
    try {
        apply(it->second);
    } catch (const InvalidArgument& e) {
        throw InputError("config key '" + key + "': " + e.what());
    }
    keys.erase(it);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json ar_fit_json(const ARFit& fit) {
    return {{"order", fit.order()},
            {"intercept", fit.spec.intercept},
            {"intercept_se", fit.intercept_standard_error},
            {"coefficients", fit.spec.coefficients},
            {"standard_errors", fit.coefficient_standard_errors},
            {"residual_variance", fit.residual_variance}};
}

json regime_json(const std::map<std::string, RegimeError>& m) {
    json out = json::object();
    for (const auto& [k, e] : m) out[k] = {{"mse", e.mse}, {"bias", e.bias}, {"count", e.count}};
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("expected 'key = value'", n);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw InputError("empty key", n);
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_key_values(ss.str());
}

void apply_pipeline_keys(PipelineConfig& c, std::map<std::string, std::string>& keys) {
    take(keys, "weighting", [&](const std::string& v) { c.weighting = parse_weighting(v); });
    take(keys, "garch_gate", [&](const std::string& v) { c.garch_gate = parse_garch_gate(v); });
    take(keys, "significance", [&](const std::string& v) { c.significance = to_double("significance", v); });
    take(keys, "max_lag", [&](const std::string& v) { c.max_lag = to_size("max_lag", v); });
    take(keys, "ar_order_cap", [&](const std::string& v) { c.ar_order_cap = to_size("ar_order_cap", v); });
    take(keys, "garch_candidates", [&](const std::string& v) { c.garch_candidates = to_orders("garch_candidates", v); });
    take(keys, "seed", [&](const std::string& v) { c.seed = to_size("seed", v); });
    take(keys, "weight_floor", [&](const std::string& v) { c.weight_floor = to_double("weight_floor", v); });
    take(keys, "mcleod_li_lags", [&](const std::string& v) { c.mcleod_li_lags = to_size("mcleod_li_lags", v); });
    take(keys, "li_mak_lags", [&](const std::string& v) { c.li_mak_lags = to_size("li_mak_lags", v); });
    take(keys, "garch_starts", [&](const std::string& v) { c.garch_starts = to_size("garch_starts", v); });
    take(keys, "legacy_baseline", [&](const std::string& v) { c.legacy_baseline = to_bool("legacy_baseline", v); });
    take(keys, "cross_correlation", [&](const std::string& v) { c.cross_correlation = to_bool("cross_correlation", v); });
    take(keys, "threads", [&](const std::string& v) { c.threads = static_cast<unsigned>(to_size("threads", v)); });
    if (!(c.significance > 0.0 && c.significance < 1.0)) throw InputError("significance must be in (0, 1)");
    if (c.max_lag == 0) throw InputError("max_lag must be positive");
    if (c.garch_starts == 0) throw InputError("garch_starts must be positive");
}

void apply_scenario_keys(StudyScenario& s, std::map<std::string, std::string>& keys) {
    take(keys, "series_count", [&](const std::string& v) { s.series_count = to_size("series_count", v); });
    take(keys, "length", [&](const std::string& v) { s.length = to_size("length", v); });
    take(keys, "replications", [&](const std::string& v) { s.replications = to_size("replications", v); });
    take(keys, "seed", [&](const std::string& v) { s.master_seed = to_size("seed", v); });
    take(keys, "weighting", [&](const std::string& v) { s.weighting = parse_weighting(v); });
    take(keys, "garch_gate", [&](const std::string& v) { s.garch_gate = parse_garch_gate(v); });
    take(keys, "compare_unweighted", [&](const std::string& v) { s.compare_unweighted = to_bool("compare_unweighted", v); });
    take(keys, "garch_starts", [&](const std::string& v) { s.garch_starts = to_size("garch_starts", v); });
    take(keys, "threads", [&](const std::string& v) { s.threads = static_cast<unsigned>(to_size("threads", v)); });
    take(keys, "omega", [&](const std::string& v) { s.garch.omega = to_double("omega", v); });
    take(keys, "alpha", [&](const std::string& v) { s.garch.alpha = to_list("alpha", v); });
    take(keys, "beta", [&](const std::string& v) { s.garch.beta = to_list("beta", v); });
    take(keys, "phi_rule", [&](const std::string& v) {
        // fixed:0.05 | uniform:0.7:0.9 | mixed
        std::vector<std::string> parts;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(trim(item));
        if (parts.size() == 2 && parts[0] == "fixed") {
            s.phi = PhiRule::fixed(to_double("phi_rule", parts[1]));
        } else if (parts.size() == 3 && parts[0] == "uniform") {
            s.phi = PhiRule::uniform(to_double("phi_rule", parts[1]), to_double("phi_rule", parts[2]));
        } else if (parts.size() == 1 && parts[0] == "mixed") {
            s.phi = PhiRule::mixed();
        } else {
            throw InputError("config key 'phi_rule': expected fixed:<v>, uniform:<a>:<b> or mixed");
        }
    });
    try {
        validate(s.garch);
    } catch (const InvalidArgument& e) {
        throw InputError(std::string("invalid GARCH parameters: ") + e.what());
    }
    if (s.series_count == 0 || s.length < 50 || s.replications == 0) {
        throw InputError("scenario needs series_count >= 1, length >= 50, replications >= 1");
    }
}

void reject_unknown_keys(const std::map<std::string, std::string>& keys) {
    if (!keys.empty()) throw InputError("unknown config key '" + keys.begin()->first + "'");
}

json to_json(const PipelineConfig& c) {
    json cands = json::array();
    for (const auto& [p, q] : c.garch_candidates) cands.push_back({{"p", p}, {"q", q}});
    return {{"weighting", to_string(c.weighting)},
            {"garch_gate", to_string(c.garch_gate)},
            {"significance", c.significance},
            {"max_lag", c.max_lag},
            {"ar_order_cap", c.ar_order_cap},
            {"garch_candidates", cands},
            {"seed", c.seed},
            {"weight_floor", c.weight_floor},
            {"mcleod_li_lags", c.mcleod_li_lags},
            {"li_mak_lags", c.li_mak_lags},
            {"garch_starts", c.garch_starts},
            {"legacy_baseline", c.legacy_baseline},
            {"cross_correlation", c.cross_correlation}};
}

json to_json(const StudyScenario& s) {
    return {{"name", s.name},
            {"series_count", s.series_count},
            {"length", s.length},
            {"phi_rule", s.phi.describe()},
            {"garch", {{"omega", s.garch.omega}, {"alpha", s.garch.alpha}, {"beta", s.garch.beta}}},
            {"replications", s.replications},
            {"master_seed", s.master_seed},
            {"weighting", to_string(s.weighting)},
            {"garch_gate", to_string(s.garch_gate)},
            {"compare_unweighted", s.compare_unweighted},
            {"garch_starts", s.garch_starts}};
}

json to_json(const DiagnosticResult& r) {
    json p = json::array();
    for (double v : r.p_values) p.push_back(finite_or_null(v));
    return {{"test", to_string(r.test_name)},
            {"lags", r.lags},
            {"statistics", r.statistics},
            {"p_values", p},
            {"rejected_fraction", r.rejected_fraction},
            {"reject_null", r.reject_null},
            {"significance_level", r.significance_level}};
}

json to_json(const GARCHFit& fit) {
    json rows = json::array();
    for (const auto& row : fit.coefficient_table()) {
        rows.push_back({{"name", row.name},
                        {"estimate", row.estimate},
                        {"std_error", optional_json(row.standard_error)},
                        {"t_value", optional_json(row.t_value)},
                        {"p_value", optional_json(row.p_value)}});
    }
    return {{"p", fit.spec.p()},
            {"q", fit.spec.q()},
            {"coefficients", rows},
            {"log_likelihood", fit.log_likelihood},
            {"aic", fit.aic},
            {"aic_per_observation", fit.aic / static_cast<double>(fit.conditional_variances.size())},
            {"persistence", fit.spec.persistence()}};
}

json report_json(const PipelineReport& r) {
    json out;
    out["schema_version"] = kReportSchemaVersion;
    out["config"] = to_json(r.config);
    out["series_count"] = r.labels.size();
    out["alignment_offset"] = r.alignment_offset;
    out["averaged_residual_length"] = r.averaged_residuals.size();

    json series = json::array();
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        const auto& est = r.estimates[i];
        json entry = {{"label", r.labels[i]},
                      {"weight", r.weights.values[i]},
                      {"first_pass", ar_fit_json(r.first_pass[i])},
                      {"second_pass", ar_fit_json(r.second_pass[i])},
                      {"final_coefficients", est.coefficients},
                      {"final_standard_errors", est.standard_errors},
                      {"orders_disagree", est.orders_disagree}};
        if (i < r.legacy.size()) {
            const auto& leg = r.legacy[i];
            if (leg.fit) {
                entry["legacy"] = {{"ar_coefficients", leg.fit->ar_coefficients},
                                   {"intercept", leg.fit->intercept},
                                   {"omega", leg.fit->garch.omega},
                                   {"alpha", leg.fit->garch.alpha},
                                   {"beta", leg.fit->garch.beta},
                                   {"log_likelihood", leg.fit->log_likelihood},
                                   {"converged", leg.fit->converged}};
            } else {
                entry["legacy"] = {{"error", leg.error}};
            }
        }
        series.push_back(std::move(entry));
    }
    out["series"] = std::move(series);
    out["mcleod_li"] = to_json(r.mcleod_li);

    json garch;
    garch["applicable"] = r.garch_applicable;
    if (r.garch) {
        json table = json::array();
        for (const auto& c : r.garch->candidates) {
            json row = {{"p", c.p}, {"q", c.q}};
            if (c.fit) {
                row["aic"] = c.fit->aic;
                row["aic_per_observation"] = c.fit->aic / static_cast<double>(r.averaged_residuals.size());
                row["log_likelihood"] = c.fit->log_likelihood;
            } else {
                row["error"] = c.error;
            }
            table.push_back(std::move(row));
        }
        garch["aic_table"] = std::move(table);
        json sq = json::array();
        for (std::size_t k = 0; k < r.garch->squared_acf.size(); ++k) {
            sq.push_back({{"lag", r.garch->squared_acf[k].lag},
                          {"acf", r.garch->squared_acf[k].value},
                          {"pacf", r.garch->squared_pacf[k].value}});
        }
        garch["squared_correlogram"] = std::move(sq);
    }
    if (const GARCHFit* fit = r.shared_garch()) {
        garch["selected"] = to_json(*fit);
    } else {
        garch["status"] = "not-applicable";
    }
    out["garch"] = std::move(garch);
    out["li_mak"] = r.li_mak ? to_json(*r.li_mak) : json(nullptr);
    out["qq_envelope_coverage"] = r.qq ? json(r.qq->coverage()) : json(nullptr);

    const auto& cc = r.cross_correlation;
    out["cross_correlation"] = cc.available ? json{{"mean", cc.mean},
                                                   {"median", cc.median},
                                                   {"sd", cc.sd},
                                                   {"min", cc.min},
                                                   {"max", cc.max},
                                                   {"fraction_positive", cc.fraction_positive}}
                                            : json(nullptr);
    out["warnings"] = r.warnings;
    return out;
}

json summary_json(const StudySummary& s) {
    json out;
    out["schema_version"] = kReportSchemaVersion;
    out["scenario"] = to_json(s.scenario);
    out["replications"] = s.replications;
    out["phi_mse"] = s.phi_mse;
    out["phi_bias"] = s.phi_bias;
    out["regime_mse"] = s.regime_mse;
    out["regime_first_pass_mse"] = s.regime_first_pass_mse;
    if (!s.regime_unweighted_mse.empty()) out["regime_unweighted_mse"] = s.regime_unweighted_mse;
    out["weighted_better_fraction"] = optional_json(s.weighted_better_fraction);
    out["sigma_rmse"] = s.sigma_rmse;
    out["sigma_correlation"] = s.sigma_correlation;
    out["garch_fitted"] = s.garch_fitted;
    out["garch_orders_selected"] = s.garch_orders_selected;
    out["aic_comparison"] = s.aic_comparison;
    out["aic11_below_aic22_fraction"] = s.aic11_below_aic22_fraction;
    out["qq_envelope_coverage"] = s.qq_envelope_coverage;
    out["qq_coverage_at_least_90_fraction"] = s.qq_coverage_at_least_90_fraction;
    out["li_mak_pass_fraction"] = s.li_mak_pass_fraction;
    out["mcleod_li_reject_fraction"] = s.mcleod_li_reject_fraction;
    out["first_pass_mean_below_truth_fraction"] = s.first_pass_mean_below_truth_fraction;
    json reps = json::array();
    for (const auto& r : s.records) {
        reps.push_back({{"index", r.index},
                        {"seed", r.seed},
                        {"final_error", regime_json(r.final_error)},
                        {"first_pass_error", regime_json(r.first_pass_error)},
                        {"second_pass_error", regime_json(r.second_pass_error)},
                        {"unweighted_final_error", regime_json(r.unweighted_final_error)},
                        {"mean_first_pass_phi", r.mean_first_pass_phi},
                        {"selected_order", r.selected_order},
                        {"candidate_aic", r.candidate_aic},
                        {"sigma_correlation", optional_json(r.sigma_correlation)},
                        {"sigma_rmse", optional_json(r.sigma_rmse)},
                        {"qq_coverage", optional_json(r.qq_coverage)},
                        {"li_mak_reject", r.li_mak_reject ? json(*r.li_mak_reject) : json(nullptr)},
                        {"mcleod_li_reject", r.mcleod_li_reject}});
    }
    out["replication_records"] = std::move(reps);
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return sha256_hex(ss.str());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw InputError("failed writing '" + path.string() + "'");
}

ManifestWriter::ManifestWriter(std::filesystem::path out_dir, std::string command)
    : dir_(std::move(out_dir)), command_(std::move(command)) {}

void ManifestWriter::write(const std::string& relative, const std::string& content) {
    write_file(dir_ / relative, content);
    checksums_[relative] = sha256_hex(content);
}

std::string ManifestWriter::finish() {
    json m = extra_;
    m["command"] = command_;
    json files = json::object();
    for (const auto& [name, sum] : checksums_) files[name] = {{"sha256", sum}};
    m["files"] = std::move(files);
    const std::string text = m.dump(2) + "\n";
    write_file(dir_ / "manifest.json", text);
    return text;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
    std::ifstream f(dir / "manifest.json");
    if (!f) throw InputError("no manifest.json in '" + dir.string() + "'");
    const json m = json::parse(f);
    std::vector<std::string> bad;
    for (const auto& [name, entry] : m.at("files").items()) {
        std::error_code ec;
        if (!std::filesystem::exists(dir / name, ec) || sha256_file(dir / name) != entry.at("sha256").get<std::string>()) {
            bad.push_back(name);
        }
    }
    return bad;
}

}  // namespace sharedvol::io
