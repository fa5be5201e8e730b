#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sharedvol/pipeline.hpp"
#include "sharedvol/series.hpp"
#include "sharedvol/studies.hpp"

namespace sharedvol::io {

/// Malformed input. line/column are 1-based; 0 means "not applicable".
class InputError : public std::runtime_error {
public:
    InputError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct InputTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> columns;  ///< K columns of T values
    std::vector<double> time;                  ///< empty when the file has no time column
};

/// CSV with a header row; an optional first column named `time` is split off.
InputTable parse_csv(const std::string& text);
InputTable read_csv(const std::filesystem::path& path);
/// Throws InputError unless T >= min_length.
Panel to_panel(const InputTable& table, std::size_t min_length = 50);

/// Shortest round-trip formatting of a double.
std::string format_double(double v);

/// Column-oriented CSV writer; all columns must have equal length.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string str() const;
};

std::string panel_csv(const Panel& panel);

/// Key-value configuration (`key = value`, `#` comments).
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

/// Applies and removes recognized keys; throws InputError on a bad value.
void apply_pipeline_keys(PipelineConfig& config, std::map<std::string, std::string>& keys);
void apply_scenario_keys(StudyScenario& scenario, std::map<std::string, std::string>& keys);
/// Throws InputError naming the first key left in `keys`.
void reject_unknown_keys(const std::map<std::string, std::string>& keys);

nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const StudyScenario& scenario);
nlohmann::json to_json(const DiagnosticResult& result);
nlohmann::json to_json(const GARCHFit& fit);
nlohmann::json report_json(const PipelineReport& report);
nlohmann::json summary_json(const StudySummary& summary);

inline constexpr int kReportSchemaVersion = 1;

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories. Throws InputError on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Collects emitted files and writes manifest.json with their checksums.
class ManifestWriter {
public:
    ManifestWriter(std::filesystem::path out_dir, std::string command);

    void write(const std::string& relative, const std::string& content);
    void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }
    /// Writes manifest.json; returns its contents.
    std::string finish();

private:
    std::filesystem::path dir_;
    std::string command_;
    nlohmann::json extra_ = nlohmann::json::object();
    std::map<std::string, std::string> checksums_;
};

/// Verifies every checksum listed in <dir>/manifest.json; returns mismatching file names.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace sharedvol::io
