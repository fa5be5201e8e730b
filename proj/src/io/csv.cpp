#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sharedvol/io.hpp"

namespace sharedvol::io {

InputError::InputError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) +
                                         (column ? ", column " + std::to_string(column) : std::string()) + ": " +
                                         message),
      line_(line),
      column_(column) {}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

bool iequals(const std::string& a, const std::string& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

double parse_number(const std::string& cell, std::size_t line, std::size_t column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc() || ptr != last) {
        throw InputError("cannot parse '" + cell + "' as a number", line, column);
    }
    if (!std::isfinite(v)) throw InputError("non-finite value '" + cell + "'", line, column);
    return v;
}

}  // namespace

InputTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        header = split(raw);
        break;
    }
    if (header.empty()) throw InputError("input is empty", std::max<std::size_t>(line_no, 1));
    const std::size_t header_line = line_no;
    for (auto& h : header) h = unquote(h);

    InputTable table;
    const bool has_time = iequals(header.front(), "time");
    const std::size_t first_series = has_time ? 1 : 0;
    std::set<std::string> seen;
    for (std::size_t c = first_series; c < header.size(); ++c) {
        if (header[c].empty()) throw InputError("empty series label", header_line, c + 1);
        if (!seen.insert(header[c]).second) {
            throw InputError("duplicate series label '" + header[c] + "'", header_line, c + 1);
        }
        table.labels.push_back(header[c]);
    }
    if (table.labels.empty()) throw InputError("header names no series", header_line);
    table.columns.resize(table.labels.size());

    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        const auto cells = split(raw);
        if (cells.size() != header.size()) {
            throw InputError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(cells.size()),
                             line_no, std::min(cells.size(), header.size()) + 1);
        }
        if (has_time) table.time.push_back(parse_number(cells[0], line_no, 1));
        for (std::size_t c = first_series; c < cells.size(); ++c) {
            table.columns[c - first_series].push_back(parse_number(cells[c], line_no, c + 1));
        }
    }
    if (table.columns.front().empty()) throw InputError("no data rows after the header", header_line);
    return table;
}

InputTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

Panel to_panel(const InputTable& table, std::size_t min_length) {
    const std::size_t t = table.columns.front().size();
    if (t < min_length) {
        throw InputError("series have " + std::to_string(t) + " rows; at least " + std::to_string(min_length) +
                         " are required");
    }
    std::vector<Series> series;
    series.reserve(table.columns.size());
    for (const auto& col : table.columns) series.emplace_back(col);
    return Panel(std::move(series), table.labels);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string CsvTable::str() const {
    std::string out;
    auto join = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    join(header);
    for (const auto& r : rows) join(r);
    return out;
}

std::string panel_csv(const Panel& panel) {
    CsvTable t;
    t.header.push_back("time");
    for (const auto& l : panel.labels()) t.header.push_back(l);
    for (std::size_t r = 0; r < panel.length(); ++r) {
        std::vector<std::string> row{std::to_string(r + 1)};
        for (std::size_t i = 0; i < panel.size(); ++i) row.push_back(format_double(panel[i][r]));
        t.add_row(std::move(row));
    }
    return t.str();
}

}  // namespace sharedvol::io
