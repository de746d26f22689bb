#include "sobconst/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sobconst/error.hpp"

namespace sobconst {

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw ConfigError("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

void ResultTable::sort_rows(std::size_t key_columns) {
    key_columns = std::min(key_columns, columns.size());
    std::stable_sort(rows.begin(), rows.end(), [key_columns](const auto& a, const auto& b) {
        for (std::size_t i = 0; i < key_columns; ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
}

std::size_t ResultTable::column_index(const std::string& column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) throw ConfigError("table " + name + " has no column '" + column + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

TableFormat parse_table_format(const std::string& name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "json") return TableFormat::json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    if (const double* v = std::get_if<double>(&c)) return format_number(*v);
    return std::get<std::string>(c);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

Cell parse_cell(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    if (s.empty()) return s;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && std::isfinite(v)) return v;
    return s;
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string to_csv(const ResultTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(t.columns[i]);
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const ResultTable& t) {
    std::string out = "{\"schema_version\":" + json_string(t.schema_version) + ",\"name\":" + json_string(t.name) +
                      ",\"grid_hash\":" + json_string(t.grid_hash) + ",\"columns\":[";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ',';
        out += json_string(t.columns[i]);
    }
    out += "],\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out += r ? ",\n{" : "\n{";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i) out += ',';
            out += json_string(t.columns[i]) + ':';
            const Cell& c = t.rows[r][i];
            if (const double* v = std::get_if<double>(&c)) {
                out += std::isfinite(*v) ? format_number(*v) : "null";
            } else {
                out += json_string(std::get<std::string>(c));
            }
        }
        out += '}';
    }
    out += "]}\n";
    return out;
}

ResultTable parse_csv(const std::string& text) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv: missing header row");
    t.columns = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<Cell> row;
        for (const auto& field : split_csv_line(line)) row.push_back(parse_cell(field));
        t.add_row(std::move(row));
    }
    return t;
}

ResultTable parse_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("json: ") + e.what());
    }
    ResultTable t;
    t.schema_version = j.at("schema_version").get<std::string>();
    t.name = j.value("name", "");
    t.grid_hash = j.value("grid_hash", "");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
        std::vector<Cell> cells;
        for (const auto& col : t.columns) {
            const auto& v = row.at(col);
            if (v.is_null()) {
                cells.emplace_back(std::nan(""));
            } else if (v.is_number()) {
                cells.emplace_back(v.get<double>());
            } else {
                cells.emplace_back(v.get<std::string>());
            }
        }
        t.add_row(std::move(cells));
    }
    return t;
}

std::filesystem::path write_table(const ResultTable& t, TableFormat fmt, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / (t.name + (fmt == TableFormat::csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << (fmt == TableFormat::csv ? to_csv(t) : to_json(t));
    out.close();
    if (!out) throw ConfigError("cannot write " + path.string());
    return path;
}

GoldenSnapshot load_golden(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read golden snapshot " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        GoldenSnapshot g;
        g.name = j.at("name").get<std::string>();
        g.grid_hash = j.at("grid_hash").get<std::string>();
        for (const auto& [key, entry] : j.at("values").items()) {
            g.values[key] = {entry.at("value").get<double>(), entry.at("tolerance").get<double>()};
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed golden snapshot " + path.string() + ": " + e.what());
    }
}

void save_golden(const GoldenSnapshot& g, const std::filesystem::path& path) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [key, entry] : g.values) values[key] = {{"value", entry.value}, {"tolerance", entry.tolerance}};
    const nlohmann::json j = {{"name", g.name}, {"grid_hash", g.grid_hash}, {"values", values}};
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write golden snapshot " + path.string());
    out << j.dump(2) << '\n';
}

GoldenReport compare_golden(const ResultTable& t, const GoldenSnapshot& g) {
    GoldenReport report;
    if (t.grid_hash != g.grid_hash) {
        report.pass = false;
        report.failures.push_back("grid changed: snapshot " + g.name + " has grid hash " + g.grid_hash +
                                  ", this run has " + t.grid_hash + " (re-run with --bless to refresh)");
        return report;
    }
    const std::size_t key_col = t.column_index("key");
    const std::size_t value_col = t.column_index("value");
    std::map<std::string, bool> seen;
    for (const auto& row : t.rows) {
        const std::string key = std::get<std::string>(row[key_col]);
        const double value = std::get<double>(row[value_col]);
        const auto it = g.values.find(key);
        if (it == g.values.end()) {
            report.failures.push_back(key + ": unknown key (not in snapshot " + g.name + ")");
            continue;
        }
        seen[key] = true;
        const auto& [expected, tol] = it->second;
        const double scale = expected == 0.0 ? 1.0 : std::abs(expected);
        const double rel = std::abs(value - expected) / scale;
        if (!(rel <= tol)) {
            report.failures.push_back(key + ": got " + format_number(value) + ", expected " + format_number(expected) +
                                      " (relative error " + format_number(rel) + " > " + format_number(tol) + ")");
        }
    }
    for (const auto& [key, entry] : g.values) {
        if (!seen.count(key)) report.failures.push_back(key + ": missing from results");
    }
    report.pass = report.failures.empty();
    return report;
}

}  // namespace sobconst
