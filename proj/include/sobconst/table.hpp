#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace sobconst {

using Cell = std::variant<double, std::string>;

/// Rows of inputs and results. Check tables end in value, bound, margin, pass.
struct ResultTable {
    std::string schema_version = "1";
    std::string name;
    std::string grid_hash;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    /// Stable sort by the first `key_columns` cells (numbers before strings).
    void sort_rows(std::size_t key_columns);
    std::size_t column_index(const std::string& column) const;
};

enum class TableFormat { csv, json };

TableFormat parse_table_format(const std::string& name);

/// %.12g; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

std::string to_csv(const ResultTable& t);
std::string to_json(const ResultTable& t);
ResultTable parse_csv(const std::string& text);
ResultTable parse_json(const std::string& text);

/// Writes <dir>/<name>.csv or .json and returns the path. ConfigError if the file cannot be written.
std::filesystem::path write_table(const ResultTable& t, TableFormat fmt, const std::filesystem::path& dir);

struct GoldenEntry {
    double value = 0;
    double tolerance = 0;  ///< relative
};

struct GoldenSnapshot {
    std::string name;
    std::string grid_hash;
    std::map<std::string, GoldenEntry> values;
};

GoldenSnapshot load_golden(const std::filesystem::path& path);
void save_golden(const GoldenSnapshot& g, const std::filesystem::path& path);

struct GoldenReport {
    bool pass = true;
    std::vector<std::string> failures;
};

/// Compares a table with "key" and "value" columns against a snapshot.
GoldenReport compare_golden(const ResultTable& t, const GoldenSnapshot& g);

}  // namespace sobconst
