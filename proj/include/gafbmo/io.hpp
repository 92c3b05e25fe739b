#pragma once

#include "gafbmo/gaf.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace gafbmo::io {

inline constexpr int schema_version = 1;

using Cell = std::variant<std::int64_t, double, std::string>;

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);
std::string format_cell(const Cell& c);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);
CsvData parse_csv(const std::string& text);

/// Per-group count, mean, std_dev and median of the value columns (group "" means one group "all").
CsvTable summary_table(const CsvData& d, const std::string& group, const std::vector<std::string>& value_columns);

/// Everything needed to re-run an experiment.
struct RunConfig {
  std::string subcommand;
  std::string variant;
  std::string profile = "kac";
  std::vector<std::int64_t> grid;
  std::int64_t trials = 0;
  std::vector<std::int64_t> dims;
  std::uint64_t seed = 0;
  std::string out = ".";
  int threads = 1;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> extra;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Writes manifest.json: schema version, config and experiment-specific facts.
void write_manifest(const std::filesystem::path& dir, const RunConfig& c, const nlohmann::json& facts);

/// Profile from an inline spec ("kac", "power:alpha=0.5,cap=4095", "lacunary:weights=1;0.5")
/// or a key = value file ("kind = power", "alpha = 0.5", ...).
CoeffProfile parse_profile(const std::string& spec, std::int64_t default_cap = 4095);
CoeffProfile profile_from_fields(const std::map<std::string, std::string>& fields, std::int64_t default_cap);

/// Parses "1,2,3" into integers.
std::vector<std::int64_t> parse_int_list(const std::string& s);
std::vector<double> parse_double_list(const std::string& s, char sep = ',');

}  // namespace gafbmo::io
