#include "gafbmo/io.hpp"

#include "gafbmo/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gafbmo::io {

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void CsvTable::add_row(std::vector<Cell> row) {
  require(row.size() == columns_.size(), "csv: row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_cell(r[i]);
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ConfigError("csv: no column " + name);
}

std::vector<double> CsvData::numeric(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(std::stod(r.at(c)));
  return v;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

CsvData parse_csv(const std::string& text) {
  std::istringstream f(text);
  CsvData d;
  std::string line;
  if (!std::getline(f, line)) return d;
  d.columns = split_csv_line(line);
  while (std::getline(f, line))
    if (!line.empty()) d.rows.push_back(split_csv_line(line));
  return d;
}

CsvTable summary_table(const CsvData& d, const std::string& group, const std::vector<std::string>& value_columns) {
  CsvTable out({group.empty() ? std::string("group") : group, "column", "count", "mean", "std_dev", "median"});
  std::vector<std::string> keys;
  std::vector<std::size_t> key_of(d.rows.size());
  const std::size_t g = group.empty() ? 0 : d.column(group);
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const std::string k = group.empty() ? "all" : d.rows[r].at(g);
    auto it = std::find(keys.begin(), keys.end(), k);
    if (it == keys.end()) it = keys.insert(keys.end(), k);
    key_of[r] = std::size_t(it - keys.begin());
  }
  for (std::size_t ki = 0; ki < keys.size(); ++ki)
    for (const std::string& col : value_columns) {
      const std::size_t c = d.column(col);
      std::vector<double> v;
      for (std::size_t r = 0; r < d.rows.size(); ++r)
        if (key_of[r] == ki) v.push_back(std::stod(d.rows[r].at(c)));
      const double sd = v.size() > 1 ? std::sqrt(stats::variance(v)) : 0.0;
      out.add_row({keys[ki], col, std::int64_t(v.size()), stats::mean(v), sd, stats::median(v)});
    }
  return out;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["subcommand"] = c.subcommand;
  j["variant"] = c.variant;
  j["profile"] = c.profile;
  j["grid"] = c.grid;
  j["trials"] = c.trials;
  j["dims"] = c.dims;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["threads"] = c.threads;
  j["tolerances"] = c.tolerances;
  j["extra"] = c.extra;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  try {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.variant = j.value("variant", "");
    c.profile = j.value("profile", "kac");
    c.grid = j.value("grid", std::vector<std::int64_t>{});
    c.trials = j.value("trials", std::int64_t(0));
    c.dims = j.value("dims", std::vector<std::int64_t>{});
    c.seed = j.value("seed", std::uint64_t(0));
    c.out = j.value("out", ".");
    c.threads = j.value("threads", 1);
    c.tolerances = j.value("tolerances", std::map<std::string, double>{});
    c.extra = j.value("extra", std::map<std::string, std::string>{});
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& c, const nlohmann::json& facts) {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["config"] = to_json(c);
  j["results"] = facts;
  std::ofstream f(dir / "manifest.json", std::ios::binary);
  if (!f) throw Error("cannot write manifest in " + dir.string());
  f << j.dump(2) << '\n';
}

std::vector<double> parse_double_list(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (item.empty()) continue;
    double v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) throw ConfigError("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::int64_t v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) throw ConfigError("not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

namespace {

double number(const std::map<std::string, std::string>& f, const std::string& key, double fallback) {
  const auto it = f.find(key);
  if (it == f.end()) return fallback;
  const auto v = parse_double_list(it->second);
  if (v.size() != 1) throw ConfigError("profile: " + key + " must be a single number");
  return v[0];
}

std::vector<double> numbers(const std::map<std::string, std::string>& f, const std::string& key) {
  const auto it = f.find(key);
  if (it == f.end()) throw ConfigError("profile: missing " + key);
  return parse_double_list(it->second, ';');
}

}  // namespace

CoeffProfile profile_from_fields(const std::map<std::string, std::string>& f, std::int64_t default_cap) {
  const auto it = f.find("kind");
  if (it == f.end()) throw ConfigError("profile: missing kind");
  const std::string kind = it->second;
  const auto cap = Index(number(f, "cap", double(default_cap)));
  try {
    if (kind == "kac") return power_law_profile(0.0, cap);
    if (kind == "power") return power_law_profile(number(f, "alpha", 0.0), cap);
    if (kind == "lacunary") return lacunary_profile(numbers(f, "weights"));
    if (kind == "block") {
      if (f.count("sigma2")) return block_constant_profile(numbers(f, "sigma2"));
      // sigma2_k = 2^{-decay k} for k < blocks
      const int blocks = int(number(f, "blocks", 12));
      const double decay = number(f, "decay", 1.0);
      std::vector<double> s;
      for (int k = 0; k < blocks; ++k) s.push_back(std::exp2(-decay * k));
      return block_constant_profile(s);
    }
    if (kind == "explicit") {
      const auto v = numbers(f, "values");
      return explicit_profile(Eigen::Map<const RealVector>(v.data(), Index(v.size())));
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
  throw ConfigError("profile: unknown kind " + kind);
}

CoeffProfile parse_profile(const std::string& spec, std::int64_t default_cap) {
  std::map<std::string, std::string> fields;
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line.substr(0, line.find('#')));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("profile file: expected key = value: " + line);
      fields[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return profile_from_fields(fields, default_cap);
  }
  const auto colon = spec.find(':');
  fields["kind"] = trim(spec.substr(0, colon));
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("profile: expected key=value in " + spec);
      fields[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
    }
  }
  return profile_from_fields(fields, default_cap);
}

}  // namespace gafbmo::io
