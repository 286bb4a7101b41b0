#include "exlab/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace exlab {

const std::string& ExperimentConfig::get(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("config key missing: " + key);
  return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double ExperimentConfig::num(const std::string& key) const {
  return std::stod(get(key));
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
  return std::stoll(get(key));
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += ' ';
    out += v;
    out += '\n';
  }
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key)) continue;
    std::getline(ls, value);
    const auto first = value.find_first_not_of(" \t");
    value = first == std::string::npos ? "" : value.substr(first);
    const auto last = value.find_last_not_of(" \t\r");
    if (last != std::string::npos) value.erase(last + 1);
    cfg.kv[key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string config_digest(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : cfg.serialize()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_int(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  return buf;
}

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("ResultTable: row arity mismatch");
  rows.push_back(std::move(cells));
}

std::string csv_text(const ResultTable& table, const ExperimentConfig& cfg,
                     const std::string& name) {
  std::string out;
  out += "# exlab " + name + "\n";
  out += "# digest " + config_digest(cfg) + "\n";
  for (const auto& [k, v] : cfg.kv) out += "# " + k + " " + v + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

void write_csv(const ResultTable& table, const ExperimentConfig& cfg, const std::string& name,
               const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv_text(table, cfg, name);
}

std::string golden_compare(const std::string& path_a, const std::string& path_b) {
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::invalid_argument("golden_compare: cannot open " + p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(path_a), b = slurp(path_b);
  auto has_digest = [](const std::string& s) { return s.find("# digest ") != std::string::npos; };
  if (!has_digest(a)) return "no digest line in " + path_a;
  if (!has_digest(b)) return "no digest line in " + path_b;
  if (a != b) return "byte mismatch between " + path_a + " and " + path_b;
  return "";
}

}  // namespace exlab
