#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace exlab {

/// Flat experiment configuration: string keys to string values, the unit of
/// replay. Serializes to "key value" lines sorted by key.
struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;

  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

/// FNV-1a over the canonical serialization, printed as 16 hex digits.
std::string config_digest(const ExperimentConfig& cfg);

/// Fixed 17-significant-digit numeric formatting used in every CSV cell.
std::string fmt_num(double v);
std::string fmt_int(std::int64_t v);

/// Column-schema'd table of preformatted cells with deterministic row order.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

/// CSV layout: '#'-prefixed preamble carrying the tool name, config digest
/// and the config lines, then the header row, then data. LF endings.
void write_csv(const ResultTable& table, const ExperimentConfig& cfg, const std::string& name,
               const std::string& path);

std::string csv_text(const ResultTable& table, const ExperimentConfig& cfg,
                     const std::string& name);

/// Byte comparison that first insists both files carry a config digest line.
/// Returns an empty string on a match, a diagnostic otherwise.
std::string golden_compare(const std::string& path_a, const std::string& path_b);

}  // namespace exlab
