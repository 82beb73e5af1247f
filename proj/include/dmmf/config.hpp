#pragma once

// Experiment files: a sectioned key = value format, documented in
// docs/config.md. Every parse or validation error is a ConfigError whose
// message starts with "<source>:<line>:".

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmmf/bounds.hpp"
#include "dmmf/simulator.hpp"

namespace dmmf {

struct OutputPaths {
  std::string summary = "summary.txt";
  std::optional<std::string> trace;
  std::optional<std::string> curve;
  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct BoundChecks {
  std::vector<BoundKind> kinds;
  std::size_t focal = 0;
  /// Explicit bound inputs; anything unset is derived from the focal agent.
  BoundParams overrides;
  friend bool operator==(const BoundChecks&, const BoundChecks&) = default;
};

struct ExperimentConfig {
  Scenario scenario;
  std::int64_t replications = 1;
  std::uint64_t master_seed = 0;
  OutputPaths outputs;
  BoundChecks bounds;

  /// Throws ConfigError.
  void validate() const;
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
/// Canonical text; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& config);

/// "name key=value ..." as in config files, e.g. "greedy_blocker observe=wins_only".
StrategySpec parse_strategy(const std::string& text);
std::string describe(const StrategySpec& spec);

/// "a:step:b" (inclusive, tolerant to rounding at b), "x" or "x, y, z".
std::vector<double> parse_grid(const std::string& text);

/// Parameter sweep for bound tables: kinds and per-parameter value lists.
struct BoundTableSpec {
  std::vector<BoundKind> kinds;
  std::map<std::string, std::vector<double>> values;
};

struct BoundTableRow {
  BoundKind kind;
  BoundParams params;
  std::optional<BoundReport> report;
  /// "ok", "vacuous" or "inapplicable: <condition>".
  std::string applicability;
};

BoundTableSpec parse_bound_table(std::istream& in, const std::string& source = "<params>");
/// Rows for every kind and every combination of the parameters it reads,
/// without duplicates, in kind order then grid order.
std::vector<BoundTableRow> evaluate_bound_table(const BoundTableSpec& spec);

} // namespace dmmf
