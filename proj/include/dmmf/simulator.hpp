#pragma once

// Episode driver: samples every agent's value path, collects requests,
// steps the mechanism once per physical round and keeps per-agent ledgers
// of requests, blocks, wins and utility. Pathwise invariants are checked
// online on every episode.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dmmf/mechanism.hpp"
#include "dmmf/rational.hpp"
#include "dmmf/strategies.hpp"
#include "dmmf/value_models.hpp"

namespace dmmf {

struct AgentSpec {
  Ratio alpha;
  StrategySpec strategy = NeverRequest{};
  /// Required for value-driven strategies; optional for adversaries (an
  /// adversary without a model records value 0).
  std::optional<MarkovValueModel> model;
  /// Agent an adversary plays against (default 0).
  std::optional<std::size_t> target;
  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct Scenario {
  MechanismMode mode = MechanismMode::single_round;
  std::int64_t horizon = 1;
  Ratio r{1, 1};
  /// Unset: the largest duration any agent's model can demand.
  std::optional<std::int64_t> k_max;
  std::vector<AgentSpec> agents;

  /// Throws ConfigError.
  MechanismConfig mechanism_config() const;
  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct AgentRecord {
  std::uint32_t state = 0;
  double value = 0;
  std::int64_t duration = 1;
  bool requested = false;
  bool blocked = false;
  bool own_hold = false;
  bool won = false;
  double utility = 0;
  std::int64_t allocation = 0;
  friend bool operator==(const AgentRecord&, const AgentRecord&) = default;
};

/// Row-major per-round, per-agent records.
struct EpisodeTrace {
  std::int64_t horizon = 0;
  std::size_t num_agents = 0;
  std::vector<AgentRecord> records;

  /// `t` is 1-based.
  const AgentRecord& at(std::int64_t t, std::size_t agent) const {
    return records[static_cast<std::size_t>(t - 1) * num_agents + agent];
  }
  AgentRecord& at(std::int64_t t, std::size_t agent) {
    return records[static_cast<std::size_t>(t - 1) * num_agents + agent];
  }
};

struct AgentTotals {
  double utility = 0;
  std::int64_t wins = 0;
  std::int64_t blocked = 0;
  std::int64_t requests = 0;
  std::int64_t own_hold = 0;
  std::int64_t allocation = 0;
};

struct InvariantReport {
  std::int64_t lemma = 0;          // blocking-bound violations
  std::int64_t identity = 0;       // per-record identity violations
  std::int64_t conservation = 0;   // allocation totals and round accounting
  std::int64_t window = 0;         // lost window rounds where winning is guaranteed
  std::int64_t window_other = 0;   // lost window rounds outside that regime (informational)

  std::int64_t total() const { return lemma + identity + conservation + window; }
};

struct EpisodeResult {
  std::vector<AgentTotals> totals;
  InvariantReport invariants;
  std::optional<EpisodeTrace> trace;
};

/// Runs one replication. Streams are derived from
/// (master_seed, replication, agent, purpose). Deterministic.
EpisodeResult run_episode(const Scenario& scenario, std::uint64_t master_seed, std::uint64_t replication,
                          bool keep_trace = false);

struct LemmaCheck {
  bool pass = true;
  /// First round at which the inequality fails.
  std::optional<std::int64_t> first_failure;
};

/// alpha * sum Blk <= (1 - alpha) * (1 + sum W) at every prefix, exactly.
LemmaCheck check_lemma_single(const EpisodeTrace& trace, std::size_t focal, const FairShares& shares);

/// sum Blk <= max{ ((1-alpha)/alpha)(k_max + sum W K), (1-alpha) T / r }
/// at the horizon, exactly.
LemmaCheck check_lemma_mult(const EpisodeTrace& trace, std::size_t focal, const FairShares& shares,
                            std::int64_t k_max, const Ratio& r);

/// Exact form of the single-round bound for running totals.
bool single_round_bound_holds(std::int64_t w, std::int64_t total, std::int64_t blocked, std::int64_t wins);
/// Exact form of the reusable bound; `allocation` is sum W K.
bool reusable_bound_holds(std::int64_t w, std::int64_t total, std::int64_t blocked, std::int64_t allocation,
                          std::int64_t k_max, std::int64_t horizon, const Ratio& r);

struct AgentSummary {
  double util_mean = 0;  // per-round utility, averaged over replications
  double util_se = 0;    // standard error across replications (0 for one)
  double wins_mean = 0;
  double blk_mean = 0;
  double requests_mean = 0;
  std::vector<double> util_per_rep;
};

struct ReplicationSummary {
  std::int64_t replications = 0;
  std::int64_t horizon = 0;
  std::vector<AgentSummary> agents;
  std::int64_t invariant_violations = 0;
  InvariantReport invariants;
};

using TraceCallback = std::function<void(std::int64_t replication, const EpisodeTrace& trace)>;

/// Runs `reps` replications on up to `jobs` threads. When `on_trace` is
/// set it receives every trace in replication order. Results do not depend
/// on `jobs`.
ReplicationSummary run_replications(const Scenario& scenario, std::int64_t reps, std::uint64_t master_seed,
                                    unsigned jobs = 1, const TraceCallback& on_trace = {});

/// Mean and standard error of a sample.
std::pair<double, double> mean_and_se(const std::vector<double>& xs);

void write_trace_header(std::ostream& out);
void write_trace_rows(std::ostream& out, const EpisodeTrace& trace, std::int64_t replication);

} // namespace dmmf
