#pragma once

// Request strategies for value-driven agents and for adversarial opponents.
//
// Agent strategies see their own value (and duration) and a private coin.
// Adversaries never see values or latent states: they read the mechanism's
// public state and an ObservableHistory of the target agent's outcomes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dmmf/ideal_utility.hpp"
#include "dmmf/mechanism.hpp"
#include "dmmf/value_models.hpp"

namespace dmmf {

/// Request with the benchmark-optimal probability rho*_beta(V); beta
/// defaults to the agent's fair share.
struct BetaAggressive {
  std::optional<double> beta;
  friend bool operator==(const BetaAggressive&, const BetaAggressive&) = default;
};
/// Request the top-p mass of the current state's law, so the request rate
/// is p in every state.
struct StateIndependent {
  double p = 0;
  friend bool operator==(const StateIndependent&, const StateIndependent&) = default;
};
struct AlwaysRequest {
  friend bool operator==(const AlwaysRequest&, const AlwaysRequest&) = default;
};
struct NeverRequest {
  friend bool operator==(const NeverRequest&, const NeverRequest&) = default;
};
/// Request iff V >= tau.
struct FixedThreshold {
  double tau = 0;
  friend bool operator==(const FixedThreshold&, const FixedThreshold&) = default;
};

enum class Observe { wins_only, full_requests };

/// Requests whenever its claim would beat the target's most favourable
/// counterfactual claim (A_target + 1) / alpha_target.
struct GreedyBlocker {
  Observe observe = Observe::full_requests;
  std::int64_t duration = 1;
  friend bool operator==(const GreedyBlocker&, const GreedyBlocker&) = default;
};
/// Requests in each of the `window` decision rounds after every target win.
/// Default window: floor(alpha_self / alpha_target).
struct WinTriggered {
  std::optional<std::int64_t> window;
  friend bool operator==(const WinTriggered&, const WinTriggered&) = default;
};
/// Requests duration k (default: the mechanism's k_max) at every decision
/// round.
struct KmaxFlooder {
  std::optional<std::int64_t> k;
  friend bool operator==(const KmaxFlooder&, const KmaxFlooder&) = default;
};
struct Silent {
  friend bool operator==(const Silent&, const Silent&) = default;
};

using StrategySpec = std::variant<BetaAggressive, StateIndependent, AlwaysRequest, NeverRequest, FixedThreshold,
                                  GreedyBlocker, WinTriggered, KmaxFlooder, Silent>;

bool is_adversary(const StrategySpec& spec);
std::string strategy_name(const StrategySpec& spec);

/// Decision rule of a value-driven agent, precomputed from its model.
class AgentRule {
public:
  /// Throws ConfigError for out-of-range parameters or unsupported
  /// strategy/law pairings.
  AgentRule(const StrategySpec& spec, const MarkovValueModel& model, double alpha);

  /// Requested duration, or nullopt. `coin` is uniform on [0, 1).
  std::optional<std::int64_t> decide(const PathStep& step, double coin) const;

  /// Request probability for the given draw.
  double request_prob(const PathStep& step) const;

private:
  enum class Kind { policy, per_state, always, never, threshold };
  Kind kind_ = Kind::never;
  RequestPolicy policy_;
  std::vector<ThresholdPolicy> per_state_;
  double tau_ = 0;
};

/// The target agent's past outcomes, one entry per physical round. Win
/// indicators are always visible; request indicators only under
/// full_requests.
class ObservableHistory {
public:
  explicit ObservableHistory(Observe observe = Observe::wins_only) : observe_(observe) {}

  void push(bool won, bool requested) {
    wins_.push_back(won);
    requests_.push_back(requested);
  }
  const std::vector<bool>& wins() const { return wins_; }
  /// Throws ContractViolation under wins_only.
  const std::vector<bool>& requests() const;
  std::size_t size() const { return wins_.size(); }
  Observe observe() const { return observe_; }

private:
  Observe observe_;
  std::vector<bool> wins_;
  std::vector<bool> requests_;
};

/// Per-episode state of one adversary.
class Adversary {
public:
  /// Throws ConfigError for parameters the mechanism cannot accept.
  Adversary(const StrategySpec& spec, std::size_t self, std::size_t target, const Mechanism& mechanism);

  std::size_t target() const { return target_; }
  Observe observe() const;
  /// Window length for win-triggered adversaries (0 otherwise).
  std::int64_t window() const { return window_; }

  /// Requested duration at a decision round. Throws ContractViolation if a
  /// win-triggered adversary sees the target win inside one of its windows.
  std::optional<std::int64_t> decide(const ObservableHistory& history, const MechanismState& state);

  /// Reports whether the last decision was a window request and whether it
  /// won; returns true if a window request was lost.
  bool record_window_result(bool won);

private:
  StrategySpec spec_;
  std::size_t self_;
  std::size_t target_;
  const Mechanism* mechanism_;
  std::int64_t window_ = 0;
  std::int64_t countdown_ = 0;
  std::size_t seen_ = 0;
  bool in_window_ = false;
};

} // namespace dmmf
