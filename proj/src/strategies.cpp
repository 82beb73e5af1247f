#include "dmmf/strategies.hpp"

#include <cmath>
#include <string>

#include "dmmf/errors.hpp"

namespace dmmf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

bool is_adversary(const StrategySpec& spec) {
  return std::holds_alternative<GreedyBlocker>(spec) || std::holds_alternative<WinTriggered>(spec) ||
         std::holds_alternative<KmaxFlooder>(spec) || std::holds_alternative<Silent>(spec);
}

std::string strategy_name(const StrategySpec& spec) {
  return std::visit(overloaded{
                        [](const BetaAggressive&) { return std::string("beta_aggressive"); },
                        [](const StateIndependent&) { return std::string("state_independent"); },
                        [](const AlwaysRequest&) { return std::string("always"); },
                        [](const NeverRequest&) { return std::string("never"); },
                        [](const FixedThreshold&) { return std::string("fixed_threshold"); },
                        [](const GreedyBlocker&) { return std::string("greedy_blocker"); },
                        [](const WinTriggered&) { return std::string("win_triggered"); },
                        [](const KmaxFlooder&) { return std::string("kmax_flooder"); },
                        [](const Silent&) { return std::string("silent"); },
                    },
                    spec);
}

// ---------------------------------------------------------------------------
// AgentRule

AgentRule::AgentRule(const StrategySpec& spec, const MarkovValueModel& model, double alpha) {
  if (is_adversary(spec)) throw ConfigError(strategy_name(spec) + " is an adversary strategy, not an agent rule");
  if (const auto* b = std::get_if<BetaAggressive>(&spec)) {
    const double beta = b->beta.value_or(alpha);
    if (!(beta > 0 && beta <= 1)) throw ConfigError("beta_aggressive: beta must lie in (0, 1]");
    const auto pi = stationary_distribution(model);
    policy_ = ideal_utility(steady_state_mixture(model, pi), beta).policy;
    kind_ = Kind::policy;
  } else if (const auto* s = std::get_if<StateIndependent>(&spec)) {
    if (!(s->p > 0 && s->p <= 1)) throw ConfigError("state_independent: p must lie in (0, 1]");
    if (model.has_demands()) throw ConfigError("state_independent: needs value laws, not duration laws");
    per_state_ = per_state_top_policies(model, s->p);
    kind_ = Kind::per_state;
  } else if (std::holds_alternative<AlwaysRequest>(spec)) {
    kind_ = Kind::always;
  } else if (std::holds_alternative<NeverRequest>(spec)) {
    kind_ = Kind::never;
  } else {
    const double tau = std::get<FixedThreshold>(spec).tau;
    if (!std::isfinite(tau)) throw ConfigError("fixed_threshold: tau must be finite");
    tau_ = tau;
    kind_ = Kind::threshold;
  }
}

double AgentRule::request_prob(const PathStep& step) const {
  switch (kind_) {
  case Kind::policy:
    return policy_.request_prob(step.value, step.duration);
  case Kind::per_state:
    return per_state_[step.state].request_prob(step.value);
  case Kind::always:
    return 1.0;
  case Kind::never:
    return 0.0;
  case Kind::threshold:
    return step.value >= tau_ ? 1.0 : 0.0;
  }
  return 0.0;
}

std::optional<std::int64_t> AgentRule::decide(const PathStep& step, double coin) const {
  if (coin < request_prob(step)) return step.duration;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Adversaries

const std::vector<bool>& ObservableHistory::requests() const {
  if (observe_ == Observe::wins_only) throw ContractViolation("request history is not observable under wins_only");
  return requests_;
}

Adversary::Adversary(const StrategySpec& spec, std::size_t self, std::size_t target, const Mechanism& mechanism)
    : spec_(spec), self_(self), target_(target), mechanism_(&mechanism) {
  if (!is_adversary(spec)) throw ConfigError(strategy_name(spec) + " is not an adversary strategy");
  const std::size_t n = mechanism.num_agents();
  if (self >= n || target >= n) throw ConfigError("adversary: agent index out of range");
  if (self == target) throw ConfigError("adversary: cannot target itself");
  const auto& cfg = mechanism.config();
  if (const auto* g = std::get_if<GreedyBlocker>(&spec_)) {
    if (g->duration < 1 || g->duration > cfg.k_max) throw ConfigError("greedy_blocker: duration must lie in [1, k_max]");
  } else if (const auto* w = std::get_if<WinTriggered>(&spec_)) {
    const auto& sh = cfg.shares;
    window_ = w->window.value_or(sh.weight(self) / sh.weight(target));
    if (window_ < 0) throw ConfigError("win_triggered: window must be >= 0");
  } else if (auto* k = std::get_if<KmaxFlooder>(&spec_)) {
    if (!k->k) k->k = cfg.k_max;
    if (*k->k < 1 || *k->k > cfg.k_max) throw ConfigError("kmax_flooder: k must lie in [1, k_max]");
  }
}

Observe Adversary::observe() const {
  if (const auto* g = std::get_if<GreedyBlocker>(&spec_)) return g->observe;
  return Observe::wins_only;
}

std::optional<std::int64_t> Adversary::decide(const ObservableHistory& history, const MechanismState& state) {
  in_window_ = false;
  if (const auto* g = std::get_if<GreedyBlocker>(&spec_)) {
    const auto& a = state.allocations;
    const std::int64_t d = g->duration;
    if (d != 1 && mechanism_->config().mode == MechanismMode::reusable && !mechanism_->within_cap(self_, a[self_], d))
      return std::nullopt;
    if (mechanism_->ranks_ahead(self_, a[self_] + d, target_, a[target_] + 1)) return d;
    return std::nullopt;
  }
  if (std::holds_alternative<WinTriggered>(spec_)) {
    const auto& wins = history.wins();
    for (; seen_ < wins.size(); ++seen_) {
      if (!wins[seen_]) continue;
      if (countdown_ > 0) throw ContractViolation("win_triggered: target won inside a blocking window");
      countdown_ = window_;
    }
    if (countdown_ == 0) return std::nullopt;
    --countdown_;
    in_window_ = true;
    return 1;
  }
  if (const auto* k = std::get_if<KmaxFlooder>(&spec_)) return *k->k;
  return std::nullopt;
}

bool Adversary::record_window_result(bool won) {
  const bool missed = in_window_ && !won;
  in_window_ = false;
  return missed;
}

} // namespace dmmf
