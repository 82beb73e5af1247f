#include "dmmf/mechanism.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dmmf/errors.hpp"

namespace dmmf {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t narrow(int128 v, const char* what) {
  if (v > kMax) throw ConfigError(std::string(what) + ": fair shares need too large a common denominator");
  return static_cast<std::int64_t>(v);
}

} // namespace

FairShares FairShares::from_ratios(const std::vector<Ratio>& shares) {
  if (shares.empty()) throw ConfigError("fair shares: need at least one agent");
  std::int64_t lcm = 1;
  for (const auto& s : shares) {
    if (s.num() == 0) throw ConfigError("fair shares: every share must be positive");
    lcm = narrow(int128{lcm} / std::gcd(lcm, s.den()) * s.den(), "fair shares");
  }
  FairShares out;
  int128 total = 0;
  for (const auto& s : shares) {
    out.weights_.push_back(narrow(int128{s.num()} * (lcm / s.den()), "fair shares"));
    total += out.weights_.back();
  }
  out.total_ = narrow(total, "fair shares");
  if (std::abs(static_cast<double>(out.total_) / static_cast<double>(lcm) - 1.0) > 1e-12)
    throw ConfigError("fair shares: shares must sum to 1");
  // Lowest terms keeps the cross products small.
  std::int64_t g = out.total_;
  for (auto w : out.weights_) g = std::gcd(g, w);
  for (auto& w : out.weights_) w /= g;
  out.total_ /= g;
  return out;
}

FairShares FairShares::from_doubles(std::span<const double> shares) {
  std::vector<Ratio> r;
  for (double s : shares) {
    if (!(s > 0) || !std::isfinite(s)) throw ConfigError("fair shares: every share must be positive");
    r.push_back(Ratio::from_double(s));
  }
  return from_ratios(r);
}

FairShares FairShares::equal(std::size_t n) {
  if (n == 0) throw ConfigError("fair shares: need at least one agent");
  FairShares out;
  out.weights_.assign(n, 1);
  out.total_ = static_cast<std::int64_t>(n);
  return out;
}

void MechanismConfig::validate() const {
  if (shares.size() == 0) throw ConfigError("mechanism: no agents");
  if (k_max < 1) throw ConfigError("mechanism: k_max must be >= 1");
  if (mode == MechanismMode::reusable) {
    if (horizon < 1) throw ConfigError("mechanism: reusable mode needs a horizon T >= 1");
    if (r < Ratio(1, 1)) throw ConfigError("mechanism: r must be >= 1");
  } else if (k_max != 1) {
    throw ConfigError("mechanism: single-round mode has k_max = 1");
  }
}

Mechanism::Mechanism(MechanismConfig config) : config_(std::move(config)) { config_.validate(); }

MechanismState Mechanism::initial_state() const {
  MechanismState s;
  s.allocations.assign(num_agents(), 0);
  return s;
}

bool Mechanism::ranks_ahead(std::size_t i, std::int64_t claim_i, std::size_t j, std::int64_t claim_j) const {
  const auto& sh = config_.shares;
  const int128 lhs = int128{claim_i} * sh.weight(j);
  const int128 rhs = int128{claim_j} * sh.weight(i);
  return lhs < rhs || (lhs == rhs && i < j);
}

bool Mechanism::within_cap(std::size_t i, std::int64_t allocation, std::int64_t duration) const {
  // (A + d) / (T w_i / W) <= r_den / r_num  <=>  A + d <= T alpha_i / r
  const auto& sh = config_.shares;
  const int128 claim = int128{allocation} + duration;
  return compare_fractions(claim * sh.total(), int128{config_.horizon} * sh.weight(i), config_.r.den(),
                           config_.r.num()) <= 0;
}

RoundOutcome Mechanism::select(const MechanismState& state, const DurationRequests& requests,
                               std::optional<std::size_t> skip) const {
  RoundOutcome out;
  const bool reusable = config_.mode == MechanismMode::reusable;
  std::int64_t best_claim = 0;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (!requests[i] || (skip && *skip == i)) continue;
    const std::int64_t d = *requests[i];
    if (reusable && d != 1 && !within_cap(i, state.allocations[i], d)) continue;
    out.eligible.push_back(i);
    const std::int64_t claim = state.allocations[i] + d;
    if (!out.winner || ranks_ahead(i, claim, *out.winner, best_claim)) {
      out.winner = i;
      best_claim = claim;
    }
  }
  if (out.winner) out.granted_duration = *requests[*out.winner];
  return out;
}

std::pair<MechanismState, RoundOutcome> Mechanism::step_single(MechanismState state,
                                                               const std::vector<bool>& requests) const {
  if (config_.mode != MechanismMode::single_round) throw ContractViolation("step_single on a reusable mechanism");
  if (requests.size() != num_agents()) throw RequestError("step_single: one request flag per agent");
  DurationRequests d(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (requests[i]) d[i] = 1;
  RoundOutcome out = select(state, d, std::nullopt);
  if (out.winner) state.allocations[*out.winner] += 1;
  state.round += 1;
  return {std::move(state), std::move(out)};
}

std::pair<MechanismState, RoundOutcome> Mechanism::step_reusable(MechanismState state,
                                                                 const DurationRequests& requests) const {
  if (config_.mode != MechanismMode::reusable) throw ContractViolation("step_reusable on a single-round mechanism");
  if (state.holding()) throw ContractViolation("request submitted while the item is held");
  if (requests.size() != num_agents()) throw RequestError("step_reusable: one request slot per agent");
  for (const auto& d : requests)
    if (d && (*d < 1 || *d > config_.k_max))
      throw RequestError("requested duration " + std::to_string(*d) + " outside [1, " + std::to_string(config_.k_max) + "]");
  RoundOutcome out = select(state, requests, std::nullopt);
  if (out.winner) {
    state.allocations[*out.winner] += out.granted_duration;
    state.holder = out.winner;
    state.hold_remaining = out.granted_duration - 1;
  } else {
    state.holder.reset();
    state.hold_remaining = 0;
  }
  state.round += 1;
  return {std::move(state), std::move(out)};
}

MechanismState Mechanism::advance_hold(MechanismState state) const {
  if (!state.holding()) throw ContractViolation("advance_hold without a hold in progress");
  state.hold_remaining -= 1;
  state.round += 1;
  return state;
}

bool Mechanism::blocked_for(const MechanismState& state, std::size_t focal, const DurationRequests& requests,
                            std::int64_t focal_duration) const {
  if (focal >= num_agents()) throw RequestError("blocked_for: focal agent out of range");
  if (state.holding()) return state.holder != focal;
  const RoundOutcome others = select(state, requests, focal);
  if (!others.winner) return false;
  const std::size_t w = *others.winner;
  return ranks_ahead(w, state.allocations[w] + others.granted_duration, focal,
                     state.allocations[focal] + focal_duration);
}

} // namespace dmmf
