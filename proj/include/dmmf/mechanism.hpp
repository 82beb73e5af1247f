#pragma once

// Dynamic max-min fair allocation of one indivisible item per round:
// single-round demands, and reusable demands that hold the item for several
// consecutive rounds subject to an r-cap on long requests.
//
// Fair shares are kept as integer weights over a common total so that every
// score comparison and cap test is exact.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dmmf/rational.hpp"

namespace dmmf {

class FairShares {
public:
  /// Exact shares; each must be positive and the sum within 1e-12 of 1.
  /// Shares are renormalized by their exact sum.
  static FairShares from_ratios(const std::vector<Ratio>& shares);
  /// Convenience for programmatic callers; each share is converted with
  /// Ratio::from_double.
  static FairShares from_doubles(std::span<const double> shares);
  static FairShares equal(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  std::int64_t weight(std::size_t i) const { return weights_[i]; }
  std::int64_t total() const { return total_; }
  const std::vector<std::int64_t>& weights() const { return weights_; }
  double alpha(std::size_t i) const { return static_cast<double>(weights_[i]) / static_cast<double>(total_); }

  friend bool operator==(const FairShares&, const FairShares&) = default;

private:
  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 1;
};

enum class MechanismMode { single_round, reusable };

struct MechanismConfig {
  FairShares shares;
  MechanismMode mode = MechanismMode::single_round;
  std::int64_t horizon = 0;  // T; required in reusable mode
  Ratio r{1, 1};             // cap parameter, >= 1
  std::int64_t k_max = 1;    // longest admissible request

  /// Throws ConfigError.
  void validate() const;
};

struct MechanismState {
  std::vector<std::int64_t> allocations;
  /// Physical round about to be played (1-based).
  std::int64_t round = 1;
  std::optional<std::size_t> holder;
  /// Rounds the current holder keeps the item after the current one.
  std::int64_t hold_remaining = 0;

  bool holding() const { return hold_remaining > 0; }
  friend bool operator==(const MechanismState&, const MechanismState&) = default;
};

struct RoundOutcome {
  std::optional<std::size_t> winner;
  std::int64_t granted_duration = 0;
  std::vector<std::size_t> eligible;
};

/// Per-agent request for a reusable round: the demanded duration, or none.
using DurationRequests = std::vector<std::optional<std::int64_t>>;

class Mechanism {
public:
  explicit Mechanism(MechanismConfig config);

  const MechanismConfig& config() const { return config_; }
  std::size_t num_agents() const { return config_.shares.size(); }
  MechanismState initial_state() const;

  /// Winner = argmin over requesters of (A_i + 1) / alpha_i, lowest index
  /// on ties. Advances the round by one.
  std::pair<MechanismState, RoundOutcome> step_single(MechanismState state, const std::vector<bool>& requests) const;

  /// Eligible requesters have d = 1 or A_i + d <= T alpha_i / r; the winner
  /// minimizes (A_i + d_i) / alpha_i and holds the item for d rounds. The
  /// returned state is positioned at the next physical round with
  /// hold_remaining = d - 1; call advance_hold once per held round, after
  /// which the round counter has moved by d in total.
  /// Throws RequestError for d outside [1, k_max] and ContractViolation if
  /// called mid-hold.
  std::pair<MechanismState, RoundOutcome> step_reusable(MechanismState state, const DurationRequests& requests) const;

  /// Plays one round in which the item is held. Throws ContractViolation if
  /// no hold is in progress.
  MechanismState advance_hold(MechanismState state) const;

  /// Whether `focal` is blocked in the round about to be played from
  /// `state`: another agent holds the item, or another agent wins and beats
  /// focal's counterfactual claim A_focal + focal_duration under the
  /// criterion (ties resolved by index). `requests[focal]` is ignored.
  bool blocked_for(const MechanismState& state, std::size_t focal, const DurationRequests& requests,
                   std::int64_t focal_duration = 1) const;

  /// True iff claim_i / alpha_i ranks ahead of claim_j / alpha_j, with the
  /// lower index ahead on ties.
  bool ranks_ahead(std::size_t i, std::int64_t claim_i, std::size_t j, std::int64_t claim_j) const;

  /// A + d <= T alpha_i / r, exactly.
  bool within_cap(std::size_t i, std::int64_t allocation, std::int64_t duration) const;

private:
  RoundOutcome select(const MechanismState& state, const DurationRequests& requests,
                      std::optional<std::size_t> skip) const;

  MechanismConfig config_;
};

} // namespace dmmf
