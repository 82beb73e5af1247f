#pragma once

// Benchmark utilities: the best expected per-round utility an uncontested
// agent can earn while holding the item at most a `beta` fraction of rounds,
// and the request policies that attain it.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmmf/value_models.hpp"

namespace dmmf {

/// Request iff V > threshold; request with probability `atom_prob` when V
/// equals the threshold exactly.
struct ThresholdPolicy {
  double threshold = std::numeric_limits<double>::infinity();
  double atom_prob = 0;

  double request_prob(double value) const {
    if (value > threshold) return 1.0;
    return value == threshold ? atom_prob : 0.0;
  }
  friend bool operator==(const ThresholdPolicy&, const ThresholdPolicy&) = default;
};

/// Per-support-point request probabilities for (value, duration) demands.
struct DemandPolicy {
  std::vector<DemandPoint> support;
  std::vector<double> rho;

  /// Request probability for a drawn demand; 0 for points off the support.
  double request_prob(double value, std::int64_t duration) const;
};

enum class PolicyMode { single_round, multi_round };

struct RequestPolicy {
  PolicyMode mode = PolicyMode::single_round;
  ThresholdPolicy threshold;  // single_round
  DemandPolicy demand;        // multi_round
  double beta = 0;

  double request_prob(double value, std::int64_t duration = 1) const {
    return mode == PolicyMode::single_round ? threshold.request_prob(value)
                                            : demand.request_prob(value, duration);
  }
};

struct IdealUtilityResult {
  double value = 0;
  RequestPolicy policy;
  double beta = 0;
};

/// Single-round benchmark: E[V rho(V)] maximized subject to E[rho(V)] <= beta.
/// Atomless laws use closed forms; atomic laws fill the top-beta mass and
/// randomize on the boundary atom, so E[rho] = beta exactly.
IdealUtilityResult ideal_single(const ValueDistribution& dist, double beta);

/// Expected request rate of `policy` under `dist`.
double expected_request_rate(const ValueDistribution& dist, const ThresholdPolicy& policy);

/// Multi-round benchmark for (value, duration) demands, solved as a linear
/// program over request frequencies. beta = 0 returns 0 with the
/// never-request policy.
IdealUtilityResult ideal_multi(const DemandDistribution& dist, double beta);

/// Dispatches on the law family (value laws use ideal_single).
IdealUtilityResult ideal_utility(const StateLaw& law, double beta);

/// Exhaustive grid search over per-point request probabilities
/// rho_j in {0, step, ..., 1}, evaluating the ratio objective and the
/// occupancy constraint directly. Support size <= 4; throws OracleError
/// otherwise. Independent of the LP path in ideal_multi.
double oracle_multi(const DemandDistribution& dist, double beta, double grid_step);

struct ConcavityReport {
  /// max over interior points of (chord of neighbours - value); positive
  /// means a concavity violation.
  double worst_concavity = -std::numeric_limits<double>::infinity();
  /// max over consecutive points of (v_i - v_{i+1}); positive means a
  /// decrease.
  double worst_decrease = -std::numeric_limits<double>::infinity();
  std::vector<double> second_differences;

  bool passes(double tol) const { return worst_concavity <= tol && worst_decrease <= tol; }
};

/// Checks a sampled curve (beta strictly increasing) for concavity and
/// monotonicity. Throws std::invalid_argument if beta is not increasing.
ConcavityReport verify_concavity(const std::vector<std::pair<double, double>>& curve);

struct DerivativeCheck {
  double analytic = 0;
  double finite_difference = 0;
};

/// d/dbeta v*(beta) two ways: the quantile F^{-1}(1 - beta) and a central
/// difference with h = 1e-5. Throws DerivativeUndefined for atomic laws.
DerivativeCheck derivative_check(const ValueDistribution& dist, double beta);

/// Ratio of the mixture-average request rate of the optimal single-round
/// policy to its largest per-state request rate. Throws SigmaUndefined for
/// beta = 0.
double sigma_of_beta(const MarkovValueModel& model, double beta);

/// Per-state request probabilities of the state-independent strategy that
/// requests the top `p` mass of each state's law.
std::vector<ThresholdPolicy> per_state_top_policies(const MarkovValueModel& model, double p);

/// max_s E_{F_s}[rho*_beta(V)]: the request rate the state-independent
/// strategy built from rho*_beta uses in every state.
double state_independent_rate(const MarkovValueModel& model, double beta);

std::string describe(const RequestPolicy& policy);

} // namespace dmmf
