#pragma once

// Closed-form guarantee and impossibility coefficients for the DMMF
// mechanism, plus helpers that derive their inputs from a value model.
//
// Guarantees are lower bounds on per-round utility as a fraction of a
// benchmark v*(beta); impossibility results are upper bounds of the same
// shape. Additive error terms carry no known constants, so reports record
// only their order.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmmf/value_models.hpp"

namespace dmmf {

enum class BoundKind {
  general,                   // any alpha, beta, gamma; beta-aggressive
  iid_worst_case,            // i.i.d. values, alpha-aggressive
  bounded_density,           // i.i.d. values with density in [lambda1, lambda2]
  bernoulli,                 // i.i.d. Bernoulli(p) values, p-aggressive
  moderate_correlation,      // alpha-aggressive under decorrelation gamma
  high_correlation,          // tuned beta < alpha for small gamma
  arbitrary_correlation,     // alpha/2-aggressive, any gamma
  min_stationary,            // state-independent request rate, min_s pi(s)
  state_independent,         // state-independent rate driven by sigma(beta)
  price_of_anarchy,          // symmetric agents, 1 / per-agent guarantee
  reusable,                  // multi-round demands with cap parameter r
  reusable_tuned,            // the same with r = (alpha + beta - alpha beta) / beta
  impossibility_markov,      // two-state sticky chain, win-triggered adversary
  impossibility_reusable,    // duration flooding against Bernoulli(beta) values
};

enum class AdditiveOrder { constant, sqrt_horizon_kmax };
enum class BoundSide { lower_guarantee, upper_impossibility };

/// Inputs of a bound; each kind reads the subset it needs.
struct BoundParams {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::optional<double> r;
  std::optional<double> p;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> min_pi;
  std::optional<double> sigma;
  std::optional<std::int64_t> k_max;
  std::optional<std::int64_t> n;
  friend bool operator==(const BoundParams&, const BoundParams&) = default;
};

struct BoundReport {
  BoundKind kind = BoundKind::general;
  BoundParams inputs;
  /// Multiplies v*(v_star_beta) T. Clamped into [0, 1].
  double coefficient = 0;
  /// Unclamped formula value.
  double raw = 0;
  /// True when clamping changed the value (the bound carries no information).
  bool vacuous = false;
  AdditiveOrder order = AdditiveOrder::constant;
  BoundSide side = BoundSide::lower_guarantee;
  /// Benchmark argument: the v* the coefficient refers to.
  double v_star_beta = 0;
  /// Request aggressiveness the guarantee prescribes.
  std::optional<double> strategy_beta;
  /// Tuned cap parameter (reusable_tuned).
  std::optional<double> tuned_r;
  /// Upper bound on the price of anarchy (price_of_anarchy).
  std::optional<double> poa;
};

std::string bound_kind_name(BoundKind kind);
/// Throws ConfigError for unknown names.
BoundKind parse_bound_kind(const std::string& name);
const std::vector<BoundKind>& all_bound_kinds();
/// Copy of `params` keeping only the inputs `kind` reads.
BoundParams relevant_inputs(BoundKind kind, const BoundParams& params);
/// "alpha=0.25;gamma=0.5" style rendering of the inputs that are set.
std::string describe(const BoundParams& params);

/// gamma (alpha - (1-alpha) beta (1-gamma)) / (alpha + (1-alpha) beta gamma),
/// clamped below at 0. alpha in (0,1), beta in (0,1], gamma in [0,1].
double guarantee_general(double alpha, double beta, double gamma);

/// Evaluates any kind. Throws BoundInapplicable naming the missing or
/// violated condition.
BoundReport evaluate_bound(BoundKind kind, const BoundParams& params);

/// min{ alpha / (beta r), 1 - (1 - alpha) / r }; throws BoundInapplicable
/// for r < 1.
double guarantee_mult(double alpha, double beta, double r);

struct TunedCap {
  double r = 0;
  double coefficient = 0;
};
/// r = (alpha + beta - alpha beta) / beta, coefficient alpha / (alpha + beta - alpha beta).
TunedCap tuned_cap(double alpha, double beta);

/// gamma / ((1-alpha)(1 + gamma - (1-gamma)^((1-alpha)/alpha))), unclamped.
double impossibility_markov(double alpha, double gamma);
/// Limit as alpha -> 0: gamma / (1 + gamma).
double impossibility_markov_small_alpha(double gamma);
/// Limit as gamma -> 0: alpha / (1 - alpha); requires alpha <= 1/2.
double impossibility_markov_small_gamma(double alpha);

/// (1 - ((1-alpha)/r)((k_max-1)/k_max)) v* T + v* (k_max - 1).
double impossibility_mult(double alpha, double r, std::int64_t k_max, double v_star, double horizon);

/// n v*(1/n) T.
double welfare_upper_bound(std::int64_t n, const std::function<double(double)>& v_star, double horizon);

/// Fills the inputs a kind needs from a focal agent's model: alpha, gamma,
/// min_pi, p (i.i.d. Bernoulli), lambda1/lambda2 (declared density bounds),
/// sigma(beta) and k_max. Explicit entries in `overrides` win.
BoundParams derive_params(BoundKind kind, const MarkovValueModel& model, double alpha, const BoundParams& overrides,
                          std::optional<double> r = {});

} // namespace dmmf
