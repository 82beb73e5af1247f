#pragma once

// Value laws and the hidden-Markov processes that generate an agent's
// per-round value (and, for reusable resources, demand duration).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dmmf/rng.hpp"

namespace dmmf {

/// Finite support, stored ascending by value with equal atoms merged.
struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;
  std::vector<double> cumulative;  // running sum of probs
  friend bool operator==(const DiscreteLaw&, const DiscreteLaw&) = default;
};

struct BernoulliLaw {
  double p = 0;
  friend bool operator==(const BernoulliLaw&, const BernoulliLaw&) = default;
};

struct UniformLaw {
  double lo = 0;
  double hi = 1;
  friend bool operator==(const UniformLaw&, const UniformLaw&) = default;
};

/// Piecewise-constant density on [lo, hi] split into equal-width buckets.
struct DensityLaw {
  double lo = 0;
  double hi = 1;
  std::vector<double> heights;
  std::optional<double> lambda_lo;  // declared lower bound on the density
  std::optional<double> lambda_hi;  // declared upper bound on the density
  friend bool operator==(const DensityLaw&, const DensityLaw&) = default;
};

/// Law of a single non-negative value V.
class ValueDistribution {
public:
  using Law = std::variant<DiscreteLaw, BernoulliLaw, UniformLaw, DensityLaw>;

  static constexpr std::size_t kDefaultAtoms = 10'000;

  /// (value, probability) pairs in any order; equal values are merged.
  static ValueDistribution discrete(std::span<const double> values, std::span<const double> probs);
  static ValueDistribution point(double value);
  static ValueDistribution bernoulli(double p);
  static ValueDistribution uniform(double lo, double hi);
  static ValueDistribution density(double lo, double hi, std::vector<double> heights,
                                   std::optional<double> lambda_lo = {},
                                   std::optional<double> lambda_hi = {});

  const Law& law() const { return law_; }
  bool is_atomless() const;

  double mean() const;
  double max_value() const;
  double cdf(double x) const;
  /// Smallest x with F(x) >= u.
  double quantile(double u) const;
  /// Largest x with F(x) <= u on the support (differs from quantile only
  /// across gaps in the support).
  double upper_quantile(double u) const;
  /// Inverse-CDF draw from a uniform u in [0, 1).
  double sample(double u) const;
  /// E[V; V in the top `mass` of the distribution] for atomless laws.
  double top_mass_expectation(double mass) const;

  /// Discrete view: atomic laws as-is, atomless laws as `atoms`
  /// equal-probability atoms placed at bucket-midpoint quantiles.
  DiscreteLaw atoms(std::size_t atoms = kDefaultAtoms) const;
  ValueDistribution discretized(std::size_t atoms = kDefaultAtoms) const;

  /// Text form accepted by parse_state_law.
  std::string describe() const;

  friend bool operator==(const ValueDistribution&, const ValueDistribution&) = default;

private:
  explicit ValueDistribution(Law law) : law_(std::move(law)) {}
  Law law_;
};

struct DemandPoint {
  double value = 0;
  std::int64_t duration = 1;
  double prob = 0;
  friend bool operator==(const DemandPoint&, const DemandPoint&) = default;
};

/// Joint law of (value, duration) with finite support.
class DemandDistribution {
public:
  /// Equal (value, duration) points are merged; zero-probability points
  /// dropped. k_max defaults to the largest duration in the support.
  explicit DemandDistribution(std::vector<DemandPoint> support,
                              std::optional<std::int64_t> k_max = {});

  const std::vector<DemandPoint>& support() const { return support_; }
  std::int64_t k_max() const { return k_max_; }
  /// Index of the support point (value, duration), or nullopt.
  std::optional<std::size_t> index_of(double value, std::int64_t duration) const;
  double mean_value() const;
  /// Marginal law of V (meaningful when every duration is 1).
  ValueDistribution value_marginal() const;
  std::size_t sample_index(double u) const;

  std::string describe() const;

  friend bool operator==(const DemandDistribution&, const DemandDistribution&) = default;

private:
  std::vector<DemandPoint> support_;
  std::vector<double> cumulative_;
  std::int64_t k_max_ = 1;
};

using StateLaw = std::variant<ValueDistribution, DemandDistribution>;

using Matrix = std::vector<std::vector<double>>;

/// Time-invariant Markov chain over latent states with a value law per state.
class MarkovValueModel {
public:
  /// Validates that `transition` is square and row-stochastic and that all
  /// laws belong to the same family (value laws or demand laws).
  /// `initial_state` unset means S[1] is drawn from the stationary law.
  MarkovValueModel(Matrix transition, std::vector<StateLaw> laws,
                   std::optional<std::size_t> initial_state = {});

  /// Single-state model: values i.i.d. across rounds.
  static MarkovValueModel iid(StateLaw law);

  /// Two-state chain with V = 1 in state 0 and V = 0 in state 1, stationary
  /// law (alpha, 1 - alpha) and decorrelation gamma; each state is as sticky
  /// as the gamma constraint allows.
  static MarkovValueModel sticky_two_state(double alpha, double gamma);

  std::size_t num_states() const { return transition_.size(); }
  const Matrix& transition() const { return transition_; }
  const StateLaw& law(std::size_t state) const { return laws_[state]; }
  const std::vector<StateLaw>& laws() const { return laws_; }
  std::optional<std::size_t> initial_state() const { return initial_state_; }
  bool has_demands() const;
  /// Largest duration any state can demand (1 for value laws).
  std::int64_t k_max() const;
  /// Single recurrent class and aperiodic: some power of the transition
  /// matrix is strictly positive.
  bool is_ergodic() const;

  friend bool operator==(const MarkovValueModel&, const MarkovValueModel&) = default;

private:
  Matrix transition_;
  std::vector<StateLaw> laws_;
  std::optional<std::size_t> initial_state_;
};

/// Stationary law of the latent chain (pi P = pi).
/// Throws ModelError if the chain is not ergodic.
std::vector<double> stationary_distribution(const MarkovValueModel& model);

struct StationaryProfile {
  std::vector<double> pi;
  double gamma = 0;
  double min_pi = 0;
};

/// min over (s', s) of p(s', s) / pi(s), clamped to [0, 1].
double decorrelation_gamma(const MarkovValueModel& model, std::span<const double> pi);

StationaryProfile stationary_profile(const MarkovValueModel& model);

/// The pi-weighted mixture of the per-state laws.
StateLaw steady_state_mixture(const MarkovValueModel& model, std::span<const double> pi);

struct PathStep {
  std::size_t state = 0;
  double value = 0;
  std::int64_t duration = 1;
  /// Support index of the drawn demand (demand laws only).
  std::size_t demand_index = 0;
  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Incremental sampler of one value path. Draw order per round is fixed:
/// one uniform for the state transition, one for the emission.
class PathSampler {
public:
  PathSampler(const MarkovValueModel& model, Stream stream);
  PathStep next();

private:
  const MarkovValueModel* model_;
  Stream stream_;
  std::vector<std::vector<double>> cumulative_;
  std::vector<double> initial_cumulative_;
  std::optional<std::size_t> state_;
};

std::vector<PathStep> sample_path(const MarkovValueModel& model, std::int64_t horizon,
                                  std::uint64_t seed);

/// Parses a law written as in config files, e.g. "bernoulli 0.3",
/// "uniform 0 1", "discrete 1:0.25 0:0.75", "point 2",
/// "density 0 1 : 0.5 1.5 [bounds 0.5 1.5]", "demand 1,1:0.5 1,3:0.5 [kmax 4]".
StateLaw parse_state_law(const std::string& text);
std::string describe(const StateLaw& law);

} // namespace dmmf
