#include "dmmf/value_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"
#include "dmmf/kernels.hpp"

namespace dmmf {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kDensityTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bucket_width(const DensityLaw& d) { return (d.hi - d.lo) / static_cast<double>(d.heights.size()); }

// Index of the first cumulative entry strictly above u, clamped to the last
// positive-probability entry.
std::size_t pick(std::span<const double> cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) {
    std::size_t i = cumulative.size() - 1;
    while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
    return i;
  }
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::vector<double> cumulative_of(std::span<const double> probs) {
  std::vector<double> c(probs.size());
  std::partial_sum(probs.begin(), probs.end(), c.begin());
  return c;
}

DiscreteLaw make_discrete(std::span<const double> values, std::span<const double> probs) {
  if (values.size() != probs.size()) throw ModelError("discrete law: values and probabilities differ in length");
  if (values.empty()) throw ModelError("discrete law: empty support");
  std::map<double, double> merged;
  double total = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0) throw ModelError("discrete law: support values must be >= 0");
    if (!std::isfinite(probs[i]) || probs[i] < 0) throw ModelError("discrete law: probabilities must be >= 0");
    total += probs[i];
    if (probs[i] > 0) merged[values[i]] += probs[i];
  }
  // Summation error grows with the atom count.
  const double tol = kProbTol + 4 * std::numeric_limits<double>::epsilon() * static_cast<double>(probs.size());
  if (std::abs(total - 1.0) > tol)
    throw ModelError("discrete law: probabilities sum to " + format_exact(total) + ", not 1");
  DiscreteLaw law;
  for (auto [v, p] : merged) {
    law.values.push_back(v);
    law.probs.push_back(p);
  }
  law.cumulative = cumulative_of(law.probs);
  return law;
}

DiscreteLaw bernoulli_atoms(double p) {
  DiscreteLaw law;
  if (p < 1) {
    law.values.push_back(0.0);
    law.probs.push_back(1 - p);
  }
  if (p > 0) {
    law.values.push_back(1.0);
    law.probs.push_back(p);
  }
  law.cumulative = cumulative_of(law.probs);
  return law;
}

} // namespace

// ---------------------------------------------------------------------------
// ValueDistribution

ValueDistribution ValueDistribution::discrete(std::span<const double> values, std::span<const double> probs) {
  return ValueDistribution(make_discrete(values, probs));
}

ValueDistribution ValueDistribution::point(double value) {
  const double one = 1.0;
  return discrete(std::span(&value, 1), std::span(&one, 1));
}

ValueDistribution ValueDistribution::bernoulli(double p) {
  if (!(p >= 0 && p <= 1)) throw ModelError("bernoulli law: p must lie in [0, 1]");
  return ValueDistribution(BernoulliLaw{p});
}

ValueDistribution ValueDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0 && hi > lo && std::isfinite(hi))) throw ModelError("uniform law: need 0 <= lo < hi");
  return ValueDistribution(UniformLaw{lo, hi});
}

ValueDistribution ValueDistribution::density(double lo, double hi, std::vector<double> heights,
                                             std::optional<double> lambda_lo, std::optional<double> lambda_hi) {
  if (!(lo >= 0 && hi > lo && std::isfinite(hi))) throw ModelError("density law: need 0 <= lo < hi");
  if (heights.empty()) throw ModelError("density law: no buckets");
  DensityLaw d{lo, hi, std::move(heights), lambda_lo, lambda_hi};
  double mass = 0;
  for (double h : d.heights) {
    if (!std::isfinite(h) || h < 0) throw ModelError("density law: bucket heights must be >= 0");
    mass += h * bucket_width(d);
  }
  if (std::abs(mass - 1.0) > kDensityTol)
    throw ModelError("density law: integrates to " + format_exact(mass) + ", not 1");
  if (lambda_lo || lambda_hi) {
    if (!lambda_lo || !lambda_hi || !(*lambda_lo > 0) || *lambda_hi < *lambda_lo)
      throw ModelError("density law: bounds need 0 < lambda_lo <= lambda_hi");
    for (double h : d.heights)
      if (h < *lambda_lo || h > *lambda_hi) throw ModelError("density law: bucket height outside declared bounds");
  }
  return ValueDistribution(std::move(d));
}

bool ValueDistribution::is_atomless() const {
  return std::holds_alternative<UniformLaw>(law_) || std::holds_alternative<DensityLaw>(law_);
}

double ValueDistribution::mean() const {
  return std::visit(overloaded{
                        [](const DiscreteLaw& d) { return kernels::dot(d.values, d.probs); },
                        [](const BernoulliLaw& b) { return b.p; },
                        [](const UniformLaw& u) { return 0.5 * (u.lo + u.hi); },
                        [](const DensityLaw& d) {
                          const double w = bucket_width(d);
                          double m = 0;
                          for (std::size_t i = 0; i < d.heights.size(); ++i) {
                            const double a = d.lo + w * static_cast<double>(i);
                            m += d.heights[i] * w * (a + 0.5 * w);
                          }
                          return m;
                        },
                    },
                    law_);
}

double ValueDistribution::max_value() const {
  return std::visit(overloaded{
                        [](const DiscreteLaw& d) { return d.values.back(); },
                        [](const BernoulliLaw& b) { return b.p > 0 ? 1.0 : 0.0; },
                        [](const UniformLaw& u) { return u.hi; },
                        [](const DensityLaw& d) {
                          const double w = bucket_width(d);
                          std::size_t i = d.heights.size();
                          while (i > 0 && d.heights[i - 1] == 0) --i;
                          return d.lo + w * static_cast<double>(i);
                        },
                    },
                    law_);
}

double ValueDistribution::cdf(double x) const {
  return std::visit(overloaded{
                        [x](const DiscreteLaw& d) {
                          double c = 0;
                          for (std::size_t i = 0; i < d.values.size() && d.values[i] <= x; ++i) c += d.probs[i];
                          return std::min(c, 1.0);
                        },
                        [x](const BernoulliLaw& b) { return x < 0 ? 0.0 : (x < 1 ? 1 - b.p : 1.0); },
                        [x](const UniformLaw& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                        [x](const DensityLaw& d) {
                          const double w = bucket_width(d);
                          double c = 0;
                          for (std::size_t i = 0; i < d.heights.size(); ++i) {
                            const double a = d.lo + w * static_cast<double>(i);
                            if (x <= a) break;
                            c += d.heights[i] * std::min(w, x - a);
                          }
                          return std::clamp(c, 0.0, 1.0);
                        },
                    },
                    law_);
}

double ValueDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  return std::visit(overloaded{
                        [u](const DiscreteLaw& d) {
                          double c = 0;
                          for (std::size_t i = 0; i < d.values.size(); ++i) {
                            c += d.probs[i];
                            if (c >= u) return d.values[i];
                          }
                          return d.values.back();
                        },
                        [u](const BernoulliLaw& b) { return u <= 1 - b.p ? 0.0 : 1.0; },
                        [u](const UniformLaw& l) { return l.lo + u * (l.hi - l.lo); },
                        [u](const DensityLaw& d) {
                          const double w = bucket_width(d);
                          double c = 0;
                          for (std::size_t i = 0; i < d.heights.size(); ++i) {
                            const double a = d.lo + w * static_cast<double>(i);
                            const double mass = d.heights[i] * w;
                            if (mass > 0 && c + mass >= u) return a + std::max(0.0, u - c) / d.heights[i];
                            c += mass;
                          }
                          return d.hi;
                        },
                    },
                    law_);
}

double ValueDistribution::upper_quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  if (const auto* d = std::get_if<DensityLaw>(&law_)) {
    const double w = bucket_width(*d);
    double c = 0;
    double best = d->lo;
    for (std::size_t i = 0; i < d->heights.size(); ++i) {
      const double a = d->lo + w * static_cast<double>(i);
      const double mass = d->heights[i] * w;
      if (mass > 0 && c <= u && u <= c + mass) best = a + std::min(w, (u - c) / d->heights[i]);
      c += mass;
    }
    return best;
  }
  return quantile(u);
}

double ValueDistribution::sample(double u) const {
  if (const auto* d = std::get_if<DiscreteLaw>(&law_)) return d->values[pick(d->cumulative, u)];
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) return u < 1 - b->p ? 0.0 : 1.0;
  return quantile(u);
}

double ValueDistribution::top_mass_expectation(double mass) const {
  mass = std::clamp(mass, 0.0, 1.0);
  if (mass == 0) return 0;
  if (const auto* u = std::get_if<UniformLaw>(&law_)) {
    const double tau = u->hi - mass * (u->hi - u->lo);
    return mass * 0.5 * (tau + u->hi);
  }
  if (const auto* d = std::get_if<DensityLaw>(&law_)) {
    const double tau = upper_quantile(1 - mass);
    const double w = bucket_width(*d);
    double total = 0;
    for (std::size_t i = 0; i < d->heights.size(); ++i) {
      const double a = d->lo + w * static_cast<double>(i);
      const double b = a + w;
      if (b <= tau) continue;
      const double from = std::max(a, tau);
      total += d->heights[i] * 0.5 * (b * b - from * from);
    }
    return total;
  }
  throw ModelError("top_mass_expectation needs an atomless law");
}

DiscreteLaw ValueDistribution::atoms(std::size_t count) const {
  if (const auto* d = std::get_if<DiscreteLaw>(&law_)) return *d;
  if (const auto* b = std::get_if<BernoulliLaw>(&law_)) return bernoulli_atoms(b->p);
  if (count == 0) throw ModelError("discretization needs at least one atom");
  std::vector<double> values(count), probs(count, 1.0 / static_cast<double>(count));
  for (std::size_t i = 0; i < count; ++i)
    values[i] = quantile((static_cast<double>(i) + 0.5) / static_cast<double>(count));
  // Equal-probability atoms: renormalize the last atom against round-off.
  probs.back() = 1.0 - (1.0 / static_cast<double>(count)) * static_cast<double>(count - 1);
  return make_discrete(values, probs);
}

ValueDistribution ValueDistribution::discretized(std::size_t count) const { return ValueDistribution(atoms(count)); }

std::string ValueDistribution::describe() const {
  return std::visit(overloaded{
                        [](const DiscreteLaw& d) {
                          std::string s = "discrete";
                          for (std::size_t i = 0; i < d.values.size(); ++i)
                            s += " " + format_exact(d.values[i]) + ":" + format_exact(d.probs[i]);
                          return s;
                        },
                        [](const BernoulliLaw& b) { return "bernoulli " + format_exact(b.p); },
                        [](const UniformLaw& u) { return "uniform " + format_exact(u.lo) + " " + format_exact(u.hi); },
                        [](const DensityLaw& d) {
                          std::string s = "density " + format_exact(d.lo) + " " + format_exact(d.hi) + " :";
                          for (double h : d.heights) s += " " + format_exact(h);
                          if (d.lambda_lo) s += " bounds " + format_exact(*d.lambda_lo) + " " + format_exact(*d.lambda_hi);
                          return s;
                        },
                    },
                    law_);
}

// ---------------------------------------------------------------------------
// DemandDistribution

DemandDistribution::DemandDistribution(std::vector<DemandPoint> support, std::optional<std::int64_t> k_max) {
  if (support.empty()) throw ModelError("demand law: empty support");
  double total = 0;
  std::int64_t longest = 1;
  for (const auto& pt : support) {
    if (!std::isfinite(pt.value) || pt.value < 0) throw ModelError("demand law: values must be >= 0");
    if (pt.duration < 1) throw ModelError("demand law: durations must be >= 1");
    if (!std::isfinite(pt.prob) || pt.prob < 0) throw ModelError("demand law: probabilities must be >= 0");
    total += pt.prob;
    longest = std::max(longest, pt.duration);
    if (pt.prob == 0) continue;
    auto same = std::find_if(support_.begin(), support_.end(), [&](const DemandPoint& q) {
      return q.value == pt.value && q.duration == pt.duration;
    });
    if (same != support_.end())
      same->prob += pt.prob;
    else
      support_.push_back(pt);
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw ModelError("demand law: probabilities sum to " + format_exact(total) + ", not 1");
  std::vector<double> probs;
  for (const auto& pt : support_) probs.push_back(pt.prob);
  cumulative_ = cumulative_of(probs);
  k_max_ = k_max.value_or(longest);
  if (k_max_ < 1) throw ModelError("demand law: k_max must be >= 1");
  if (longest > k_max_) throw ModelError("demand law: a duration exceeds k_max");
}

std::optional<std::size_t> DemandDistribution::index_of(double value, std::int64_t duration) const {
  for (std::size_t j = 0; j < support_.size(); ++j)
    if (support_[j].value == value && support_[j].duration == duration) return j;
  return std::nullopt;
}

double DemandDistribution::mean_value() const {
  double m = 0;
  for (const auto& pt : support_) m += pt.prob * pt.value;
  return m;
}

ValueDistribution DemandDistribution::value_marginal() const {
  std::vector<double> v, p;
  for (const auto& pt : support_) {
    v.push_back(pt.value);
    p.push_back(pt.prob);
  }
  return ValueDistribution::discrete(v, p);
}

std::size_t DemandDistribution::sample_index(double u) const { return pick(cumulative_, u); }

std::string DemandDistribution::describe() const {
  std::string s = "demand";
  for (const auto& pt : support_)
    s += " " + format_exact(pt.value) + "," + std::to_string(pt.duration) + ":" + format_exact(pt.prob);
  s += " kmax " + std::to_string(k_max_);
  return s;
}

// ---------------------------------------------------------------------------
// MarkovValueModel

MarkovValueModel::MarkovValueModel(Matrix transition, std::vector<StateLaw> laws,
                                   std::optional<std::size_t> initial_state)
    : transition_(std::move(transition)), laws_(std::move(laws)), initial_state_(initial_state) {
  const std::size_t n = transition_.size();
  if (n == 0) throw ModelError("markov model: no states");
  if (laws_.size() != n) throw ModelError("markov model: need one law per state");
  for (const auto& row : transition_) {
    if (row.size() != n) throw ModelError("markov model: transition matrix is not square");
    double sum = 0;
    for (double p : row) {
      if (!std::isfinite(p) || p < 0) throw ModelError("markov model: transition entries must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTol) throw ModelError("markov model: transition row does not sum to 1");
  }
  for (const auto& law : laws_)
    if (law.index() != laws_.front().index())
      throw ModelError("markov model: states mix value laws and demand laws");
  if (initial_state_ && *initial_state_ >= n) throw ModelError("markov model: initial state out of range");
}

MarkovValueModel MarkovValueModel::iid(StateLaw law) { return MarkovValueModel({{1.0}}, {std::move(law)}); }

MarkovValueModel MarkovValueModel::sticky_two_state(double alpha, double gamma) {
  if (!(alpha > 0 && alpha < 1)) throw ModelError("sticky chain: alpha must lie in (0, 1)");
  if (!(gamma >= 0 && gamma <= 1)) throw ModelError("sticky chain: gamma must lie in [0, 1]");
  const double zeta = 1 - gamma;
  Matrix p = {{alpha + zeta * (1 - alpha), (1 - zeta) * (1 - alpha)},
              {(1 - zeta) * alpha, 1 - (1 - zeta) * alpha}};
  return MarkovValueModel(std::move(p), {ValueDistribution::point(1.0), ValueDistribution::point(0.0)});
}

bool MarkovValueModel::has_demands() const { return std::holds_alternative<DemandDistribution>(laws_.front()); }

std::int64_t MarkovValueModel::k_max() const {
  std::int64_t k = 1;
  for (const auto& law : laws_)
    if (const auto* d = std::get_if<DemandDistribution>(&law)) k = std::max(k, d->k_max());
  return k;
}

bool MarkovValueModel::is_ergodic() const {
  // Primitive iff P^m > 0 for m = (n-1)^2 + 1 (Wielandt); every power past
  // that exponent stays positive, so squaring until we pass it suffices.
  const std::size_t n = num_states();
  std::vector<std::vector<char>> b(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = transition_[i][j] > 0;
  const std::size_t target = (n - 1) * (n - 1) + 1;
  for (std::size_t power = 1;; power *= 2) {
    if (power >= target) {
      for (const auto& row : b)
        for (char c : row)
          if (!c) return false;
      return true;
    }
    std::vector<std::vector<char>> sq(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (b[i][k])
          for (std::size_t j = 0; j < n; ++j) sq[i][j] |= b[k][j];
    b = std::move(sq);
  }
}

std::vector<double> stationary_distribution(const MarkovValueModel& model) {
  if (!model.is_ergodic()) throw ModelError("chain not ergodic");
  const std::size_t n = model.num_states();
  const auto& p = model.transition();
  std::vector<double> pi(n);
  if (n <= 64) {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(Eigen::Index(i), Eigen::Index(j)) = p[j][i] - (i == j ? 1.0 : 0.0);
    m.row(Eigen::Index(n - 1)).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Eigen::Index(n));
    rhs(Eigen::Index(n - 1)) = 1.0;
    Eigen::VectorXd sol = m.fullPivLu().solve(rhs);
    for (std::size_t i = 0; i < n; ++i) pi[i] = std::max(0.0, sol(Eigen::Index(i)));
  } else {
    std::fill(pi.begin(), pi.end(), 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (int iter = 0; iter < 1'000'000; ++iter) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) kernels::axpy(pi[i], p[i], next);
      double change = 0;
      for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - pi[i]));
      pi.swap(next);
      if (change < 1e-12) break;
    }
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& x : pi) x /= total;
  return pi;
}

double decorrelation_gamma(const MarkovValueModel& model, std::span<const double> pi) {
  const std::size_t n = model.num_states();
  if (pi.size() != n) throw ModelError("decorrelation: pi has the wrong length");
  double gamma = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    if (!(pi[s] > 0)) throw ModelError("decorrelation: stationary probability is zero");
    for (std::size_t from = 0; from < n; ++from) gamma = std::min(gamma, model.transition()[from][s] / pi[s]);
  }
  return std::clamp(gamma, 0.0, 1.0);
}

StationaryProfile stationary_profile(const MarkovValueModel& model) {
  StationaryProfile prof;
  prof.pi = stationary_distribution(model);
  prof.gamma = decorrelation_gamma(model, prof.pi);
  prof.min_pi = *std::min_element(prof.pi.begin(), prof.pi.end());
  return prof;
}

StateLaw steady_state_mixture(const MarkovValueModel& model, std::span<const double> pi) {
  const std::size_t n = model.num_states();
  if (pi.size() != n) throw ModelError("mixture: pi has the wrong length");
  const auto& laws = model.laws();
  if (std::all_of(laws.begin(), laws.end(), [&](const StateLaw& l) { return l == laws.front(); })) return laws.front();

  if (model.has_demands()) {
    std::vector<DemandPoint> pts;
    std::int64_t k_max = 1;
    for (std::size_t s = 0; s < n; ++s) {
      const auto& d = std::get<DemandDistribution>(laws[s]);
      k_max = std::max(k_max, d.k_max());
      for (auto pt : d.support()) {
        pt.prob *= pi[s];
        pts.push_back(pt);
      }
    }
    return DemandDistribution(std::move(pts), k_max);
  }

  const bool all_bernoulli = std::all_of(laws.begin(), laws.end(), [](const StateLaw& l) {
    return std::holds_alternative<BernoulliLaw>(std::get<ValueDistribution>(l).law());
  });
  if (all_bernoulli) {
    double p = 0;
    for (std::size_t s = 0; s < n; ++s) p += pi[s] * std::get<BernoulliLaw>(std::get<ValueDistribution>(laws[s]).law()).p;
    return ValueDistribution::bernoulli(std::clamp(p, 0.0, 1.0));
  }

  std::vector<double> values, probs;
  double total = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const DiscreteLaw atoms = std::get<ValueDistribution>(laws[s]).atoms();
    for (std::size_t i = 0; i < atoms.values.size(); ++i) {
      values.push_back(atoms.values[i]);
      probs.push_back(atoms.probs[i] * pi[s]);
      total += probs.back();
    }
  }
  for (double& p : probs) p /= total;
  return ValueDistribution::discrete(values, probs);
}

// ---------------------------------------------------------------------------
// Sampling

PathSampler::PathSampler(const MarkovValueModel& model, Stream stream) : model_(&model), stream_(stream) {
  for (const auto& row : model.transition()) cumulative_.push_back(cumulative_of(row));
  if (!model.initial_state()) initial_cumulative_ = cumulative_of(stationary_distribution(model));
}

PathStep PathSampler::next() {
  const double u_state = stream_.uniform();
  std::size_t s = 0;
  if (state_)
    s = pick(cumulative_[*state_], u_state);
  else if (model_->initial_state())
    s = *model_->initial_state();
  else
    s = pick(initial_cumulative_, u_state);
  state_ = s;

  const double u_value = stream_.uniform();
  PathStep step;
  step.state = s;
  std::visit(overloaded{
                 [&](const ValueDistribution& d) { step.value = d.sample(u_value); },
                 [&](const DemandDistribution& d) {
                   step.demand_index = d.sample_index(u_value);
                   step.value = d.support()[step.demand_index].value;
                   step.duration = d.support()[step.demand_index].duration;
                 },
             },
             model_->law(s));
  return step;
}

std::vector<PathStep> sample_path(const MarkovValueModel& model, std::int64_t horizon, std::uint64_t seed) {
  if (horizon < 1) throw ModelError("sample_path: horizon must be >= 1");
  PathSampler sampler(model, Stream(seed));
  std::vector<PathStep> path;
  path.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 0; t < horizon; ++t) path.push_back(sampler.next());
  return path;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double number(const std::string& tok) {
  try {
    return parse_real(tok);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::int64_t integer(const std::string& tok) {
  try {
    return parse_integer(tok);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::pair<std::string, std::string> split_once(const std::string& tok, char sep) {
  auto at = tok.find(sep);
  if (at == std::string::npos) throw ConfigError("expected '" + std::string(1, sep) + "' in '" + tok + "'");
  return {tok.substr(0, at), tok.substr(at + 1)};
}

} // namespace

StateLaw parse_state_law(const std::string& text) {
  const auto tok = split_ws(text);
  if (tok.empty()) throw ConfigError("empty distribution spec");
  const std::string& kind = tok[0];
  auto need = [&](std::size_t n) {
    if (tok.size() != n) throw ConfigError("'" + kind + "' expects " + std::to_string(n - 1) + " argument(s)");
  };
  try {
    if (kind == "bernoulli") {
      need(2);
      return ValueDistribution::bernoulli(number(tok[1]));
    }
    if (kind == "point") {
      need(2);
      return ValueDistribution::point(number(tok[1]));
    }
    if (kind == "uniform") {
      need(3);
      return ValueDistribution::uniform(number(tok[1]), number(tok[2]));
    }
    if (kind == "discrete") {
      if (tok.size() < 2) throw ConfigError("'discrete' needs at least one value:prob atom");
      std::vector<double> v, p;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto [a, b] = split_once(tok[i], ':');
        v.push_back(number(a));
        p.push_back(number(b));
      }
      return ValueDistribution::discrete(v, p);
    }
    if (kind == "density") {
      if (tok.size() < 5 || tok[3] != ":") throw ConfigError("'density' syntax: density lo hi : h1 h2 ... [bounds l1 l2]");
      std::vector<double> heights;
      std::optional<double> l1, l2;
      std::size_t i = 4;
      for (; i < tok.size() && tok[i] != "bounds"; ++i) heights.push_back(number(tok[i]));
      if (i < tok.size()) {
        if (tok.size() != i + 3) throw ConfigError("'bounds' expects two numbers");
        l1 = number(tok[i + 1]);
        l2 = number(tok[i + 2]);
      }
      return ValueDistribution::density(number(tok[1]), number(tok[2]), std::move(heights), l1, l2);
    }
    if (kind == "demand") {
      std::vector<DemandPoint> pts;
      std::optional<std::int64_t> k_max;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] == "kmax") {
          if (i + 2 != tok.size()) throw ConfigError("'kmax' must be last and take one integer");
          k_max = integer(tok[i + 1]);
          break;
        }
        auto [vk, p] = split_once(tok[i], ':');
        auto [v, k] = split_once(vk, ',');
        pts.push_back({number(v), integer(k), number(p)});
      }
      return DemandDistribution(std::move(pts), k_max);
    }
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown distribution kind '" + kind + "'");
}

std::string describe(const StateLaw& law) {
  return std::visit([](const auto& l) { return l.describe(); }, law);
}

} // namespace dmmf
