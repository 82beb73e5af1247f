#include "dmmf/ideal_utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"
#include "dmmf/kernels.hpp"
#include "dmmf/lp.hpp"

namespace dmmf {

namespace {

void check_beta(double beta) {
  if (!(beta >= 0 && beta <= 1)) throw std::invalid_argument("beta must lie in [0, 1]");
}

ValueDistribution as_value_law(const StateLaw& law) {
  if (const auto* v = std::get_if<ValueDistribution>(&law)) return *v;
  const auto& d = std::get<DemandDistribution>(law);
  for (const auto& pt : d.support())
    if (pt.duration != 1) throw ModelError("single-round quantity needs duration-1 demands");
  return d.value_marginal();
}

IdealUtilityResult never_request(double beta, PolicyMode mode, double top) {
  IdealUtilityResult r;
  r.beta = beta;
  r.policy.mode = mode;
  r.policy.beta = beta;
  r.policy.threshold = {top, 0.0};
  return r;
}

} // namespace

double DemandPolicy::request_prob(double value, std::int64_t duration) const {
  for (std::size_t j = 0; j < support.size(); ++j)
    if (support[j].value == value && support[j].duration == duration) return rho[j];
  return 0.0;
}

IdealUtilityResult ideal_single(const ValueDistribution& dist, double beta) {
  check_beta(beta);
  if (beta == 0) return never_request(0, PolicyMode::single_round, dist.max_value());

  IdealUtilityResult r;
  r.beta = beta;
  r.policy.mode = PolicyMode::single_round;
  r.policy.beta = beta;

  if (dist.is_atomless()) {
    r.value = dist.top_mass_expectation(beta);
    const double tau = std::holds_alternative<UniformLaw>(dist.law())
                           ? std::get<UniformLaw>(dist.law()).hi - beta * (std::get<UniformLaw>(dist.law()).hi -
                                                                            std::get<UniformLaw>(dist.law()).lo)
                           : dist.upper_quantile(1 - beta);
    r.policy.threshold = {tau, 1.0};
    return r;
  }

  // Fill the top-beta mass from the largest atom down; the boundary atom is
  // requested with the leftover fraction.
  const DiscreteLaw atoms = dist.atoms();
  double remaining = beta;
  double value = 0;
  ThresholdPolicy policy{atoms.values.front(), 1.0};
  for (std::size_t i = atoms.values.size(); i-- > 0;) {
    const double p = atoms.probs[i];
    if (p < remaining) {
      value += atoms.values[i] * p;
      remaining -= p;
      continue;
    }
    const double frac = p > 0 ? std::clamp(remaining / p, 0.0, 1.0) : 0.0;
    value += atoms.values[i] * p * frac;
    policy = {atoms.values[i], frac};
    remaining = 0;
    break;
  }
  r.value = value;
  r.policy.threshold = policy;
  return r;
}

double expected_request_rate(const ValueDistribution& dist, const ThresholdPolicy& policy) {
  if (dist.is_atomless()) return 1.0 - dist.cdf(policy.threshold);
  const DiscreteLaw atoms = dist.atoms();
  double rate = 0;
  for (std::size_t i = 0; i < atoms.values.size(); ++i) rate += atoms.probs[i] * policy.request_prob(atoms.values[i]);
  return rate;
}

IdealUtilityResult ideal_multi(const DemandDistribution& dist, double beta) {
  check_beta(beta);
  const auto& sup = dist.support();
  const std::size_t m = sup.size();
  IdealUtilityResult r;
  r.beta = beta;
  r.policy.mode = PolicyMode::multi_round;
  r.policy.beta = beta;
  r.policy.demand.support = sup;
  r.policy.demand.rho.assign(m, 0.0);
  if (beta == 0) return r;

  // Variables are the per-round frequencies f_j of starting demand j.
  LinearProgram lp;
  lp.objective.resize(m);
  std::vector<double> budget(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double k = static_cast<double>(sup[j].duration);
    lp.objective[j] = sup[j].value * k;
    budget[j] = k;
  }
  lp.rows.push_back(budget);
  lp.rhs.push_back(beta);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = sup[j].prob * static_cast<double>(sup[i].duration - 1);
    row[j] += 1.0;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(sup[j].prob);
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw Error("ideal_multi: benchmark program not solved to optimality");

  double busy = 0;
  for (std::size_t j = 0; j < m; ++j) busy += static_cast<double>(sup[j].duration - 1) * sol.x[j];
  const double idle = 1.0 - busy;
  for (std::size_t j = 0; j < m; ++j) {
    double rho = sol.x[j] / (sup[j].prob * idle);
    if (rho > 1 + 1e-9 || rho < -1e-9) throw Error("ideal_multi: recovered request probability outside [0, 1]");
    r.policy.demand.rho[j] = std::clamp(rho, 0.0, 1.0);
  }
  r.value = std::max(0.0, sol.objective_value);
  return r;
}

IdealUtilityResult ideal_utility(const StateLaw& law, double beta) {
  if (const auto* v = std::get_if<ValueDistribution>(&law)) return ideal_single(*v, beta);
  return ideal_multi(std::get<DemandDistribution>(law), beta);
}

double oracle_multi(const DemandDistribution& dist, double beta, double grid_step) {
  const auto& sup = dist.support();
  const std::size_t m = sup.size();
  if (m > 4) throw OracleError("oracle_multi: support has more than 4 points");
  if (!(grid_step >= 1e-3 - 1e-15) || grid_step > 1) throw std::invalid_argument("oracle_multi: grid step must lie in [1e-3, 1]");
  check_beta(beta);
  const auto n = static_cast<std::size_t>(std::llround(1.0 / grid_step));

  // Per-point contributions to the numerator E[VK rho], the occupancy
  // E[K rho] and the cycle length 1 + E[(K-1) rho].
  std::vector<double> num(m), occ(m), den(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double k = static_cast<double>(sup[j].duration);
    num[j] = sup[j].prob * sup[j].value * k;
    occ[j] = sup[j].prob * k;
    den[j] = sup[j].prob * (k - 1);
  }
  if (m == 0) return 0.0;

  // Odometer over the first m-1 coordinates; the last one is swept by the
  // vector kernel.
  const std::size_t outer = m - 1;
  std::vector<std::size_t> idx(outer, 0);
  double best = 0;
  for (;;) {
    kernels::RatioSweep s;
    s.den0 = 1.0;
    for (std::size_t j = 0; j < outer; ++j) {
      const double rho = static_cast<double>(idx[j]) / static_cast<double>(n);
      s.num0 += num[j] * rho;
      s.occ0 += occ[j] * rho;
      s.den0 += den[j] * rho;
    }
    s.num1 = num[outer];
    s.occ1 = occ[outer];
    s.den1 = den[outer];
    s.cap = beta;
    best = std::max(best, kernels::grid_ratio_max(s, n).best);

    std::size_t d = 0;
    while (d < outer && ++idx[d] > n) idx[d++] = 0;
    if (d == outer) break;
  }
  return best;
}

ConcavityReport verify_concavity(const std::vector<std::pair<double, double>>& curve) {
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (!(curve[i].first > curve[i - 1].first)) throw std::invalid_argument("verify_concavity: beta grid not increasing");
  ConcavityReport rep;
  for (std::size_t i = 1; i < curve.size(); ++i)
    rep.worst_decrease = std::max(rep.worst_decrease, curve[i - 1].second - curve[i].second);
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const auto [b0, v0] = curve[i - 1];
    const auto [b1, v1] = curve[i];
    const auto [b2, v2] = curve[i + 1];
    const double chord = v0 + (v2 - v0) * (b1 - b0) / (b2 - b0);
    rep.worst_concavity = std::max(rep.worst_concavity, chord - v1);
    rep.second_differences.push_back(v2 - 2 * v1 + v0);
  }
  return rep;
}

DerivativeCheck derivative_check(const ValueDistribution& dist, double beta) {
  if (!dist.is_atomless()) throw DerivativeUndefined("derivative_check: distribution has atoms");
  if (!(beta > 0 && beta < 1)) throw std::invalid_argument("derivative_check: beta must lie in (0, 1)");
  constexpr double h = 1e-5;
  DerivativeCheck out;
  out.analytic = dist.quantile(1 - beta);
  const double hi = ideal_single(dist, std::min(1.0, beta + h)).value;
  const double lo = ideal_single(dist, std::max(0.0, beta - h)).value;
  out.finite_difference = (hi - lo) / (std::min(1.0, beta + h) - std::max(0.0, beta - h));
  return out;
}

std::vector<ThresholdPolicy> per_state_top_policies(const MarkovValueModel& model, double p) {
  std::vector<ThresholdPolicy> out;
  for (const auto& law : model.laws()) out.push_back(ideal_single(as_value_law(law), p).policy.threshold);
  return out;
}

double state_independent_rate(const MarkovValueModel& model, double beta) {
  const auto pi = stationary_distribution(model);
  const ValueDistribution mix = as_value_law(steady_state_mixture(model, pi));
  const ThresholdPolicy policy = ideal_single(mix, beta).policy.threshold;
  double worst = 0;
  for (const auto& law : model.laws()) worst = std::max(worst, expected_request_rate(as_value_law(law), policy));
  return worst;
}

double sigma_of_beta(const MarkovValueModel& model, double beta) {
  check_beta(beta);
  if (beta == 0) throw SigmaUndefined("sigma is 0/0 at beta = 0");
  const auto pi = stationary_distribution(model);
  const ValueDistribution mix = as_value_law(steady_state_mixture(model, pi));
  const ThresholdPolicy policy = ideal_single(mix, beta).policy.threshold;
  double worst = 0;
  double average = 0;
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    const double rate = expected_request_rate(as_value_law(model.law(s)), policy);
    worst = std::max(worst, rate);
    average += pi[s] * rate;
  }
  if (!(worst > 0)) throw SigmaUndefined("sigma: optimal policy never requests");
  return std::min(1.0, average / worst);
}

std::string describe(const RequestPolicy& policy) {
  if (policy.mode == PolicyMode::single_round)
    return "threshold " + format_real(policy.threshold.threshold) + " atom " + format_real(policy.threshold.atom_prob);
  std::string s = "rho";
  for (double r : policy.demand.rho) s += " " + format_real(r);
  return s;
}

} // namespace dmmf
