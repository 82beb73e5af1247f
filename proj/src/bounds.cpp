#include "dmmf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"
#include "dmmf/ideal_utility.hpp"

namespace dmmf {

namespace {

struct KindInfo {
  BoundKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {BoundKind::general, "general"},
    {BoundKind::iid_worst_case, "iid_worst_case"},
    {BoundKind::bounded_density, "bounded_density"},
    {BoundKind::bernoulli, "bernoulli"},
    {BoundKind::moderate_correlation, "moderate_correlation"},
    {BoundKind::high_correlation, "high_correlation"},
    {BoundKind::arbitrary_correlation, "arbitrary_correlation"},
    {BoundKind::min_stationary, "min_stationary"},
    {BoundKind::state_independent, "state_independent"},
    {BoundKind::price_of_anarchy, "price_of_anarchy"},
    {BoundKind::reusable, "reusable"},
    {BoundKind::reusable_tuned, "reusable_tuned"},
    {BoundKind::impossibility_markov, "impossibility_markov"},
    {BoundKind::impossibility_reusable, "impossibility_reusable"},
};

[[noreturn]] void inapplicable(BoundKind kind, const std::string& why) {
  throw BoundInapplicable(bound_kind_name(kind) + ": " + why);
}

double need(BoundKind kind, const std::optional<double>& v, const char* name) {
  if (!v) inapplicable(kind, std::string("needs ") + name);
  if (!std::isfinite(*v)) inapplicable(kind, std::string(name) + " must be finite");
  return *v;
}

double share(BoundKind kind, const BoundParams& p) {
  const double a = need(kind, p.alpha, "alpha");
  if (!(a > 0 && a < 1)) inapplicable(kind, "alpha must lie in (0, 1)");
  return a;
}

double unit_open_closed(BoundKind kind, const std::optional<double>& v, const char* name) {
  const double x = need(kind, v, name);
  if (!(x > 0 && x <= 1)) inapplicable(kind, std::string(name) + " must lie in (0, 1]");
  return x;
}

double unit_closed(BoundKind kind, const std::optional<double>& v, const char* name) {
  const double x = need(kind, v, name);
  if (!(x >= 0 && x <= 1)) inapplicable(kind, std::string(name) + " must lie in [0, 1]");
  return x;
}

double cap_parameter(BoundKind kind, const BoundParams& p) {
  const double r = need(kind, p.r, "r");
  if (!(r >= 1)) inapplicable(kind, "r must be >= 1");
  return r;
}

void finish(BoundReport& rep) {
  rep.coefficient = std::clamp(rep.raw, 0.0, 1.0);
  rep.vacuous = rep.coefficient != rep.raw;
}

double raw_general(double a, double b, double g) {
  return g * (a - (1 - a) * b * (1 - g)) / (a + (1 - a) * b * g);
}

} // namespace

BoundParams relevant_inputs(BoundKind kind, const BoundParams& p) {
  BoundParams q;
  q.alpha = p.alpha;
  switch (kind) {
  case BoundKind::general:
    q.beta = p.beta;
    q.gamma = p.gamma;
    break;
  case BoundKind::iid_worst_case:
    break;
  case BoundKind::bounded_density:
    q.lambda1 = p.lambda1;
    q.lambda2 = p.lambda2;
    break;
  case BoundKind::bernoulli:
    q.p = p.p;
    break;
  case BoundKind::moderate_correlation:
  case BoundKind::high_correlation:
  case BoundKind::arbitrary_correlation:
    q.gamma = p.gamma;
    break;
  case BoundKind::min_stationary:
    q.min_pi = p.min_pi;
    break;
  case BoundKind::state_independent:
    q.beta = p.beta;
    q.sigma = p.sigma;
    break;
  case BoundKind::price_of_anarchy:
    q.alpha.reset();
    q.n = p.n;
    q.p = p.p;
    q.lambda1 = p.lambda1;
    q.lambda2 = p.lambda2;
    break;
  case BoundKind::reusable:
    q.beta = p.beta;
    q.r = p.r;
    break;
  case BoundKind::reusable_tuned:
    q.beta = p.beta;
    break;
  case BoundKind::impossibility_markov:
    q.gamma = p.gamma;
    break;
  case BoundKind::impossibility_reusable:
    q.beta = p.beta;
    q.r = p.r;
    q.k_max = p.k_max;
    break;
  }
  return q;
}

std::string bound_kind_name(BoundKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

BoundKind parse_bound_kind(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  throw ConfigError("unknown bound kind '" + name + "'");
}

const std::vector<BoundKind>& all_bound_kinds() {
  static const std::vector<BoundKind> kinds = [] {
    std::vector<BoundKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

std::string describe(const BoundParams& p) {
  std::ostringstream out;
  const char* sep = "";
  auto put = [&](const char* name, const auto& v) {
    if (!v) return;
    out << sep << name << '=';
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>)
      out << format_real(*v);
    else
      out << *v;
    sep = ";";
  };
  put("alpha", p.alpha);
  put("beta", p.beta);
  put("gamma", p.gamma);
  put("r", p.r);
  put("p", p.p);
  put("lambda1", p.lambda1);
  put("lambda2", p.lambda2);
  put("min_pi", p.min_pi);
  put("sigma", p.sigma);
  put("k_max", p.k_max);
  put("n", p.n);
  return out.str();
}

double guarantee_general(double alpha, double beta, double gamma) {
  BoundParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  return evaluate_bound(BoundKind::general, p).coefficient;
}

double guarantee_mult(double alpha, double beta, double r) {
  BoundParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.r = r;
  return evaluate_bound(BoundKind::reusable, p).raw;
}

TunedCap tuned_cap(double alpha, double beta) {
  BoundParams p;
  p.alpha = alpha;
  p.beta = beta;
  const auto rep = evaluate_bound(BoundKind::reusable_tuned, p);
  return {*rep.tuned_r, rep.raw};
}

double impossibility_markov(double alpha, double gamma) {
  BoundParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  return evaluate_bound(BoundKind::impossibility_markov, p).raw;
}

double impossibility_markov_small_alpha(double gamma) {
  if (!(gamma > 0 && gamma <= 1)) throw BoundInapplicable("impossibility_markov: gamma must lie in (0, 1]");
  return gamma / (1 + gamma);
}

double impossibility_markov_small_gamma(double alpha) {
  if (!(alpha > 0 && alpha <= 0.5))
    throw BoundInapplicable("impossibility_markov: the small-gamma limit needs alpha in (0, 1/2]");
  return alpha / (1 - alpha);
}

double impossibility_mult(double alpha, double r, std::int64_t k_max, double v_star, double horizon) {
  if (!(alpha > 0 && alpha < 1)) throw BoundInapplicable("impossibility_reusable: alpha must lie in (0, 1)");
  if (!(r >= 1)) throw BoundInapplicable("impossibility_reusable: r must be >= 1");
  if (k_max < 1) throw BoundInapplicable("impossibility_reusable: k_max must be >= 1");
  const double k = static_cast<double>(k_max);
  return (1 - (1 - alpha) / r * ((k - 1) / k)) * v_star * horizon + v_star * (k - 1);
}

double welfare_upper_bound(std::int64_t n, const std::function<double(double)>& v_star, double horizon) {
  if (n < 1) throw BoundInapplicable("welfare: n must be >= 1");
  const double share = 1.0 / static_cast<double>(n);
  return static_cast<double>(n) * v_star(share) * horizon;
}

BoundReport evaluate_bound(BoundKind kind, const BoundParams& p) {
  BoundReport rep;
  rep.kind = kind;
  rep.inputs = p;
  switch (kind) {
  case BoundKind::general: {
    const double a = share(kind, p);
    const double b = unit_open_closed(kind, p.beta, "beta");
    const double g = unit_closed(kind, p.gamma, "gamma");
    rep.raw = raw_general(a, b, g);
    rep.v_star_beta = b;
    rep.strategy_beta = b;
    break;
  }
  case BoundKind::iid_worst_case: {
    const double a = share(kind, p);
    rep.raw = 1 / (2 - a);
    rep.v_star_beta = a;
    rep.strategy_beta = a;
    break;
  }
  case BoundKind::bounded_density: {
    const double a = share(kind, p);
    const double l1 = need(kind, p.lambda1, "lambda1");
    const double l2 = need(kind, p.lambda2, "lambda2");
    if (!(l1 > 0 && l2 >= l1)) inapplicable(kind, "needs 0 < lambda1 <= lambda2");
    if (!(a <= std::min(2 * l1 / l2, l2 / (2 * l1))))
      inapplicable(kind, "needs alpha <= min{2 lambda1 / lambda2, lambda2 / (2 lambda1)}");
    rep.raw = 1 - std::sqrt(2 * l2 * a / l1);
    rep.v_star_beta = a;
    rep.strategy_beta = std::sqrt(2 * l1 * a / l2);
    break;
  }
  case BoundKind::bernoulli: {
    const double a = share(kind, p);
    const double m = unit_open_closed(kind, p.p, "p");
    rep.raw = std::max(a, m) / (a + m - a * m);
    rep.v_star_beta = a;
    rep.strategy_beta = m;
    break;
  }
  case BoundKind::moderate_correlation: {
    const double a = share(kind, p);
    const double g = unit_closed(kind, p.gamma, "gamma");
    rep.raw = g * (g + a * (1 - g)) / (1 + (1 - a) * g);
    rep.v_star_beta = a;
    rep.strategy_beta = a;
    break;
  }
  case BoundKind::high_correlation: {
    const double a = share(kind, p);
    const double g = unit_closed(kind, p.gamma, "gamma");
    const double s = std::sqrt(1 - g);
    if (!(s + 1 - g > 1 / (1 - a))) inapplicable(kind, "needs sqrt(1-gamma) + 1 - gamma > 1/(1-alpha)");
    rep.raw = (1 - s) / ((1 - a) * (1 + s));
    rep.v_star_beta = a;
    rep.strategy_beta = a / ((1 - a) * (s + 1 - g));
    break;
  }
  case BoundKind::arbitrary_correlation: {
    const double a = share(kind, p);
    const double g = unit_closed(kind, p.gamma, "gamma");
    rep.raw = g * (1 + g) / (4 + 2 * g);
    rep.v_star_beta = a;
    rep.strategy_beta = a / 2;
    break;
  }
  case BoundKind::min_stationary: {
    const double a = share(kind, p);
    const double m = unit_open_closed(kind, p.min_pi, "min_pi");
    rep.raw = m / (m + 1 - a);
    rep.v_star_beta = a;
    break;
  }
  case BoundKind::state_independent: {
    const double a = share(kind, p);
    const double b = unit_open_closed(kind, p.beta, "beta");
    const double s = unit_open_closed(kind, p.sigma, "sigma");
    const double q = b / s;
    rep.raw = a / (a + q - a * q);
    rep.v_star_beta = b;
    rep.strategy_beta = b;
    break;
  }
  case BoundKind::price_of_anarchy: {
    if (!p.n) inapplicable(kind, "needs n");
    if (*p.n < 2) inapplicable(kind, "needs n >= 2");
    BoundParams q = p;
    q.alpha = 1.0 / static_cast<double>(*p.n);
    q.n.reset();
    const BoundKind under = p.p                        ? BoundKind::bernoulli
                            : (p.lambda1 || p.lambda2) ? BoundKind::bounded_density
                                                       : BoundKind::iid_worst_case;
    const auto base = evaluate_bound(under, q);
    if (!(base.coefficient > 0)) inapplicable(kind, "the per-agent guarantee is vacuous");
    rep.raw = base.raw;
    rep.v_star_beta = base.v_star_beta;
    rep.strategy_beta = base.strategy_beta;
    rep.poa = 1 / base.coefficient;
    break;
  }
  case BoundKind::reusable: {
    const double a = share(kind, p);
    const double b = unit_open_closed(kind, p.beta, "beta");
    const double r = cap_parameter(kind, p);
    rep.raw = std::min(a / (b * r), 1 - (1 - a) / r);
    rep.order = AdditiveOrder::sqrt_horizon_kmax;
    rep.v_star_beta = b;
    rep.strategy_beta = b;
    break;
  }
  case BoundKind::reusable_tuned: {
    const double a = share(kind, p);
    const double b = unit_open_closed(kind, p.beta, "beta");
    const double c = a + b - a * b;
    rep.tuned_r = 1 + a * (1 - b) / b;  // (a + b - ab) / b, never rounded below 1
    rep.raw = a / c;
    rep.order = AdditiveOrder::sqrt_horizon_kmax;
    rep.v_star_beta = b;
    rep.strategy_beta = b;
    break;
  }
  case BoundKind::impossibility_markov: {
    const double a = share(kind, p);
    const double g = unit_open_closed(kind, p.gamma, "gamma");
    // 1 + g - (1-g)^c written to stay accurate as g -> 0.
    const double tail = g - std::expm1((1 - a) / a * std::log1p(-g));
    rep.raw = g / ((1 - a) * tail);
    rep.side = BoundSide::upper_impossibility;
    rep.v_star_beta = a;
    break;
  }
  case BoundKind::impossibility_reusable: {
    const double a = share(kind, p);
    const double r = cap_parameter(kind, p);
    if (!p.k_max) inapplicable(kind, "needs k_max");
    if (*p.k_max < 1) inapplicable(kind, "k_max must be >= 1");
    const double k = static_cast<double>(*p.k_max);
    rep.raw = 1 - (1 - a) / r * ((k - 1) / k);
    rep.side = BoundSide::upper_impossibility;
    rep.v_star_beta = p.beta ? unit_open_closed(kind, p.beta, "beta") : a;
    break;
  }
  }
  finish(rep);
  return rep;
}

BoundParams derive_params(BoundKind kind, const MarkovValueModel& model, double alpha, const BoundParams& overrides,
                          std::optional<double> r) {
  BoundParams p;
  p.alpha = alpha;
  p.r = r;
  p.k_max = model.k_max();
  const auto pi = stationary_distribution(model);
  p.gamma = decorrelation_gamma(model, pi);
  p.min_pi = *std::min_element(pi.begin(), pi.end());
  if (model.num_states() == 1) {
    if (const auto* v = std::get_if<ValueDistribution>(&model.law(0))) {
      if (const auto* b = std::get_if<BernoulliLaw>(&v->law())) {
        p.p = b->p;
      } else if (const auto* u = std::get_if<UniformLaw>(&v->law())) {
        p.lambda1 = p.lambda2 = 1 / (u->hi - u->lo);
      } else if (const auto* d = std::get_if<DensityLaw>(&v->law())) {
        p.lambda1 = d->lambda_lo;
        p.lambda2 = d->lambda_hi;
      }
    }
  }
  p.n = std::llround(1 / alpha);

  auto take = [](auto& field, const auto& over) {
    if (over) field = over;
  };
  take(p.alpha, overrides.alpha);
  take(p.beta, overrides.beta);
  take(p.gamma, overrides.gamma);
  take(p.r, overrides.r);
  take(p.p, overrides.p);
  take(p.lambda1, overrides.lambda1);
  take(p.lambda2, overrides.lambda2);
  take(p.min_pi, overrides.min_pi);
  take(p.sigma, overrides.sigma);
  take(p.k_max, overrides.k_max);
  take(p.n, overrides.n);
  if (!p.beta) p.beta = p.alpha;
  if (kind == BoundKind::state_independent && !p.sigma && !model.has_demands())
    p.sigma = sigma_of_beta(model, *p.beta);
  return relevant_inputs(kind, p);
}

} // namespace dmmf
