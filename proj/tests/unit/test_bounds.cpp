#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "dmmf/bounds.hpp"
#include "dmmf/errors.hpp"
#include "dmmf/ideal_utility.hpp"
#include "test_support.hpp"

using namespace dmmf;

namespace {

// Independent evaluations in long double, written straight from the
// published expressions.
using ld = long double;

ld general_oracle(ld a, ld b, ld g) { return g * (a - (1 - a) * b * (1 - g)) / (a + (1 - a) * b * g); }

ld markov_oracle(ld a, ld g) { return g / ((1 - a) * (1 + g - std::pow(1 - g, (1 - a) / a))); }

BoundParams with(double alpha) {
  BoundParams p;
  p.alpha = alpha;
  return p;
}

std::string inapplicable_message(BoundKind kind, const BoundParams& p) {
  try {
    evaluate_bound(kind, p);
  } catch (const BoundInapplicable& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("general guarantee: examples and clamping") {
  CHECK(guarantee_general(0.5, 0.5, 1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(guarantee_general(0.3, 0.7, 0) == 0);
  CHECK(guarantee_general(0.25, 0.125, 0.5) == doctest::Approx(0.5 * 0.203125 / 0.296875).epsilon(1e-14));
  CHECK(guarantee_general(0.25, 0.125, 0.5) == doctest::Approx(0.34211).epsilon(1e-5));

  // Large beta and small gamma push the formula below zero.
  auto p = with(0.1);
  p.beta = 1;
  p.gamma = 0.2;
  const auto rep = evaluate_bound(BoundKind::general, p);
  CHECK(rep.raw < 0);
  CHECK(rep.coefficient == 0);
  CHECK(rep.vacuous);
  CHECK(guarantee_general(0.1, 1, 0.2) == 0);
}

TEST_CASE("general guarantee matches the long double oracle on a grid") {
  for (int i = 1; i < 20; ++i) {
    const double a = i / 20.0;
    CHECK(std::abs(guarantee_general(a, a, 1) - 1 / (2 - a)) <= 1e-12);
    for (int j = 1; j <= 10; ++j)
      for (int k = 0; k <= 10; ++k) {
        const double b = j / 10.0, g = k / 10.0;
        const ld want = std::max<ld>(0, general_oracle(a, b, g));
        CHECK(std::abs(guarantee_general(a, b, g) - static_cast<double>(want)) <= 1e-12);
      }
  }
}

TEST_CASE("guarantee coefficients: examples") {
  auto p = with(0.1);
  p.p = 0.9;
  auto rep = evaluate_bound(BoundKind::bernoulli, p);
  CHECK(rep.coefficient == doctest::Approx(0.9 / 0.91).epsilon(1e-14));
  CHECK(rep.strategy_beta == 0.9);
  CHECK(rep.v_star_beta == 0.1);

  p = with(0.3);
  p.gamma = 1;
  CHECK(evaluate_bound(BoundKind::arbitrary_correlation, p).coefficient == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(evaluate_bound(BoundKind::arbitrary_correlation, p).strategy_beta == doctest::Approx(0.15));

  for (double a : {0.05, 0.2, 0.5}) {
    auto q = with(a);
    q.min_pi = a;
    CHECK(evaluate_bound(BoundKind::min_stationary, q).coefficient == doctest::Approx(a).epsilon(1e-14));
  }

  p = with(0.25);
  CHECK(evaluate_bound(BoundKind::iid_worst_case, p).coefficient == doctest::Approx(1 / 1.75));

  // Uniform[0, 1]: lambda1 = lambda2 = 1, alpha <= 1/2.
  p = with(0.08);
  p.lambda1 = p.lambda2 = 1;
  rep = evaluate_bound(BoundKind::bounded_density, p);
  CHECK(rep.coefficient == doctest::Approx(0.6));
  CHECK(*rep.strategy_beta == doctest::Approx(0.4));
  p.alpha = 0.6;
  CHECK(inapplicable_message(BoundKind::bounded_density, p).find("lambda2 / (2 lambda1)") != std::string::npos);
}

TEST_CASE("moderate and high correlation chained inequalities") {
  for (int i = 1; i < 20; ++i)
    for (int k = 0; k <= 40; ++k) {
      const double a = i / 20.0, g = k / 40.0;
      auto p = with(a);
      p.gamma = g;
      const double mod = evaluate_bound(BoundKind::moderate_correlation, p).raw;
      const ld want = static_cast<ld>(g) * (g + static_cast<ld>(a) * (1 - g)) / (1 + (1 - static_cast<ld>(a)) * g);
      CHECK(std::abs(mod - static_cast<double>(want)) <= 1e-12);
      CHECK(mod >= g * g / (1 + g) + a * g / ((1 + g) * (1 + g)) - 1e-12);
      // Equals the general guarantee at beta = alpha.
      CHECK(std::abs(mod - std::max(0.0, static_cast<double>(general_oracle(a, a, g)))) <= 1e-12);

      const bool applies = std::sqrt(1 - g) + 1 - g > 1 / (1 - a);
      if (applies) {
        const auto hi = evaluate_bound(BoundKind::high_correlation, p);
        CHECK(hi.raw >= g / (4 * (1 - a)) - 1e-12);
        CHECK(*hi.strategy_beta < a);
      } else {
        CHECK(inapplicable_message(BoundKind::high_correlation, p).find("sqrt(1-gamma) + 1 - gamma > 1/(1-alpha)") !=
              std::string::npos);
      }
    }
}

TEST_CASE("reusable guarantee and tuned cap") {
  const auto t = tuned_cap(0.5, 0.5);
  CHECK(t.r == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(t.coefficient == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(guarantee_mult(0.5, 0.5, 2) == 0.5);
  for (double a : {0.1, 0.3, 0.5, 0.7}) CHECK(guarantee_mult(a, a, 1) == doctest::Approx(a).epsilon(1e-15));
  CHECK_THROWS_AS(guarantee_mult(0.5, 0.5, 0.9), BoundInapplicable);

  for (int i = 1; i < 20; ++i)
    for (int j = 1; j <= 20; ++j) {
      const double a = i / 20.0, b = j / 20.0;
      const auto tc = tuned_cap(a, b);
      CHECK(std::abs(tc.coefficient - a / (a + b - a * b)) <= 1e-12);
      CHECK(std::abs(guarantee_mult(a, b, tc.r) - tc.coefficient) <= 1e-12);
      CHECK(std::abs(tc.coefficient - guarantee_general(a, b, 1)) <= 1e-12);
      CHECK(tc.r >= 1);
    }
}

TEST_CASE("state-independent guarantee") {
  auto p = with(0.25);
  p.beta = 0.25;
  p.sigma = 1;
  CHECK(evaluate_bound(BoundKind::state_independent, p).coefficient == doctest::Approx(1 / 1.75));
  p.sigma = 0.5;
  CHECK(evaluate_bound(BoundKind::state_independent, p).coefficient == doctest::Approx(0.25 / (0.25 + 0.5 - 0.125)));
  p.sigma = 0;
  CHECK_THROWS_AS(evaluate_bound(BoundKind::state_independent, p), BoundInapplicable);
}

TEST_CASE("price of anarchy for symmetric agents") {
  for (std::int64_t n : {2, 3, 5, 10}) {
    BoundParams p;
    p.n = n;
    const auto rep = evaluate_bound(BoundKind::price_of_anarchy, p);
    CHECK(*rep.poa == doctest::Approx(2 - 1.0 / static_cast<double>(n)).epsilon(1e-14));
  }
  BoundParams p;
  p.n = 100;
  p.p = 0.9;
  CHECK(*evaluate_bound(BoundKind::price_of_anarchy, p).poa < 1.02);
  BoundParams q;
  q.n = 1;
  CHECK_THROWS_AS(evaluate_bound(BoundKind::price_of_anarchy, q), BoundInapplicable);
}

TEST_CASE("markov impossibility and its limits") {
  CHECK(impossibility_markov(0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(impossibility_markov_small_alpha(1) == 0.5);
  CHECK(impossibility_markov_small_gamma(0.25) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK_THROWS_AS(impossibility_markov_small_gamma(0.6), BoundInapplicable);
  CHECK_THROWS_AS(impossibility_markov(0.3, 0), BoundInapplicable);

  for (int k = 1; k <= 20; ++k) {
    const double g = k / 20.0;
    CHECK(std::abs(impossibility_markov(1e-4, g) - g / (1 + g)) <= 1e-3);
    CHECK(std::abs(impossibility_markov_small_alpha(g) - g / (1 + g)) <= 1e-12);
  }
  for (int i = 1; i <= 10; ++i) {
    const double a = i / 20.0;
    CHECK(std::abs(impossibility_markov(a, 1e-7) - a / (1 - a)) <= 1e-4);
    for (int k = 1; k <= 20; ++k) {
      const double g = k / 20.0;
      CHECK(std::abs(impossibility_markov(a, g) - static_cast<double>(markov_oracle(a, g))) <= 1e-12);
    }
  }
  // Above 1 for large shares: the report clamps and flags it.
  auto p = with(0.9);
  p.gamma = 0.5;
  const auto rep = evaluate_bound(BoundKind::impossibility_markov, p);
  CHECK(rep.raw > 1);
  CHECK(rep.coefficient == 1);
  CHECK(rep.vacuous);
  CHECK(rep.side == BoundSide::upper_impossibility);
}

TEST_CASE("guarantees stay below the impossibility limit") {
  for (int k = 1; k <= 100; ++k) {
    const double g = k / 100.0;
    auto p = with(0.01);
    p.gamma = g;
    CHECK(evaluate_bound(BoundKind::arbitrary_correlation, p).coefficient <= impossibility_markov_small_alpha(g) + 1e-9);
    CHECK(evaluate_bound(BoundKind::moderate_correlation, p).coefficient <= impossibility_markov(0.01, g) + 1e-9);
  }
}

TEST_CASE("reusable impossibility") {
  CHECK(impossibility_mult(0.4, 1.5, 1, 0.3, 1000) == doctest::Approx(300));
  CHECK(impossibility_mult(0.5, 1, 5, 0.5, 1000) == doctest::Approx(302).epsilon(1e-14));
  BoundParams p = with(0.5);
  p.r = 2;
  p.k_max = 1'000'000;
  CHECK(evaluate_bound(BoundKind::impossibility_reusable, p).coefficient == doctest::Approx(0.75).epsilon(1e-6));
  CHECK_THROWS_AS(impossibility_mult(0.5, 0.5, 3, 1, 10), BoundInapplicable);
}

TEST_CASE("welfare upper bound") {
  const auto bern = [](double b) { return ideal_single(ValueDistribution::bernoulli(0.5), b).value; };
  const auto uni = [](double b) { return ideal_single(ValueDistribution::uniform(0, 1), b).value; };
  CHECK(welfare_upper_bound(1, uni, 100) == doctest::Approx(50));
  CHECK(welfare_upper_bound(2, bern, 100) == doctest::Approx(100));
  CHECK(welfare_upper_bound(4, uni, 100) == doctest::Approx(87.5));
}

TEST_CASE("every coefficient lies in [0, 1] over random domains") {
  testing_support::Gen g(91);
  for (int trial = 0; trial < 20000; ++trial) {
    BoundParams p;
    p.alpha = g.uniform(1e-3, 0.999);
    p.beta = g.uniform(1e-3, 1.0);
    p.gamma = g.uniform(0, 1.0);
    p.r = g.uniform(1, 5);
    p.p = g.uniform(1e-3, 1.0);
    p.lambda1 = g.uniform(0.1, 2);
    p.lambda2 = *p.lambda1 * g.uniform(1, 4);
    p.min_pi = g.uniform(1e-3, 1.0);
    p.sigma = g.uniform(1e-3, 1.0);
    p.k_max = g.integer(1, 20);
    p.n = g.integer(2, 50);
    for (auto kind : all_bound_kinds()) {
      try {
        const auto rep = evaluate_bound(kind, p);
        CHECK(rep.coefficient >= 0);
        CHECK(rep.coefficient <= 1);
        if (rep.side == BoundSide::lower_guarantee && kind != BoundKind::general &&
            kind != BoundKind::bounded_density && kind != BoundKind::impossibility_markov)
          CHECK_FALSE(rep.vacuous);
      } catch (const BoundInapplicable&) {
      }
    }
  }
}

TEST_CASE("bound kinds by name and parameters from a model") {
  for (auto kind : all_bound_kinds()) CHECK(parse_bound_kind(bound_kind_name(kind)) == kind);
  CHECK_THROWS_AS(parse_bound_kind("nonsense"), ConfigError);

  const auto chain = MarkovValueModel::sticky_two_state(0.25, 0.5);
  const auto p = derive_params(BoundKind::arbitrary_correlation, chain, 0.25, {});
  CHECK(*p.gamma == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(p.min_pi);
  CHECK(describe(p) == "alpha=0.25;gamma=0.5");
  const auto m = derive_params(BoundKind::min_stationary, chain, 0.25, {});
  CHECK(*m.min_pi == doctest::Approx(0.25).epsilon(1e-9));

  const auto bern = MarkovValueModel::iid(ValueDistribution::bernoulli(0.9));
  CHECK(*derive_params(BoundKind::bernoulli, bern, 0.1, {}).p == 0.9);
  BoundParams over;
  over.p = 0.5;
  CHECK(*derive_params(BoundKind::bernoulli, bern, 0.1, over).p == 0.5);
  const auto uni = MarkovValueModel::iid(ValueDistribution::uniform(0, 2));
  CHECK(*derive_params(BoundKind::bounded_density, uni, 0.1, {}).lambda1 == 0.5);
  CHECK(derive_params(BoundKind::price_of_anarchy, uni, 0.25, {}).n == 4);

  const auto si = derive_params(BoundKind::state_independent, chain, 0.25, {});
  CHECK(*si.sigma == doctest::Approx(sigma_of_beta(chain, 0.25)));
  CHECK(*si.beta == 0.25);
}
