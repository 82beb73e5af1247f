#include <cmath>
#include <vector>

#include "doctest.h"
#include "dmmf/errors.hpp"
#include "dmmf/value_models.hpp"
#include "test_support.hpp"

using namespace dmmf;

namespace {

MarkovValueModel two_point_chain(Matrix p) {
  return MarkovValueModel(std::move(p), {ValueDistribution::point(1.0), ValueDistribution::point(0.0)});
}

double max_residual(const Matrix& p, const std::vector<double>& pi) {
  double worst = 0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    double s = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) s += pi[i] * p[i][j];
    worst = std::max(worst, std::abs(s - pi[j]));
  }
  return worst;
}

} // namespace

TEST_CASE("distribution construction validates its inputs") {
  const std::vector<double> v{0, 1}, bad{0.5, 0.6}, neg{-1, 1}, p{0.5, 0.5};
  CHECK_THROWS_AS(ValueDistribution::discrete(v, bad), ModelError);
  CHECK_THROWS_AS(ValueDistribution::discrete(neg, p), ModelError);
  CHECK_THROWS_AS(ValueDistribution::bernoulli(1.5), ModelError);
  CHECK_THROWS_AS(ValueDistribution::uniform(1, 1), ModelError);
  CHECK_THROWS_AS(ValueDistribution::density(0, 1, {0.5, 0.5}), ModelError);
  CHECK_THROWS_AS(ValueDistribution::density(0, 1, {0.5, 1.5}, 0.6, 1.5), ModelError);
  CHECK_NOTHROW(ValueDistribution::density(0, 1, {0.5, 1.5}, 0.5, 1.5));
  CHECK_THROWS_AS(DemandDistribution({{1, 3, 1.0}}, 2), ModelError);
  CHECK_THROWS_AS(DemandDistribution({{1, 1, 0.4}}), ModelError);
}

TEST_CASE("discrete atoms are merged and sorted") {
  const std::vector<double> v{2, 1, 2}, p{0.25, 0.5, 0.25};
  const auto d = ValueDistribution::discrete(v, p);
  const auto& law = std::get<DiscreteLaw>(d.law());
  CHECK(law.values == std::vector<double>{1, 2});
  CHECK(law.probs == std::vector<double>{0.5, 0.5});
  CHECK(d.mean() == doctest::Approx(1.5));
  CHECK(d.cdf(1.5) == doctest::Approx(0.5));
  CHECK(d.quantile(0.5) == 1);
  CHECK(d.quantile(0.51) == 2);
}

TEST_CASE("density law moments against midpoint integration") {
  const auto d = ValueDistribution::density(0, 2, {0.25, 0.75});
  double mean = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * (i + 0.5) / n;
    mean += x * (x < 1 ? 0.25 : 0.75) * (2.0 / n);
  }
  CHECK(d.mean() == doctest::Approx(mean).epsilon(1e-9));
  CHECK(d.cdf(1) == doctest::Approx(0.25));
  CHECK(d.quantile(0.25) == doctest::Approx(1));
  CHECK(d.quantile(0.625) == doctest::Approx(1.5));
}

TEST_CASE("stationary distribution examples") {
  const auto one = MarkovValueModel::iid(ValueDistribution::point(3));
  CHECK(stationary_distribution(one) == std::vector<double>{1.0});

  const auto sym = two_point_chain({{0.5, 0.5}, {0.5, 0.5}});
  const auto pi_sym = stationary_distribution(sym);
  CHECK(pi_sym[0] == doctest::Approx(0.5).epsilon(1e-12));

  const auto imp = two_point_chain({{0.625, 0.375}, {0.125, 0.875}});
  const auto pi = stationary_distribution(imp);
  CHECK(std::abs(pi[0] - 0.25) <= 1e-12);
  CHECK(std::abs(pi[1] - 0.75) <= 1e-12);
  CHECK(max_residual(imp.transition(), pi) <= 1e-10);
}

TEST_CASE("the sticky two-state chain reproduces the impossibility matrix") {
  const auto m = MarkovValueModel::sticky_two_state(0.25, 0.5);
  CHECK(m.transition()[0][0] == doctest::Approx(0.625));
  CHECK(m.transition()[0][1] == doctest::Approx(0.375));
  CHECK(m.transition()[1][0] == doctest::Approx(0.125));
  CHECK(m.transition()[1][1] == doctest::Approx(0.875));
  const auto prof = stationary_profile(m);
  CHECK(prof.gamma == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prof.min_pi == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("non-ergodic chains are rejected where a stationary law is needed") {
  const auto cycle = two_point_chain({{0, 1}, {1, 0}});
  CHECK_FALSE(cycle.is_ergodic());
  CHECK_THROWS_WITH_AS(stationary_distribution(cycle), "chain not ergodic", ModelError);
  const auto reducible = two_point_chain({{1, 0}, {0, 1}});
  CHECK_FALSE(reducible.is_ergodic());
  CHECK_THROWS_AS(two_point_chain({{0.5, 0.6}, {0.5, 0.5}}), ModelError);
  // The cycle has gamma = 0 under its (uniform) invariant law.
  const std::vector<double> half{0.5, 0.5};
  CHECK(decorrelation_gamma(cycle, half) == 0.0);
}

TEST_CASE("primitive chains with slow mixing are still ergodic") {
  // A 5-cycle with one self-loop needs a high power to become positive.
  const std::size_t n = 5;
  Matrix p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) p[i][(i + 1) % n] = 1.0;
  p[0][0] = 0.5;
  p[0][1] = 0.5;
  std::vector<StateLaw> laws(n, ValueDistribution::point(1));
  const MarkovValueModel m(p, laws);
  CHECK(m.is_ergodic());
  const auto pi = stationary_distribution(m);
  CHECK(max_residual(p, pi) <= 1e-10);
}

TEST_CASE("decorrelation gamma is 1 exactly when rows equal pi") {
  const auto iid_like = two_point_chain({{0.3, 0.7}, {0.3, 0.7}});
  const auto prof = stationary_profile(iid_like);
  CHECK(prof.gamma == doctest::Approx(1.0).epsilon(1e-12));
  testing_support::Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 6));
    const auto p = g.stochastic(n);
    std::vector<StateLaw> laws(n, ValueDistribution::bernoulli(0.5));
    const MarkovValueModel m(p, laws);
    const auto pr = stationary_profile(m);
    CHECK(pr.gamma <= 1.0);
    CHECK(max_residual(p, pr.pi) <= 1e-10);
    double sum = 0;
    for (double x : pr.pi) sum += x;
    CHECK(std::abs(sum - 1) <= 1e-12);
    // Independent oracle for gamma: enumerate every ratio.
    double g_ref = 1e300;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) g_ref = std::min(g_ref, p[a][b] / pr.pi[b]);
    CHECK(pr.gamma == doctest::Approx(std::min(1.0, g_ref)).epsilon(1e-12));
  }
}

TEST_CASE("steady-state mixture examples") {
  const auto single = MarkovValueModel::iid(ValueDistribution::uniform(0, 1));
  const std::vector<double> one{1.0};
  CHECK(std::get<ValueDistribution>(steady_state_mixture(single, one)) == ValueDistribution::uniform(0, 1));

  const auto chain = MarkovValueModel::sticky_two_state(0.25, 0.5);
  const auto pi = stationary_distribution(chain);
  const auto mix = std::get<ValueDistribution>(steady_state_mixture(chain, pi));
  const auto& law = std::get<DiscreteLaw>(mix.law());
  REQUIRE(law.values.size() == 2);
  CHECK(law.values[0] == 0);
  CHECK(law.probs[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(law.probs[1] == doctest::Approx(0.25).epsilon(1e-12));

  const MarkovValueModel bern({{0.5, 0.5}, {0.5, 0.5}},
                              {ValueDistribution::bernoulli(0.3), ValueDistribution::bernoulli(0.3)});
  const std::vector<double> half{0.5, 0.5};
  CHECK(std::get<ValueDistribution>(steady_state_mixture(bern, half)) == ValueDistribution::bernoulli(0.3));

  const MarkovValueModel bern2({{0.5, 0.5}, {0.5, 0.5}},
                               {ValueDistribution::bernoulli(0.2), ValueDistribution::bernoulli(0.6)});
  CHECK(std::get<ValueDistribution>(steady_state_mixture(bern2, half)) == ValueDistribution::bernoulli(0.4));
}

TEST_CASE("sample path examples") {
  const auto c = MarkovValueModel::iid(ValueDistribution::point(2.5));
  const auto path = sample_path(c, 3, 1);
  REQUIRE(path.size() == 3);
  for (const auto& s : path) {
    CHECK(s.state == 0);
    CHECK(s.value == 2.5);
  }

  const MarkovValueModel cycle({{0, 1}, {1, 0}}, {ValueDistribution::point(1), ValueDistribution::point(0)}, 0);
  const auto alt = sample_path(cycle, 6, 9);
  for (std::size_t t = 0; t < alt.size(); ++t) CHECK(alt[t].state == t % 2);
}

TEST_CASE("sample paths are reproducible per seed") {
  const auto m = MarkovValueModel::sticky_two_state(0.3, 0.4);
  CHECK(sample_path(m, 500, 42) == sample_path(m, 500, 42));
  CHECK_FALSE(sample_path(m, 500, 42) == sample_path(m, 500, 43));
}

TEST_CASE("state visit frequencies fall inside the 5-sigma band") {
  const auto m = MarkovValueModel::sticky_two_state(0.25, 0.5);
  const auto pi = stationary_distribution(m);
  const std::int64_t T = 1'000'000;
  const auto path = sample_path(m, T, 2718);
  std::vector<double> visits(2, 0.0);
  for (const auto& s : path) visits[s.state] += 1;
  for (std::size_t s = 0; s < 2; ++s) {
    const double freq = visits[s] / static_cast<double>(T);
    const double band = 3 * std::sqrt(pi[s] * (1 - pi[s]) / static_cast<double>(T)) * 5;
    CHECK(std::abs(freq - pi[s]) <= band);
    CHECK(std::abs(freq - pi[s]) <= 0.01);
  }
}

TEST_CASE("emissions follow the state law") {
  // Two states with different Bernoulli laws; conditional frequencies must
  // match each state's p within a 5-sigma band.
  const MarkovValueModel m({{0.9, 0.1}, {0.2, 0.8}},
                           {ValueDistribution::bernoulli(0.2), ValueDistribution::bernoulli(0.7)});
  const auto path = sample_path(m, 400'000, 77);
  double n[2] = {0, 0}, ones[2] = {0, 0};
  for (const auto& s : path) {
    n[s.state] += 1;
    ones[s.state] += s.value;
  }
  const double p[2] = {0.2, 0.7};
  for (int s = 0; s < 2; ++s) CHECK(std::abs(ones[s] / n[s] - p[s]) <= 5 * std::sqrt(p[s] * (1 - p[s]) / n[s]));
}

TEST_CASE("demand laws sample durations and merge duplicate points") {
  const DemandDistribution d({{1, 2, 0.25}, {1, 2, 0.25}, {3, 1, 0.5}});
  CHECK(d.support().size() == 2);
  CHECK(d.k_max() == 2);
  CHECK(d.index_of(3, 1) == std::optional<std::size_t>(1));
  CHECK_FALSE(d.index_of(3, 2));
  const auto m = MarkovValueModel::iid(d);
  CHECK(m.has_demands());
  CHECK(m.k_max() == 2);
  const auto path = sample_path(m, 100'000, 3);
  double longs = 0;
  for (const auto& s : path) {
    CHECK(((s.value == 1 && s.duration == 2) || (s.value == 3 && s.duration == 1)));
    longs += s.duration == 2;
  }
  CHECK(std::abs(longs / 100'000 - 0.5) <= 5 * std::sqrt(0.25 / 100'000));
}

TEST_CASE("law text form round-trips") {
  for (const char* text : {"bernoulli 0.3", "point 2", "uniform 0 1", "discrete 0:0.75 1:0.25",
                           "density 0 1 : 0.5 1.5 bounds 0.5 1.5", "demand 1,1:0.5 1,3:0.5 kmax 4"}) {
    const auto law = parse_state_law(text);
    CHECK(parse_state_law(describe(law)) == law);
  }
  CHECK_THROWS_AS(parse_state_law("bernoulli"), ConfigError);
  CHECK_THROWS_AS(parse_state_law("gamma 1 2"), ConfigError);
  CHECK_THROWS_AS(parse_state_law("discrete 1:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_state_law("demand 1,0:1"), ConfigError);
}
