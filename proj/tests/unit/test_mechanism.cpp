#include <vector>

#include "doctest.h"
#include "dmmf/errors.hpp"
#include "dmmf/mechanism.hpp"
#include "test_support.hpp"

using namespace dmmf;

namespace {

Mechanism single(std::vector<Ratio> shares) {
  MechanismConfig c;
  c.shares = FairShares::from_ratios(shares);
  return Mechanism(c);
}

Mechanism reusable(std::vector<Ratio> shares, std::int64_t T, Ratio r, std::int64_t k_max) {
  MechanismConfig c;
  c.shares = FairShares::from_ratios(shares);
  c.mode = MechanismMode::reusable;
  c.horizon = T;
  c.r = r;
  c.k_max = k_max;
  return Mechanism(c);
}

MechanismState with_allocations(const Mechanism& m, std::vector<std::int64_t> a) {
  auto s = m.initial_state();
  s.allocations = std::move(a);
  return s;
}

// Reference winner: smallest claim/share by exact cross-multiplication,
// first index on ties.
std::optional<std::size_t> reference_winner(const std::vector<std::int64_t>& claims, const std::vector<std::int64_t>& w,
                                            const std::vector<bool>& in) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (!in[i]) continue;
    if (!best || static_cast<__int128>(claims[i]) * w[*best] < static_cast<__int128>(claims[*best]) * w[i]) best = i;
  }
  return best;
}

} // namespace

TEST_CASE("fair shares are exact integer weights") {
  const auto s = FairShares::from_ratios({Ratio(1, 4), Ratio(3, 4)});
  CHECK(s.weights() == std::vector<std::int64_t>{1, 3});
  CHECK(s.total() == 4);
  const auto t = FairShares::from_ratios({Ratio(1, 3), Ratio(1, 6), Ratio(1, 2)});
  CHECK(t.weights() == std::vector<std::int64_t>{2, 1, 3});
  CHECK_THROWS_AS(FairShares::from_ratios({Ratio(3, 5), Ratio(3, 5)}), ConfigError);
  CHECK_THROWS_AS(FairShares::from_ratios({Ratio(0, 1), Ratio(1, 1)}), ConfigError);
  const std::vector<double> d{0.25, 0.75};
  CHECK(FairShares::from_doubles(d) == s);
  CHECK(FairShares::equal(3).alpha(1) == doctest::Approx(1.0 / 3));
}

TEST_CASE("single-round winner selection") {
  const auto m = single({Ratio(1, 2), Ratio(1, 2)});
  auto [s1, o1] = m.step_single(m.initial_state(), {true, true});
  CHECK(o1.winner == std::optional<std::size_t>(0));
  CHECK(s1.allocations == std::vector<std::int64_t>{1, 0});
  CHECK(s1.round == 2);
  CHECK(o1.granted_duration == 1);

  const auto q = single({Ratio(1, 4), Ratio(3, 4)});
  auto [s2, o2] = q.step_single(with_allocations(q, {1, 2}), {true, true});
  CHECK(o2.winner == std::optional<std::size_t>(1));
  CHECK(s2.allocations == std::vector<std::int64_t>{1, 3});

  auto [s3, o3] = q.step_single(with_allocations(q, {1, 2}), {false, false});
  CHECK_FALSE(o3.winner);
  CHECK(s3.allocations == std::vector<std::int64_t>{1, 2});
  CHECK(s3.round == 2);
  CHECK_THROWS_AS(q.step_single(q.initial_state(), {true}), RequestError);
}

TEST_CASE("reusable cap filters long requests") {
  const auto m = reusable({Ratio(1, 2), Ratio(1, 2)}, 100, Ratio(2, 1), 5);
  const auto s = with_allocations(m, {24, 0});
  CHECK_FALSE(m.within_cap(0, 24, 2));
  CHECK(m.within_cap(0, 23, 2));
  auto [s1, o1] = m.step_reusable(s, {2, 1});
  CHECK(o1.eligible == std::vector<std::size_t>{1});
  CHECK(o1.winner == std::optional<std::size_t>(1));

  auto [s2, o2] = m.step_reusable(s, {2, std::nullopt});
  CHECK_FALSE(o2.winner);

  // At the cap exactly, a unit request bypasses the filter.
  const auto at_cap = with_allocations(m, {25, 30});
  auto [s3, o3] = m.step_reusable(at_cap, {1, 1});
  CHECK(o3.winner == std::optional<std::size_t>(0));
}

TEST_CASE("reusable holds block everyone for d rounds") {
  const auto m = reusable({Ratio(1, 1)}, 100, Ratio(1, 1), 3);
  auto [s, o] = m.step_reusable(m.initial_state(), {3});
  CHECK(o.winner == std::optional<std::size_t>(0));
  CHECK(o.granted_duration == 3);
  CHECK(s.allocations[0] == 3);
  CHECK(s.hold_remaining == 2);
  CHECK(s.holder == std::optional<std::size_t>(0));
  CHECK_THROWS_AS(m.step_reusable(s, {1}), ContractViolation);
  s = m.advance_hold(s);
  s = m.advance_hold(s);
  CHECK(s.round == 4);
  CHECK_FALSE(s.holding());
  CHECK_THROWS_AS(m.advance_hold(s), ContractViolation);
  CHECK_THROWS_AS(m.step_reusable(s, {4}), RequestError);
  CHECK_THROWS_AS(m.step_reusable(s, {0}), RequestError);
}

TEST_CASE("blocked indicator examples") {
  const auto m = single({Ratio(1, 4), Ratio(3, 4)});
  const auto s = m.initial_state();
  CHECK_FALSE(m.blocked_for(s, 0, {std::nullopt, std::nullopt}));
  CHECK(m.blocked_for(s, 0, {std::nullopt, 1}));
  // Focal's own request is ignored; a winner is never blocked.
  CHECK_FALSE(m.blocked_for(s, 1, {1, std::nullopt}));

  const auto h = single({Ratio(1, 2), Ratio(1, 2)});
  // Tie: agent 1 loses to agent 0, agent 0 wins against agent 1.
  CHECK(h.blocked_for(h.initial_state(), 1, {1, std::nullopt}));
  CHECK_FALSE(h.blocked_for(h.initial_state(), 0, {std::nullopt, 1}));

  const auto r = reusable({Ratio(1, 2), Ratio(1, 2)}, 100, Ratio(1, 1), 5);
  auto [held, o] = r.step_reusable(r.initial_state(), {std::nullopt, 4});
  CHECK(held.hold_remaining == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(r.blocked_for(held, 0, {std::nullopt, std::nullopt}));
    CHECK_FALSE(r.blocked_for(held, 1, {std::nullopt, std::nullopt}));
    held = r.advance_hold(held);
  }
  CHECK_FALSE(r.blocked_for(held, 0, {std::nullopt, std::nullopt}));
  // Counterfactual claims use focal's own duration. Agent 1 claims 4 + 1;
  // focal's 0 + 5 ties and wins on index, 0 + 6 loses.
  CHECK_FALSE(r.blocked_for(held, 0, {std::nullopt, 1}, 5));
  CHECK(r.blocked_for(held, 0, {std::nullopt, 1}, 6));
}

TEST_CASE("winner matches an independent argmin on random states") {
  testing_support::Gen g(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(1, 5));
    std::vector<Ratio> shares;
    std::int64_t left = 60;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto k = g.integer(1, left - static_cast<std::int64_t>(n - i - 1));
      shares.emplace_back(k, 60);
      left -= k;
    }
    shares.emplace_back(left, 60);
    const auto T = g.integer(10, 200);
    const Ratio r(g.integer(4, 16), 4);
    const auto k_max = g.integer(1, 6);
    const auto m = reusable(shares, T, r, k_max);
    const auto& w = m.config().shares.weights();
    const auto W = m.config().shares.total();

    std::vector<std::int64_t> a(n);
    for (auto& x : a) x = g.integer(0, T);
    DurationRequests req(n);
    std::vector<std::int64_t> claims(n);
    std::vector<bool> in(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (g.coin(0.7)) req[i] = g.integer(1, k_max);
      if (!req[i]) continue;
      claims[i] = a[i] + *req[i];
      const bool cap_ok = static_cast<__int128>(claims[i]) * W * r.num() <= static_cast<__int128>(T) * w[i] * r.den();
      in[i] = *req[i] == 1 || cap_ok;
      CHECK(m.within_cap(i, a[i], *req[i]) == cap_ok);
    }
    const auto s = with_allocations(m, a);
    auto [next, out] = m.step_reusable(s, req);
    CHECK(out.winner == reference_winner(claims, w, in));

    // Raising an opponent's allocation never turns a focal win into a loss.
    if (out.winner && n > 1) {
      const std::size_t f = *out.winner;
      auto bumped = a;
      const std::size_t j = (f + 1) % n;
      bumped[j] += g.integer(1, 10);
      auto [n2, o2] = m.step_reusable(with_allocations(m, bumped), req);
      CHECK(o2.winner == std::optional<std::size_t>(f));
    }
  }
}

TEST_CASE("fraction comparison agrees with cross-multiplication") {
  testing_support::Gen g(32);
  for (int trial = 0; trial < 5000; ++trial) {
    const __int128 a = g.integer(0, 1000), b = g.integer(1, 1000), c = g.integer(0, 1000), d = g.integer(1, 1000);
    const __int128 lhs = a * d, rhs = c * b;
    const int want = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    CHECK(compare_fractions(a, b, c, d) == want);
  }
  const __int128 big = static_cast<__int128>(1) << 100;
  CHECK(compare_fractions(big, big + 1, 1, 1) == -1);
  CHECK(compare_fractions(big + 1, big, 1, 1) == 1);
}

TEST_CASE("mechanism config validation") {
  MechanismConfig c;
  c.shares = FairShares::equal(2);
  c.mode = MechanismMode::reusable;
  CHECK_THROWS_AS(Mechanism{c}, ConfigError);
  c.horizon = 10;
  c.r = Ratio(1, 2);
  CHECK_THROWS_AS(Mechanism{c}, ConfigError);
  c.r = Ratio(1, 1);
  CHECK_NOTHROW(Mechanism{c});
  c.mode = MechanismMode::single_round;
  c.k_max = 3;
  CHECK_THROWS_AS(Mechanism{c}, ConfigError);
}
