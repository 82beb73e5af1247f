#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "dmmf/format.hpp"
#include "dmmf/rational.hpp"
#include "dmmf/rng.hpp"

using dmmf::Ratio;

TEST_CASE("ratio parses decimals and fractions exactly") {
  CHECK(Ratio::parse("0.25") == Ratio(1, 4));
  CHECK(Ratio::parse("1/3") == Ratio(1, 3));
  CHECK(Ratio::parse("2.5e-1") == Ratio(1, 4));
  CHECK(Ratio::parse("3") == Ratio(3, 1));
  CHECK(Ratio::parse("0.1") == Ratio(1, 10));
  CHECK(Ratio(6, 8).num() == 3);
  CHECK(Ratio(6, 8).den() == 4);
  CHECK_THROWS_AS(Ratio::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Ratio::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Ratio::parse("-1"), std::invalid_argument);
}

TEST_CASE("ratio round-trips through its text form") {
  for (auto r : {Ratio(1, 3), Ratio(1, 4), Ratio(7, 1), Ratio(22, 7), Ratio(0, 1)})
    CHECK(Ratio::parse(r.str()) == r);
}

TEST_CASE("ratio ordering and continued-fraction approximation") {
  CHECK(Ratio(1, 3) < Ratio(1, 2));
  CHECK(Ratio(1, 2) <= Ratio(2, 4));
  CHECK(Ratio::from_double(0.25) == Ratio(1, 4));
  CHECK(Ratio::from_double(1.0 / 3.0) == Ratio(1, 3));
}

TEST_CASE("format_real is stable and never prints negative zero") {
  CHECK(dmmf::format_real(0.1) == "0.1");
  CHECK(dmmf::format_real(-0.0) == "0");
  CHECK(dmmf::format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(dmmf::parse_real(dmmf::format_exact(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK_THROWS_AS(dmmf::parse_real("1.5x"), std::invalid_argument);
  CHECK(dmmf::parse_integer("42") == 42);
  CHECK_THROWS_AS(dmmf::parse_integer("4.2"), std::invalid_argument);
}

TEST_CASE("streams are reproducible and separated by tag") {
  dmmf::Stream a(7, 0, 1, dmmf::StreamTag::values);
  dmmf::Stream b(7, 0, 1, dmmf::StreamTag::values);
  dmmf::Stream c(7, 0, 1, dmmf::StreamTag::adversary_coins);
  dmmf::Stream d(7, 1, 1, dmmf::StreamTag::values);
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differ_c |= x != c.next();
    differ_d |= x != d.next();
  }
  CHECK(differ_c);
  CHECK(differ_d);

  dmmf::Stream u(123);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= 0);
  CHECK(hi < 1);
  CHECK(dmmf::replication_seed(1, 0) != dmmf::replication_seed(1, 1));
}
