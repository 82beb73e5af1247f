#include <cstring>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dmmf/kernels.hpp"
#include "test_support.hpp"

namespace k = dmmf::kernels;

namespace {

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_CASE("scalar kernels match hand-computed values") {
  std::vector<double> x{1, 2, 3}, y{4, 5, 6};
  CHECK(k::scalar::dot(x, y) == 32.0);
  k::scalar::axpy(2.0, x, y);
  CHECK(y == std::vector<double>{6, 9, 12});

  // maximize rho subject to 2 rho <= 0.5 (1 + rho): rho <= 1/3
  k::RatioSweep s;
  s.num1 = 2;
  s.occ1 = 2;
  s.den0 = 1;
  s.den1 = 1;
  s.cap = 0.5;
  const auto r = k::scalar::grid_ratio_max(s, 300);
  CHECK(r.index == 100);
  CHECK(r.best == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("dispatch rejects mismatched lengths") {
  std::vector<double> x(3), y(4);
  CHECK_THROWS_AS(k::dot(x, y), std::invalid_argument);
  CHECK_THROWS_AS(k::axpy(1.0, x, y), std::invalid_argument);
}

TEST_CASE("scalar isa can always be forced") {
  CHECK(k::isa_supported(k::Isa::scalar));
  const auto before = k::active_isa();
  k::force_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  k::force_isa(before);
  CHECK(k::isa_name(k::Isa::avx2) == "avx2");
}

#if defined(DMMF_HAVE_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::isa_supported(k::Isa::avx2)) return;
  testing_support::Gen g(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<std::size_t>(g.integer(0, 67));
    std::vector<double> x(n), y(n);
    for (auto& v : x) v = g.uniform(-5, 5);
    for (auto& v : y) v = g.uniform(-5, 5);

    const double ds = k::scalar::dot(x, y);
    const double dv = k::avx2::dot(x, y);
    double mag = 0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
    CHECK(std::abs(ds - dv) <= 1e-14 * (1 + mag));

    auto ys = y, yv = y;
    const double a = g.uniform(-3, 3);
    k::scalar::axpy(a, x, ys);
    k::avx2::axpy(a, x, yv);
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) same &= bits_equal(ys[i], yv[i]);
    CHECK(same);

    k::RatioSweep s;
    s.num0 = g.uniform(0, 3);
    s.num1 = g.uniform(0, 5);
    s.occ0 = g.uniform(0, 1);
    s.occ1 = g.uniform(0, 3);
    s.den0 = 1 + g.uniform(0, 1);
    s.den1 = g.uniform(0, 2);
    s.cap = g.uniform(0, 1);
    const auto steps = static_cast<std::size_t>(g.integer(1, 1000));
    const auto rs = k::scalar::grid_ratio_max(s, steps);
    const auto rv = k::avx2::grid_ratio_max(s, steps);
    CHECK(bits_equal(rs.best, rv.best));
    CHECK(rs.index == rv.index);
  }
}

TEST_CASE("avx2 sweep breaks ties toward the smallest index") {
  if (!k::isa_supported(k::Isa::avx2)) return;
  k::RatioSweep flat;  // objective 0 everywhere, all feasible
  flat.cap = 1;
  CHECK(k::avx2::grid_ratio_max(flat, 37).index == 0);
  k::RatioSweep none;  // nothing feasible
  none.occ0 = 1;
  none.cap = 0;
  CHECK(k::avx2::grid_ratio_max(none, 37).best == -1);
  CHECK(k::scalar::grid_ratio_max(none, 37).best == -1);
}
#endif
