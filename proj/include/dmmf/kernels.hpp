#pragma once

// Data-parallel numeric kernels. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; the public entry points
// dispatch at runtime to the best variant the CPU supports. Variants of
// axpy and grid_ratio_max are bit-identical to the reference; dot may
// differ in the last bits because lanes are summed in a different order.

#include <cstddef>
#include <span>
#include <string_view>

namespace dmmf::kernels {

enum class Isa { scalar, avx2 };

/// One sweep of a linear-fractional program over rho = i/n, i = 0..n:
///   objective(rho) = (num0 + num1*rho) / (den0 + den1*rho)
///   feasible(rho)  iff (occ0 + occ1*rho) <= cap * (den0 + den1*rho) + slack
/// The denominator must be positive on [0, 1].
struct RatioSweep {
  double num0 = 0, num1 = 0;
  double occ0 = 0, occ1 = 0;
  double den0 = 1, den1 = 0;
  double cap = 0;
  double slack = 1e-12;
};

struct SweepResult {
  double best = -1;       // -1 when no grid point is feasible
  std::size_t index = 0;  // first grid index attaining `best`
};

double dot(std::span<const double> x, std::span<const double> y);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
SweepResult grid_ratio_max(const RatioSweep& sweep, std::size_t n);

Isa active_isa();
bool isa_supported(Isa isa);
/// Pins the dispatch target (tests and benchmarks). Throws
/// std::invalid_argument if the CPU cannot run it.
void force_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
SweepResult grid_ratio_max(const RatioSweep& sweep, std::size_t n);
} // namespace scalar

#if defined(DMMF_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
SweepResult grid_ratio_max(const RatioSweep& sweep, std::size_t n);
} // namespace avx2
#endif

} // namespace dmmf::kernels
