#include "dmmf/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dmmf::kernels {

namespace {

Isa detect() {
#if defined(DMMF_HAVE_AVX2)
  if (const char* env = std::getenv("DMMF_SIMD"); env && std::string(env) == "scalar") return Isa::scalar;
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

} // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(DMMF_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void force_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("kernel ISA not supported on this CPU");
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
#if defined(DMMF_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::dot(x, y);
#endif
  return scalar::dot(x, y);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
#if defined(DMMF_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::axpy(a, x, y);
#endif
  scalar::axpy(a, x, y);
}

SweepResult grid_ratio_max(const RatioSweep& sweep, std::size_t n) {
#if defined(DMMF_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::grid_ratio_max(sweep, n);
#endif
  return scalar::grid_ratio_max(sweep, n);
}

} // namespace dmmf::kernels
