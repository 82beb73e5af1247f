#include "dmmf/kernels.hpp"

namespace dmmf::kernels::scalar {

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = y[i] + a * x[i];
}

SweepResult grid_ratio_max(const RatioSweep& s, std::size_t n) {
  SweepResult out;
  const double inv = static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double rho = static_cast<double>(i) / inv;
    const double num = s.num0 + s.num1 * rho;
    const double occ = s.occ0 + s.occ1 * rho;
    const double den = s.den0 + s.den1 * rho;
    if (occ <= s.cap * den + s.slack) {
      const double obj = num / den;
      if (obj > out.best) {
        out.best = obj;
        out.index = i;
      }
    }
  }
  return out;
}

} // namespace dmmf::kernels::scalar
