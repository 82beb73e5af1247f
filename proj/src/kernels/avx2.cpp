// Compiled with -mavx2 and without FMA so every lane performs the same
// rounded operations as the scalar reference.
#include "dmmf/kernels.hpp"

#include <immintrin.h>

namespace dmmf::kernels::avx2 {

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(&x[i + 4]), _mm256_loadu_pd(&y[i + 4])));
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(&x[i]), _mm256_loadu_pd(&y[i])));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double acc = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(&x[i]));
    _mm256_storeu_pd(&y[i], _mm256_add_pd(_mm256_loadu_pd(&y[i]), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

SweepResult grid_ratio_max(const RatioSweep& s, std::size_t n) {
  const __m256d num0 = _mm256_set1_pd(s.num0), num1 = _mm256_set1_pd(s.num1);
  const __m256d occ0 = _mm256_set1_pd(s.occ0), occ1 = _mm256_set1_pd(s.occ1);
  const __m256d den0 = _mm256_set1_pd(s.den0), den1 = _mm256_set1_pd(s.den1);
  const __m256d cap = _mm256_set1_pd(s.cap), slack = _mm256_set1_pd(s.slack);
  const __m256d inv = _mm256_set1_pd(static_cast<double>(n));
  const __m256d four = _mm256_set1_pd(4.0);

  // Per-lane running maxima; lane k sees indices k, k+4, ... so the first
  // index of a lane's maximum is its smallest.
  __m256d best = _mm256_set1_pd(-1.0);
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);

  const std::size_t count = n + 1;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d rho = _mm256_div_pd(idx, inv);
    const __m256d num = _mm256_add_pd(num0, _mm256_mul_pd(num1, rho));
    const __m256d occ = _mm256_add_pd(occ0, _mm256_mul_pd(occ1, rho));
    const __m256d den = _mm256_add_pd(den0, _mm256_mul_pd(den1, rho));
    const __m256d limit = _mm256_add_pd(_mm256_mul_pd(cap, den), slack);
    const __m256d feasible = _mm256_cmp_pd(occ, limit, _CMP_LE_OQ);
    const __m256d obj = _mm256_div_pd(num, den);
    const __m256d better = _mm256_and_pd(feasible, _mm256_cmp_pd(obj, best, _CMP_GT_OQ));
    best = _mm256_blendv_pd(best, obj, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
    idx = _mm256_add_pd(idx, four);
  }

  alignas(32) double lane_best[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_best, best);
  _mm256_store_pd(lane_idx, best_idx);
  SweepResult out;
  for (int k = 0; k < 4; ++k) {
    const auto at = static_cast<std::size_t>(lane_idx[k]);
    if (lane_best[k] > out.best || (lane_best[k] == out.best && lane_best[k] > -1 && at < out.index)) {
      out.best = lane_best[k];
      out.index = at;
    }
  }
  const double n_real = static_cast<double>(n);
  for (; i < count; ++i) {
    const double rho = static_cast<double>(i) / n_real;
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

} // namespace dmmf::kernels::avx2
