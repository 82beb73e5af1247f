#pragma once

// Shared helpers for the unit and acceptance suites: a small seeded
// generator for property tests and independent reference computations.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dmmf/value_models.hpp"

namespace testing_support {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0, double hi = 1) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  bool coin(double p = 0.5) { return uniform() < p; }

  /// Probability vector of length n with every entry >= floor.
  std::vector<double> simplex(std::size_t n, double floor = 0) {
    std::vector<double> w(n);
    double total = 0;
    for (auto& x : w) total += (x = std::exponential_distribution<double>(1.0)(eng_));
    for (auto& x : w) x = floor + (1 - floor * static_cast<double>(n)) * x / total;
    renormalize(w);
    return w;
  }

  /// Random demand law with at most `max_points` points and durations <= k_max.
  dmmf::DemandDistribution demand(std::size_t max_points, std::int64_t k_max) {
    const auto m = static_cast<std::size_t>(integer(1, static_cast<std::int64_t>(max_points)));
    const auto probs = simplex(m, 0.02);
    std::vector<dmmf::DemandPoint> pts;
    for (std::size_t j = 0; j < m; ++j)
      pts.push_back({std::round(uniform(0, 10) * 100) / 100, integer(1, k_max), probs[j]});
    return dmmf::DemandDistribution(pts, k_max);
  }

  /// Random discrete value law with up to `max_atoms` atoms in [0, 10].
  dmmf::ValueDistribution discrete(std::size_t max_atoms) {
    const auto m = static_cast<std::size_t>(integer(1, static_cast<std::int64_t>(max_atoms)));
    const auto probs = simplex(m);
    std::vector<double> values(m);
    for (auto& v : values) v = std::round(uniform(0, 10) * 4) / 4;
    return dmmf::ValueDistribution::discrete(values, probs);
  }

  /// Row-stochastic matrix with strictly positive entries.
  dmmf::Matrix stochastic(std::size_t n) {
    dmmf::Matrix p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(simplex(n, 0.01));
    return p;
  }

  std::mt19937_64& engine() { return eng_; }

private:
  // Absorbs round-off so the entries sum to 1 to within a few ulps.
  static void renormalize(std::vector<double>& w) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) s += w[i];
    w.back() = 1.0 - s;
  }

  std::mt19937_64 eng_;
};

} // namespace testing_support
