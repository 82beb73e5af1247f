#include "dmmf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmmf/errors.hpp"
#include "dmmf/kernels.hpp"

namespace dmmf {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kCostTol = 1e-10;
constexpr double kPhaseOneTol = 1e-9;

// Row-major tableau; column `cols` holds the right-hand side. `cost` is the
// reduced-cost row with -(objective value) in its last slot.
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> cost;
  std::vector<std::size_t> basis;
  std::vector<char> allowed;  // columns that may enter the basis

  void pivot(std::size_t p, std::size_t q) {
    auto& prow = a[p];
    const double inv = 1.0 / prow[q];
    for (double& v : prow) v *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == p || a[i][q] == 0) continue;
      kernels::axpy(-a[i][q], prow, a[i]);
      a[i][q] = 0.0;
    }
    if (cost[q] != 0) {
      kernels::axpy(-cost[q], prow, cost);
      cost[q] = 0.0;
    }
    basis[p] = q;
  }

  // Prices out the basic columns of `c` (length cols) into `cost`.
  void set_objective(const std::vector<double>& c) {
    cost.assign(cols + 1, 0.0);
    std::copy(c.begin(), c.end(), cost.begin());
    for (std::size_t i = 0; i < rows; ++i) {
      const double cb = c[basis[i]];
      if (cb != 0) kernels::axpy(-cb, a[i], cost);
    }
  }

  enum class Outcome { optimal, unbounded };

  Outcome optimize() {
    for (;;) {
      std::size_t q = cols;
      for (std::size_t j = 0; j < cols; ++j)
        if (allowed[j] && cost[j] > kCostTol) {
          q = j;
          break;
        }
      if (q == cols) return Outcome::optimal;

      std::size_t p = rows;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows; ++i) {
        if (a[i][q] <= kPivotTol) continue;
        const double ratio = a[i][cols] / a[i][q];
        if (p == rows) {
          best = ratio;
          p = i;
          continue;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(best));
        if (ratio < best - slack || (std::abs(ratio - best) <= slack && basis[i] < basis[p])) {
          best = ratio;
          p = i;
        }
      }
      if (p == rows) return Outcome::unbounded;
      pivot(p, q);
    }
  }
};

} // namespace

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (rows.size() != rhs.size()) throw std::invalid_argument("lp: rows and rhs differ in length");
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("lp: constraint row has the wrong width");
  if (!lower.empty() && lower.size() != n) throw std::invalid_argument("lp: lower bounds have the wrong length");
  if (!upper.empty() && upper.size() != n) throw std::invalid_argument("lp: upper bounds have the wrong length");
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += lp.rows[i][j] * x[j];
    worst = std::max(worst, lhs - lp.rhs[i]);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double lo = lp.lower.empty() ? 0.0 : lp.lower[j];
    worst = std::max(worst, lo - x[j]);
    if (!lp.upper.empty() && lp.upper[j]) worst = std::max(worst, x[j] - *lp.upper[j]);
  }
  return worst;
}

LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  std::vector<double> lower = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;

  // Shift to y = x - lower >= 0; upper bounds become extra rows.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double shift = 0;
    for (std::size_t j = 0; j < n; ++j) shift += lp.rows[i][j] * lower[j];
    rows.push_back(lp.rows[i]);
    rhs.push_back(lp.rhs[i] - shift);
  }
  if (!lp.upper.empty()) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!lp.upper[j]) continue;
      if (*lp.upper[j] < lower[j]) return {LpStatus::infeasible, {}, 0};
      std::vector<double> r(n, 0.0);
      r[j] = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(*lp.upper[j] - lower[j]);
    }
  }

  const std::size_t m = rows.size();
  std::size_t artificials = 0;
  for (double b : rhs)
    if (b < 0) ++artificials;

  Tableau t;
  t.rows = m;
  t.cols = n + m + artificials;
  t.a.assign(m, std::vector<double>(t.cols + 1, 0.0));
  t.basis.assign(m, 0);
  t.allowed.assign(t.cols, 1);
  std::size_t next_art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = rhs[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.a[i][j] = sign * rows[i][j];
    t.a[i][n + i] = sign;
    t.a[i][t.cols] = sign * rhs[i];
    if (sign < 0) {
      t.a[i][next_art] = 1.0;
      t.basis[i] = next_art++;
    } else {
      t.basis[i] = n + i;
    }
  }

  if (artificials > 0) {
    std::vector<double> phase_one(t.cols, 0.0);
    for (std::size_t j = n + m; j < t.cols; ++j) phase_one[j] = -1.0;
    t.set_objective(phase_one);
    t.optimize();  // bounded below by zero, never unbounded
    if (t.cost[t.cols] > kPhaseOneTol) return {LpStatus::infeasible, {}, 0};
    // Drive remaining (zero-level) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j)
        if (std::abs(t.a[i][j]) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
    }
    for (std::size_t j = n + m; j < t.cols; ++j) t.allowed[j] = 0;
  }

  std::vector<double> phase_two(t.cols, 0.0);
  std::copy(lp.objective.begin(), lp.objective.end(), phase_two.begin());
  t.set_objective(phase_two);
  if (t.optimize() == Tableau::Outcome::unbounded) return {LpStatus::unbounded, {}, 0};

  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x = lower;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] < n) sol.x[t.basis[i]] += std::max(0.0, t.a[i][t.cols]);
  sol.objective_value = 0;
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];

  double scale = 1;
  for (double b : lp.rhs) scale = std::max(scale, std::abs(b));
  if (max_violation(lp, sol.x) > 1e-9 * scale) throw Error("lp: solution failed the feasibility re-check");
  return sol;
}

} // namespace dmmf
