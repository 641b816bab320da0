#include "irlab/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace irlab {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
// Dantzig pricing is fast but can cycle on degenerate problems; after this many
// pivots per phase we switch to Bland's rule, which terminates.
constexpr int kDantzigLimit = 2000;

struct Tableau {
  int m = 0;       // constraint rows
  int ncols = 0;   // decision columns (excluding rhs)
  int art_begin = 0;  // first artificial column
  std::vector<double> t;      // m x (ncols+1), row-major; last col = rhs
  std::vector<double> cost;   // active objective reduced costs, size ncols+1
  std::vector<int> basis;     // basic variable per row

  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * (ncols + 1) + j]; }
  double at(int i, int j) const { return t[static_cast<std::size_t>(i) * (ncols + 1) + j]; }
  double& rhs(int i) { return t[static_cast<std::size_t>(i) * (ncols + 1) + ncols]; }

  void pivot(int prow, int pcol) {
    const int w = ncols + 1;
    double* pr = &t[static_cast<std::size_t>(prow) * w];
    const double inv = 1.0 / pr[pcol];
    for (int j = 0; j <= ncols; ++j) pr[j] *= inv;
    pr[pcol] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == prow) continue;
      double* row = &t[static_cast<std::size_t>(i) * w];
      double f = row[pcol];
      if (std::abs(f) <= 1e-13) continue;
      for (int j = 0; j <= ncols; ++j) row[j] -= f * pr[j];
      row[pcol] = 0.0;
    }
    double f = cost[pcol];
    if (std::abs(f) > 0.0) {
      for (int j = 0; j <= ncols; ++j) cost[j] -= f * pr[j];
      cost[pcol] = 0.0;
    }
    basis[prow] = pcol;
  }

  // Returns optimal/unbounded/iteration_limit for the active objective.
  LpStatus run(bool allow_artificial_entering, int max_iter) {
    for (int iter = 0; iter < max_iter; ++iter) {
      const bool bland = iter >= kDantzigLimit;
      int pcol = -1;
      double best = -kCostTol;
      const int limit = allow_artificial_entering ? ncols : art_begin;
      for (int j = 0; j < limit; ++j) {
        double cj = cost[j];
        if (cj < best) {
          pcol = j;
          if (bland) break;  // first (lowest-index) improving column
          best = cj;
        }
      }
      if (pcol < 0) return LpStatus::optimal;
      int prow = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        double aij = at(i, pcol);
        if (aij > kPivotTol) {
          double ratio = rhs(i) / aij;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (prow < 0 || basis[i] < basis[prow]))) {
            best_ratio = ratio;
            prow = i;
          }
        }
      }
      if (prow < 0) return LpStatus::unbounded;
      pivot(prow, pcol);
    }
    return LpStatus::iteration_limit;
  }
};

}  // namespace

LpResult lp_minimize(const std::vector<std::vector<double>>& A,
                     const std::vector<double>& b, const std::vector<double>& c,
                     int max_iterations) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(c.size());
  if (static_cast<int>(b.size()) != m)
    throw std::invalid_argument("lp_minimize: |b| != number of rows");
  for (const auto& row : A)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("lp_minimize: row width != |c|");

  // Free variables are split x = u - w with u, w >= 0; then a.x + slack = b.
  // Rows with negative rhs are negated and receive an artificial variable.
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (b[i] < 0) art_rows.push_back(i);
  const int k = static_cast<int>(art_rows.size());

  Tableau tab;
  tab.m = m;
  tab.art_begin = 2 * n + m;
  tab.ncols = 2 * n + m + k;
  tab.t.assign(static_cast<std::size_t>(m) * (tab.ncols + 1), 0.0);
  tab.basis.assign(m, -1);

  int art = 0;
  for (int i = 0; i < m; ++i) {
    const double sgn = (b[i] < 0) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tab.at(i, j) = sgn * A[i][j];
      tab.at(i, n + j) = -sgn * A[i][j];
    }
    tab.at(i, 2 * n + i) = sgn;  // slack
    tab.rhs(i) = sgn * b[i];
    if (b[i] < 0) {
      tab.at(i, tab.art_begin + art) = 1.0;
      tab.basis[i] = tab.art_begin + art;
      ++art;
    } else {
      tab.basis[i] = 2 * n + i;
    }
  }

  if (k > 0) {
    // Phase 1: minimize the sum of artificials. Reduced costs are obtained by
    // subtracting the artificial rows from the raw objective.
    tab.cost.assign(tab.ncols + 1, 0.0);
    for (int idx : art_rows)
      for (int j = 0; j <= tab.ncols; ++j) tab.cost[j] -= tab.at(idx, j);
    for (int a2 = 0; a2 < k; ++a2) tab.cost[tab.art_begin + a2] = 0.0;
    LpStatus st = tab.run(true, max_iterations);
    if (st == LpStatus::iteration_limit)
      throw LpError("simplex iteration limit reached in phase 1");
    if (st == LpStatus::unbounded)
      throw LpError("phase-1 objective unbounded (internal error)");
    double infeas = -tab.cost[tab.ncols];  // phase-1 optimum
    if (infeas > kPhase1Tol) {
      LpResult r;
      r.status = LpStatus::infeasible;
      return r;
    }
    // Drive any artificial still basic (at zero level) out of the basis.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < tab.art_begin) continue;
      int pcol = -1;
      for (int j = 0; j < tab.art_begin; ++j)
        if (std::abs(tab.at(i, j)) > kPivotTol) {
          pcol = j;
          break;
        }
      if (pcol >= 0) tab.pivot(i, pcol);
      // else: the row is redundant; the artificial stays basic at level 0.
    }
  }

  // Phase 2.
  tab.cost.assign(tab.ncols + 1, 0.0);
  for (int j = 0; j < n; ++j) {
    tab.cost[j] = c[j];
    tab.cost[n + j] = -c[j];
  }
  for (int i = 0; i < m; ++i) {
    int bj = tab.basis[i];
    double cb = 0.0;
    if (bj < n)
      cb = c[bj];
    else if (bj < 2 * n)
      cb = -c[bj - n];
    if (cb != 0.0)
      for (int j = 0; j <= tab.ncols; ++j) tab.cost[j] -= cb * tab.at(i, j);
  }
  LpStatus st = tab.run(false, max_iterations);
  if (st == LpStatus::iteration_limit)
    throw LpError("simplex iteration limit reached in phase 2");

  LpResult r;
  r.status = st;
  if (st == LpStatus::optimal) {
    std::vector<double> vals(2 * n, 0.0);
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] < 2 * n) vals[tab.basis[i]] = tab.rhs(i);
    r.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) r.x[j] = vals[j] - vals[n + j];
    r.objective = -tab.cost[tab.ncols];
  }
  return r;
}

}  // namespace irlab
