#include "irlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "irlab/linprog.hpp"
#include "irlab/rng.hpp"

namespace irlab {

namespace {

constexpr double kTightTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Reduced representation: eliminate equalities, keep an affine map back to the
// ambient space.  x = x0 + N z with z in R^d subject to rows * z <= rhs.
// ---------------------------------------------------------------------------
struct Reduced {
  int n = 0;  // ambient dimension
  int d = 0;  // reduced dimension
  std::vector<double> x0;               // size n
  std::vector<std::vector<double>> N;   // n rows of length d
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  bool inconsistent = false;  // equalities or constant rows contradict

  std::vector<double> to_ambient(const std::vector<double>& z) const {
    std::vector<double> x(x0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) x[i] += N[i][j] * z[j];
    return x;
  }
};

// Row-reduce [C | d0] and parameterize the solution set of C y = d0.
// Returns false when the system is inconsistent.
bool solve_equalities(int n, std::vector<std::vector<double>> C, std::vector<double> d0,
                      std::vector<double>& x0, std::vector<std::vector<double>>& N,
                      int& dim) {
  const int m = static_cast<int>(C.size());
  std::vector<int> pivot_col(m, -1);
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int best = -1;
    double best_abs = 1e-9;
    for (int i = rank; i < m; ++i)
      if (std::abs(C[i][col]) > best_abs) { best_abs = std::abs(C[i][col]); best = i; }
    if (best < 0) continue;
    std::swap(C[rank], C[best]);
    std::swap(d0[rank], d0[best]);
    const double piv = C[rank][col];
    for (int j = col; j < n; ++j) C[rank][j] /= piv;
    d0[rank] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == rank) continue;
      const double f = C[i][col];
      if (std::abs(f) < 1e-14) continue;
      for (int j = col; j < n; ++j) C[i][j] -= f * C[rank][j];
      d0[i] -= f * d0[rank];
    }
    pivot_col[rank] = col;
    ++rank;
  }
  for (int i = rank; i < m; ++i)
    if (std::abs(d0[i]) > 1e-8) return false;

  std::vector<bool> is_pivot(n, false);
  for (int i = 0; i < rank; ++i) is_pivot[pivot_col[i]] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  dim = static_cast<int>(free_cols.size());

  x0.assign(n, 0.0);
  N.assign(n, std::vector<double>(dim, 0.0));
  for (int k = 0; k < dim; ++k) N[free_cols[k]][k] = 1.0;
  for (int i = 0; i < rank; ++i) {
    const int pc = pivot_col[i];
    x0[pc] = d0[i];
    for (int k = 0; k < dim; ++k) N[pc][k] = -C[i][free_cols[k]];
  }
  return true;
}

// Project the inequality system through the affine map, normalize each row by
// its largest coefficient, drop constant rows (flagging contradictions) and
// keep only the tightest rhs among rows with identical coefficients.
void project_rows(const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& rhs, Reduced& red) {
  std::map<std::vector<long long>, int> seen;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> a(red.d, 0.0);
    for (int amb = 0; amb < red.n; ++amb) {
      const double c = rows[i][amb];
      if (c == 0.0) continue;
      for (int j = 0; j < red.d; ++j) a[j] += c * red.N[amb][j];
    }
    double b = rhs[i];
    for (int amb = 0; amb < red.n; ++amb) b -= rows[i][amb] * red.x0[amb];
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    if (amax < 1e-12) {
      if (b < -kTightTol) red.inconsistent = true;
      continue;
    }
    for (double& v : a) v /= amax;
    b /= amax;
    std::vector<long long> key(red.d);
    for (int j = 0; j < red.d; ++j) key[j] = std::llround(a[j] * 1e9);
    auto it = seen.find(key);
    if (it != seen.end()) {
      red.rhs[it->second] = std::min(red.rhs[it->second], b);
    } else {
      seen.emplace(std::move(key), static_cast<int>(red.rows.size()));
      red.rows.push_back(std::move(a));
      red.rhs.push_back(b);
    }
  }
}

Reduced reduce(const RewardPolytope& p) {
  Reduced red;
  red.n = p.n;
  if (p.eq_rows.empty()) {
    red.d = p.n;
    red.x0.assign(p.n, 0.0);
    red.N.assign(p.n, std::vector<double>(p.n, 0.0));
    for (int i = 0; i < p.n; ++i) red.N[i][i] = 1.0;
  } else if (!solve_equalities(p.n, p.eq_rows, p.eq_rhs, red.x0, red.N, red.d)) {
    red.inconsistent = true;
    red.d = 0;
    red.x0.assign(p.n, 0.0);
    red.N.assign(p.n, std::vector<double>(0));
    return red;
  }
  project_rows(p.rows, p.rhs, red);
  return red;
}

// Further reduction inside an already reduced space: impose eqs * z = eq_rhs
// and compose the affine maps.
Reduced compose(const Reduced& red, const std::vector<std::vector<double>>& eqs,
                const std::vector<double>& eq_rhs) {
  Reduced out;
  out.n = red.n;
  std::vector<double> z0;
  std::vector<std::vector<double>> M;  // d x d2
  int d2 = 0;
  if (!solve_equalities(red.d, eqs, eq_rhs, z0, M, d2)) {
    out.inconsistent = true;
    out.d = 0;
    out.x0.assign(red.n, 0.0);
    out.N.assign(red.n, std::vector<double>(0));
    return out;
  }
  out.d = d2;
  out.x0 = red.to_ambient(z0);
  out.N.assign(red.n, std::vector<double>(d2, 0.0));
  for (int i = 0; i < red.n; ++i)
    for (int j = 0; j < red.d; ++j) {
      const double c = red.N[i][j];
      if (c == 0.0) continue;
      for (int k = 0; k < d2; ++k) out.N[i][k] += c * M[j][k];
    }
  // Re-project the reduced rows through (z0, M).
  std::map<std::vector<long long>, int> seen;
  for (size_t i = 0; i < red.rows.size(); ++i) {
    std::vector<double> a(d2, 0.0);
    double b = red.rhs[i];
    for (int j = 0; j < red.d; ++j) {
      const double c = red.rows[i][j];
      if (c == 0.0) continue;
      b -= c * z0[j];
      for (int k = 0; k < d2; ++k) a[k] += c * M[j][k];
    }
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    if (amax < 1e-12) {
      if (b < -kTightTol) out.inconsistent = true;
      continue;
    }
    for (double& v : a) v /= amax;
    b /= amax;
    std::vector<long long> key(d2);
    for (int k = 0; k < d2; ++k) key[k] = std::llround(a[k] * 1e9);
    auto it = seen.find(key);
    if (it != seen.end()) {
      out.rhs[it->second] = std::min(out.rhs[it->second], b);
    } else {
      seen.emplace(std::move(key), static_cast<int>(out.rows.size()));
      out.rows.push_back(std::move(a));
      out.rhs.push_back(b);
    }
  }
  return out;
}

// Feasibility probe; returns a feasible point when one exists.
std::optional<std::vector<double>> feasible_point(const Reduced& red) {
  if (red.inconsistent) return std::nullopt;
  if (red.d == 0) return std::vector<double>{};
  std::vector<double> c(red.d, 0.0);
  LpResult r = lp_minimize(red.rows, red.rhs, c);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.x;
}

// min t s.t. |x - (x0 + N z)| <= t componentwise, rows * z <= rhs.
DistanceResult distance_to_reduced(const std::vector<double>& x, const Reduced& red) {
  DistanceResult out;
  if (red.inconsistent) {
    out.distance = kInf;
    out.set_empty = true;
    return out;
  }
  const int d = red.d;
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::map<std::vector<long long>, int> seen;
  auto push = [&](std::vector<double> row, double rv) {
    std::vector<long long> key(row.size() + 0);
    key.reserve(row.size());
    for (double v : row) key.push_back(std::llround(v * 1e9));
    auto it = seen.find(key);
    if (it != seen.end()) {
      b[it->second] = std::min(b[it->second], rv);
    } else {
      seen.emplace(std::move(key), static_cast<int>(A.size()));
      A.push_back(std::move(row));
      b.push_back(rv);
    }
  };
  for (int i = 0; i < red.n; ++i) {
    std::vector<double> pos(d + 1, 0.0), neg(d + 1, 0.0);
    for (int j = 0; j < d; ++j) { pos[j] = red.N[i][j]; neg[j] = -red.N[i][j]; }
    pos[d] = -1.0;
    neg[d] = -1.0;
    push(std::move(pos), x[i] - red.x0[i]);
    push(std::move(neg), red.x0[i] - x[i]);
  }
  for (size_t i = 0; i < red.rows.size(); ++i) {
    std::vector<double> row(d + 1, 0.0);
    for (int j = 0; j < d; ++j) row[j] = red.rows[i][j];
    push(std::move(row), red.rhs[i]);
  }
  std::vector<double> c(d + 1, 0.0);
  c[d] = 1.0;
  LpResult r = lp_minimize(A, b, c);
  if (r.status == LpStatus::infeasible) {
    out.distance = kInf;
    out.set_empty = true;
    return out;
  }
  if (r.status != LpStatus::optimal)
    throw LpError("point_to_set_distance: LP did not converge");
  out.distance = std::max(0.0, r.objective);
  std::vector<double> z(r.x.begin(), r.x.begin() + d);
  out.nearest = red.to_ambient(z);
  return out;
}

bool reduced_contains(const Reduced& red, const std::vector<double>& z, double tol) {
  for (size_t i = 0; i < red.rows.size(); ++i) {
    double v = -red.rhs[i];
    for (int j = 0; j < red.d; ++j) v += red.rows[i][j] * z[j];
    if (v > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Vertex enumeration in reduced coordinates.
// ---------------------------------------------------------------------------

// Solve the d x d system given by the rows in `basis`; empty on singularity.
std::optional<std::vector<double>> solve_basis(const Reduced& red,
                                               const std::vector<int>& basis) {
  const int d = red.d;
  std::vector<std::vector<double>> M(d, std::vector<double>(d + 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) M[i][j] = red.rows[basis[i]][j];
    M[i][d] = red.rhs[basis[i]];
  }
  for (int col = 0; col < d; ++col) {
    int best = col;
    for (int i = col + 1; i < d; ++i)
      if (std::abs(M[i][col]) > std::abs(M[best][col])) best = i;
    if (std::abs(M[best][col]) < 1e-9) return std::nullopt;
    std::swap(M[col], M[best]);
    for (int i = 0; i < d; ++i) {
      if (i == col) continue;
      const double f = M[i][col] / M[col][col];
      if (f == 0.0) continue;
      for (int j = col; j <= d; ++j) M[i][j] -= f * M[col][j];
    }
  }
  std::vector<double> z(d);
  for (int i = 0; i < d; ++i) z[i] = M[i][d] / M[i][i];
  return z;
}

// Columns of inv(A_B): direction[j] moves off the j-th basis row.
std::optional<std::vector<std::vector<double>>> basis_inverse(
    const Reduced& red, const std::vector<int>& basis) {
  const int d = red.d;
  std::vector<std::vector<double>> M(d, std::vector<double>(2 * d, 0.0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) M[i][j] = red.rows[basis[i]][j];
    M[i][d + i] = 1.0;
  }
  for (int col = 0; col < d; ++col) {
    int best = col;
    for (int i = col + 1; i < d; ++i)
      if (std::abs(M[i][col]) > std::abs(M[best][col])) best = i;
    if (std::abs(M[best][col]) < 1e-9) return std::nullopt;
    std::swap(M[col], M[best]);
    const double piv = M[col][col];
    for (int j = 0; j < 2 * d; ++j) M[col][j] /= piv;
    for (int i = 0; i < d; ++i) {
      if (i == col) continue;
      const double f = M[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * d; ++j) M[i][j] -= f * M[col][j];
    }
  }
  std::vector<std::vector<double>> inv(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) inv[i][j] = M[i][d + j];
  return inv;
}

// Walk from an arbitrary feasible point to a vertex: while the active-row set
// has rank < d, move along a null-space direction until a new row binds.
// Returns a full-rank active basis, or nullopt if the set contains a line
// (cannot happen here: box rows bound every polytope we build).
std::optional<std::vector<int>> crawl_to_vertex(const Reduced& red,
                                                std::vector<double>& z) {
  const int d = red.d;
  const int m = static_cast<int>(red.rows.size());
  for (int guard = 0; guard <= d + 2; ++guard) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i) {
      double v = -red.rhs[i];
      for (int j = 0; j < d; ++j) v += red.rows[i][j] * z[j];
      if (v > -1e-8) active.push_back(i);
    }
    // Row-reduce the active rows to find an independent subset and, if the
    // rank is deficient, a null-space direction.
    std::vector<std::vector<double>> M;
    std::vector<int> chosen;
    std::vector<int> pivot_of_row;
    std::vector<bool> col_used(d, false);
    for (int idx : active) {
      std::vector<double> row = red.rows[idx];
      for (size_t r = 0; r < M.size(); ++r) {
        const double f = row[pivot_of_row[r]] / M[r][pivot_of_row[r]];
        if (f == 0.0) continue;
        for (int j = 0; j < d; ++j) row[j] -= f * M[r][j];
      }
      int pc = -1;
      double best = 1e-8;
      for (int j = 0; j < d; ++j)
        if (std::abs(row[j]) > best) { best = std::abs(row[j]); pc = j; }
      if (pc < 0) continue;
      M.push_back(std::move(row));
      pivot_of_row.push_back(pc);
      chosen.push_back(idx);
      col_used[pc] = true;
      if (static_cast<int>(chosen.size()) == d) break;
    }
    if (static_cast<int>(chosen.size()) == d) {
      std::sort(chosen.begin(), chosen.end());
      return chosen;
    }
    // Null-space direction: back-substitute with one free column set to 1.
    int free_col = -1;
    for (int j = 0; j < d; ++j)
      if (!col_used[j]) { free_col = j; break; }
    std::vector<double> dir(d, 0.0);
    dir[free_col] = 1.0;
    for (int r = static_cast<int>(M.size()) - 1; r >= 0; --r) {
      double s = 0.0;
      for (int j = 0; j < d; ++j)
        if (j != pivot_of_row[r]) s += M[r][j] * dir[j];
      dir[pivot_of_row[r]] = -s / M[r][pivot_of_row[r]];
    }
    // Move as far as possible along +dir (or -dir if +dir is unblocked).
    for (int sign = 0; sign < 2; ++sign) {
      double step = kInf;
      for (int i = 0; i < m; ++i) {
        double ad = 0.0, az = -red.rhs[i];
        for (int j = 0; j < d; ++j) {
          ad += red.rows[i][j] * dir[j];
          az += red.rows[i][j] * z[j];
        }
        if (ad > 1e-10) step = std::min(step, std::max(0.0, -az) / ad);
      }
      if (std::isfinite(step)) {
        for (int j = 0; j < d; ++j) z[j] += step * dir[j];
        break;
      }
      if (sign == 1) return std::nullopt;  // line in both directions
      for (double& v : dir) v = -v;
    }
  }
  return std::nullopt;
}

std::vector<std::vector<int>> enumerate_feasible_bases(const Reduced& red) {
  const int d = red.d;
  const int m = static_cast<int>(red.rows.size());
  if (d == 0) return {};

  auto start = feasible_point(red);
  if (!start) return {};
  std::vector<double> z = *start;
  auto basis0 = crawl_to_vertex(red, z);
  if (!basis0) throw LpError("vertex enumeration: failed to locate an initial vertex");

  std::set<std::vector<int>> visited_bases;
  std::vector<std::vector<int>> feasible_bases;
  std::vector<std::vector<int>> stack{*basis0};
  visited_bases.insert(*basis0);
  long long candidates = 0;

  while (!stack.empty()) {
    std::vector<int> basis = std::move(stack.back());
    stack.pop_back();
    auto zopt = solve_basis(red, basis);
#ifdef IRLAB_DEBUG_ENUM
    std::printf("basis");
    for (int b : basis) std::printf(" %d", b);
    if (zopt) {
      std::printf(" z=");
      for (double v : *zopt) std::printf(" %g", v);
      std::printf(" feas=%d", int(reduced_contains(red, *zopt, kFeasTol)));
    } else {
      std::printf(" singular");
    }
    std::printf("\n");
#endif
    if (!zopt) continue;
    if (!reduced_contains(red, *zopt, kFeasTol)) continue;
    feasible_bases.push_back(basis);
    auto inv = basis_inverse(red, basis);
    if (!inv) continue;
    const std::vector<double>& zv = *zopt;
    for (int leave = 0; leave < d; ++leave) {
      // Direction with rows[basis[i]] . dir = -delta_{i,leave}: relax one
      // tight row, stay tight on the others.
      std::vector<double> dir(d);
      for (int j = 0; j < d; ++j) dir[j] = -(*inv)[j][leave];
      // Ratio test over non-basis rows; collect every blocking row (ties give
      // degenerate neighbors, all of which must be explored).
      double best = kInf;
      std::vector<int> blockers;
      for (int i = 0; i < m; ++i) {
        if (std::binary_search(basis.begin(), basis.end(), i)) continue;
        double ad = 0.0, slack = red.rhs[i];
        for (int j = 0; j < d; ++j) {
          ad += red.rows[i][j] * dir[j];
          slack -= red.rows[i][j] * zv[j];
        }
        if (ad <= 1e-10) continue;
        const double ratio = std::max(0.0, slack) / ad;
        if (ratio < best - 1e-9) {
          best = ratio;
          blockers.assign(1, i);
        } else if (ratio < best + 1e-9) {
          blockers.push_back(i);
        }
      }
      if (!std::isfinite(best)) continue;  // accepted by a box row eventually
      for (int enter : blockers) {
        std::vector<int> nb = basis;
        nb[leave] = enter;
        std::sort(nb.begin(), nb.end());
        if (++candidates > kBasisCandidateCap)
          throw EnumerationCapError(
              "vertex enumeration: basis candidate cap exceeded");
        if (visited_bases.insert(nb).second) stack.push_back(std::move(nb));
      }
    }
  }
  return feasible_bases;
}

// Exact vertices via generic positive perturbation. The crawl explodes on
// degenerate vertices (homogeneous advantage rows all meet at the origin, so
// one vertex owns combinatorially many bases); relaxing each right-hand side
// by a distinct tiny amount makes the polytope simple, and re-solving every
// perturbed-feasible basis against the original right-hand sides recovers
// exactly the original vertex set: each original vertex keeps at least one of
// its bases among the perturbed vertices, and any basic solution that passes
// the original feasibility check is an original vertex.
std::vector<std::vector<double>> enumerate_reduced_vertices(const Reduced& red) {
  if (red.d == 0) return {std::vector<double>{}};

  Reduced pert = red;
  SplitMix64 prng(0x5eedf00d);
  for (double& b : pert.rhs) b += 1e-6 * (1.0 + prng.uniform());
  auto bases = enumerate_feasible_bases(pert);

  std::set<std::vector<long long>> seen;
  std::vector<std::vector<double>> vertices;
  for (const auto& basis : bases) {
    auto zopt = solve_basis(red, basis);
    if (!zopt || !reduced_contains(red, *zopt, kFeasTol)) continue;
    std::vector<long long> key(red.d);
    for (int j = 0; j < red.d; ++j) key[j] = std::llround((*zopt)[j] * 1e8);
    if (seen.insert(std::move(key)).second) vertices.push_back(*zopt);
  }
  return vertices;
}

// Detect inequality rows that hold with equality on the whole set, promote
// them, and re-reduce until none remain.  Needed when the advantage rows force
// a face (e.g. stochastic experts pin A = 0 on every supported action).
Reduced saturate_implied_equalities(Reduced red) {
  for (int pass = 0; pass < red.d + 1; ++pass) {
    if (red.inconsistent || red.d == 0) return red;
    auto pt = feasible_point(red);
    if (!pt) {
      red.inconsistent = true;
      return red;
    }
    std::vector<std::vector<double>> eqs;
    std::vector<double> eq_rhs;
    for (size_t i = 0; i < red.rows.size(); ++i) {
      double slack = red.rhs[i];
      for (int j = 0; j < red.d; ++j) slack -= red.rows[i][j] * (*pt)[j];
      if (slack > kTightTol) continue;  // witnessed slack: not an implied equality
      // Always-tight iff even the minimum of a.z sits on the boundary.
      LpResult r = lp_minimize(red.rows, red.rhs, red.rows[i]);
      if (r.status != LpStatus::optimal) continue;
      if (red.rhs[i] - r.objective <= kTightTol) {  // min a.z == rhs
        eqs.push_back(red.rows[i]);
        eq_rhs.push_back(red.rhs[i]);
      }
    }
    if (eqs.empty()) return red;
    red = compose(red, eqs, eq_rhs);
  }
  return red;
}

// Drop duplicate inequality rows (same normal up to positive scale), keeping
// the tightest right-hand side. Duplicates are common after restriction
// substitution (box rows of tied coordinates) and inflate pivot degeneracy.
void dedupe_rows(Reduced& red) {
  std::map<std::vector<long long>, std::size_t> seen;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < red.rows.size(); ++i) {
    double scale = 0.0;
    for (double v : red.rows[i]) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) continue;  // constant rows were resolved in reduce()
    std::vector<long long> key(red.d);
    for (int j = 0; j < red.d; ++j) key[j] = std::llround(red.rows[i][j] / scale * 1e9);
    auto [it, fresh] = seen.emplace(std::move(key), rows.size());
    if (fresh) {
      std::vector<double> row(red.d);
      for (int j = 0; j < red.d; ++j) row[j] = red.rows[i][j] / scale;
      rows.push_back(std::move(row));
      rhs.push_back(red.rhs[i] / scale);
    } else {
      rhs[it->second] = std::min(rhs[it->second], red.rhs[i] / scale);
    }
  }
  red.rows = std::move(rows);
  red.rhs = std::move(rhs);
}

std::vector<std::vector<double>> vertices_ambient(const RewardPolytope& p, int dim_cap) {
  Reduced red = reduce(p);
  if (red.inconsistent) return {};
  if (red.d > dim_cap)
    throw EnumerationCapError("vertex enumeration: effective dimension " +
                              std::to_string(red.d) + " exceeds cap " +
                              std::to_string(dim_cap));
  red = saturate_implied_equalities(std::move(red));
  if (red.inconsistent) return {};
  dedupe_rows(red);
  auto zs = enumerate_reduced_vertices(red);
  std::vector<std::vector<double>> out;
  out.reserve(zs.size());
  for (const auto& z : zs) out.push_back(red.to_ambient(z));
  return out;
}

// One direction of the Hausdorff distance from explicit source points.
void directed_from_points(const std::vector<std::vector<double>>& pts,
                          const RewardPolytope& target, const Reduced& target_red,
                          double& value, std::vector<double>& witness) {
  value = 0.0;
  witness.clear();
  for (const auto& x : pts) {
    if (contains(target, x, kTightTol)) continue;  // distance 0, skip the LP
    DistanceResult dr = distance_to_reduced(x, target_red);
    if (dr.distance > value) {
      value = dr.distance;
      witness = x;
    }
  }
  if (witness.empty() && !pts.empty()) witness = pts.front();
}

// Random-objective LP probes: each optimum is a point of the set (a vertex for
// generic objectives), giving a lower bound on the directed distance.
std::vector<std::vector<double>> sample_points(const Reduced& red, int samples,
                                               SplitMix64& rng) {
  std::vector<std::vector<double>> pts;
  if (red.inconsistent) return pts;
  if (red.d == 0) {
    pts.push_back(red.to_ambient({}));
    return pts;
  }
  for (int k = 0; k < samples; ++k) {
    std::vector<double> c(red.d);
    for (double& v : c) v = rng.uniform(-1.0, 1.0);
    LpResult r = lp_minimize(red.rows, red.rhs, c);
    if (r.status != LpStatus::optimal) continue;
    pts.push_back(red.to_ambient(r.x));
  }
  return pts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polytope construction
// ---------------------------------------------------------------------------
RewardPolytope build_polytope(const MdpR& m, const PolicyTable& pi_e,
                              Restriction restriction,
                              const std::vector<double>& beta) {
  m.validate();
  pi_e.validate();
  if (pi_e.S != m.S || pi_e.A != m.A || pi_e.H != m.H)
    throw std::invalid_argument("build_polytope: policy/kernel shape mismatch");
  if (restriction == Restriction::beta_margin) {
    if (!pi_e.is_deterministic())
      throw std::invalid_argument("beta-margin restriction requires a deterministic expert");
    if (static_cast<int>(beta.size()) != m.H)
      throw std::invalid_argument("beta-margin restriction needs one margin per stage");
    for (double b : beta)
      if (b < 0.0) throw std::invalid_argument("margins must be non-negative");
  }

  const int S = m.S, A = m.A, H = m.H, n = S * A * H;
  RewardPolytope p;
  p.n = n;
  p.S = S;
  p.A = A;
  p.H = H;
  p.restriction = restriction;

  // Advantage of every (h,s,a) is linear in the reward vector; column j of the
  // row matrix comes from evaluating the advantage at the j-th basis reward.
  std::vector<std::vector<double>> adv_rows(n, std::vector<double>(n, 0.0));
  RewardTable basis;
  basis.S = S;
  basis.A = A;
  basis.H = H;
  basis.r.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    basis.r[j] = 1.0;
    std::vector<double> adv = advantage(m, pi_e, basis);
    for (int i = 0; i < n; ++i) adv_rows[i][j] = adv[i];
    basis.r[j] = 0.0;
  }

  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const int i = (h * S + s) * A + a;
        double b = 0.0;
        if (restriction == Restriction::beta_margin && pi_e.action(h, s) != a)
          b = -beta[h];
        p.rows.push_back(adv_rows[i]);
        p.rhs.push_back(b);
      }

  for (int j = 0; j < n; ++j) {
    std::vector<double> up(n, 0.0), dn(n, 0.0);
    up[j] = 1.0;
    dn[j] = -1.0;
    p.rows.push_back(std::move(up));
    p.rhs.push_back(1.0);
    p.rows.push_back(std::move(dn));
    p.rhs.push_back(1.0);
  }

  if (restriction == Restriction::state_only) {
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 1; a < A; ++a) {
          std::vector<double> c(n, 0.0);
          c[(h * S + s) * A + a] = 1.0;
          c[(h * S + s) * A + 0] = -1.0;
          p.eq_rows.push_back(std::move(c));
          p.eq_rhs.push_back(0.0);
        }
  } else if (restriction == Restriction::time_homogeneous) {
    for (int h = 1; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          std::vector<double> c(n, 0.0);
          c[(h * S + s) * A + a] = 1.0;
          c[(0 * S + s) * A + a] = -1.0;
          p.eq_rows.push_back(std::move(c));
          p.eq_rhs.push_back(0.0);
        }
  }
  return p;
}

bool is_empty(const RewardPolytope& p) {
  Reduced red = reduce(p);
  if (red.inconsistent) return true;
  return !feasible_point(red).has_value();
}

bool contains(const RewardPolytope& p, const std::vector<double>& x, double tol) {
  if (static_cast<int>(x.size()) != p.n)
    throw std::invalid_argument("contains: dimension mismatch");
  for (size_t i = 0; i < p.rows.size(); ++i) {
    double v = -p.rhs[i];
    for (int j = 0; j < p.n; ++j) v += p.rows[i][j] * x[j];
    if (v > tol) return false;
  }
  for (size_t i = 0; i < p.eq_rows.size(); ++i) {
    double v = -p.eq_rhs[i];
    for (int j = 0; j < p.n; ++j) v += p.eq_rows[i][j] * x[j];
    if (std::abs(v) > tol) return false;
  }
  return true;
}

DistanceResult point_to_set_distance(const std::vector<double>& x, const RewardPolytope& p) {
  if (static_cast<int>(x.size()) != p.n)
    throw std::invalid_argument("point_to_set_distance: dimension mismatch");
  return distance_to_reduced(x, reduce(p));
}

std::vector<std::vector<double>> enumerate_vertices(const RewardPolytope& p, int dim_cap) {
  return vertices_ambient(p, dim_cap);
}

HausdorffResult hausdorff(const RewardPolytope& p, const RewardPolytope& q,
                          HausdorffMethod method, int samples, std::uint64_t seed,
                          int dim_cap) {
  if (p.n != q.n)
    throw std::invalid_argument("hausdorff: ambient dimension mismatch");
  HausdorffResult out;
  Reduced pr = reduce(p);
  Reduced qr = reduce(q);
  out.p_empty = pr.inconsistent || !feasible_point(pr).has_value();
  out.q_empty = qr.inconsistent || !feasible_point(qr).has_value();
  if (out.p_empty && out.q_empty) {
    out.value = 0.0;
    out.exact = true;
    return out;
  }
  if (out.p_empty || out.q_empty) {
    out.value = kInf;
    out.directed_pq = out.p_empty ? 0.0 : kInf;
    out.directed_qp = out.q_empty ? 0.0 : kInf;
    out.exact = true;
    return out;
  }

  if (method == HausdorffMethod::exact) {
    // Coordinates never coupled by any row (of either set) form independent
    // blocks; both sets are products over the blocks, and under the sup metric
    // the directed distances are the block-wise maxima. Inequality rows are
    // first rewritten modulo each set's own equalities (e.g. the restriction's
    // duplicated coordinates), since couplings that cancel on the feasible
    // subspace would otherwise glue every block together. Recursing per block
    // keeps vertex enumeration exponential only in the largest block.
    constexpr double kCoefTol = 1e-10;
    // Row-echelon form of an equality system; returns pivot columns + rows.
    auto echelon = [&](std::vector<std::vector<double>> eqs, std::vector<double> rhs) {
      std::vector<int> pivots;
      std::size_t rank = 0;
      for (int col = 0; col < p.n && rank < eqs.size(); ++col) {
        std::size_t best = rank;
        for (std::size_t i = rank; i < eqs.size(); ++i)
          if (std::abs(eqs[i][col]) > std::abs(eqs[best][col])) best = i;
        if (std::abs(eqs[best][col]) <= kCoefTol) continue;
        std::swap(eqs[rank], eqs[best]);
        std::swap(rhs[rank], rhs[best]);
        const double piv = eqs[rank][col];
        for (int j = 0; j < p.n; ++j) eqs[rank][j] /= piv;
        rhs[rank] /= piv;
        for (std::size_t i = 0; i < eqs.size(); ++i) {
          if (i == rank) continue;
          const double c = eqs[i][col];
          if (c == 0.0) continue;
          for (int j = 0; j < p.n; ++j) eqs[i][j] -= c * eqs[rank][j];
          rhs[i] -= c * rhs[rank];
        }
        pivots.push_back(col);
        ++rank;
      }
      eqs.resize(rank);
      rhs.resize(rank);
      return std::tuple(pivots, eqs, rhs);
    };
    // Inequality rows with the pivot coordinates substituted away.
    auto substituted = [&](const RewardPolytope& poly) {
      auto [pivots, eqs, eq_rhs] = echelon(poly.eq_rows, poly.eq_rhs);
      std::pair<std::vector<std::vector<double>>, std::vector<double>> out_rows{
          poly.rows, poly.rhs};
      for (std::size_t i = 0; i < out_rows.first.size(); ++i)
        for (std::size_t k = 0; k < pivots.size(); ++k) {
          const double c = out_rows.first[i][pivots[k]];
          if (c == 0.0) continue;
          for (int j = 0; j < p.n; ++j) out_rows.first[i][j] -= c * eqs[k][j];
          out_rows.second[i] -= c * eq_rhs[k];
        }
      for (auto& row : out_rows.first)
        for (double& v : row)
          if (std::abs(v) <= kCoefTol) v = 0.0;
      return out_rows;
    };
    const auto p_sub = substituted(p);
    const auto q_sub = substituted(q);

    std::vector<int> parent(p.n);
    for (int i = 0; i < p.n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    auto unite_support = [&](const std::vector<std::vector<double>>& rows) {
      for (const auto& row : rows) {
        int first = -1;
        for (int j = 0; j < p.n; ++j) {
          if (row[j] == 0.0) continue;
          if (first < 0)
            first = j;
          else
            parent[find(j)] = find(first);
        }
      }
    };
    unite_support(p_sub.first);
    unite_support(p.eq_rows);
    unite_support(q_sub.first);
    unite_support(q.eq_rows);
    std::map<int, std::vector<int>> blocks;
    for (int j = 0; j < p.n; ++j) blocks[find(j)].push_back(j);

    if (blocks.size() > 1) {
      auto restrict = [](const RewardPolytope& full,
                         const std::pair<std::vector<std::vector<double>>,
                                         std::vector<double>>& ineq,
                         const std::vector<int>& coords) {
        RewardPolytope sub;
        sub.n = static_cast<int>(coords.size());
        auto take = [&](const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& rhs,
                        std::vector<std::vector<double>>& out_rows,
                        std::vector<double>& out_rhs) {
          for (std::size_t i = 0; i < rows.size(); ++i) {
            bool touches = false;
            std::vector<double> r(coords.size());
            for (std::size_t k = 0; k < coords.size(); ++k) {
              r[k] = rows[i][coords[k]];
              touches = touches || r[k] != 0.0;
            }
            if (touches) {
              out_rows.push_back(std::move(r));
              out_rhs.push_back(rhs[i]);
            }
          }
        };
        take(ineq.first, ineq.second, sub.rows, sub.rhs);
        take(full.eq_rows, full.eq_rhs, sub.eq_rows, sub.eq_rhs);
        return sub;
      };
      out.exact = true;
      out.witness_pq.assign(p.n, 0.0);
      out.witness_qp.assign(p.n, 0.0);
      for (const auto& [root, coords] : blocks) {
        HausdorffResult part =
            hausdorff(restrict(p, p_sub, coords), restrict(q, q_sub, coords),
                      HausdorffMethod::exact, samples, seed, dim_cap);
        out.directed_pq = std::max(out.directed_pq, part.directed_pq);
        out.directed_qp = std::max(out.directed_qp, part.directed_qp);
        for (std::size_t k = 0; k < coords.size(); ++k) {
          out.witness_pq[coords[k]] = part.witness_pq[k];
          out.witness_qp[coords[k]] = part.witness_qp[k];
        }
      }
      out.value = std::max(out.directed_pq, out.directed_qp);
      return out;
    }
  }

  std::vector<std::vector<double>> p_pts, q_pts;
  if (method == HausdorffMethod::exact) {
    p_pts = vertices_ambient(p, dim_cap);
    q_pts = vertices_ambient(q, dim_cap);
    out.exact = true;
  } else {
    SplitMix64 rp(mix_seed(seed, 1)), rq(mix_seed(seed, 2));
    p_pts = sample_points(pr, samples, rp);
    q_pts = sample_points(qr, samples, rq);
    out.exact = false;
  }
  directed_from_points(p_pts, q, qr, out.directed_pq, out.witness_pq);
  directed_from_points(q_pts, p, pr, out.directed_qp, out.witness_qp);
  out.value = std::max(out.directed_pq, out.directed_qp);
  return out;
}

std::string RewardPolytope::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["S"] = S;
  j["A"] = A;
  j["H"] = H;
  j["restriction"] = restriction_name(restriction);
  j["rows"] = rows;
  j["rhs"] = rhs;
  j["eq_rows"] = eq_rows;
  j["eq_rhs"] = eq_rhs;
  return j.dump(2);
}

std::string HausdorffResult::to_json() const {
  nlohmann::json j;
  auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  j["value"] = num(value);
  j["directed_pq"] = num(directed_pq);
  j["directed_qp"] = num(directed_qp);
  j["witness_pq"] = witness_pq;
  j["witness_qp"] = witness_qp;
  j["exact"] = exact;
  j["p_empty"] = p_empty;
  j["q_empty"] = q_empty;
  return j.dump(2);
}

}  // namespace irlab
