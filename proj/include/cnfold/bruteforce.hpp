#pragma once

// Independent desk-scale oracles: exhaustive lattice enumeration, exhaustive
// convex maximization, exact 2-D hull edges and exact hull membership. None
// of these touch the Graver / zonotope code paths.

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cnfold/integer.hpp"
#include "cnfold/matrix.hpp"
#include "cnfold/objective.hpp"

namespace cnfold {

struct EnumBudget {
  std::uint64_t max_points = 1'000'000;
  IntVec upper;  // per-variable upper bounds; empty means max |b_i| for all
};

inline IntVec default_upper_bounds(const IntMat& a, const IntVec& b) {
  Integer bound = 0;
  for (const auto& bi : b) bound = std::max(bound, Integer(abs(bi)));
  return IntVec(a.cols(), bound);
}

/// All x in the box with A x = b, x >= 0, in lexicographic order. Depth-first
/// over the coordinates, pruning a prefix once some row can no longer reach
/// its right-hand side; max_points caps the number of search nodes visited.
inline std::vector<IntVec> enumerate_feasible(const IntMat& a, const IntVec& b, const EnumBudget& budget = {}) {
  const std::size_t n = a.cols(), m = a.rows();
  if (b.size() != m) throw DimensionError("enumerate_feasible: rhs length mismatch");
  IntVec upper = budget.upper.empty() ? default_upper_bounds(a, b) : budget.upper;
  if (upper.size() != n) throw DimensionError("enumerate_feasible: bounds length mismatch");

  std::vector<std::int64_t> ub(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (upper[j].sign() < 0) throw DimensionError("enumerate_feasible: negative bound");
    ub[j] = to_int64(upper[j]);
  }
  std::vector<std::vector<std::int64_t>> cols(n, std::vector<std::int64_t>(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cols[j][i] = to_int64(a(i, j));
  std::vector<std::int64_t> target(m);
  for (std::size_t i = 0; i < m; ++i) target[i] = to_int64(b[i]);

  // lo[j][i], hi[j][i]: range of row i over coordinates j..n-1.
  std::vector<std::vector<std::int64_t>> lo(n + 1, std::vector<std::int64_t>(m, 0)), hi = lo;
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t i = 0; i < m; ++i) {
      std::int64_t v = cols[j][i] * ub[j];
      lo[j][i] = lo[j + 1][i] + std::min<std::int64_t>(0, v);
      hi[j][i] = hi[j + 1][i] + std::max<std::int64_t>(0, v);
    }
  }

  std::vector<IntVec> out;
  std::vector<std::int64_t> x(n, 0), ax(m, 0);
  std::uint64_t visited = 0;
  auto reachable = [&](std::size_t j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (ax[i] + lo[j][i] > target[i] || ax[i] + hi[j][i] < target[i]) return false;
    }
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t j) -> void {
    if (++visited > budget.max_points) {
      throw GuardExceeded("enumerate_feasible: more than " + std::to_string(budget.max_points) + " search nodes");
    }
    if (!reachable(j)) return;
    if (j == n) {
      IntVec v(n);
      for (std::size_t k = 0; k < n; ++k) v[k] = x[k];
      out.push_back(std::move(v));
      return;
    }
    for (std::int64_t val = 0; val <= ub[j]; ++val) {
      x[j] = val;
      self(self, j + 1);
      for (std::size_t i = 0; i < m; ++i) ax[i] += cols[j][i];
    }
    for (std::size_t i = 0; i < m; ++i) ax[i] -= cols[j][i] * (ub[j] + 1);
    x[j] = 0;
  };
  dfs(dfs, 0);
  return out;
}

struct ConvexArgmax {
  IntVec x;
  IntVec z;
};

/// Exhaustive c-argmax of the projections, with the pipeline's tie-break.
inline ConvexArgmax brute_convex_max(const std::vector<IntVec>& points, const ObjectiveWeights& w,
                                     const ConvexObjective& c) {
  if (points.empty()) throw DimensionError("brute_convex_max: empty point list");
  ConvexArgmax best{points[0], w.project(points[0])};
  for (std::size_t i = 1; i < points.size(); ++i) {
    IntVec z = w.project(points[i]);
    if (improves(c, z, points[i], best.z, best.x)) best = {points[i], std::move(z)};
  }
  return best;
}

namespace detail {

inline Integer cross(const IntVec& o, const IntVec& a, const IntVec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace detail

/// Vertices of the 2-D convex hull in counter-clockwise order (collinear
/// boundary points dropped). Monotone chain.
inline std::vector<IntVec> hull_2d(std::vector<IntVec> pts) {
  for (const auto& p : pts) {
    if (p.size() != 2) throw DimensionError("hull_2d: points must be 2-dimensional");
  }
  sort_unique(pts);
  if (pts.size() < 3) return pts;
  std::vector<IntVec> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && detail::cross(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && detail::cross(hull[k - 2], hull[k - 1], pts[i]).sign() <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

/// Primitive, sign-normalized directions of the hull's edges, sorted.
inline std::vector<IntVec> hull_edges_2d(const std::vector<IntVec>& points) {
  std::vector<IntVec> hull = hull_2d(points);
  std::vector<IntVec> dirs;
  if (hull.size() < 2) return dirs;
  if (hull.size() == 2) {
    dirs.push_back(sign_normalized(primitive(hull[1] - hull[0])));
    return dirs;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    dirs.push_back(sign_normalized(primitive(hull[(i + 1) % hull.size()] - hull[i])));
  }
  sort_unique(dirs);
  return dirs;
}

/// Exact test of p ∈ conv(points): phase-one simplex over the rationals with
/// Bland's rule on {lambda >= 0, sum lambda = 1, sum lambda_q q = p}.
inline bool in_convex_hull(const IntVec& p, const std::vector<IntVec>& points) {
  if (points.empty()) return false;
  const std::size_t d = p.size(), m = d + 1, n = points.size();
  const std::size_t cols = n + m;  // lambdas, then artificials
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
  for (std::size_t i = 0; i < m; ++i) {
    Rational rhs = i < d ? Rational(p[i]) : Rational(1);
    int flip = rhs < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (points[j].size() != d) throw DimensionError("in_convex_hull: dimension mismatch");
      t[i][j] = flip * (i < d ? Rational(points[j][i]) : Rational(1));
    }
    t[i][n + i] = 1;
    t[i][cols] = flip * rhs;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  while (true) {
    // Reduced cost of column j for min sum(artificials).
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols && enter == cols; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      Rational r = j >= n ? Rational(1) : Rational(0);
      for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n) r -= t[i][j];
      }
      if (r < 0) enter = j;
    }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][cols] / t[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // cannot happen for a bounded phase one
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (t[leave][j] != 0) t[i][j] -= f * t[leave][j];
      }
    }
    basis[leave] = enter;
  }
  Rational infeasibility = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) infeasibility += t[i][cols];
  }
  return infeasibility == 0;
}

/// Vertices of zone(D) by listing all 2^|D| signed sums and keeping the
/// extreme ones (exact hull-membership test). Sorted lexicographically.
inline std::vector<IntVec> exhaustive_zonotope_vertices(const std::vector<IntVec>& generators, std::size_t d,
                                                        std::size_t max_generators = 20) {
  if (generators.size() > max_generators) throw GuardExceeded("exhaustive_zonotope_vertices: too many generators");
  std::vector<IntVec> sums;
  const std::uint64_t total = std::uint64_t{1} << generators.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    IntVec s = zeros(d);
    for (std::size_t e = 0; e < generators.size(); ++e) axpy(s, (mask >> e) & 1 ? 1 : -1, generators[e]);
    sums.push_back(std::move(s));
  }
  sort_unique(sums);
  if (d == 1) {
    std::vector<IntVec> out{sums.front()};
    if (sums.size() > 1) out.push_back(sums.back());
    return out;
  }
  if (d == 2) {
    std::vector<IntVec> out = hull_2d(sums);
    sort_unique(out);
    return out;
  }
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    std::vector<IntVec> others;
    others.reserve(sums.size() - 1);
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (j != i) others.push_back(sums[j]);
    }
    if (!in_convex_hull(sums[i], others)) out.push_back(sums[i]);
  }
  return out;
}

}  // namespace cnfold
