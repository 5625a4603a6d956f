#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "bic/error.hpp"
#include "bic/polytope.hpp"
#include "bic/simplex.hpp"

namespace bic {

using RatePoint = std::vector<double>;

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kDedupTol = 1e-8;
inline constexpr double kTieTol = 1e-9;

inline double linf(const RatePoint& a, const RatePoint& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace detail {

/// Solves the square system M x = r with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> M, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(M[i][c]) > std::abs(M[piv][c])) piv = i;
    if (std::abs(M[piv][c]) < 1e-12) return std::nullopt;
    std::swap(M[piv], M[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = M[i][c] / M[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) M[i][k] -= f * M[c][k];
      r[i] -= f * r[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / M[i][i];
  return x;
}

inline bool satisfies(const Halfspaces& h, const RatePoint& x, double tol) {
  for (std::size_t i = 0; i < h.A.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += h.A[i][k] * x[k];
    if (s > h.b[i] + tol) return false;
  }
  return true;
}

}  // namespace detail

/// Vertices of {R : A R <= b}, dimension at most 3, by intersecting every d-subset of rows.
inline std::vector<RatePoint> enumerate_vertices(const Halfspaces& h, std::size_t dim) {
  if (dim > 3) throw DimensionTooLarge("vertex enumeration supports at most 3 rate variables");
  if (h.side_min < -kFeasTol) return {};
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<double> e(dim, 0.0);
    for (double sgn : {1.0, -1.0}) {
      e[k] = sgn;
      const auto res = detail::maximize_numeric(h.A, h.b, e, h.A.size());
      if (res.status == LpStatus::Infeasible) return {};
      if (res.status == LpStatus::Unbounded) throw UnboundedRegion("region is unbounded along a rate axis");
    }
  }
  std::vector<RatePoint> out;
  const std::size_t m = h.A.size();
  std::vector<std::size_t> idx(dim);
  // lexicographic d-subsets
  auto visit = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == dim) {
      std::vector<std::vector<double>> M;
      std::vector<double> r;
      for (std::size_t i : idx) {
        M.push_back(h.A[i]);
        r.push_back(h.b[i]);
      }
      auto x = detail::solve_square(M, r);
      if (!x || !detail::satisfies(h, *x, kFeasTol)) return;
      for (double& c : *x)
        if (std::abs(c) < 1e-15) c = 0.0;
      for (const auto& p : out)
        if (linf(p, *x) <= kDedupTol) return;
      out.push_back(std::move(*x));
      return;
    }
    for (std::size_t i = start; i < m; ++i) {
      idx[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  return out;
}

inline std::vector<RatePoint> enumerate_vertices(const RatePolytope& p) {
  return enumerate_vertices(to_halfspaces(p), p.vars.size());
}

/// Points not weakly dominated by a distinct point; near-duplicates collapse to one.
/// Output is sorted lexicographically, so the result does not depend on input order.
inline std::vector<RatePoint> dominant_points(std::vector<RatePoint> pts, double tie = kTieTol) {
  std::sort(pts.begin(), pts.end());
  std::vector<RatePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
      if (i == j) continue;
      const bool same = linf(pts[i], pts[j]) <= tie;
      if (same) {
        drop = j < i;  // keep the first of a cluster
        continue;
      }
      bool geq = true;
      for (std::size_t k = 0; k < pts[i].size(); ++k)
        if (pts[j][k] < pts[i][k] - tie) {
          geq = false;
          break;
        }
      drop = geq;
    }
    if (!drop) out.push_back(pts[i]);
  }
  return out;
}

inline bool region_contains(const Halfspaces& h, const RatePoint& x, double tol = kFeasTol) {
  return h.side_min >= -tol && detail::satisfies(h, x, tol);
}

inline bool region_contains(const RatePolytope& p, const RatePoint& x, double tol = kFeasTol) {
  return region_contains(to_halfspaces(p), x, tol);
}

/// Largest t such that x - t*1 is dominated by a convex combination of the cloud
/// (negative when x lies strictly inside the down-set of the hull).
inline double downset_hull_excess(const std::vector<RatePoint>& cloud, const RatePoint& x) {
  if (cloud.empty()) return std::numeric_limits<double>::infinity();
  const std::size_t n = cloud.size(), d = x.size();
  // variables: alpha (n) >= 0, s >= 0 with s = t + shift
  // minimize t subject to sum alpha = 1, sum alpha p_k + t >= x_k
  double shift = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& p : cloud) shift = std::max(shift, std::abs(p[k] - x[k]));
  shift += 1.0;
  LinearProgram<double> lp(n + 1);
  std::vector<double> one(n + 1, 1.0);
  one[n] = 0.0;
  lp.add_row(one, RowSense::Eq, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> row(n + 1);
    for (std::size_t i = 0; i < n; ++i) row[i] = cloud[i][k];
    row[n] = 1.0;
    lp.add_row(std::move(row), RowSense::Ge, x[k] + shift);
  }
  lp.c[n] = -1.0;
  const auto res = solve(lp);
  if (res.status != LpStatus::Optimal) return std::numeric_limits<double>::infinity();
  return -res.value - shift;
}

/// x <= some convex combination of cloud points, element-wise, within tol.
inline bool downset_hull_contains(const std::vector<RatePoint>& cloud, const RatePoint& x, double tol = kFeasTol) {
  return downset_hull_excess(cloud, x) <= tol;
}

/// Support function of the down-set hull in a nonnegative direction.
inline double support(const std::vector<RatePoint>& cloud, const std::vector<double>& dir) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : cloud) {
    double s = 0.0;
    for (std::size_t k = 0; k < dir.size(); ++k) s += dir[k] * p[k];
    best = std::max(best, s);
  }
  return best;
}

/// n Fibonacci-lattice unit directions in the open positive octant followed by the 3 axes.
inline std::vector<std::vector<double>> probe_directions(std::size_t n = 100) {
  std::vector<std::vector<double>> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    // fold the azimuth into the first quadrant
    const double phi = std::fmod(golden * static_cast<double>(i), std::numbers::pi / 2.0);
    out.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  out.push_back({1.0, 0.0, 0.0});
  out.push_back({0.0, 1.0, 0.0});
  out.push_back({0.0, 0.0, 1.0});
  return out;
}

/// Largest amount by which the hull of a sticks out of the hull of b over the directions.
inline double directed_gap(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b,
                           const std::vector<std::vector<double>>& dirs) {
  double g = 0.0;
  for (const auto& d : dirs) g = std::max(g, support(a, d) - support(b, d));
  return g;
}

/// Two-sided Hausdorff check between point sets under the infinity norm.
inline bool same_point_set(const std::vector<RatePoint>& a, const std::vector<RatePoint>& b, double tol) {
  auto covered = [tol](const std::vector<RatePoint>& x, const std::vector<RatePoint>& y) {
    for (const auto& p : x) {
      bool hit = false;
      for (const auto& q : y)
        if (linf(p, q) <= tol) {
          hit = true;
          break;
        }
      if (!hit) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

/// Ordered counter-clockwise hull of 2-D points (monotone chain); collinear points dropped.
inline std::vector<std::array<double, 2>> convex_hull_2d(std::vector<std::array<double, 2>> pts, double tol = 1e-12) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::array<double, 2>> uniq;
  for (const auto& p : pts)
    if (uniq.empty() || std::abs(uniq.back()[0] - p[0]) > tol || std::abs(uniq.back()[1] - p[1]) > tol)
      uniq.push_back(p);
  if (uniq.size() <= 2) return uniq;
  auto cross = [](const auto& o, const auto& a, const auto& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<double, 2>> h(2 * uniq.size());
  std::size_t k = 0;
  for (const auto& p : uniq) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= tol) --k;
    h[k++] = p;
  }
  for (std::size_t i = uniq.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], uniq[i]) <= tol) --k;
    h[k++] = uniq[i];
  }
  h.resize(k - 1);
  return h;
}

/// Cross-section of conv(vertices) at coordinate fixed == value, as an ordered polygon
/// in the remaining two coordinates.
inline std::vector<std::array<double, 2>> slice(const std::vector<RatePoint>& vertices, std::size_t fixed, double value,
                                                double tol = kFeasTol) {
  if (vertices.empty()) throw Infeasible("region has no vertices");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : vertices) {
    if (v.size() != 3) throw DimensionMismatch("slicing needs 3-D vertices");
    lo = std::min(lo, v[fixed]);
    hi = std::max(hi, v[fixed]);
  }
  if (fixed > 2) throw DimensionMismatch("fixed coordinate must be 0, 1 or 2");
  if (value < lo - tol || value > hi + tol) throw Infeasible("slice value outside the region's coordinate range");
  const std::size_t a = fixed == 0 ? 1 : 0, b = fixed == 2 ? 1 : 2;
  std::vector<std::array<double, 2>> pts;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& p = vertices[i];
    if (std::abs(p[fixed] - value) <= tol) pts.push_back({p[a], p[b]});
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      const auto& q = vertices[j];
      const double dp = p[fixed] - value, dq = q[fixed] - value;
      if ((dp < -tol && dq > tol) || (dp > tol && dq < -tol)) {
        const double t = dp / (dp - dq);
        pts.push_back({p[a] + t * (q[a] - p[a]), p[b] + t * (q[b] - p[b])});
      }
    }
  }
  return convex_hull_2d(std::move(pts));
}

}  // namespace bic
