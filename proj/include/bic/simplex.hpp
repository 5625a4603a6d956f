#pragma once

#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include "bic/error.hpp"
#include "bic/rational.hpp"

namespace bic {

enum class RowSense { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Zero test used by the simplex: exact for rationals, 1e-11 for doubles.
template <class T>
struct LpTraits {
  static bool zero(const T& x) { return x == 0; }
  static bool pos(const T& x) { return x > 0; }
  static bool neg(const T& x) { return x < 0; }
};

template <>
struct LpTraits<double> {
  static constexpr double eps = 1e-11;
  static bool zero(double x) { return x < eps && x > -eps; }
  static bool pos(double x) { return x > eps; }
  static bool neg(double x) { return x < -eps; }
};

/// maximize c.x subject to rows (a.x sense b) and x >= 0.
template <class T>
struct LinearProgram {
  std::size_t n = 0;
  std::vector<std::vector<T>> a;
  std::vector<RowSense> sense;
  std::vector<T> b;
  std::vector<T> c;

  explicit LinearProgram(std::size_t nvars = 0) : n(nvars), c(nvars, T(0)) {}

  void add_row(std::vector<T> coeffs, RowSense s, T rhs) {
    if (coeffs.size() != n) throw DimensionMismatch("LP row has wrong width");
    a.push_back(std::move(coeffs));
    sense.push_back(s);
    b.push_back(std::move(rhs));
  }
};

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  T value{};
  std::vector<T> x;
};

namespace detail {

/// Dense tableau with Bland's rule; the last row is the objective (reduced costs).
template <class T>
class Tableau {
  using Tr = LpTraits<T>;

 public:
  std::size_t m, cols;  // cols includes the rhs column at index cols-1
  std::vector<std::vector<T>> t;
  std::vector<std::size_t> basis;

  Tableau(std::size_t rows, std::size_t ncols) : m(rows), cols(ncols), t(rows + 1, std::vector<T>(ncols, T(0))), basis(rows, 0) {}

  T& rhs(std::size_t r) { return t[r][cols - 1]; }

  void pivot(std::size_t r, std::size_t col) {
    const T inv = T(1) / t[r][col];
    for (auto& v : t[r]) v *= inv;
    t[r][col] = T(1);
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == r) continue;
      const T f = t[i][col];
      if (Tr::zero(f)) {
        t[i][col] = T(0);
        continue;
      }
      for (std::size_t k = 0; k < cols; ++k) {
        if (!Tr::zero(t[r][k])) t[i][k] -= f * t[r][k];
      }
      t[i][col] = T(0);
    }
    basis[r] = col;
  }

  /// Minimizes the objective row over columns allowed[k]; returns false if unbounded.
  bool run(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t k = 0; k + 1 < cols; ++k) {
        if (allowed[k] && Tr::neg(t[m][k])) {
          enter = k;
          break;
        }
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      T best{};
      for (std::size_t i = 0; i < m; ++i) {
        if (!Tr::pos(t[i][enter])) continue;
        T ratio = t[i][cols - 1] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

/// Two-phase primal simplex with Bland's anti-cycling rule.
template <class T>
LpResult<T> solve(const LinearProgram<T>& lp) {
  using Tr = LpTraits<T>;
  const std::size_t m = lp.a.size(), n = lp.n;
  // column layout: [x (n)] [slack/surplus (m)] [artificial (m)] [rhs]
  const std::size_t ns = n, na = n + m, cols = n + 2 * m + 1;
  detail::Tableau<T> tab(m, cols);
  std::vector<bool> is_art(cols - 1, false);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = Tr::neg(lp.b[i]);
    const T sgn = flip ? T(-1) : T(1);
    for (std::size_t k = 0; k < n; ++k) tab.t[i][k] = sgn * lp.a[i][k];
    tab.t[i][cols - 1] = sgn * lp.b[i];
    RowSense s = lp.sense[i];
    if (flip && s != RowSense::Eq) s = (s == RowSense::Le) ? RowSense::Ge : RowSense::Le;
    if (s == RowSense::Le) {
      tab.t[i][ns + i] = T(1);
      tab.basis[i] = ns + i;
    } else {
      if (s == RowSense::Ge) tab.t[i][ns + i] = T(-1);
      tab.t[i][na + i] = T(1);
      tab.basis[i] = na + i;
      is_art[na + i] = true;
    }
  }
  std::vector<bool> allowed(cols - 1, true);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.sense[i] == RowSense::Eq) allowed[ns + i] = false;  // unused slack column
    if (!is_art[na + i]) allowed[na + i] = false;
  }
  // phase 1: minimize the sum of artificials
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_art[tab.basis[i]]) continue;
    for (std::size_t k = 0; k < cols; ++k) {
      if (!is_art[k] || k == cols - 1) tab.t[m][k] -= tab.t[i][k];
    }
  }
  tab.run(allowed);
  LpResult<T> res;
  if (Tr::neg(tab.t[m][cols - 1])) return res;  // positive artificial mass left
  // drive zero-level artificials out of the basis
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_art[tab.basis[i]]) continue;
    for (std::size_t k = 0; k < na; ++k) {
      if (allowed[k] && !Tr::zero(tab.t[i][k])) {
        tab.pivot(i, k);
        break;
      }
    }
  }
  for (std::size_t k = na; k < na + m; ++k) allowed[k] = false;
  // phase 2: objective row = -c (minimize -c.x)
  for (auto& v : tab.t[m]) v = T(0);
  for (std::size_t k = 0; k < n; ++k) tab.t[m][k] = -lp.c[k];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bc = tab.basis[i];
    const T f = tab.t[m][bc];
    if (Tr::zero(f)) continue;
    for (std::size_t k = 0; k < cols; ++k) tab.t[m][k] -= f * tab.t[i][k];
  }
  if (!tab.run(allowed)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.value = tab.t[m][cols - 1];
  res.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) res.x[tab.basis[i]] = tab.t[i][cols - 1];
  return res;
}

}  // namespace bic
