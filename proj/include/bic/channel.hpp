#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bic/error.hpp"

namespace bic {

inline constexpr double kStochasticTol = 1e-12;

/// Row-stochastic matrix: row r is the conditional pmf given configuration r.
class Kernel {
 public:
  Kernel() = default;
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> probs)
      : rows_(rows), cols_(cols), probs_(std::move(probs)) {
    if (probs_.size() != rows_ * cols_) {
      throw DimensionMismatch("kernel storage holds " + std::to_string(probs_.size()) +
                              " entries, expected " + std::to_string(rows_ * cols_));
    }
  }

  static Kernel from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DimensionMismatch("kernel has no rows");
    const std::size_t cols = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) {
        throw DimensionMismatch("kernel row " + std::to_string(r) + " has " +
                                std::to_string(rows[r].size()) + " columns, expected " +
                                std::to_string(cols));
      }
      flat.insert(flat.end(), rows[r].begin(), rows[r].end());
    }
    return Kernel(rows.size(), cols, std::move(flat));
  }

  static Kernel identity(std::size_t n) {
    std::vector<double> p(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0;
    return Kernel(n, n, std::move(p));
  }

  /// Deterministic kernel sending row r to column map[r].
  static Kernel deterministic(std::span<const std::size_t> map, std::size_t cols) {
    std::vector<double> p(map.size() * cols, 0.0);
    for (std::size_t r = 0; r < map.size(); ++r) {
      if (map[r] >= cols) throw DimensionMismatch("deterministic map outside output alphabet");
      p[r * cols + map[r]] = 1.0;
    }
    return Kernel(map.size(), cols, std::move(p));
  }

  /// Single-row kernel holding a pmf.
  static Kernel pmf(std::vector<double> p) {
    const std::size_t n = p.size();
    return Kernel(1, n, std::move(p));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return probs_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return probs_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {probs_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {probs_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return probs_; }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
    return out;
  }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> probs_;
};

/// Binary symmetric channel with crossover probability p.
inline Kernel bsc(double p) { return Kernel(2, 2, {1.0 - p, p, p, 1.0 - p}); }

/// Kernel product: (a*b)(c|r) = sum_m a(m|r) b(c|m).
inline Kernel compose(const Kernel& a, const Kernel& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("cannot compose kernels: inner sizes differ");
  std::vector<double> p(a.rows() * b.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t m = 0; m < a.cols(); ++m)
      for (std::size_t c = 0; c < b.cols(); ++c) p[r * b.cols() + c] += a(r, m) * b(m, c);
  return Kernel(a.rows(), b.cols(), std::move(p));
}

/// Throws NegativeEntry or RowNotStochastic when a row is not a pmf within tol.
inline void validate_kernel(const Kernel& k, double tol = kStochasticTol) {
  for (std::size_t r = 0; r < k.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k.cols(); ++c) {
      const double v = k(r, c);
      if (!std::isfinite(v) || v < 0.0) throw NegativeEntry(r, c, v);
      sum += v;
    }
    const double dev = std::abs(sum - 1.0);
    if (dev > tol) throw RowNotStochastic(r, dev);
  }
}

inline void validate_pmf(std::span<const double> p, double tol = kStochasticTol) {
  validate_kernel(Kernel(1, p.size(), std::vector<double>(p.begin(), p.end())), tol);
}

/// DM-BIC with p(y1,y2,y3|x1,x2) = p(y1|x1) p(y2|x1,x2) p(y3|x2).
/// Rows of k2 are indexed by x1*nx2 + x2.
struct BicChannel {
  std::size_t nx1 = 0, nx2 = 0, ny1 = 0, ny2 = 0, ny3 = 0;
  Kernel k1, k2, k3;

  static BicChannel make(Kernel k1, Kernel k2, Kernel k3) {
    BicChannel ch;
    ch.nx1 = k1.rows();
    ch.nx2 = k3.rows();
    ch.ny1 = k1.cols();
    ch.ny2 = k2.cols();
    ch.ny3 = k3.cols();
    ch.k1 = std::move(k1);
    ch.k2 = std::move(k2);
    ch.k3 = std::move(k3);
    ch.validate();
    return ch;
  }

  double p_y2(std::size_t x1, std::size_t x2, std::size_t y2) const { return k2(x1 * nx2 + x2, y2); }

  void validate() const {
    if (nx1 == 0 || nx2 == 0 || ny1 == 0 || ny2 == 0 || ny3 == 0)
      throw DimensionMismatch("alphabet sizes must be positive");
    auto check = [](const Kernel& k, std::size_t rows, std::size_t cols, const char* name) {
      if (k.rows() != rows || k.cols() != cols) {
        throw DimensionMismatch(std::string(name) + " is " + std::to_string(k.rows()) + "x" +
                                std::to_string(k.cols()) + ", expected " + std::to_string(rows) +
                                "x" + std::to_string(cols));
      }
    };
    check(k1, nx1, ny1, "k1");
    check(k2, nx1 * nx2, ny2, "k2");
    check(k3, nx2, ny3, "k3");
    validate_kernel(k1);
    validate_kernel(k2);
    validate_kernel(k3);
  }

  friend bool operator==(const BicChannel&, const BicChannel&) = default;
};

/// Input law p(q)p(u1|q)p(v1,v2|u1,q)p(u2|q)p(x2|u2,q) with X1 = f(U1,V1,V2).
///
/// Row layouts: pu1_q and pu2_q by q; pv1v2_u1q by q*nu1+u1 with columns v1*nv2+v2;
/// px2_u2q by q*nu2+u2; f by (u1*nv1+v1)*nv2+v2.
struct FactoredInput {
  std::size_t nq = 1, nu1 = 1, nv1 = 1, nv2 = 1, nu2 = 1;
  std::vector<double> pq{1.0};
  Kernel pu1_q, pv1v2_u1q, pu2_q, px2_u2q;
  std::vector<std::size_t> f;

  std::size_t f_at(std::size_t u1, std::size_t v1, std::size_t v2) const {
    return f[(u1 * nv1 + v1) * nv2 + v2];
  }

  /// Builds the joint satellite law from conditionally independent factors p(v1|u1,q)p(v2|u1,q).
  static Kernel product_satellites(const Kernel& pv1_u1q, const Kernel& pv2_u1q) {
    if (pv1_u1q.rows() != pv2_u1q.rows())
      throw DimensionMismatch("pv1_u1q and pv2_u1q have different row counts");
    const std::size_t nv1 = pv1_u1q.cols(), nv2 = pv2_u1q.cols();
    std::vector<double> p(pv1_u1q.rows() * nv1 * nv2);
    for (std::size_t r = 0; r < pv1_u1q.rows(); ++r)
      for (std::size_t a = 0; a < nv1; ++a)
        for (std::size_t b = 0; b < nv2; ++b) p[(r * nv1 + a) * nv2 + b] = pv1_u1q(r, a) * pv2_u1q(r, b);
    return Kernel(pv1_u1q.rows(), nv1 * nv2, std::move(p));
  }

  void validate(std::size_t nx1, std::size_t nx2) const {
    if (nq == 0 || nu1 == 0 || nv1 == 0 || nv2 == 0 || nu2 == 0)
      throw DimensionMismatch("auxiliary alphabet sizes must be positive");
    auto check = [](const Kernel& k, std::size_t rows, std::size_t cols, const char* name) {
      if (k.rows() != rows || k.cols() != cols) {
        throw DimensionMismatch(std::string(name) + " is " + std::to_string(k.rows()) + "x" +
                                std::to_string(k.cols()) + ", expected " + std::to_string(rows) +
                                "x" + std::to_string(cols));
      }
      validate_kernel(k);
    };
    if (pq.size() != nq) throw DimensionMismatch("pq has wrong length");
    validate_pmf(pq);
    check(pu1_q, nq, nu1, "pu1_q");
    check(pv1v2_u1q, nq * nu1, nv1 * nv2, "pv1v2_u1q");
    check(pu2_q, nq, nu2, "pu2_q");
    check(px2_u2q, nq * nu2, nx2, "px2_u2q");
    if (f.size() != nu1 * nv1 * nv2)
      throw DimensionMismatch("f must be defined on all " + std::to_string(nu1 * nv1 * nv2) +
                              " (u1,v1,v2) triples");
    for (std::size_t x : f) {
      if (x >= nx1) throw DimensionMismatch("f maps to symbol " + std::to_string(x) + " >= nx1");
    }
  }
};

/// Input law p(u1)p(x1|u1)p(u2)p(x2|u2).
struct SimpleInput {
  std::size_t nu1 = 1, nu2 = 1;
  std::vector<double> pu1{1.0}, pu2{1.0};
  Kernel px1_u1, px2_u2;

  void validate(std::size_t nx1, std::size_t nx2) const {
    if (nu1 == 0 || nu2 == 0) throw DimensionMismatch("auxiliary alphabet sizes must be positive");
    if (pu1.size() != nu1) throw DimensionMismatch("pu1 has wrong length");
    if (pu2.size() != nu2) throw DimensionMismatch("pu2 has wrong length");
    validate_pmf(pu1);
    validate_pmf(pu2);
    if (px1_u1.rows() != nu1 || px1_u1.cols() != nx1) throw DimensionMismatch("px1_u1 has wrong shape");
    if (px2_u2.rows() != nu2 || px2_u2.cols() != nx2) throw DimensionMismatch("px2_u2 has wrong shape");
    validate_kernel(px1_u1);
    validate_kernel(px2_u2);
  }

  std::vector<double> px1() const {
    std::vector<double> p(px1_u1.cols(), 0.0);
    for (std::size_t u = 0; u < nu1; ++u)
      for (std::size_t x = 0; x < p.size(); ++x) p[x] += pu1[u] * px1_u1(u, x);
    return p;
  }

  std::vector<double> px2() const {
    std::vector<double> p(px2_u2.cols(), 0.0);
    for (std::size_t u = 0; u < nu2; ++u)
      for (std::size_t x = 0; x < p.size(); ++x) p[x] += pu2[u] * px2_u2(u, x);
    return p;
  }
};

}  // namespace bic
