#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bic/channel.hpp"
#include "bic/error.hpp"

namespace bic {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (base, stream); streams never share a generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Portable generator: only raw mt19937_64 output is used, never the
/// implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t base, std::uint64_t stream) : eng_(derive_seed(base, stream)) {}

  /// Uniform on the open interval (0,1).
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// Flat Dirichlet sample via normalized exponentials.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& x : p) {
      x = -std::log(uniform());
      s += x;
    }
    for (auto& x : p) x /= s;
    return p;
  }

 private:
  std::mt19937_64 eng_;
};

inline Kernel random_kernel(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> p;
  p.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = rng.dirichlet(cols);
    p.insert(p.end(), row.begin(), row.end());
  }
  return Kernel(rows, cols, std::move(p));
}

inline BicChannel random_channel(Rng& rng, std::size_t nx1, std::size_t nx2, std::size_t ny1, std::size_t ny2,
                                 std::size_t ny3) {
  Kernel k1 = random_kernel(rng, nx1, ny1);
  Kernel k2 = random_kernel(rng, nx1 * nx2, ny2);
  Kernel k3 = random_kernel(rng, nx2, ny3);
  return BicChannel::make(std::move(k1), std::move(k2), std::move(k3));
}

inline SimpleInput random_simple_input(Rng& rng, std::size_t nu1, std::size_t nx1, std::size_t nu2, std::size_t nx2) {
  SimpleInput in;
  in.nu1 = nu1;
  in.nu2 = nu2;
  in.pu1 = rng.dirichlet(nu1);
  in.px1_u1 = random_kernel(rng, nu1, nx1);
  in.pu2 = rng.dirichlet(nu2);
  in.px2_u2 = random_kernel(rng, nu2, nx2);
  return in;
}

struct FactoredSizes {
  std::size_t nq = 1, nu1 = 2, nv1 = 2, nv2 = 2, nu2 = 2;
};

/// Number of distinct tables f : U1 x V1 x V2 -> X1.
inline std::uint64_t count_f_tables(const FactoredSizes& s, std::size_t nx1) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < s.nu1 * s.nv1 * s.nv2; ++i) n *= nx1;
  return n;
}

/// The table with the given index, read as base-nx1 digits (first triple least significant).
inline std::vector<std::size_t> f_table(std::uint64_t index, std::size_t entries, std::size_t nx1) {
  std::vector<std::size_t> f(entries);
  for (auto& x : f) {
    x = static_cast<std::size_t>(index % nx1);
    index /= nx1;
  }
  return f;
}

inline FactoredInput random_factored_input(Rng& rng, const FactoredSizes& s, std::size_t nx1, std::size_t nx2,
                                           std::vector<std::size_t> f) {
  FactoredInput in;
  in.nq = s.nq;
  in.nu1 = s.nu1;
  in.nv1 = s.nv1;
  in.nv2 = s.nv2;
  in.nu2 = s.nu2;
  in.pq = rng.dirichlet(s.nq);
  in.pu1_q = random_kernel(rng, s.nq, s.nu1);
  in.pv1v2_u1q = random_kernel(rng, s.nq * s.nu1, s.nv1 * s.nv2);
  in.pu2_q = random_kernel(rng, s.nq, s.nu2);
  in.px2_u2q = random_kernel(rng, s.nq * s.nu2, nx2);
  in.f = std::move(f);
  if (in.f.size() != s.nu1 * s.nv1 * s.nv2) throw DimensionMismatch("f table has wrong size");
  for (std::size_t x : in.f)
    if (x >= nx1) throw DimensionMismatch("f table maps outside the X1 alphabet");
  return in;
}

/// Same law with independent satellites p(v1|u1,q) p(v2|u1,q).
inline FactoredInput random_factored_input_independent(Rng& rng, const FactoredSizes& s, std::size_t nx1,
                                                       std::size_t nx2, std::vector<std::size_t> f) {
  FactoredInput in = random_factored_input(rng, s, nx1, nx2, std::move(f));
  const Kernel a = random_kernel(rng, s.nq * s.nu1, s.nv1);
  const Kernel b = random_kernel(rng, s.nq * s.nu1, s.nv2);
  in.pv1v2_u1q = FactoredInput::product_satellites(a, b);
  return in;
}

// Companion laws: the same input with one auxiliary replaced.

/// U1 constant; X1 keeps its marginal.
inline SimpleInput collapse_u1(const SimpleInput& in) {
  SimpleInput out = in;
  out.nu1 = 1;
  out.pu1 = {1.0};
  out.px1_u1 = Kernel::pmf(in.px1());
  return out;
}

/// U2 constant; X2 keeps its marginal.
inline SimpleInput collapse_u2(const SimpleInput& in) {
  SimpleInput out = in;
  out.nu2 = 1;
  out.pu2 = {1.0};
  out.px2_u2 = Kernel::pmf(in.px2());
  return out;
}

/// U1 = X1.
inline SimpleInput u1_as_x1(const SimpleInput& in) {
  SimpleInput out = in;
  out.nu1 = in.px1_u1.cols();
  out.pu1 = in.px1();
  out.px1_u1 = Kernel::identity(out.nu1);
  return out;
}

/// U2 = X2.
inline SimpleInput u2_as_x2(const SimpleInput& in) {
  SimpleInput out = in;
  out.nu2 = in.px2_u2.cols();
  out.pu2 = in.px2();
  out.px2_u2 = Kernel::identity(out.nu2);
  return out;
}

/// U2 constant in a factored law; X2 keeps its law given Q.
inline FactoredInput collapse_u2(const FactoredInput& in) {
  FactoredInput out = in;
  const std::size_t nx2 = in.px2_u2q.cols();
  out.nu2 = 1;
  out.pu2_q = Kernel(in.nq, 1, std::vector<double>(in.nq, 1.0));
  std::vector<double> p(in.nq * nx2, 0.0);
  for (std::size_t q = 0; q < in.nq; ++q)
    for (std::size_t u = 0; u < in.nu2; ++u)
      for (std::size_t x = 0; x < nx2; ++x) p[q * nx2 + x] += in.pu2_q(q, u) * in.px2_u2q(q * in.nu2 + u, x);
  out.px2_u2q = Kernel(in.nq, nx2, std::move(p));
  return out;
}

/// Cloud center enlarged to (U1,V1), so the first satellite is constant and binning disappears.
/// The second satellite keeps its law given (U1,V1).
inline FactoredInput u1_as_v1(const FactoredInput& in) {
  FactoredInput out = in;
  const std::size_t nu = in.nu1 * in.nv1;
  out.nu1 = nu;
  out.nv1 = 1;
  std::vector<double> pu(in.nq * nu, 0.0), pv(in.nq * nu * in.nv2, 0.0);
  for (std::size_t q = 0; q < in.nq; ++q)
    for (std::size_t u1 = 0; u1 < in.nu1; ++u1) {
      const std::size_t row = q * in.nu1 + u1;
      for (std::size_t v1 = 0; v1 < in.nv1; ++v1) {
        double m = 0.0;
        for (std::size_t v2 = 0; v2 < in.nv2; ++v2) m += in.pv1v2_u1q(row, v1 * in.nv2 + v2);
        const std::size_t nu_idx = u1 * in.nv1 + v1;
        pu[q * nu + nu_idx] = in.pu1_q(q, u1) * m;
        for (std::size_t v2 = 0; v2 < in.nv2; ++v2) {
          const double c = m > 0.0 ? in.pv1v2_u1q(row, v1 * in.nv2 + v2) / m : 1.0 / static_cast<double>(in.nv2);
          pv[(q * nu + nu_idx) * in.nv2 + v2] = c;
        }
      }
    }
  out.pu1_q = Kernel(in.nq, nu, std::move(pu));
  out.pv1v2_u1q = Kernel(in.nq * nu, in.nv2, std::move(pv));
  out.f.assign(nu * in.nv2, 0);
  for (std::size_t u1 = 0; u1 < in.nu1; ++u1)
    for (std::size_t v1 = 0; v1 < in.nv1; ++v1)
      for (std::size_t v2 = 0; v2 < in.nv2; ++v2) out.f[(u1 * in.nv1 + v1) * in.nv2 + v2] = in.f_at(u1, v1, v2);
  return out;
}

/// Embeds p(u1)p(x1|u1)p(u2)p(x2|u2) with V1 = X1 and V2 = U1 (V2 constant given U1).
inline FactoredInput embed_v1_as_x1(const SimpleInput& in) {
  FactoredInput out;
  const std::size_t nx1 = in.px1_u1.cols();
  out.nq = 1;
  out.pq = {1.0};
  out.nu1 = in.nu1;
  out.nv1 = nx1;
  out.nv2 = 1;
  out.nu2 = in.nu2;
  out.pu1_q = Kernel::pmf(in.pu1);
  out.pv1v2_u1q = in.px1_u1;
  out.pu2_q = Kernel::pmf(in.pu2);
  out.px2_u2q = in.px2_u2;
  out.f.resize(in.nu1 * nx1);
  for (std::size_t u = 0; u < in.nu1; ++u)
    for (std::size_t x = 0; x < nx1; ++x) out.f[u * nx1 + x] = x;
  return out;
}

/// Embeds p(u1)p(x1|u1)p(u2)p(x2|u2) with V1 = U1 (V1 constant given U1) and V2 = X1.
inline FactoredInput embed_v2_as_x1(const SimpleInput& in) {
  FactoredInput out = embed_v1_as_x1(in);
  const std::size_t nx1 = in.px1_u1.cols();
  out.nv1 = 1;
  out.nv2 = nx1;
  return out;
}

/// Time-sharing merge with U1 = (U1_Q, Q): |U1| = |U1a| + |U1b|, Q = a with probability alpha.
/// Both inputs must share the transmitter-2 law, so that X2 stays independent of Q.
inline SimpleInput merge_time_sharing(const SimpleInput& a, const SimpleInput& b, double alpha) {
  if (!(a.pu2 == b.pu2) || !(a.px2_u2 == b.px2_u2))
    throw DimensionMismatch("time-sharing merge needs a shared p(u2)p(x2|u2)");
  if (a.px1_u1.cols() != b.px1_u1.cols()) throw DimensionMismatch("inputs use different X1 alphabets");
  const std::size_t nx1 = a.px1_u1.cols();
  SimpleInput out = a;
  out.nu1 = a.nu1 + b.nu1;
  out.pu1.clear();
  for (double p : a.pu1) out.pu1.push_back(alpha * p);
  for (double p : b.pu1) out.pu1.push_back((1.0 - alpha) * p);
  std::vector<double> rows(a.px1_u1.data());
  rows.insert(rows.end(), b.px1_u1.data().begin(), b.px1_u1.data().end());
  out.px1_u1 = Kernel(out.nu1, nx1, std::move(rows));
  return out;
}

}  // namespace bic
