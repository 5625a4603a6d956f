#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bic/channel.hpp"
#include "bic/error.hpp"
#include "bic/variables.hpp"

namespace bic {

inline constexpr double kMassTol = 1e-10;

/// Dense probability tensor over an ordered list of variables.
/// Row-major: the last variable varies fastest.
struct JointLaw {
  std::vector<Var> vars;
  std::vector<std::size_t> dims;
  std::vector<double> probs;

  VarSet var_set() const {
    VarSet s;
    for (Var v : vars) s.insert(v);
    return s;
  }

  std::size_t position(Var v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return i;
    throw UnknownVariable("variable " + std::string(var_name(v)) + " not present in joint law");
  }

  std::size_t dim(Var v) const { return dims[position(v)]; }

  double total_mass() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

  void validate() const {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    if (n != probs.size() || vars.size() != dims.size())
      throw DimensionMismatch("joint law storage does not match its dimensions");
    for (double p : probs)
      if (!(p >= 0.0)) throw NegativeEntry(0, 0, p);
    const double dev = std::abs(total_mass() - 1.0);
    if (dev > kMassTol) throw RowNotStochastic(0, dev);
  }
};

/// Sums out every variable not in keep. Variables keep their relative order.
inline JointLaw marginalize(const JointLaw& j, VarSet keep) {
  if (!keep.subset_of(j.var_set()))
    throw UnknownVariable("cannot keep " + (keep - j.var_set()).to_string() + ": not in joint law");
  JointLaw out;
  const std::size_t n = j.vars.size();
  // stride of each source axis inside the output tensor, 0 when summed out
  std::vector<std::size_t> ostride(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (keep.contains(j.vars[i])) {
      out.vars.push_back(j.vars[i]);
      out.dims.push_back(j.dims[i]);
    }
  }
  std::size_t s = 1;
  for (std::size_t i = n; i-- > 0;) {
    if (keep.contains(j.vars[i])) {
      ostride[i] = s;
      s *= j.dims[i];
    }
  }
  out.probs.assign(s, 0.0);
  std::vector<std::size_t> idx(n, 0);
  std::size_t oi = 0;
  for (double p : j.probs) {
    out.probs[oi] += p;
    for (std::size_t a = n; a-- > 0;) {
      if (++idx[a] < j.dims[a]) {
        oi += ostride[a];
        break;
      }
      oi -= ostride[a] * (j.dims[a] - 1);
      idx[a] = 0;
    }
  }
  return out;
}

/// Joint law of (Q,U1,V1,V2,X1,U2,X2,Y1,Y2,Y3).
///
/// V1 and V2 are stored as the superposition pairs (U1,V1) and (U1,V2): the
/// symbol index of V1 is u1*nv1+v1. Hence any quantity involving V1 or V2
/// also sees the cloud center, and U1 is a function of either satellite.
inline JointLaw assemble_joint(const BicChannel& ch, const FactoredInput& in) {
  ch.validate();
  in.validate(ch.nx1, ch.nx2);
  JointLaw j;
  j.vars = {Var::Q, Var::U1, Var::V1, Var::V2, Var::X1, Var::U2, Var::X2, Var::Y1, Var::Y2, Var::Y3};
  const std::size_t dv1 = in.nu1 * in.nv1, dv2 = in.nu1 * in.nv2;
  j.dims = {in.nq, in.nu1, dv1, dv2, ch.nx1, in.nu2, ch.nx2, ch.ny1, ch.ny2, ch.ny3};
  std::size_t total = 1;
  for (std::size_t d : j.dims) total *= d;
  j.probs.assign(total, 0.0);

  const std::size_t sY3 = 1, sY2 = ch.ny3, sY1 = sY2 * ch.ny2, sX2 = sY1 * ch.ny1, sU2 = sX2 * ch.nx2,
                    sX1 = sU2 * in.nu2, sV2 = sX1 * ch.nx1, sV1 = sV2 * dv2, sU1 = sV1 * dv1,
                    sQ = sU1 * in.nu1;
  (void)sY3;
  for (std::size_t q = 0; q < in.nq; ++q) {
    const double p_q = in.pq[q];
    if (p_q == 0.0) continue;
    for (std::size_t u1 = 0; u1 < in.nu1; ++u1) {
      const double p_u1 = p_q * in.pu1_q(q, u1);
      if (p_u1 == 0.0) continue;
      for (std::size_t v1 = 0; v1 < in.nv1; ++v1) {
        for (std::size_t v2 = 0; v2 < in.nv2; ++v2) {
          const double p_v = p_u1 * in.pv1v2_u1q(q * in.nu1 + u1, v1 * in.nv2 + v2);
          if (p_v == 0.0) continue;
          const std::size_t x1 = in.f_at(u1, v1, v2);
          for (std::size_t u2 = 0; u2 < in.nu2; ++u2) {
            const double p_u2 = p_v * in.pu2_q(q, u2);
            if (p_u2 == 0.0) continue;
            for (std::size_t x2 = 0; x2 < ch.nx2; ++x2) {
              const double p_x2 = p_u2 * in.px2_u2q(q * in.nu2 + u2, x2);
              if (p_x2 == 0.0) continue;
              const std::size_t base = q * sQ + u1 * sU1 + (u1 * in.nv1 + v1) * sV1 +
                                       (u1 * in.nv2 + v2) * sV2 + x1 * sX1 + u2 * sU2 + x2 * sX2;
              for (std::size_t y1 = 0; y1 < ch.ny1; ++y1) {
                const double p_y1 = p_x2 * ch.k1(x1, y1);
                if (p_y1 == 0.0) continue;
                for (std::size_t y2 = 0; y2 < ch.ny2; ++y2) {
                  const double p_y2 = p_y1 * ch.p_y2(x1, x2, y2);
                  if (p_y2 == 0.0) continue;
                  for (std::size_t y3 = 0; y3 < ch.ny3; ++y3)
                    j.probs[base + y1 * sY1 + y2 * sY2 + y3] = p_y2 * ch.k3(x2, y3);
                }
              }
            }
          }
        }
      }
    }
  }
  return j;
}

/// Joint law of (U1,X1,U2,X2,Y1,Y2,Y3) for p(u1)p(x1|u1)p(u2)p(x2|u2).
inline JointLaw assemble_joint_simple(const BicChannel& ch, const SimpleInput& in) {
  ch.validate();
  in.validate(ch.nx1, ch.nx2);
  JointLaw j;
  j.vars = {Var::U1, Var::X1, Var::U2, Var::X2, Var::Y1, Var::Y2, Var::Y3};
  j.dims = {in.nu1, ch.nx1, in.nu2, ch.nx2, ch.ny1, ch.ny2, ch.ny3};
  std::size_t total = 1;
  for (std::size_t d : j.dims) total *= d;
  j.probs.assign(total, 0.0);
  const std::size_t sY2 = ch.ny3, sY1 = sY2 * ch.ny2, sX2 = sY1 * ch.ny1, sU2 = sX2 * ch.nx2,
                    sX1 = sU2 * in.nu2, sU1 = sX1 * ch.nx1;
  for (std::size_t u1 = 0; u1 < in.nu1; ++u1)
    for (std::size_t x1 = 0; x1 < ch.nx1; ++x1) {
      const double a = in.pu1[u1] * in.px1_u1(u1, x1);
      if (a == 0.0) continue;
      for (std::size_t u2 = 0; u2 < in.nu2; ++u2)
        for (std::size_t x2 = 0; x2 < ch.nx2; ++x2) {
          const double b = a * in.pu2[u2] * in.px2_u2(u2, x2);
          if (b == 0.0) continue;
          const std::size_t base = u1 * sU1 + x1 * sX1 + u2 * sU2 + x2 * sX2;
          for (std::size_t y1 = 0; y1 < ch.ny1; ++y1)
            for (std::size_t y2 = 0; y2 < ch.ny2; ++y2)
              for (std::size_t y3 = 0; y3 < ch.ny3; ++y3)
                j.probs[base + y1 * sY1 + y2 * sY2 + y3] =
                    b * ch.k1(x1, y1) * ch.p_y2(x1, x2, y2) * ch.k3(x2, y3);
        }
    }
  return j;
}

}  // namespace bic
