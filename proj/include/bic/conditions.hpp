#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bic/channel.hpp"
#include "bic/error.hpp"
#include "bic/info_measures.hpp"
#include "bic/joint_law.hpp"
#include "bic/sampling.hpp"

namespace bic {

/// A violation must exceed this margin.
inline constexpr double kViolationTol = 1e-9;
/// Allowed drift between the search evaluator and the from-scratch recomputation.
inline constexpr double kRevalidateTol = 1e-10;

enum class Condition { ObliviousLessNoisy, CognizantLessNoisy, Strong, VeryStrong };

inline std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::ObliviousLessNoisy: return "oblivious";
    case Condition::CognizantLessNoisy: return "cognizant";
    case Condition::Strong: return "strong";
    case Condition::VeryStrong: return "verystrong";
  }
  return "?";
}

inline Condition parse_condition(std::string_view s) {
  for (Condition c : {Condition::ObliviousLessNoisy, Condition::CognizantLessNoisy, Condition::Strong,
                      Condition::VeryStrong})
    if (condition_name(c) == s) return c;
  throw ParseError("unknown condition '" + std::string(s) + "'");
}

/// Search configuration. Samples are drawn in groups; each group runs local ascent
/// from its best sample, and the search stops after the first group that violates.
struct Budget {
  std::size_t samples = 10000;
  std::size_t group = 100;
  std::size_t ascent_steps = 200;
  std::uint64_t seed = 0;
  /// |U1| for the less-noisy searches; 0 means nx1+1.
  std::size_t u1_card = 0;
};

/// Product input: p(u1,x1) for the less-noisy conditions (nu1 = 1 for the interference ones) and p(x2).
struct ConditionWitness {
  std::size_t nu1 = 1;
  std::vector<double> pu1x1;
  std::vector<double> px2;
};

enum class VerdictStatus { Violated, NoViolationFound };

struct Verdict {
  Condition condition = Condition::ObliviousLessNoisy;
  VerdictStatus status = VerdictStatus::NoViolationFound;
  std::optional<ConditionWitness> witness;
  /// The two sides of the tested inequality at the witness, recomputed from scratch.
  double lhs = 0.0, rhs = 0.0;
  /// Largest violation seen (negative when none).
  double gap = 0.0;
  std::size_t samples_tested = 0;
  Budget budget;
  std::string lhs_name, rhs_name;
};

namespace detail {

/// I(U;Y) for joint P(u,x) (row-major nu x nx) sent through W(x,y).
inline double mi_through(const std::vector<double>& P, std::size_t nu, std::size_t nx, const std::vector<double>& W,
                         std::size_t ny) {
  std::vector<double> py(ny, 0.0), puy(ny);
  double hy_u = 0.0;
  for (std::size_t u = 0; u < nu; ++u) {
    double pu = 0.0;
    std::fill(puy.begin(), puy.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      const double m = P[u * nx + x];
      if (m <= 0.0) continue;
      pu += m;
      for (std::size_t y = 0; y < ny; ++y) puy[y] += m * W[x * ny + y];
    }
    if (pu <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      py[y] += puy[y];
      const double c = puy[y] / pu;
      if (c > 0.0) hy_u -= puy[y] * std::log2(c);
    }
  }
  double hy = 0.0;
  for (double p : py)
    if (p > 0.0) hy -= p * std::log2(p);
  return hy - hy_u;
}

/// Y2 kernel from x1 with X2 fixed to one symbol.
inline std::vector<double> y2_given_x1_at(const BicChannel& ch, std::size_t x2) {
  std::vector<double> w(ch.nx1 * ch.ny2);
  for (std::size_t x1 = 0; x1 < ch.nx1; ++x1)
    for (std::size_t y = 0; y < ch.ny2; ++y) w[x1 * ch.ny2 + y] = ch.p_y2(x1, x2, y);
  return w;
}

/// Y2 kernel from x2 with X1 fixed to one symbol.
inline std::vector<double> y2_given_x2_at(const BicChannel& ch, std::size_t x1) {
  std::vector<double> w(ch.nx2 * ch.ny2);
  for (std::size_t x2 = 0; x2 < ch.nx2; ++x2)
    for (std::size_t y = 0; y < ch.ny2; ++y) w[x2 * ch.ny2 + y] = ch.p_y2(x1, x2, y);
  return w;
}

inline std::vector<double> diag(const std::vector<double>& p) {
  std::vector<double> d(p.size() * p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) d[i * p.size() + i] = p[i];
  return d;
}

inline std::vector<double> marginal_x1(const ConditionWitness& w, std::size_t nx1) {
  std::vector<double> p(nx1, 0.0);
  for (std::size_t u = 0; u < w.nu1; ++u)
    for (std::size_t x = 0; x < nx1; ++x) p[x] += w.pu1x1[u * nx1 + x];
  return p;
}

}  // namespace detail

/// Both sides of the tested inequality at a witness, by direct evaluation.
/// Oblivious: I(U1;Y1) <= I(U1;Y2). Cognizant: I(U1;Y1) >= I(U1;Y2|X2).
/// Strong: I(X2;Y2|X1) >= I(X2;Y3). Very strong: I(X2;Y2) >= I(X2;Y3).
inline std::pair<double, double> condition_sides(const BicChannel& ch, Condition c, const ConditionWitness& w) {
  using namespace detail;
  const std::size_t nx1 = ch.nx1, nx2 = ch.nx2;
  switch (c) {
    case Condition::ObliviousLessNoisy: {
      std::vector<double> w2(nx1 * ch.ny2, 0.0);
      for (std::size_t x2 = 0; x2 < nx2; ++x2) {
        const auto k = y2_given_x1_at(ch, x2);
        for (std::size_t i = 0; i < k.size(); ++i) w2[i] += w.px2[x2] * k[i];
      }
      return {mi_through(w.pu1x1, w.nu1, nx1, ch.k1.data(), ch.ny1), mi_through(w.pu1x1, w.nu1, nx1, w2, ch.ny2)};
    }
    case Condition::CognizantLessNoisy: {
      double r = 0.0;
      for (std::size_t x2 = 0; x2 < nx2; ++x2)
        if (w.px2[x2] > 0.0) r += w.px2[x2] * mi_through(w.pu1x1, w.nu1, nx1, y2_given_x1_at(ch, x2), ch.ny2);
      return {mi_through(w.pu1x1, w.nu1, nx1, ch.k1.data(), ch.ny1), r};
    }
    case Condition::Strong: {
      const auto px1 = marginal_x1(w, nx1);
      const auto dq = diag(w.px2);
      double l = 0.0;
      for (std::size_t x1 = 0; x1 < nx1; ++x1)
        if (px1[x1] > 0.0) l += px1[x1] * mi_through(dq, nx2, nx2, y2_given_x2_at(ch, x1), ch.ny2);
      return {l, mi_through(dq, nx2, nx2, ch.k3.data(), ch.ny3)};
    }
    case Condition::VeryStrong: {
      const auto px1 = marginal_x1(w, nx1);
      std::vector<double> wy(nx2 * ch.ny2, 0.0);
      for (std::size_t x1 = 0; x1 < nx1; ++x1) {
        const auto k = y2_given_x2_at(ch, x1);
        for (std::size_t i = 0; i < k.size(); ++i) wy[i] += px1[x1] * k[i];
      }
      const auto dq = diag(w.px2);
      return {mi_through(dq, nx2, nx2, wy, ch.ny2), mi_through(dq, nx2, nx2, ch.k3.data(), ch.ny3)};
    }
  }
  return {0.0, 0.0};
}

/// Signed violation: positive means the tested inequality fails at the witness.
inline double condition_gap(Condition c, double lhs, double rhs) {
  return c == Condition::ObliviousLessNoisy ? lhs - rhs : rhs - lhs;
}

inline double condition_gap(const BicChannel& ch, Condition c, const ConditionWitness& w) {
  const auto [l, r] = condition_sides(ch, c, w);
  return condition_gap(c, l, r);
}

/// The witness as an input law, U2 constant.
inline SimpleInput witness_input(const BicChannel& ch, Condition c, const ConditionWitness& w) {
  SimpleInput in;
  const std::size_t nx1 = ch.nx1;
  std::vector<double> joint = w.pu1x1;
  std::size_t nu = w.nu1;
  if (c == Condition::Strong || c == Condition::VeryStrong) {
    // U1 = X1 so that conditioning on U1 is conditioning on X1
    joint = detail::diag(detail::marginal_x1(w, nx1));
    nu = nx1;
  }
  in.nu1 = nu;
  in.pu1.assign(nu, 0.0);
  std::vector<double> rows(nu * nx1);
  for (std::size_t u = 0; u < nu; ++u) {
    for (std::size_t x = 0; x < nx1; ++x) in.pu1[u] += joint[u * nx1 + x];
    for (std::size_t x = 0; x < nx1; ++x)
      rows[u * nx1 + x] = in.pu1[u] > 0.0 ? joint[u * nx1 + x] / in.pu1[u] : 1.0 / static_cast<double>(nx1);
  }
  in.px1_u1 = Kernel(nu, nx1, std::move(rows));
  in.nu2 = 1;
  in.pu2 = {1.0};
  in.px2_u2 = Kernel::pmf(w.px2);
  return in;
}

/// Names of the two sides, as atoms of the witness law.
inline std::pair<std::string, std::string> condition_atoms(Condition c) {
  switch (c) {
    case Condition::ObliviousLessNoisy: return {"I(U1;Y1)", "I(U1;Y2)"};
    case Condition::CognizantLessNoisy: return {"I(U1;Y1)", "I(U1;Y2|X2)"};
    case Condition::Strong: return {"I(X2;Y2|X1)", "I(X2;Y3)"};
    case Condition::VeryStrong: return {"I(X2;Y2)", "I(X2;Y3)"};
  }
  return {};
}

/// Recomputes both sides through the generic joint-law path.
inline std::pair<double, double> recompute_sides(const BicChannel& ch, Condition c, const ConditionWitness& w) {
  const JointLaw j = assemble_joint_simple(ch, witness_input(ch, c, w));
  EntropyCache cache(j);
  auto [l, r] = condition_atoms(c);
  if (c == Condition::Strong) l = "I(X2;Y2|U1)";  // U1 = X1 in the witness law
  return {cache.mutual_info(MiAtom::parse(l)), cache.mutual_info(MiAtom::parse(r))};
}

namespace detail {

struct SearchPoint {
  std::vector<double> a;  // p(u1,x1), or p(x1)
  std::vector<double> b;  // p(x2)
  double gap = -1e300;
};

inline ConditionWitness to_witness(const SearchPoint& s, std::size_t nu1) { return {nu1, s.a, s.b}; }

/// Pairwise mass transfer within each block; the step halves after a sweep without improvement.
inline void ascend(SearchPoint& s, const std::function<double(const SearchPoint&)>& eval, std::size_t steps) {
  double delta = 0.25;
  for (std::size_t it = 0; it < steps && delta > 1e-12; ++it) {
    bool improved = false;
    for (auto* blk : {&s.a, &s.b}) {
      auto& v = *blk;
      for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (i == j || v[i] <= 0.0) continue;
          const double t = std::min(delta, v[i]);
          const double vi = v[i], vj = v[j];
          v[i] = vi - t;
          v[j] = vj + t;
          const double g = eval(s);
          if (g > s.gap + 1e-14) {
            s.gap = g;
            improved = true;
          } else {
            v[i] = vi;
            v[j] = vj;
          }
        }
    }
    if (!improved) delta *= 0.5;
  }
}

inline std::vector<double> point_mass(std::size_t n, std::size_t k) {
  std::vector<double> p(n, 0.0);
  p[k] = 1.0;
  return p;
}

inline std::vector<double> uniform_pmf(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

}  // namespace detail

/// Budget-bounded search for a violation of one condition.
inline Verdict check_condition(const BicChannel& ch, Condition c, const Budget& budget = {}) {
  ch.validate();
  using detail::SearchPoint;
  const bool less_noisy = c == Condition::ObliviousLessNoisy || c == Condition::CognizantLessNoisy;
  const std::size_t nu1 = less_noisy ? (budget.u1_card ? budget.u1_card : ch.nx1 + 1) : 1;
  const std::size_t na = nu1 * ch.nx1, nb = ch.nx2;
  auto eval = [&](const SearchPoint& s) { return condition_gap(ch, c, detail::to_witness(s, nu1)); };

  Verdict v;
  v.condition = c;
  v.budget = budget;
  std::tie(v.lhs_name, v.rhs_name) = condition_atoms(c);
  SearchPoint best;

  auto consider = [&](SearchPoint s, bool climb) {
    s.gap = eval(s);
    if (climb) detail::ascend(s, eval, budget.ascent_steps);
    if (s.gap > best.gap) best = s;
  };

  // anchors: U1 = X1 (or the input itself) with uniform or point-mass marginals
  std::vector<std::vector<double>> a_anchors, b_anchors;
  auto embed = [&](const std::vector<double>& px1) {
    std::vector<double> a(na, 0.0);
    for (std::size_t x = 0; x < ch.nx1; ++x) a[(less_noisy ? x : 0) * ch.nx1 + x] = px1[x];
    return a;
  };
  a_anchors.push_back(embed(detail::uniform_pmf(ch.nx1)));
  for (std::size_t x = 0; x < ch.nx1; ++x) a_anchors.push_back(embed(detail::point_mass(ch.nx1, x)));
  b_anchors.push_back(detail::uniform_pmf(nb));
  for (std::size_t x = 0; x < nb; ++x) b_anchors.push_back(detail::point_mass(nb, x));
  for (const auto& a : a_anchors)
    for (const auto& b : b_anchors) consider({a, b}, true);

  const std::size_t group = std::max<std::size_t>(budget.group, 1);
  for (std::size_t g = 0; v.samples_tested < budget.samples && best.gap <= kViolationTol; ++g) {
    Rng rng(budget.seed, g);
    SearchPoint top;
    for (std::size_t k = 0; k < group; ++k) {
      SearchPoint s{rng.dirichlet(na), rng.dirichlet(nb)};
      s.gap = eval(s);
      ++v.samples_tested;
      if (s.gap > top.gap) top = s;
      if (s.gap > best.gap) best = s;
    }
    detail::ascend(top, eval, budget.ascent_steps);
    if (top.gap > best.gap) best = top;
  }

  const ConditionWitness w = detail::to_witness(best, nu1);
  const auto [lhs, rhs] = recompute_sides(ch, c, w);
  const double gap = condition_gap(c, lhs, rhs);
  if (std::abs(gap - best.gap) > kRevalidateTol)
    throw Error("witness re-validation drifted by " + std::to_string(std::abs(gap - best.gap)));
  v.gap = gap;
  v.lhs = lhs;
  v.rhs = rhs;
  if (gap > kViolationTol) {
    v.status = VerdictStatus::Violated;
    v.witness = w;
  }
  return v;
}

inline Verdict check_oblivious_less_noisy(const BicChannel& ch, const Budget& b = {}) {
  return check_condition(ch, Condition::ObliviousLessNoisy, b);
}
inline Verdict check_cognizant_less_noisy(const BicChannel& ch, const Budget& b = {}) {
  return check_condition(ch, Condition::CognizantLessNoisy, b);
}
inline Verdict check_strong(const BicChannel& ch, const Budget& b = {}) { return check_condition(ch, Condition::Strong, b); }
inline Verdict check_very_strong(const BicChannel& ch, const Budget& b = {}) {
  return check_condition(ch, Condition::VeryStrong, b);
}

}  // namespace bic
