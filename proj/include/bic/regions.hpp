#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bic/error.hpp"
#include "bic/geometry.hpp"
#include "bic/info_measures.hpp"
#include "bic/polytope.hpp"

namespace bic {

enum class RegionKind { R, Rhat, R1, R2, Rp1, Rp2, CapStrong, CapVeryStrong };

inline constexpr std::array<RegionKind, 8> kAllRegionKinds = {
    RegionKind::R,   RegionKind::Rhat, RegionKind::R1,        RegionKind::R2,
    RegionKind::Rp1, RegionKind::Rp2,  RegionKind::CapStrong, RegionKind::CapVeryStrong};

inline std::string_view region_name(RegionKind k) {
  switch (k) {
    case RegionKind::R: return "R";
    case RegionKind::Rhat: return "Rhat";
    case RegionKind::R1: return "R1";
    case RegionKind::R2: return "R2";
    case RegionKind::Rp1: return "Rp1";
    case RegionKind::Rp2: return "Rp2";
    case RegionKind::CapStrong: return "CapStrong";
    case RegionKind::CapVeryStrong: return "CapVeryStrong";
  }
  return "?";
}

inline RegionKind parse_region_kind(std::string_view s) {
  for (RegionKind k : kAllRegionKinds)
    if (region_name(k) == s) return k;
  throw ParseError("unknown region kind '" + std::string(s) + "'");
}

/// Regions over (U1,X1,U2,X2) laws; the others need the full superposition/binning input.
inline bool uses_simple_input(RegionKind k) { return k != RegionKind::R && k != RegionKind::Rhat; }

inline bool has_dexp_formula(RegionKind k) {
  return k == RegionKind::R1 || k == RegionKind::R2 || k == RegionKind::Rp1 || k == RegionKind::Rp2;
}

struct BuildOptions {
  /// Condition every atom of R / Rhat on the time-sharing variable Q.
  bool with_q = false;
};

inline const std::vector<RateVar>& rate_vars() {
  static const std::vector<RateVar> v = {"R1", "R2", "R3"};
  return v;
}

namespace detail {

inline void add_nonnegativity(RatePolytope& p) {
  for (const auto& v : p.vars) p.ineqs.push_back(ge(v, "0", "nn_" + v));
}

inline RatePolytope condition_on(const RatePolytope& p, VarSet extra) {
  RatePolytope out = p;
  for (auto& r : out.ineqs) {
    LinExpr e(r.rhs.constant);
    for (const auto& [a, c] : r.rhs.coeffs) e += LinExpr::atom(MiAtom::make(a.left(), a.right(), a.cond() | extra), c);
    r.rhs = std::move(e);
  }
  return out;
}

inline RateInequality cnst1_row() {
  return le("0", "I(V1;Y1|U1)+I(V2;Y2|U1,U2)-I(V1;V2|U1)", "cnst1");
}

}  // namespace detail

/// The inequality system of a region with symbolic atoms over rates (R1,R2,R3).
/// R and Rhat carry the binning side condition as the atom-only row "cnst1".
inline RatePolytope build_region(RegionKind kind, const BuildOptions& opt = {}) {
  RatePolytope p;
  p.vars = rate_vars();
  auto& q = p.ineqs;
  switch (kind) {
    case RegionKind::R:
    case RegionKind::Rhat:
      q.push_back(le("R1", "I(V1;Y1)", "r1"));
      q.push_back(le("R2", "I(V2;Y2|U2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R1+R2", "I(V1;Y1|U1)+I(V2;Y2|U2)-I(V1;V2|U1)", "r12a"));
      q.push_back(le("R1+R2", "I(V1;Y1)+I(V2;Y2|U1,U2)-I(V1;V2|U1)", "r12b"));
      q.push_back(le("R2+R3", "I(V2,U2;Y2)+I(X2;Y3|U2)", "r23"));
      q.push_back(le("R1+R2+R3", "I(V1;Y1|U1)+I(V2,U2;Y2)+I(X2;Y3|U2)-I(V1;V2|U1)", "sum1"));
      q.push_back(le("R1+R2+R3", "I(V1;Y1)+I(V2,U2;Y2|U1)+I(X2;Y3|U2)-I(V1;V2|U1)", "sum2"));
      if (kind == RegionKind::Rhat) {
        q.push_back(le("R3", "I(V2,U2;Y2|U1)+I(X2;Y3|U2)", "rdt1"));
        q.push_back(le("R3", "I(V1;Y1|U1)+I(V2,U2;Y2|U1)+I(X2;Y3|U2)-I(V1;V2|U1)", "rdt2"));
      }
      detail::add_nonnegativity(p);
      q.push_back(detail::cnst1_row());
      if (opt.with_q) p = detail::condition_on(p, VarSet{Var::Q});
      return p;
    case RegionKind::R1:
      q.push_back(le("R1", "I(U1;Y1)", "r1"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R1+R2", "I(U1;Y1)+I(X1;Y2|U1,U2)", "r12"));
      q.push_back(le("R1+R2+R3", "I(U1;Y1)+I(X1,U2;Y2|U1)+I(X2;Y3|U2)", "sum"));
      break;
    case RegionKind::R2:
      q.push_back(le("R2", "I(U1;Y2|U2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R1+R2", "I(X1;Y1|U1)+I(U1;Y2|U2)", "r12"));
      q.push_back(le("R2+R3", "I(U1,U2;Y2)+I(X2;Y3|U2)", "r23"));
      q.push_back(le("R1+R2+R3", "I(X1;Y1|U1)+I(U1,U2;Y2)+I(X2;Y3|U2)", "sum"));
      break;
    case RegionKind::Rp1:
      q.push_back(le("R1", "I(U1;Y1)", "r1"));
      q.push_back(le("R2", "I(X1;Y2|U1,U2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R2+R3", "I(X1,U2;Y2|U1)+I(X2;Y3|U2)", "r23"));
      break;
    case RegionKind::Rp2:
      q.push_back(le("R1", "I(X1;Y1|U1)", "r1"));
      q.push_back(le("R2", "I(U1;Y2|U2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R2+R3", "I(U1,U2;Y2)+I(X2;Y3|U2)", "r23"));
      break;
    case RegionKind::CapStrong:
      q.push_back(le("R1", "I(U1;Y1)", "r1"));
      q.push_back(le("R2", "I(X1;Y2|U1,X2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      q.push_back(le("R2+R3", "I(X1,X2;Y2|U1)", "r23"));
      break;
    case RegionKind::CapVeryStrong:
      q.push_back(le("R1", "I(X1;Y1|U1)", "r1"));
      q.push_back(le("R2", "I(U1;Y2|X2)", "r2"));
      q.push_back(le("R3", "I(X2;Y3)", "r3"));
      break;
  }
  detail::add_nonnegativity(p);
  return p;
}

/// Atoms of the region's own inequality system.
inline std::vector<MiAtom> atoms_required(RegionKind kind, const BuildOptions& opt = {}) {
  return build_region(kind, opt).atoms();
}

/// Atoms read by the closed-form dominant extreme points of R1, R2, Rp1, Rp2.
inline std::vector<MiAtom> dexp_atoms(RegionKind kind) {
  std::vector<std::string_view> names;
  switch (kind) {
    case RegionKind::R2:
    case RegionKind::Rp2:
      names = {"I(X1;Y1|U1)", "I(U1;Y2|U2)", "I(X2;Y3)", "I(U2;Y2)", "I(X2;Y3|U2)", "I(U1,U2;Y2)", "I(U2;Y3)"};
      break;
    case RegionKind::R1:
    case RegionKind::Rp1:
      names = {"I(U1;Y1)",   "I(X1;Y2|U1,U2)", "I(X2;Y3)", "I(U2;Y2|U1)",
               "I(X2;Y3|U2)", "I(X1,U2;Y2|U1)", "I(U2;Y3)"};
      break;
    default:
      throw Error("no closed-form dominant extreme points for region " + std::string(region_name(kind)));
  }
  std::vector<MiAtom> out;
  for (auto n : names) out.push_back(MiAtom::parse(n));
  std::sort(out.begin(), out.end());
  return out;
}

/// Every atom any SimpleInput-based computation in this library reads.
inline std::vector<MiAtom> simple_input_atoms() {
  std::set<MiAtom> s;
  for (RegionKind k : kAllRegionKinds) {
    if (!uses_simple_input(k)) continue;
    for (const auto& a : atoms_required(k)) s.insert(a);
    if (has_dexp_formula(k))
      for (const auto& a : dexp_atoms(k)) s.insert(a);
  }
  return {s.begin(), s.end()};
}

inline std::vector<MiAtom> factored_input_atoms(const BuildOptions& opt = {}) {
  return atoms_required(RegionKind::Rhat, opt);
}

inline double cnst1_value(const AtomValuation& v, const BuildOptions& opt = {}) {
  RateInequality r = detail::cnst1_row();
  if (opt.with_q) {
    RatePolytope p;
    p.ineqs.push_back(r);
    r = detail::condition_on(p, VarSet{Var::Q}).ineqs.front();
  }
  return r.rhs.evaluate(v);
}

/// I(V1;Y1|U1)+I(V2;Y2|U1,U2)-I(V1;V2|U1) >= -1e-9.
inline bool check_cnst1(const AtomValuation& v, const BuildOptions& opt = {}) {
  return cnst1_value(v, opt) >= -kFeasTol;
}

/// Binds a valuation to a region; R and Rhat refuse valuations failing cnst1.
inline RatePolytope evaluate_region(RegionKind kind, const AtomValuation& v, const BuildOptions& opt = {}) {
  if (!uses_simple_input(kind) && !check_cnst1(v, opt))
    throw Cnst1Violated("input distribution violates the binning side condition (value " +
                        std::to_string(cnst1_value(v, opt)) + ")");
  return evaluate(build_region(kind, opt), v);
}

/// Labeled dominant extreme points; branch records the I(U2;Y3) comparison for R1.
struct DexpSet {
  std::map<std::string, RatePoint> labels;
  std::string branch;

  std::vector<RatePoint> points() const {
    std::vector<RatePoint> out;
    for (const auto& [k, p] : labels) out.push_back(p);
    return out;
  }
};

namespace detail {

inline double pos(double x) { return std::max(x, 0.0); }

struct DexpR2Atoms {
  double a, b, l2, g, l1, c, u;
  explicit DexpR2Atoms(const AtomValuation& v)
      : a(atom_value(v, "I(X1;Y1|U1)")),
        b(atom_value(v, "I(U1;Y2|U2)")),
        l2(atom_value(v, "I(X2;Y3)")),
        g(atom_value(v, "I(U2;Y2)")),
        l1(atom_value(v, "I(X2;Y3|U2)")),
        c(atom_value(v, "I(U1,U2;Y2)")),
        u(atom_value(v, "I(U2;Y3)")) {}
};

struct DexpR1Atoms {
  double a, k, l2, g, l1, w, u;
  explicit DexpR1Atoms(const AtomValuation& v)
      : a(atom_value(v, "I(U1;Y1)")),
        k(atom_value(v, "I(X1;Y2|U1,U2)")),
        l2(atom_value(v, "I(X2;Y3)")),
        g(atom_value(v, "I(U2;Y2|U1)")),
        l1(atom_value(v, "I(X2;Y3|U2)")),
        w(atom_value(v, "I(X1,U2;Y2|U1)")),
        u(atom_value(v, "I(U2;Y3)")) {}
};

}  // namespace detail

inline DexpSet dexp_Rp2(const AtomValuation& v) {
  const detail::DexpR2Atoms t(v);
  const double top3 = std::min(t.l2, t.g + t.l1);
  const double mid2 = std::min(t.b, detail::pos(t.c - t.u));
  const double mid3 = t.l1 + std::min(t.u, t.c);
  DexpSet d;
  d.labels["A"] = {t.a, t.b, top3};
  d.labels["B"] = {t.a, mid2, mid3};
  return d;
}

inline DexpSet dexp_R2(const AtomValuation& v) {
  const detail::DexpR2Atoms t(v);
  DexpSet d = dexp_Rp2(v);
  const double top3 = std::min(t.l2, t.g + t.l1);
  const double mid2 = std::min(t.b, detail::pos(t.c - t.u));
  const double mid3 = t.l1 + std::min(t.u, t.c);
  d.labels["C"] = {t.a + mid2, 0.0, mid3};
  d.labels["D"] = {t.a + t.b, 0.0, top3};
  return d;
}

inline DexpSet dexp_Rp1(const AtomValuation& v) {
  const detail::DexpR1Atoms t(v);
  DexpSet d;
  d.labels["E"] = {t.a, t.k, std::min(t.l2, t.g + t.l1)};
  d.labels["F"] = {t.a, std::min(t.k, detail::pos(t.w - t.u)), t.l1 + std::min(t.u, t.w)};
  return d;
}

/// Branch "le" when I(U2;Y3) <= I(U1;Y1)+I(X1,U2;Y2|U1) (ties included), else "gt".
inline DexpSet dexp_R1(const AtomValuation& v) {
  const detail::DexpR1Atoms t(v);
  DexpSet d = dexp_Rp1(v);
  d.labels["G"] = {0.0, t.a + t.k, std::min(t.l2, t.g + t.l1)};
  if (t.u <= t.a + t.w) {
    d.branch = "le";
    const double dip = std::min(0.0, t.g - t.u);
    d.labels["H"] = {0.0, t.a + t.k + dip, t.l2};
    d.labels["I"] = {t.a + std::min(0.0, t.w - t.u), detail::pos(t.k + dip), t.l2};
  } else {
    d.branch = "gt";
    d.labels["J"] = {0.0, 0.0, t.a + t.w + t.l1};
  }
  return d;
}

inline DexpSet dexp(RegionKind kind, const AtomValuation& v) {
  switch (kind) {
    case RegionKind::R1: return dexp_R1(v);
    case RegionKind::R2: return dexp_R2(v);
    case RegionKind::Rp1: return dexp_Rp1(v);
    case RegionKind::Rp2: return dexp_Rp2(v);
    default: throw Error("no closed-form dominant extreme points for region " + std::string(region_name(kind)));
  }
}

/// The decoding constraints before rate elimination, over the split rates
/// R1c,R1p,R1',R2c,R2p,R2',T3,S3 (common, private and binning parts).
inline RatePolytope raw_decoding_system() {
  RatePolytope p;
  p.vars = {"R1c", "R1p", "R1'", "R2c", "R2p", "R2'", "T3", "S3"};
  auto& q = p.ineqs;
  q.push_back(ge("R1'+R2'", "I(V1;V2|U1)", "cover"));
  q.push_back(le("R1p+R1'", "I(V1;Y1|U1)", "rx1a"));
  q.push_back(le("R1c+R2c+R1p+R1'", "I(V1;Y1)", "rx1b"));
  q.push_back(le("R2p+R2'", "I(V2;Y2|U1,U2)", "rx2a"));
  q.push_back(le("R2p+R2'+T3", "I(V2,U2;Y2|U1)", "rx2b"));
  q.push_back(le("R1c+R2c+R2p+R2'", "I(V2;Y2|U2)", "rx2c"));
  q.push_back(le("R1c+R2c+R2p+R2'+T3", "I(V2,U2;Y2)", "rx2d"));
  q.push_back(le("S3", "I(X2;Y3|U2)", "rx3a"));
  q.push_back(le("T3+S3", "I(X2;Y3)", "rx3b"));
  detail::add_nonnegativity(p);
  return p;
}

inline std::vector<std::pair<RateVar, std::vector<RateVar>>> rate_split_substitutions() {
  return {{"R1", {"R1c", "R1p"}}, {"R2", {"R2c", "R2p"}}, {"R3", {"T3", "S3"}}};
}

inline std::vector<RateVar> fm_elimination_order() { return {"R1'", "R2'", "R1p", "R2p", "S3", "R1c", "R2c", "T3"}; }

struct FmStep {
  RateVar var;
  std::size_t before_prune = 0;
  std::size_t after_prune = 0;
};

struct FmDerivation {
  RatePolytope raw;
  RatePolytope substituted;
  std::vector<FmStep> steps;
  RatePolytope result;
  bool matches_expected = false;
};

/// Eliminates the split rates, pruning after every step with atom nonnegativity and
/// the Shannon order facts implied by the superposition structure.
inline FmDerivation fm_derive() {
  FmDerivation d;
  d.raw = raw_decoding_system();
  d.substituted = substitute_rates(d.raw, rate_split_substitutions());
  PruneOptions opt;
  opt.facts = order_facts(d.raw.atoms(), model_functional_deps());
  RatePolytope cur = d.substituted;
  for (const auto& v : fm_elimination_order()) {
    cur = fm_eliminate(cur, v);
    FmStep s{v, cur.ineqs.size(), 0};
    cur = prune_redundant(cur, opt);
    s.after_prune = cur.ineqs.size();
    d.steps.push_back(s);
  }
  const RatePolytope expected = build_region(RegionKind::Rhat);
  cur.vars = expected.vars;
  for (auto& r : cur.ineqs) {
    r.label.clear();
    for (const auto& e : expected.ineqs)
      if (r.same_constraint(e)) r.label = e.label;
  }
  // present rows in the expected order, unmatched rows last
  std::stable_sort(cur.ineqs.begin(), cur.ineqs.end(), [&expected](const auto& a, const auto& b) {
    auto rank = [&expected](const RateInequality& r) {
      for (std::size_t i = 0; i < expected.ineqs.size(); ++i)
        if (expected.ineqs[i].label == r.label && !r.label.empty()) return i;
      return expected.ineqs.size();
    };
    return rank(a) < rank(b);
  });
  d.matches_expected = same_system(cur, expected);
  d.result = std::move(cur);
  return d;
}

/// Marton reduction: transmitter 2 silent (U2, X2 constant) and R3 = 0.
/// The binning side condition is returned separately.
inline std::pair<RatePolytope, RateInequality> marton_reduction() {
  RatePolytope p = specialize(build_region(RegionKind::R), {{Var::U2, {}}, {Var::X2, {}}}, {"R3"});
  RateInequality side;
  std::erase_if(p.ineqs, [&side](const RateInequality& r) {
    if (r.label != "cnst1") return false;
    side = r;
    return true;
  });
  return {p, side};
}

/// One-sided Han-Kobayashi reduction: U1 = V1 constant, X1 = V2, R1 = 0.
inline RatePolytope han_kobayashi_reduction() {
  return specialize(build_region(RegionKind::R), {{Var::U1, {}}, {Var::V1, {}}, {Var::V2, {Var::X1}}}, {"R1"});
}

/// A region over (U1,X1,U2,X2) with U2 replaced by X2.
inline RatePolytope with_u2_as_x2(RegionKind kind) {
  return specialize(build_region(kind), {{Var::U2, VarSet{Var::X2}}});
}

/// R2's inequalities plus the extra R3 bound left over by specializing the
/// region without rdt2 at X1 = V1, V2 = U1.
inline RatePolytope r2_pre_reduction_system() {
  RatePolytope p = build_region(RegionKind::R2);
  p.ineqs.insert(p.ineqs.end() - 3, le("R3", "I(U2;Y2|U1)+I(X2;Y3|U2)", "extra"));
  return p;
}

/// Rhat without rdt2, the region specialized above.
inline RatePolytope rtilde_system() {
  RatePolytope p = build_region(RegionKind::Rhat);
  std::erase_if(p.ineqs, [](const RateInequality& r) { return r.label == "rdt2"; });
  return p;
}

}  // namespace bic
