#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bic/channel.hpp"
#include "bic/conditions.hpp"
#include "bic/error.hpp"
#include "bic/geometry.hpp"
#include "bic/info_measures.hpp"
#include "bic/joint_law.hpp"
#include "bic/regions.hpp"
#include "bic/sampling.hpp"

namespace bic {

/// Tolerance for union-level comparisons; it absorbs sampling density only.
inline constexpr double kUnionTol = 5e-3;

struct SamplerConfig {
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  /// Auxiliary alphabet sizes for (U1,X1,U2,X2) laws.
  std::size_t nu1 = 2, nu2 = 2;
  /// Alphabet sizes for superposition/binning laws.
  FactoredSizes factored;
  /// Also evaluate the companion laws of each draw (auxiliaries collapsed or set to inputs).
  bool companions = true;
};

// ---------------------------------------------------------------------------
// per-distribution evaluation

inline AtomValuation simple_valuation(const BicChannel& ch, const SimpleInput& in) {
  return evaluate_atoms(assemble_joint_simple(ch, in), simple_input_atoms());
}

inline AtomValuation factored_valuation(const BicChannel& ch, const FactoredInput& in, const BuildOptions& opt = {}) {
  return evaluate_atoms(assemble_joint(ch, in), factored_input_atoms(opt));
}

/// Dominant vertices of an evaluated system.
inline std::vector<RatePoint> system_points(const RatePolytope& sys, const AtomValuation& v) {
  return dominant_points(enumerate_vertices(evaluate(sys, v)));
}

/// Dominant extreme points of one region at one valuation; closed forms where they exist.
inline std::vector<RatePoint> region_points(RegionKind kind, const AtomValuation& v) {
  if (has_dexp_formula(kind)) return dominant_points(dexp(kind, v).points(), kDedupTol);
  return dominant_points(enumerate_vertices(evaluate_region(kind, v)));
}

/// Largest violation of a system's rate rows at a point (atom-only rows ignored).
inline double system_excess(const Halfspaces& h, const RatePoint& x) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.A.size(); ++i) {
    double s = -h.b[i];
    for (std::size_t k = 0; k < x.size(); ++k) s += h.A[i][k] * x[k];
    worst = std::max(worst, s);
  }
  return worst;
}

inline double row_excess(const RatePolytope& evaluated, const std::string& label, const RatePoint& x) {
  const RateInequality* r = evaluated.find_label(label);
  if (!r) throw UnknownVariable("system has no row labeled " + label);
  double s = -r->rhs.evaluate(*evaluated.valuation);
  for (const auto& [var, c] : r->lhs) s += to_double(c) * x[evaluated.var_index(var)];
  return s;
}

// ---------------------------------------------------------------------------
// samplers

inline std::vector<SimpleInput> simple_companions(const SimpleInput& in) {
  return {collapse_u1(in),
          collapse_u2(in),
          collapse_u1(collapse_u2(in)),
          u1_as_x1(in),
          collapse_u2(u1_as_x1(in)),
          u2_as_x2(in),
          collapse_u1(u2_as_x2(in)),
          u1_as_x1(u2_as_x2(in))};
}

/// Laws evaluated for draw s: the draw itself, then its companions.
inline std::vector<SimpleInput> simple_draw(const BicChannel& ch, const SamplerConfig& cfg, std::size_t s) {
  Rng rng(cfg.seed, s);
  std::vector<SimpleInput> out{random_simple_input(rng, cfg.nu1, ch.nx1, cfg.nu2, ch.nx2)};
  if (cfg.companions) {
    auto c = simple_companions(out.front());
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

inline std::vector<FactoredInput> factored_companions(const FactoredInput& in) {
  return {collapse_u2(in), u1_as_v1(in), collapse_u2(u1_as_v1(in))};
}

/// Deterministic map tables are enumerated cyclically when there are at most 256, else drawn uniformly.
inline std::vector<FactoredInput> factored_draw(const BicChannel& ch, const SamplerConfig& cfg, std::size_t s) {
  Rng rng(cfg.seed, s);
  const auto& z = cfg.factored;
  const std::size_t entries = z.nu1 * z.nv1 * z.nv2;
  const std::uint64_t tables = count_f_tables(z, ch.nx1);
  std::uint64_t index = s;
  if (tables > 256 || tables == 0) {
    std::vector<std::size_t> f(entries);
    for (auto& x : f) x = rng.below(ch.nx1);
    index = 0;
    for (std::size_t k = entries; k-- > 0;) index = index * ch.nx1 + f[k];
  } else {
    index = s % tables;
  }
  std::vector<FactoredInput> out{random_factored_input(rng, z, ch.nx1, ch.nx2, f_table(index, entries, ch.nx1))};
  if (cfg.companions) {
    auto c = factored_companions(out.front());
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// union clouds

/// Domination-filtered union of rate points with the id of the law each came from.
struct UnionRegion {
  std::string name;
  std::vector<RatePoint> cloud;
  std::vector<std::size_t> provenance;
  std::size_t samples = 0;
  std::size_t distributions = 0;
  std::size_t skipped = 0;
  std::uint64_t seed = 0;

  void add(const std::vector<RatePoint>& pts, std::size_t id) {
    for (const auto& p : pts) insert(p, id);
  }

  /// Sorts the cloud so the result does not depend on insertion history.
  void finalize() {
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
      return cloud[a] != cloud[b] ? cloud[a] < cloud[b] : provenance[a] < provenance[b];
    });
    std::vector<RatePoint> c;
    std::vector<std::size_t> p;
    for (std::size_t i : order) {
      c.push_back(cloud[i]);
      p.push_back(provenance[i]);
    }
    cloud = std::move(c);
    provenance = std::move(p);
  }

 private:
  void insert(const RatePoint& x, std::size_t id) {
    auto dominates = [](const RatePoint& a, const RatePoint& b) {
      for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] < b[k] - kTieTol) return false;
      return true;
    };
    for (const auto& q : cloud)
      if (dominates(q, x)) return;
    std::size_t w = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (dominates(x, cloud[i])) continue;
      if (w != i) {
        cloud[w] = std::move(cloud[i]);
        provenance[w] = provenance[i];
      }
      ++w;
    }
    cloud.resize(w);
    provenance.resize(w);
    cloud.push_back(x);
    provenance.push_back(id);
  }
};

/// Per-law hook: law id, the law, its valuation.
using SimpleHook = std::function<void(std::size_t, const SimpleInput&, const AtomValuation&)>;
using InputTransform = std::function<SimpleInput(const SimpleInput&)>;

/// Unions of several systems over the same sampled (U1,X1,U2,X2) laws.
/// Ids are draw * laws_per_draw + position in the draw.
inline std::vector<UnionRegion> union_systems(const BicChannel& ch,
                                              const std::vector<std::pair<std::string, RatePolytope>>& systems,
                                              const SamplerConfig& cfg, const InputTransform& transform = {},
                                              const SimpleHook& hook = {}) {
  ch.validate();
  std::vector<UnionRegion> out(systems.size());
  for (std::size_t k = 0; k < systems.size(); ++k) {
    out[k].name = systems[k].first;
    out[k].seed = cfg.seed;
  }
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    const auto laws = simple_draw(ch, cfg, s);
    for (std::size_t j = 0; j < laws.size(); ++j) {
      const SimpleInput in = transform ? transform(laws[j]) : laws[j];
      const AtomValuation v = simple_valuation(ch, in);
      const std::size_t id = s * laws.size() + j;
      for (std::size_t k = 0; k < systems.size(); ++k) {
        out[k].add(system_points(systems[k].second, v), id);
        ++out[k].distributions;
      }
      if (hook) hook(id, in, v);
    }
    for (auto& u : out) ++u.samples;
  }
  for (auto& u : out) u.finalize();
  return out;
}

/// Unions of several region kinds over the same sampled laws.
inline std::vector<UnionRegion> union_regions(const BicChannel& ch, const std::vector<RegionKind>& kinds,
                                              const SamplerConfig& cfg, const InputTransform& transform = {},
                                              const SimpleHook& hook = {}) {
  ch.validate();
  std::vector<UnionRegion> out(kinds.size());
  bool factored = false, simple = false;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    out[k].name = std::string(region_name(kinds[k]));
    out[k].seed = cfg.seed;
    (uses_simple_input(kinds[k]) ? simple : factored) = true;
  }
  if (factored && simple) throw DimensionMismatch("cannot mix superposition-binning regions with the others");
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    if (simple) {
      const auto laws = simple_draw(ch, cfg, s);
      for (std::size_t j = 0; j < laws.size(); ++j) {
        const SimpleInput in = transform ? transform(laws[j]) : laws[j];
        const AtomValuation v = simple_valuation(ch, in);
        const std::size_t id = s * laws.size() + j;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
          out[k].add(region_points(kinds[k], v), id);
          ++out[k].distributions;
        }
        if (hook) hook(id, in, v);
      }
    } else {
      const auto laws = factored_draw(ch, cfg, s);
      for (std::size_t j = 0; j < laws.size(); ++j) {
        const AtomValuation v = factored_valuation(ch, laws[j]);
        const std::size_t id = s * laws.size() + j;
        const bool ok = check_cnst1(v);
        for (std::size_t k = 0; k < kinds.size(); ++k) {
          if (!ok) {
            ++out[k].skipped;
            continue;
          }
          out[k].add(region_points(kinds[k], v), id);
          ++out[k].distributions;
        }
      }
    }
    for (auto& u : out) ++u.samples;
  }
  for (auto& u : out) u.finalize();
  return out;
}

inline UnionRegion union_region(const BicChannel& ch, RegionKind kind, const SamplerConfig& cfg) {
  return union_regions(ch, {kind}, cfg).front();
}

/// The law behind a cloud point of a SimpleInput union.
inline SimpleInput simple_law_for(const BicChannel& ch, const SamplerConfig& cfg, std::size_t id) {
  const std::size_t per = cfg.companions ? 9 : 1;
  return simple_draw(ch, cfg, id / per).at(id % per);
}

inline FactoredInput factored_law_for(const BicChannel& ch, const SamplerConfig& cfg, std::size_t id) {
  const std::size_t per = cfg.companions ? 4 : 1;
  return factored_draw(ch, cfg, id / per).at(id % per);
}

// ---------------------------------------------------------------------------
// reports

/// Directed support-function gaps between two union clouds.
struct EquivalenceReport {
  std::string first, second;
  double max_gap_1_in_2 = 0.0;  // how far the first hull sticks out of the second
  double max_gap_2_in_1 = 0.0;
  std::size_t directions = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = kUnionTol;
  /// Largest per-law violation of the first system by vertices of the second (nested case).
  std::optional<double> subset_max_excess;
  std::string verdict;
};

inline EquivalenceReport compare_unions(const UnionRegion& a, const UnionRegion& b,
                                        const std::vector<std::vector<double>>& dirs) {
  EquivalenceReport r;
  r.first = a.name;
  r.second = b.name;
  r.max_gap_1_in_2 = directed_gap(a.cloud, b.cloud, dirs);
  r.max_gap_2_in_1 = directed_gap(b.cloud, a.cloud, dirs);
  r.directions = dirs.size();
  r.samples = a.samples;
  r.seed = a.seed;
  return r;
}

inline void settle_verdict(EquivalenceReport& r) {
  bool ok = r.max_gap_1_in_2 <= r.tolerance && r.max_gap_2_in_1 <= r.tolerance;
  if (r.subset_max_excess && *r.subset_max_excess > kFeasTol) ok = false;
  r.verdict = ok ? "agree" : "differ";
}

/// Throws ConditionNotEstablished when a budget-bounded search finds a violation.
inline Verdict require_condition(const BicChannel& ch, Condition c, const Budget& budget) {
  Verdict v = check_condition(ch, c, budget);
  if (v.status == VerdictStatus::Violated)
    throw ConditionNotEstablished("channel violates the " + std::string(condition_name(c)) +
                                  " condition (gap " + std::to_string(v.gap) + ")");
  return v;
}

inline Condition order_condition(int i) {
  if (i == 1) return Condition::ObliviousLessNoisy;
  if (i == 2) return Condition::CognizantLessNoisy;
  throw ParseError("receiver order index must be 1 or 2");
}

/// Union of R_i against union of R_(i), plus the per-law nesting R_(i) inside R_i.
inline EquivalenceReport verify_order_equivalence(const BicChannel& ch, int i, const SamplerConfig& cfg,
                                         const Budget& cond_budget = {},
                                         const std::vector<std::vector<double>>& dirs = probe_directions()) {
  require_condition(ch, order_condition(i), cond_budget);
  const RegionKind big = i == 1 ? RegionKind::R1 : RegionKind::R2;
  const RegionKind small = i == 1 ? RegionKind::Rp1 : RegionKind::Rp2;
  const RatePolytope big_sys = build_region(big), small_sys = build_region(small);
  double worst = -std::numeric_limits<double>::infinity();
  auto hook = [&](std::size_t, const SimpleInput&, const AtomValuation& v) {
    const Halfspaces h = to_halfspaces(evaluate(big_sys, v));
    for (const auto& x : enumerate_vertices(evaluate(small_sys, v))) worst = std::max(worst, system_excess(h, x));
  };
  const auto u = union_regions(ch, {big, small}, cfg, {}, hook);
  EquivalenceReport r = compare_unions(u[0], u[1], dirs);
  r.subset_max_excess = std::max(worst, 0.0);
  settle_verdict(r);
  return r;
}

/// Rate points of one system that break a labeled row, checked against a companion hull.
struct RedundancyReport {
  EquivalenceReport unions;
  std::vector<std::string> rows;
  std::vector<std::size_t> binding;   // points violating each row
  std::vector<double> max_residual;   // worst companion-hull excess per row
  double residual_tolerance = 1e-6;
  std::string verdict;
};

inline void settle_verdict(RedundancyReport& r) {
  settle_verdict(r.unions);
  bool ok = r.unions.verdict == "agree";
  for (double m : r.max_residual)
    if (m > r.residual_tolerance) ok = false;
  r.verdict = ok ? "redundant" : "not confirmed";
}

/// Union of R against union of Rhat; points of R(P) outside rdt1 or rdt2 must lie in the
/// down-set hull of Rhat at P with U2 collapsed, or, when that law fails cnst1, at P with
/// U1 enlarged to (U1,V1) and U2 collapsed.
inline RedundancyReport verify_rdt_redundancy(const BicChannel& ch, const SamplerConfig& cfg,
                                              const std::vector<std::vector<double>>& dirs = probe_directions()) {
  const auto u = union_regions(ch, {RegionKind::R, RegionKind::Rhat}, cfg);
  RedundancyReport r;
  r.unions = compare_unions(u[0], u[1], dirs);
  r.rows = {"rdt1", "rdt2"};
  r.binding.assign(2, 0);
  r.max_residual.assign(2, 0.0);
  const RatePolytope rhat = build_region(RegionKind::Rhat);
  auto hat_points = [&](const FactoredInput& in) -> std::optional<std::vector<RatePoint>> {
    const AtomValuation v = factored_valuation(ch, in);
    if (!check_cnst1(v)) return std::nullopt;
    return region_points(RegionKind::Rhat, v);
  };
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    SamplerConfig one = cfg;
    one.companions = false;
    const FactoredInput in = factored_draw(ch, one, s).front();
    const AtomValuation v = factored_valuation(ch, in);
    if (!check_cnst1(v)) continue;
    const RatePolytope hv = evaluate(rhat, v);
    const auto pts = region_points(RegionKind::R, v);
    std::optional<std::optional<std::vector<RatePoint>>> hull;
    for (std::size_t row = 0; row < 2; ++row) {
      for (const auto& x : pts) {
        if (row_excess(hv, r.rows[row], x) <= kFeasTol) continue;
        ++r.binding[row];
        if (!hull) {
          hull = hat_points(collapse_u2(in));
          if (!*hull) hull = hat_points(collapse_u2(u1_as_v1(in)));
        }
        const double e = *hull ? downset_hull_excess(**hull, x) : std::numeric_limits<double>::infinity();
        r.max_residual[row] = std::max(r.max_residual[row], e);
      }
    }
  }
  settle_verdict(r);
  return r;
}

/// Union of R2 against union of R2 plus the extra R3 row; points of R2(P) outside the
/// extra row must lie in the down-set hull of the extended system at P with U2 collapsed.
inline RedundancyReport verify_r2_extra_inequality(const BicChannel& ch, const SamplerConfig& cfg,
                                                           const std::vector<std::vector<double>>& dirs =
                                                               probe_directions()) {
  const RatePolytope r2 = build_region(RegionKind::R2), pre = r2_pre_reduction_system();
  RedundancyReport r;
  r.rows = {"extra"};
  r.binding.assign(1, 0);
  r.max_residual.assign(1, 0.0);
  const std::size_t per = cfg.companions ? 9 : 1;
  auto hook = [&](std::size_t id, const SimpleInput& in, const AtomValuation& v) {
    if (id % per != 0) return;
    const RatePolytope pv = evaluate(pre, v);
    std::optional<std::vector<RatePoint>> hull;
    for (const auto& x : system_points(r2, v)) {
      if (row_excess(pv, "extra", x) <= kFeasTol) continue;
      ++r.binding[0];
      if (!hull) hull = system_points(pre, simple_valuation(ch, collapse_u2(in)));
      r.max_residual[0] = std::max(r.max_residual[0], downset_hull_excess(*hull, x));
    }
  };
  const auto u = union_systems(ch, {{"R2", r2}, {"R2+extra", pre}}, cfg, {}, hook);
  r.unions = compare_unions(u[0], u[1], dirs);
  settle_verdict(r);
  return r;
}

struct TimeSharingReport {
  int order = 0;
  std::size_t pairs = 0;
  std::size_t points = 0;
  /// Mixtures checked against the region of the merged law U1 = (U1_Q, Q).
  double max_merged_excess = 0.0;
  /// Mixtures checked against the down-set hull of the sampled union.
  double max_union_excess = 0.0;
  double merged_tolerance = 1e-6;
  double union_tolerance = kUnionTol;
  std::uint64_t seed = 0;
  std::string verdict;
};

/// Mixes region points of two laws sharing the transmitter-2 law and checks that the mixture
/// is achieved by the merged law and covered by the union cloud.
inline TimeSharingReport verify_no_timesharing_gain(const BicChannel& ch, int i, const SamplerConfig& cfg,
                                                    const Budget& cond_budget = {}) {
  require_condition(ch, order_condition(i), cond_budget);
  const RegionKind kind = i == 1 ? RegionKind::R1 : RegionKind::R2;
  const UnionRegion cloud = union_region(ch, kind, cfg);
  TimeSharingReport r;
  r.order = i;
  r.seed = cfg.seed;
  r.max_merged_excess = -std::numeric_limits<double>::infinity();
  r.max_union_excess = -std::numeric_limits<double>::infinity();
  const RatePolytope sys = build_region(kind);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    Rng rng(derive_seed(cfg.seed, 0x7155ULL), s);
    const SimpleInput a = random_simple_input(rng, cfg.nu1, ch.nx1, cfg.nu2, ch.nx2);
    SimpleInput b = random_simple_input(rng, cfg.nu1, ch.nx1, cfg.nu2, ch.nx2);
    b.pu2 = a.pu2;
    b.px2_u2 = a.px2_u2;
    const double alpha = rng.uniform();
    const auto pa = region_points(kind, simple_valuation(ch, a));
    const auto pb = region_points(kind, simple_valuation(ch, b));
    const Halfspaces merged = to_halfspaces(evaluate(sys, simple_valuation(ch, merge_time_sharing(a, b, alpha))));
    ++r.pairs;
    for (const auto& x : pa)
      for (const auto& y : pb) {
        RatePoint m(x.size());
        for (std::size_t k = 0; k < m.size(); ++k) m[k] = alpha * x[k] + (1.0 - alpha) * y[k];
        ++r.points;
        r.max_merged_excess = std::max(r.max_merged_excess, system_excess(merged, m));
        r.max_union_excess = std::max(r.max_union_excess, downset_hull_excess(cloud.cloud, m));
      }
  }
  r.max_merged_excess = std::max(r.max_merged_excess, 0.0);
  r.max_union_excess = std::max(r.max_union_excess, 0.0);
  r.verdict = r.max_merged_excess <= r.merged_tolerance && r.max_union_excess <= r.union_tolerance ? "no gain"
                                                                                                     : "gain found";
  return r;
}

struct CapacityFormsReport {
  std::string which;
  std::vector<std::string> forms;
  /// gaps[a][b]: how far the hull of form a sticks out of the hull of form b.
  std::vector<std::vector<double>> gaps;
  std::size_t directions = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = kUnionTol;
  std::string verdict;
};

/// The two forms with U2 = X2 and the displayed capacity system, compared as unions.
inline CapacityFormsReport verify_capacity_forms(const BicChannel& ch, const std::string& which,
                                                 const SamplerConfig& cfg, const Budget& cond_budget = {},
                                                 const std::vector<std::vector<double>>& dirs = probe_directions()) {
  std::vector<RegionKind> kinds;
  if (which == "strong") {
    require_condition(ch, Condition::ObliviousLessNoisy, cond_budget);
    require_condition(ch, Condition::Strong, cond_budget);
    kinds = {RegionKind::R1, RegionKind::Rp1, RegionKind::CapStrong};
  } else if (which == "verystrong") {
    require_condition(ch, Condition::CognizantLessNoisy, cond_budget);
    require_condition(ch, Condition::VeryStrong, cond_budget);
    kinds = {RegionKind::R2, RegionKind::Rp2, RegionKind::CapVeryStrong};
  } else {
    throw ParseError("capacity form must be 'strong' or 'verystrong'");
  }
  const auto u = union_regions(ch, kinds, cfg, [](const SimpleInput& in) { return u2_as_x2(in); });
  CapacityFormsReport r;
  r.which = which;
  r.directions = dirs.size();
  r.samples = cfg.samples;
  r.seed = cfg.seed;
  bool ok = true;
  for (const auto& x : u) r.forms.push_back(x.name + (x.name.rfind("Cap", 0) == 0 ? "" : "|U2=X2"));
  r.gaps.assign(u.size(), std::vector<double>(u.size(), 0.0));
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = 0; b < u.size(); ++b) {
      if (a == b) continue;
      r.gaps[a][b] = directed_gap(u[a].cloud, u[b].cloud, dirs);
      if (r.gaps[a][b] > r.tolerance) ok = false;
    }
  r.verdict = ok ? "agree" : "differ";
  return r;
}

}  // namespace bic
