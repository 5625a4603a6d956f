#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bic/channel.hpp"
#include "bic/conditions.hpp"
#include "bic/error.hpp"
#include "bic/experiments.hpp"
#include "bic/geometry.hpp"
#include "bic/polytope.hpp"
#include "bic/regions.hpp"

namespace bic {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("unexpected document shape: ") + e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline Kernel kernel_from(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(name) + " must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(r.get<std::vector<double>>());
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != cols) throw DimensionMismatch(std::string(name) + " has rows of different lengths");
  return Kernel::from_rows(rows);
}

inline void expect_size(const json& j, const char* key, std::size_t actual) {
  if (j.contains(key) && j.at(key).get<std::size_t>() != actual)
    throw DimensionMismatch(std::string(key) + " = " + std::to_string(j.at(key).get<std::size_t>()) +
                            " disagrees with the kernel shape (" + std::to_string(actual) + ")");
}

}  // namespace detail

inline json kernel_to_json(const Kernel& k) {
  json rows = json::array();
  for (const auto& r : k.to_rows()) rows.push_back(r);
  return rows;
}

// ---------------------------------------------------------------------------
// channels and inputs

inline BicChannel parse_channel(const json& j) {
  return detail::guarded([&] {
    Kernel k1 = detail::kernel_from(detail::field(j, "k1"), "k1");
    Kernel k2 = detail::kernel_from(detail::field(j, "k2"), "k2");
    Kernel k3 = detail::kernel_from(detail::field(j, "k3"), "k3");
    detail::expect_size(j, "nx1", k1.rows());
    detail::expect_size(j, "ny1", k1.cols());
    detail::expect_size(j, "nx2", k3.rows());
    detail::expect_size(j, "ny3", k3.cols());
    detail::expect_size(j, "ny2", k2.cols());
    return BicChannel::make(std::move(k1), std::move(k2), std::move(k3));
  });
}

inline BicChannel load_channel(const std::string& text) { return parse_channel(parse_json_text(text)); }
inline BicChannel load_channel_file(const std::string& path) { return load_channel(read_file(path)); }

inline json channel_to_json(const BicChannel& ch) {
  json j;
  j["nx1"] = ch.nx1;
  j["nx2"] = ch.nx2;
  j["ny1"] = ch.ny1;
  j["ny2"] = ch.ny2;
  j["ny3"] = ch.ny3;
  j["k1"] = kernel_to_json(ch.k1);
  j["k2"] = kernel_to_json(ch.k2);
  j["k3"] = kernel_to_json(ch.k3);
  return j;
}

inline SimpleInput parse_simple_input(const json& j) {
  return detail::guarded([&] {
    SimpleInput in;
    in.pu1 = detail::field(j, "pu1").get<std::vector<double>>();
    in.pu2 = detail::field(j, "pu2").get<std::vector<double>>();
    in.nu1 = in.pu1.size();
    in.nu2 = in.pu2.size();
    in.px1_u1 = detail::kernel_from(detail::field(j, "px1_u1"), "px1_u1");
    in.px2_u2 = detail::kernel_from(detail::field(j, "px2_u2"), "px2_u2");
    return in;
  });
}

inline json simple_input_to_json(const SimpleInput& in) {
  json j;
  j["type"] = "simple";
  j["pu1"] = in.pu1;
  j["px1_u1"] = kernel_to_json(in.px1_u1);
  j["pu2"] = in.pu2;
  j["px2_u2"] = kernel_to_json(in.px2_u2);
  return j;
}

/// Satellites come either as the joint law "pv1v2_u1q" (with "nv1", "nv2") or as
/// conditionally independent factors "pv1_u1q" and "pv2_u1q".
inline FactoredInput parse_factored_input(const json& j) {
  return detail::guarded([&] {
    FactoredInput in;
    in.pq = j.contains("pq") ? j.at("pq").get<std::vector<double>>() : std::vector<double>{1.0};
    in.nq = in.pq.size();
    in.pu1_q = detail::kernel_from(detail::field(j, "pu1_q"), "pu1_q");
    in.pu2_q = detail::kernel_from(detail::field(j, "pu2_q"), "pu2_q");
    in.px2_u2q = detail::kernel_from(detail::field(j, "px2_u2q"), "px2_u2q");
    in.nu1 = in.pu1_q.cols();
    in.nu2 = in.pu2_q.cols();
    if (j.contains("pv1v2_u1q")) {
      in.pv1v2_u1q = detail::kernel_from(j.at("pv1v2_u1q"), "pv1v2_u1q");
      in.nv1 = detail::field(j, "nv1").get<std::size_t>();
      in.nv2 = detail::field(j, "nv2").get<std::size_t>();
      if (in.nv1 * in.nv2 != in.pv1v2_u1q.cols()) throw DimensionMismatch("pv1v2_u1q needs nv1*nv2 columns");
    } else {
      const Kernel a = detail::kernel_from(detail::field(j, "pv1_u1q"), "pv1_u1q");
      const Kernel b = detail::kernel_from(detail::field(j, "pv2_u1q"), "pv2_u1q");
      in.nv1 = a.cols();
      in.nv2 = b.cols();
      in.pv1v2_u1q = FactoredInput::product_satellites(a, b);
    }
    in.f = detail::field(j, "f").get<std::vector<std::size_t>>();
    return in;
  });
}

inline json factored_input_to_json(const FactoredInput& in) {
  json j;
  j["type"] = "factored";
  j["pq"] = in.pq;
  j["pu1_q"] = kernel_to_json(in.pu1_q);
  j["nv1"] = in.nv1;
  j["nv2"] = in.nv2;
  j["pv1v2_u1q"] = kernel_to_json(in.pv1v2_u1q);
  j["pu2_q"] = kernel_to_json(in.pu2_q);
  j["px2_u2q"] = kernel_to_json(in.px2_u2q);
  j["f"] = in.f;
  return j;
}

using AnyInput = std::variant<SimpleInput, FactoredInput>;

/// Dispatches on "type" when present, else on the presence of "f".
inline AnyInput parse_input(const json& j) {
  std::string type;
  if (j.is_object() && j.contains("type")) type = detail::guarded([&] { return j.at("type").get<std::string>(); });
  else type = j.is_object() && j.contains("f") ? "factored" : "simple";
  if (type == "simple") return parse_simple_input(j);
  if (type == "factored") return parse_factored_input(j);
  throw ParseError("input type must be 'simple' or 'factored'");
}

inline AnyInput load_input_file(const std::string& path) { return parse_input(parse_json_text(read_file(path))); }

// ---------------------------------------------------------------------------
// regions

inline double rational_number(const Rational& r) { return to_double(r); }

inline json inequality_to_json(const RateInequality& r, const std::optional<AtomValuation>& v) {
  json j;
  json lhs = json::object();
  for (const auto& [var, c] : r.lhs) lhs[var] = rational_number(c);
  json atoms = json::object();
  for (const auto& [a, c] : r.rhs.coeffs) atoms[a.to_string()] = rational_number(c);
  j["lhs"] = lhs;
  j["rhs_atoms"] = atoms;
  j["rhs_const"] = rational_number(r.rhs.constant);
  j["label"] = r.label;
  j["text"] = r.to_string();
  if (v) j["rhs_value"] = r.rhs.evaluate(*v);
  return j;
}

inline json points_to_json(const std::vector<RatePoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(p);
  return a;
}

inline json polytope_to_json(const RatePolytope& p) {
  json j;
  j["vars"] = p.vars;
  json rows = json::array();
  for (const auto& r : p.ineqs) rows.push_back(inequality_to_json(r, p.valuation));
  j["inequalities"] = rows;
  return j;
}

inline json valuation_to_json(const AtomValuation& v) {
  json j = json::object();
  for (const auto& [a, x] : v) j[a.to_string()] = x;
  return j;
}

inline json dexp_to_json(const DexpSet& d) {
  json j;
  json labels = json::object();
  for (const auto& [k, p] : d.labels) labels[k] = p;
  j["labels"] = labels;
  j["branch"] = d.branch;
  return j;
}

/// Region export: the evaluated system, its vertices and dominant points, and closed forms when they exist.
inline json region_to_json(RegionKind kind, const AtomValuation& v) {
  const RatePolytope evaluated = evaluate_region(kind, v);
  json j;
  j["kind"] = region_name(kind);
  const json sys = polytope_to_json(evaluated);
  j["vars"] = sys["vars"];
  j["inequalities"] = sys["inequalities"];
  const auto verts = enumerate_vertices(evaluated);
  j["vertices"] = points_to_json(verts);
  j["dominant_points"] = points_to_json(dominant_points(verts));
  if (has_dexp_formula(kind)) j["dexp"] = dexp_to_json(dexp(kind, v));
  j["atoms"] = valuation_to_json(*evaluated.valuation);
  return j;
}

inline std::vector<RatePoint> parse_vertices(const json& j) {
  return detail::guarded([&] {
    std::vector<RatePoint> out;
    for (const auto& p : detail::field(j, "vertices")) out.push_back(p.get<RatePoint>());
    return out;
  });
}

inline std::string vertices_csv(const std::vector<RatePoint>& pts) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& p : pts) {
    for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// reports

inline json budget_to_json(const Budget& b) {
  json j;
  j["samples"] = b.samples;
  j["group"] = b.group;
  j["ascent_steps"] = b.ascent_steps;
  j["seed"] = b.seed;
  j["u1_card"] = b.u1_card;
  return j;
}

inline json verdict_to_json(const Verdict& v) {
  json j;
  j["condition"] = condition_name(v.condition);
  j["status"] = v.status == VerdictStatus::Violated ? "Violated" : "NoViolationFound";
  j["message"] = v.status == VerdictStatus::Violated ? "violation found" : "no violation found (budget exhausted)";
  if (v.witness) {
    json w;
    w["nu1"] = v.witness->nu1;
    w["pu1x1"] = v.witness->pu1x1;
    w["px2"] = v.witness->px2;
    w["lhs_name"] = v.lhs_name;
    w["rhs_name"] = v.rhs_name;
    w["lhs"] = v.lhs;
    w["rhs"] = v.rhs;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["gap"] = v.gap;
  j["samples"] = v.samples_tested;
  j["seed"] = v.budget.seed;
  j["budget"] = budget_to_json(v.budget);
  return j;
}

inline json union_to_json(const UnionRegion& u) {
  json j;
  j["region"] = u.name;
  j["samples"] = u.samples;
  j["distributions"] = u.distributions;
  j["skipped"] = u.skipped;
  j["seed"] = u.seed;
  j["cloud"] = points_to_json(u.cloud);
  j["provenance"] = u.provenance;
  return j;
}

inline json report_to_json(const EquivalenceReport& r) {
  json j;
  j["first"] = r.first;
  j["second"] = r.second;
  j["max_gap_1_in_2"] = r.max_gap_1_in_2;
  j["max_gap_2_in_1"] = r.max_gap_2_in_1;
  j["directions"] = r.directions;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  if (r.subset_max_excess) j["subset_max_excess"] = *r.subset_max_excess;
  j["verdict"] = r.verdict;
  return j;
}

inline json report_to_json(const RedundancyReport& r) {
  json j;
  j["unions"] = report_to_json(r.unions);
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    json x;
    x["row"] = r.rows[i];
    x["binding_points"] = r.binding[i];
    x["max_residual"] = r.max_residual[i];
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["residual_tolerance"] = r.residual_tolerance;
  j["verdict"] = r.verdict;
  return j;
}

inline json report_to_json(const TimeSharingReport& r) {
  json j;
  j["order"] = r.order;
  j["pairs"] = r.pairs;
  j["points"] = r.points;
  j["max_merged_excess"] = r.max_merged_excess;
  j["max_union_excess"] = r.max_union_excess;
  j["merged_tolerance"] = r.merged_tolerance;
  j["union_tolerance"] = r.union_tolerance;
  j["seed"] = r.seed;
  j["verdict"] = r.verdict;
  return j;
}

inline json report_to_json(const CapacityFormsReport& r) {
  json j;
  j["which"] = r.which;
  j["forms"] = r.forms;
  j["gaps"] = r.gaps;
  j["directions"] = r.directions;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  j["verdict"] = r.verdict;
  return j;
}

inline json fm_to_json(const FmDerivation& d) {
  json j;
  j["raw"] = polytope_to_json(d.raw);
  j["substituted"] = polytope_to_json(d.substituted);
  json steps = json::array();
  for (const auto& s : d.steps) {
    json x;
    x["eliminate"] = s.var;
    x["rows_before_pruning"] = s.before_prune;
    x["rows_after_pruning"] = s.after_prune;
    steps.push_back(x);
  }
  j["steps"] = steps;
  j["result"] = polytope_to_json(d.result);
  j["matches_expected"] = d.matches_expected;
  return j;
}

}  // namespace bic
