// Command-line front end: validation, regions, closed forms, unions, condition
// checks, verification reports, the elimination transcript and slices.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bic/bic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitCnst1 = 4;
constexpr int kExitRegression = 5;

struct Options {
  std::string channel, input, kind, out, region, condition, what, which = "strong", fix = "R1";
  std::uint64_t seed = 0;
  std::size_t samples = 2000;
  std::size_t budget = 10000;
  std::size_t order = 2;
  double value = 0.0;
  bool as_json = false;
  bool csv = false;
  bool no_companions = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw bic::ParseError("cannot write " + o.out);
  f << text;
}

void emit_json(const Options& o, const bic::json& j) { emit(o, j.dump(2) + "\n"); }

bic::SamplerConfig sampler(const Options& o) {
  bic::SamplerConfig c;
  c.samples = o.samples;
  c.seed = o.seed;
  c.companions = !o.no_companions;
  return c;
}

bic::Budget budget(const Options& o) {
  bic::Budget b;
  b.samples = o.budget;
  b.seed = o.seed;
  return b;
}

int cmd_validate(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  bic::json j;
  j["valid"] = true;
  j["nx1"] = ch.nx1;
  j["nx2"] = ch.nx2;
  j["ny1"] = ch.ny1;
  j["ny2"] = ch.ny2;
  j["ny3"] = ch.ny3;
  emit_json(o, j);
  return kExitOk;
}

bic::AtomValuation valuation_for(const bic::BicChannel& ch, bic::RegionKind kind, const bic::AnyInput& in) {
  if (bic::uses_simple_input(kind)) {
    const auto* s = std::get_if<bic::SimpleInput>(&in);
    if (!s) throw bic::DimensionMismatch("region " + std::string(bic::region_name(kind)) + " needs a simple input");
    return bic::simple_valuation(ch, *s);
  }
  const auto* f = std::get_if<bic::FactoredInput>(&in);
  if (!f) throw bic::DimensionMismatch("region " + std::string(bic::region_name(kind)) + " needs a factored input");
  return bic::factored_valuation(ch, *f);
}

int cmd_region(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  const bic::AnyInput in = bic::load_input_file(o.input);
  const bic::RegionKind kind = bic::parse_region_kind(o.kind);
  const bic::AtomValuation v = valuation_for(ch, kind, in);
  if (o.csv) {
    emit(o, bic::vertices_csv(bic::enumerate_vertices(bic::evaluate_region(kind, v))));
    return kExitOk;
  }
  emit_json(o, bic::region_to_json(kind, v));
  return kExitOk;
}

int cmd_dexp(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  const bic::AnyInput in = bic::load_input_file(o.input);
  const bic::RegionKind kind = bic::parse_region_kind(o.kind);
  if (!bic::has_dexp_formula(kind))
    throw bic::DimensionMismatch("closed forms exist for R1, R2, Rp1 and Rp2 only");
  const bic::AtomValuation v = valuation_for(ch, kind, in);
  bic::json j = bic::dexp_to_json(bic::dexp(kind, v));
  j["kind"] = bic::region_name(kind);
  emit_json(o, j);
  return kExitOk;
}

int cmd_union(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  const bic::RegionKind kind = bic::parse_region_kind(o.kind);
  const bic::UnionRegion u = bic::union_region(ch, kind, sampler(o));
  if (o.csv) {
    emit(o, bic::vertices_csv(u.cloud));
    return kExitOk;
  }
  emit_json(o, bic::union_to_json(u));
  return kExitOk;
}

int cmd_check(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  const bic::Verdict v = bic::check_condition(ch, bic::parse_condition(o.condition), budget(o));
  emit_json(o, bic::verdict_to_json(v));
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const bic::BicChannel ch = bic::load_channel_file(o.channel);
  bic::json j;
  j["check"] = o.what;
  if (o.what == "order") {
    j["report"] = bic::report_to_json(bic::verify_order_equivalence(ch, static_cast<int>(o.order), sampler(o), budget(o)));
  } else if (o.what == "rdt") {
    j["report"] = bic::report_to_json(bic::verify_rdt_redundancy(ch, sampler(o)));
  } else if (o.what == "extra") {
    j["report"] = bic::report_to_json(bic::verify_r2_extra_inequality(ch, sampler(o)));
  } else if (o.what == "timesharing") {
    j["report"] =
        bic::report_to_json(bic::verify_no_timesharing_gain(ch, static_cast<int>(o.order), sampler(o), budget(o)));
  } else if (o.what == "forms") {
    j["report"] = bic::report_to_json(bic::verify_capacity_forms(ch, o.which, sampler(o), budget(o)));
  } else {
    throw bic::ParseError("unknown check '" + o.what + "'");
  }
  emit_json(o, j);
  return kExitOk;
}

int cmd_fm(const Options& o) {
  const bic::FmDerivation d = bic::fm_derive();
  if (o.as_json) {
    emit_json(o, bic::fm_to_json(d));
  } else {
    std::string t = "raw system\n" + d.raw.to_string() + "\nafter rate splitting\n" + d.substituted.to_string() + "\n";
    for (const auto& s : d.steps)
      t += "eliminate " + s.var + ": " + std::to_string(s.before_prune) + " rows, " + std::to_string(s.after_prune) +
           " after pruning\n";
    t += "\nresult\n" + d.result.to_string() + "\nmatches expected system: " + (d.matches_expected ? "yes" : "no") +
         "\n";
    emit(o, t);
  }
  if (!d.matches_expected) {
    std::cerr << "error: eliminated system differs from the expected system\n";
    return kExitRegression;
  }
  return kExitOk;
}

int cmd_slice(const Options& o) {
  const auto verts = bic::parse_vertices(bic::parse_json_text(bic::read_file(o.region)));
  std::size_t fixed = 0;
  if (o.fix == "R1" || o.fix == "0") fixed = 0;
  else if (o.fix == "R2" || o.fix == "1") fixed = 1;
  else if (o.fix == "R3" || o.fix == "2") fixed = 2;
  else throw bic::ParseError("--fix must be R1, R2 or R3");
  const auto poly = bic::slice(verts, fixed, o.value);
  std::vector<bic::RatePoint> rows;
  for (const auto& p : poly) rows.push_back({p[0], p[1]});
  emit(o, bic::vertices_csv(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate regions of the broadcast channel with a single interferer"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check a channel file");
  validate->add_option("--channel", o.channel, "channel JSON")->required();

  auto* region = app.add_subcommand("region", "evaluate a region at one input law");
  region->add_option("--channel", o.channel)->required();
  region->add_option("--input", o.input)->required();
  region->add_option("--kind", o.kind, "R, Rhat, R1, R2, Rp1, Rp2, CapStrong, CapVeryStrong")->required();
  region->add_flag("--csv", o.csv, "print vertices as CSV");

  auto* dexp = app.add_subcommand("dexp", "closed-form dominant extreme points");
  dexp->add_option("--channel", o.channel)->required();
  dexp->add_option("--input", o.input)->required();
  dexp->add_option("--kind", o.kind)->required();

  auto* un = app.add_subcommand("union", "union of a region over sampled input laws");
  un->add_option("--channel", o.channel)->required();
  un->add_option("--kind", o.kind)->required();
  un->add_option("--samples", o.samples);
  un->add_option("--seed", o.seed);
  un->add_flag("--csv", o.csv, "print the cloud as CSV");
  un->add_flag("--no-companions", o.no_companions, "sample only the drawn laws");

  auto* check = app.add_subcommand("check", "search for a violation of a channel condition");
  check->add_option("condition", o.condition, "oblivious, cognizant, strong, verystrong")->required();
  check->add_option("--channel", o.channel)->required();
  check->add_option("--budget", o.budget, "number of sampled laws");
  check->add_option("--seed", o.seed);

  auto* verify = app.add_subcommand("verify", "union-level verification reports");
  verify->add_option("what", o.what, "order, rdt, extra, timesharing, forms")->required();
  verify->add_option("--channel", o.channel)->required();
  verify->add_option("--i", o.order, "receiver order (1 or 2)");
  verify->add_option("--which", o.which, "strong or verystrong");
  verify->add_option("--samples", o.samples);
  verify->add_option("--budget", o.budget, "condition search budget");
  verify->add_option("--seed", o.seed);
  verify->add_flag("--no-companions", o.no_companions);

  auto* fm = app.add_subcommand("fm", "rate elimination transcript");
  fm->add_flag("--json", o.as_json);

  auto* sl = app.add_subcommand("slice", "2-D cross-section of an exported region");
  sl->add_option("--region", o.region, "region JSON with vertices")->required();
  sl->add_option("--fix", o.fix, "fixed coordinate: R1, R2 or R3");
  sl->add_option("--value", o.value)->required();

  for (auto* sub : {validate, region, dexp, un, check, verify, fm, sl}) sub->add_option("--out", o.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*region) return cmd_region(o);
    if (*dexp) return cmd_dexp(o);
    if (*un) return cmd_union(o);
    if (*check) return cmd_check(o);
    if (*verify) return cmd_verify(o);
    if (*fm) return cmd_fm(o);
    if (*sl) return cmd_slice(o);
  } catch (const bic::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const bic::Cnst1Violated& e) {
    std::cerr << "error: binning side condition cnst1 violated: " << e.what() << "\n";
    return kExitCnst1;
  } catch (const bic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitInvariant;
}
