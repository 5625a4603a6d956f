#include <gtest/gtest.h>

#include "bic/bic.hpp"
#include "channels.hpp"
#include "oracles.hpp"

using namespace bic;

namespace {

std::size_t nonneg_rows(const RatePolytope& p) {
  std::size_t n = 0;
  for (const auto& r : p.ineqs)
    if (r.lhs.size() == 1 && r.lhs.begin()->second < 0 && r.rhs.coeffs.empty() && r.rhs.constant == 0) ++n;
  return n;
}

std::set<std::string> atom_names(const std::vector<MiAtom>& atoms) {
  std::set<std::string> s;
  for (const auto& a : atoms) s.insert(a.to_string());
  return s;
}

AtomValuation zero_valuation() {
  AtomValuation v;
  for (const auto& a : simple_input_atoms()) v[a] = 0.0;
  for (const auto& a : factored_input_atoms()) v[a] = 0.0;
  return v;
}

}  // namespace

TEST(BuildRegion, Rp2Rows) {
  const RatePolytope p = build_region(RegionKind::Rp2);
  EXPECT_EQ(p.ineqs.size(), 7u);
  EXPECT_EQ(nonneg_rows(p), 3u);
  EXPECT_TRUE(p.find_label("r23")->same_constraint(le("R2+R3", "I(U1,U2;Y2)+I(X2;Y3|U2)")));
}

TEST(BuildRegion, CapVeryStrongRows) {
  const RatePolytope p = build_region(RegionKind::CapVeryStrong);
  EXPECT_EQ(p.ineqs.size() - nonneg_rows(p), 3u);
  EXPECT_TRUE(p.find_label("r1")->same_constraint(le("R1", "I(X1;Y1|U1)")));
  EXPECT_TRUE(p.find_label("r2")->same_constraint(le("R2", "I(U1;Y2|X2)")));
  EXPECT_TRUE(p.find_label("r3")->same_constraint(le("R3", "I(X2;Y3)")));
}

TEST(BuildRegion, RowCounts) {
  EXPECT_EQ(build_region(RegionKind::R).ineqs.size(), 8u + 3u + 1u);
  EXPECT_EQ(build_region(RegionKind::Rhat).ineqs.size(), 10u + 3u + 1u);
  EXPECT_EQ(build_region(RegionKind::R1).ineqs.size(), 4u + 3u);
  EXPECT_EQ(build_region(RegionKind::R2).ineqs.size(), 5u + 3u);
  EXPECT_EQ(build_region(RegionKind::Rp1).ineqs.size(), 4u + 3u);
  EXPECT_EQ(build_region(RegionKind::CapStrong).ineqs.size(), 4u + 3u);
}

TEST(BuildRegion, TimeSharingVariantConditionsOnQ) {
  BuildOptions opt;
  opt.with_q = true;
  for (const auto& a : atoms_required(RegionKind::R, opt)) EXPECT_TRUE(a.cond().contains(Var::Q)) << a.to_string();
}

TEST(BuildRegion, ParseKinds) {
  for (RegionKind k : kAllRegionKinds) EXPECT_EQ(parse_region_kind(region_name(k)), k);
  EXPECT_THROW(parse_region_kind("R3"), ParseError);
}

TEST(AtomsRequired, CapVeryStrong) {
  EXPECT_EQ(atom_names(atoms_required(RegionKind::CapVeryStrong)),
            (std::set<std::string>{"I(X1;Y1|U1)", "I(U1;Y2|X2)", "I(X2;Y3)"}));
}

TEST(AtomsRequired, Rp1HasFiveAtoms) {
  EXPECT_EQ(atom_names(atoms_required(RegionKind::Rp1)),
            (std::set<std::string>{"I(U1;Y1)", "I(X1;Y2|U1,U2)", "I(X2;Y3)", "I(X1,U2;Y2|U1)", "I(X2;Y3|U2)"}));
}

TEST(AtomsRequired, RIncludesBinningPenalty) {
  EXPECT_TRUE(atom_names(atoms_required(RegionKind::R)).count("I(V1;V2|U1)"));
}

TEST(Cnst1, IndependentSatellitesPass) {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const BicChannel ch = random_channel(rng, 2, 2, 2, 2, 2);
    const FactoredInput in = random_factored_input_independent(rng, {}, 2, 2, f_table(rng.below(256), 8, 2));
    const AtomValuation v = factored_valuation(ch, in);
    EXPECT_NEAR(atom_value(v, "I(V1;V2|U1)"), 0.0, 1e-12);
    EXPECT_TRUE(check_cnst1(v));
  }
}

TEST(Cnst1, CopyThroughBlindReceiversFails) {
  const BicChannel ch = BicChannel::make(fixtures::constant_kernel(2), fixtures::constant_kernel(4),
                                         fixtures::constant_kernel(2));
  FactoredInput in;
  in.nv1 = in.nv2 = 2;
  in.pu1_q = Kernel::from_rows({{1.0}});
  in.pv1v2_u1q = Kernel::from_rows({{0.5, 0, 0, 0.5}});
  in.pu2_q = Kernel::from_rows({{1.0}});
  in.px2_u2q = Kernel::from_rows({{0.5, 0.5}});
  in.f = {0, 0, 1, 1};
  const AtomValuation v = factored_valuation(ch, in);
  EXPECT_NEAR(cnst1_value(v), -1.0, 1e-12);
  EXPECT_FALSE(check_cnst1(v));
  EXPECT_THROW(evaluate_region(RegionKind::R, v), Cnst1Violated);
}

TEST(Cnst1, MatchesDirectArithmetic) {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const BicChannel ch = random_channel(rng, 2, 2, 2, 2, 2);
    const FactoredInput in = random_factored_input(rng, {}, 2, 2, f_table(rng.below(256), 8, 2));
    const JointLaw j = assemble_joint(ch, in);
    const double direct = oracle::mi(j, {Var::V1}, {Var::Y1}, {Var::U1}) +
                          oracle::mi(j, {Var::V2}, {Var::Y2}, {Var::U1, Var::U2}) -
                          oracle::mi(j, {Var::V1}, {Var::V2}, {Var::U1});
    EXPECT_NEAR(cnst1_value(factored_valuation(ch, in)), direct, 1e-10);
  }
}

TEST(RawSystem, Shape) {
  const RatePolytope p = raw_decoding_system();
  EXPECT_EQ(p.vars.size(), 8u);
  EXPECT_EQ(p.ineqs.size(), 1u + 8u + 8u);
  EXPECT_EQ(nonneg_rows(p), 8u);
  // one lower bound on binning rates
  const RateInequality* cover = p.find_label("cover");
  ASSERT_NE(cover, nullptr);
  EXPECT_TRUE(cover->same_constraint(ge("R1'+R2'", "I(V1;V2|U1)")));
}

TEST(RawSystem, MatchesIndependentTranscription) {
  const RatePolytope p = raw_decoding_system();
  const auto rows = oracle::raw_rows();
  std::size_t matched = 0;
  for (const auto& r : rows) {
    std::map<RateVar, Rational> lhs;
    for (std::size_t k = 0; k < 8; ++k)
      if (r.coeff[k] != 0) lhs[p.vars[k]] = Rational(static_cast<int>(r.coeff[k]));
    const RateInequality q = r.lower ? RateInequality::ge(lhs, LinExpr::parse(r.rhs)) : RateInequality::le(lhs, LinExpr::parse(r.rhs));
    for (const auto& s : p.ineqs)
      if (s.same_constraint(q)) {
        ++matched;
        break;
      }
  }
  EXPECT_EQ(matched, rows.size());
}

TEST(RawSystem, ZeroAtomsPinSplitRates) {
  AtomValuation v;
  for (const auto& a : raw_decoding_system().atoms()) v[a] = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> d(3, 0.0);
    d[k] = 1.0;
    EXPECT_NEAR(oracle::raw_support(v, d), 0.0, 1e-12);
  }
}

TEST(FmDerive, MatchesExpectedSystem) {
  const FmDerivation d = fm_derive();
  EXPECT_TRUE(d.matches_expected);
  EXPECT_EQ(d.steps.size(), 8u);
  EXPECT_TRUE(same_system(d.result, build_region(RegionKind::Rhat)));
  for (const auto& s : d.steps) EXPECT_LE(s.after_prune, s.before_prune);
}

TEST(Dexp, AllZero) {
  const AtomValuation v = zero_valuation();
  for (RegionKind k : {RegionKind::R1, RegionKind::R2, RegionKind::Rp1, RegionKind::Rp2}) {
    const DexpSet d = dexp(k, v);
    for (const auto& [label, p] : d.labels) EXPECT_LT(linf(p, {0, 0, 0}), 1e-15) << label;
  }
  EXPECT_EQ(dexp_R1(v).branch, "le");
  EXPECT_EQ(dexp_R1(v).labels.count("H"), 1u);
}

TEST(Dexp, ConstantAuxiliariesGiveCornerPoint) {
  Rng rng(47);
  const BicChannel ch = fixtures::degraded();
  SimpleInput in = collapse_u1(collapse_u2(random_simple_input(rng, 2, 2, 2, 2)));
  const AtomValuation v = simple_valuation(ch, in);
  const JointLaw j = assemble_joint_simple(ch, in);
  const RatePoint a = dexp_R2(v).labels.at("A");
  EXPECT_NEAR(a[0], oracle::mi(j, {Var::X1}, {Var::Y1}, {}), 1e-10);
  EXPECT_NEAR(a[1], 0.0, 1e-12);
  EXPECT_NEAR(a[2], oracle::mi(j, {Var::X2}, {Var::Y3}, {}), 1e-10);
}

TEST(Dexp, ConstantU2MakesHMatchG) {
  Rng rng(53);
  const BicChannel ch = fixtures::oblivious_ordered();
  for (int t = 0; t < 20; ++t) {
    const AtomValuation v = simple_valuation(ch, collapse_u2(random_simple_input(rng, 2, 2, 2, 2)));
    const DexpSet d = dexp_R1(v);
    ASSERT_EQ(d.branch, "le");
    EXPECT_LT(linf(d.labels.at("H"), d.labels.at("G")), 1e-12);
  }
}

TEST(Dexp, Rp2MiddlePointBranches) {
  Rng rng(59);
  int hi = 0, lo = 0;
  for (int t = 0; t < 400; ++t) {
    const BicChannel ch = random_channel(rng, 2, 2, 2, 2, 2);
    const AtomValuation v = simple_valuation(ch, random_simple_input(rng, 2, 2, 2, 2));
    const RatePoint b = dexp_Rp2(v).labels.at("B");
    const double c = atom_value(v, "I(U1,U2;Y2)"), u = atom_value(v, "I(U2;Y3)");
    if (c >= u) {
      ++hi;
      EXPECT_NEAR(b[2], atom_value(v, "I(X2;Y3)"), 1e-9);
    } else {
      ++lo;
      EXPECT_NEAR(b[2], c + atom_value(v, "I(X2;Y3|U2)"), 1e-12);
    }
  }
  EXPECT_GT(hi, 0);
  EXPECT_GT(lo, 0);
}

TEST(Dexp, FormulasMatchVertexEnumeration) {
  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const BicChannel ch = random_channel(rng, 2, 2, 2, 2, 2);
    const AtomValuation v = simple_valuation(ch, random_simple_input(rng, 2, 2, 2, 2));
    for (RegionKind k : {RegionKind::R1, RegionKind::R2, RegionKind::Rp1, RegionKind::Rp2}) {
      const RatePolytope p = evaluate_region(k, v);
      const auto formula = dominant_points(dexp(k, v).points(), kDedupTol);
      const auto brute = dominant_points(enumerate_vertices(p), kDedupTol);
      EXPECT_TRUE(same_point_set(formula, brute, 1e-8)) << region_name(k) << " sample " << t;
      for (const auto& x : dexp(k, v).points()) EXPECT_TRUE(region_contains(p, x)) << region_name(k);
    }
  }
}

TEST(Dexp, NoFormulaForR) { EXPECT_THROW(dexp(RegionKind::R, zero_valuation()), Error); }

TEST(Specialize, StrongCapacityIsRp1WithU2AsX2) {
  EXPECT_TRUE(same_system(with_u2_as_x2(RegionKind::Rp1), build_region(RegionKind::CapStrong)));
}

TEST(Specialize, MartonReduction) {
  const auto [p, side] = marton_reduction();
  EXPECT_TRUE(same_system(p, oracle::marton_system()));
  EXPECT_TRUE(side.same_constraint(le("0", "I(V1;Y1|U1)+I(V2;Y2|U1)-I(V1;V2|U1)")));
}

TEST(Specialize, HanKobayashiReduction) {
  EXPECT_TRUE(same_system(han_kobayashi_reduction(), oracle::han_kobayashi_system()));
}

TEST(Specialize, R2ExtraSystemIsRtildeAtPrivateSatellites) {
  // with V1 = X1 and V2 = U1 the reduced system keeps R2's rows plus one R3 bound
  Rng rng(67);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 30; ++t) {
    const SimpleInput in = random_simple_input(rng, 2, 2, 2, 2);
    const AtomValuation vs = simple_valuation(ch, in);
    const AtomValuation vf = factored_valuation(ch, embed_v1_as_x1(in));
    const auto a = enumerate_vertices(evaluate(r2_pre_reduction_system(), vs));
    const auto b = enumerate_vertices(evaluate(rtilde_system(), vf));
    EXPECT_TRUE(same_point_set(dominant_points(a), dominant_points(b), 1e-9)) << "sample " << t;
  }
}
