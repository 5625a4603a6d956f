#include <gtest/gtest.h>

#include "bic/bic.hpp"
#include "channels.hpp"

using namespace bic;

namespace {

SamplerConfig config(std::size_t samples, std::uint64_t seed = 0) {
  SamplerConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

double max_coord(const std::vector<RatePoint>& cloud, const std::vector<double>& w) {
  double best = 0.0;
  for (const auto& p : cloud) {
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k) s += w[k] * p[k];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST(UnionRegion, SingleDrawIsItsDexpSet) {
  SamplerConfig c = config(1, 5);
  c.companions = false;
  const BicChannel ch = fixtures::degraded();
  const UnionRegion u = union_region(ch, RegionKind::R2, c);
  const SimpleInput in = simple_draw(ch, c, 0).front();
  const auto expect = dominant_points(dexp_R2(simple_valuation(ch, in)).points(), kDedupTol);
  EXPECT_TRUE(same_point_set(u.cloud, expect, 1e-9));
  EXPECT_EQ(u.samples, 1u);
  EXPECT_EQ(u.distributions, 1u);
}

TEST(UnionRegion, NoiselessOrthogonalReachesCapacities) {
  const BicChannel ch = BicChannel::make(
      Kernel::identity(2), fixtures::k2_from(2, 2, 2, [](auto a, auto) { return fixtures::bsc_row(a, 0.0); }),
      Kernel::identity(2));
  const UnionRegion u = union_region(ch, RegionKind::Rp1, config(500));
  EXPECT_NEAR(max_coord(u.cloud, {1, 1, 0}), 1.0, 5e-3);
  EXPECT_NEAR(max_coord(u.cloud, {0, 0, 1}), 1.0, 5e-3);
  EXPECT_LE(max_coord(u.cloud, {1, 1, 0}), 1.0 + 1e-9);
}

TEST(UnionRegion, SeedStability) {
  const BicChannel ch = fixtures::degraded();
  const UnionRegion a = union_region(ch, RegionKind::Rp2, config(2000, 1));
  const UnionRegion b = union_region(ch, RegionKind::Rp2, config(2000, 2));
  const auto dirs = probe_directions();
  EXPECT_LE(directed_gap(a.cloud, b.cloud, dirs), kUnionTol);
  EXPECT_LE(directed_gap(b.cloud, a.cloud, dirs), kUnionTol);
}

TEST(UnionRegion, GrowsWithSamples) {
  const BicChannel ch = fixtures::oblivious_ordered();
  const UnionRegion small = union_region(ch, RegionKind::R1, config(100, 3));
  const UnionRegion large = union_region(ch, RegionKind::R1, config(300, 3));
  for (const auto& x : small.cloud) EXPECT_TRUE(downset_hull_contains(large.cloud, x));
}

TEST(UnionRegion, CloudIsDominationFiltered) {
  const UnionRegion u = union_region(fixtures::degraded(), RegionKind::R2, config(200));
  EXPECT_EQ(dominant_points(u.cloud).size(), u.cloud.size());
  EXPECT_EQ(u.provenance.size(), u.cloud.size());
}

TEST(UnionRegion, FactoredSkipsBinningFailures) {
  const UnionRegion u = union_region(fixtures::degraded(), RegionKind::R, config(100));
  EXPECT_EQ(u.distributions + u.skipped, 100u * 4u);
  EXPECT_FALSE(u.cloud.empty());
}

TEST(UnionRegion, Deterministic) {
  const BicChannel ch = fixtures::degraded();
  EXPECT_EQ(union_to_json(union_region(ch, RegionKind::R1, config(150, 4))).dump(),
            union_to_json(union_region(ch, RegionKind::R1, config(150, 4))).dump());
}

TEST(Sampler, FactoredTablesCycle) {
  const BicChannel ch = fixtures::degraded();
  SamplerConfig c = config(1);
  EXPECT_EQ(factored_draw(ch, c, 3).front().f, f_table(3, 8, 2));
  EXPECT_EQ(factored_draw(ch, c, 259).front().f, f_table(3, 8, 2));
  EXPECT_EQ(factored_draw(ch, c, 0).size(), 4u);
  EXPECT_EQ(simple_draw(ch, c, 0).size(), 9u);
}

TEST(OrderEquivalence, ConstantAuxiliariesShareCornerPoint) {
  Rng rng(89);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 20; ++t) {
    const AtomValuation v = simple_valuation(ch, collapse_u1(collapse_u2(random_simple_input(rng, 2, 2, 2, 2))));
    EXPECT_TRUE(same_point_set(region_points(RegionKind::R2, v), region_points(RegionKind::Rp2, v), 1e-9));
  }
}

TEST(OrderEquivalence, RequiresOrder) {
  EXPECT_THROW(verify_order_equivalence(fixtures::oblivious_noiseless_y1(), 1, config(10)), ConditionNotEstablished);
  EXPECT_THROW(verify_order_equivalence(fixtures::degraded(), 3, config(10)), ParseError);
}

TEST(OrderEquivalence, SmallRunOnDegradedChannel) {
  const EquivalenceReport r = verify_order_equivalence(fixtures::degraded(), 2, config(300));
  ASSERT_TRUE(r.subset_max_excess);
  EXPECT_LE(*r.subset_max_excess, 1e-9);
  EXPECT_LE(r.max_gap_2_in_1, 1e-9);
  EXPECT_EQ(r.directions, 103u);
}

TEST(Redundancy, ConstantU2MakesRdt1Vacuous) {
  Rng rng(97);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 20; ++t) {
    const FactoredInput in = collapse_u2(random_factored_input(rng, {}, 2, 2, f_table(rng.below(256), 8, 2)));
    const AtomValuation v = factored_valuation(ch, in);
    const RatePolytope p = build_region(RegionKind::Rhat);
    const double rdt1 = p.find_label("rdt1")->rhs.evaluate(v), r3 = p.find_label("r3")->rhs.evaluate(v);
    EXPECT_GE(rdt1, r3 - 1e-12);
  }
}

TEST(Redundancy, RdtSmallRun) {
  const RedundancyReport r = verify_rdt_redundancy(fixtures::degraded(), config(150));
  for (double m : r.max_residual) EXPECT_LE(m, 1e-6);
  EXPECT_GT(r.binding[0] + r.binding[1], 0u);
}

TEST(Redundancy, ExtraRowSmallRun) {
  const RedundancyReport r = verify_r2_extra_inequality(fixtures::degraded(), config(300));
  EXPECT_LE(r.max_residual[0], 1e-6);
  EXPECT_GT(r.binding[0], 0u);
  EXPECT_LE(r.unions.max_gap_1_in_2, kUnionTol);
}

TEST(TimeSharing, EndpointsAndSelfMixAreExact) {
  Rng rng(101);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 10; ++t) {
    const SimpleInput a = random_simple_input(rng, 2, 2, 2, 2);
    SimpleInput b = random_simple_input(rng, 2, 2, 2, 2);
    b.pu2 = a.pu2;
    b.px2_u2 = a.px2_u2;
    const RatePolytope sys = build_region(RegionKind::R2);
    for (double alpha : {0.0, 1.0}) {
      const Halfspaces m = to_halfspaces(evaluate(sys, simple_valuation(ch, merge_time_sharing(a, b, alpha))));
      const auto& src = alpha == 1.0 ? a : b;
      for (const auto& x : region_points(RegionKind::R2, simple_valuation(ch, src)))
        EXPECT_LE(system_excess(m, x), 1e-9);
    }
    const Halfspaces self = to_halfspaces(evaluate(sys, simple_valuation(ch, merge_time_sharing(a, a, 0.3))));
    const auto pa = region_points(RegionKind::R2, simple_valuation(ch, a));
    for (const auto& x : pa)
      for (const auto& y : pa) {
        RatePoint mid{0.3 * x[0] + 0.7 * y[0], 0.3 * x[1] + 0.7 * y[1], 0.3 * x[2] + 0.7 * y[2]};
        EXPECT_LE(system_excess(self, mid), 1e-9);
      }
  }
}

TEST(TimeSharing, MergeNeedsSharedSecondTransmitter) {
  Rng rng(103);
  const SimpleInput a = random_simple_input(rng, 2, 2, 2, 2), b = random_simple_input(rng, 2, 2, 2, 2);
  EXPECT_THROW(merge_time_sharing(a, b, 0.5), DimensionMismatch);
}

TEST(TimeSharing, RandomPairsContained) {
  const TimeSharingReport r = verify_no_timesharing_gain(fixtures::degraded(), 2, config(200));
  EXPECT_LE(r.max_merged_excess, 1e-6);
  EXPECT_LE(r.max_union_excess, kUnionTol);
  EXPECT_EQ(r.verdict, "no gain");
}

TEST(CapacityForms, StrongByConstruction) {
  const CapacityFormsReport r = verify_capacity_forms(fixtures::x2_visible(), "strong", config(600));
  EXPECT_EQ(r.forms.size(), 3u);
  EXPECT_LE(r.gaps[0][2], kUnionTol);
  EXPECT_LE(r.gaps[2][0], kUnionTol);
  EXPECT_EQ(r.verdict, "agree");
}

TEST(CapacityForms, UnknownForm) {
  EXPECT_THROW(verify_capacity_forms(fixtures::degraded(), "weak", config(1)), ParseError);
}
