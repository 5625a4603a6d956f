#include <gtest/gtest.h>

#include <algorithm>

#include "bic/bic.hpp"
#include "channels.hpp"

using namespace bic;

namespace {

RatePolytope system(std::vector<RateVar> vars, const std::vector<std::pair<std::string, std::string>>& rows) {
  RatePolytope p;
  p.vars = std::move(vars);
  for (const auto& [l, r] : rows) p.ineqs.push_back(le(l, r));
  return p;
}

RatePolytope cube() {
  return evaluate(system({"x", "y", "z"}, {{"x", "1"}, {"y", "1"}, {"z", "1"}, {"-x", "0"}, {"-y", "0"}, {"-z", "0"}}),
                  {});
}

RatePolytope simplex3() {
  return evaluate(system({"x", "y", "z"}, {{"x+y+z", "1"}, {"-x", "0"}, {"-y", "0"}, {"-z", "0"}}), {});
}

bool has_point(const std::vector<RatePoint>& pts, const RatePoint& x) {
  return std::any_of(pts.begin(), pts.end(), [&](const RatePoint& p) { return linf(p, x) < 1e-12; });
}

}  // namespace

TEST(FmEliminate, HandExample) {
  const RatePolytope p = system({"x", "y"}, {{"x+y", "3"}, {"-y", "0"}, {"x-y", "1"}});
  const RatePolytope e = fm_eliminate(p, "y");
  EXPECT_EQ(e.vars, std::vector<RateVar>{"x"});
  EXPECT_EQ(e.ineqs.size(), 2u);
  const RatePolytope pr = prune_redundant(e);
  ASSERT_EQ(pr.ineqs.size(), 1u);
  EXPECT_TRUE(pr.ineqs[0].same_constraint(le("x", "2")));
}

TEST(FmEliminate, AbsentVariable) {
  RatePolytope p = system({"x", "y"}, {{"x", "1"}, {"-x", "0"}});
  const RatePolytope e = fm_eliminate(p, "y");
  EXPECT_EQ(e.vars, std::vector<RateVar>{"x"});
  EXPECT_EQ(e.ineqs.size(), 2u);
}

TEST(FmEliminate, UnknownVariable) { EXPECT_THROW(fm_eliminate(system({"x"}, {{"x", "1"}}), "w"), UnknownVariable); }

TEST(FmEliminate, SoundOnRandomSystems) {
  // projection membership decided exactly: FM rows vs. a rational LP on the lift
  Rng rng(101);
  int checked = 0;
  for (int t = 0; t < 120; ++t) {
    const std::size_t nv = 3 + rng.below(4);  // 3..6 variables
    const std::size_t nr = 4 + rng.below(9);  // 4..12 rows
    std::vector<RateVar> vars;
    for (std::size_t k = 0; k < nv; ++k) vars.push_back("x" + std::to_string(k));
    RatePolytope p;
    p.vars = vars;
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    for (std::size_t r = 0; r < nr; ++r) {
      std::map<RateVar, Rational> lhs;
      std::vector<Rational> row(nv);
      for (std::size_t k = 0; k < nv; ++k) {
        row[k] = Rational(static_cast<int>(rng.below(5)) - 2, 1 + static_cast<int>(rng.below(2)));
        if (row[k] != 0) lhs[vars[k]] = row[k];
      }
      const Rational c(static_cast<int>(rng.below(7)) - 1);
      if (lhs.empty()) continue;
      p.ineqs.push_back(RateInequality::le(lhs, LinExpr(c)));
      A.push_back(row);
      b.push_back(c);
    }
    // eliminate all but the first two variables, pruning between steps to bound the row count
    RatePolytope proj = p;
    for (std::size_t k = 2; k < nv; ++k) proj = prune_redundant(fm_eliminate(proj, vars[k]));
    for (int q = 0; q < 12; ++q) {
      const Rational x0(static_cast<int>(rng.below(13)) - 6, 2), x1(static_cast<int>(rng.below(13)) - 6, 2);
      bool in_fm = true;
      for (const auto& r : proj.ineqs) {
        Rational s(0);
        for (const auto& [v, c] : r.lhs) s += c * (v == vars[0] ? x0 : x1);
        if (s > r.rhs.constant) in_fm = false;
      }
      // lift: free variables x2.. as differences of nonnegative pairs
      const std::size_t free = nv - 2;
      LinearProgram<Rational> lp(2 * free);
      for (std::size_t i = 0; i < A.size(); ++i) {
        std::vector<Rational> row(2 * free);
        for (std::size_t k = 0; k < free; ++k) {
          row[k] = A[i][k + 2];
          row[free + k] = -A[i][k + 2];
        }
        lp.add_row(row, RowSense::Le, b[i] - A[i][0] * x0 - A[i][1] * x1);
      }
      const bool in_lp = solve(lp).status != LpStatus::Infeasible;
      EXPECT_EQ(in_fm, in_lp) << "system " << t << " point (" << x0 << "," << x1 << ")";
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
}

TEST(PruneRedundant, DropsLooserBound) {
  const RatePolytope p = prune_redundant(system({"x"}, {{"x", "2"}, {"x", "3"}}));
  ASSERT_EQ(p.ineqs.size(), 1u);
  EXPECT_TRUE(p.ineqs[0].same_constraint(le("x", "2")));
}

TEST(PruneRedundant, KeepsIrredundantSimplex) {
  EXPECT_EQ(prune_redundant(system({"x", "y", "z"}, {{"x+y+z", "1"}, {"-x", "0"}, {"-y", "0"}, {"-z", "0"}})).ineqs.size(),
            4u);
  EXPECT_EQ(prune_redundant(simplex3()).ineqs.size(), 4u);
}

TEST(PruneRedundant, PreservesMembership) {
  Rng rng(55);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 5; ++t) {
    const AtomValuation v = simple_valuation(ch, random_simple_input(rng, 2, 2, 2, 2));
    const RatePolytope full = evaluate_region(RegionKind::R2, v);
    const RatePolytope pruned = prune_redundant(full);
    EXPECT_LE(pruned.ineqs.size(), full.ineqs.size());
    for (int k = 0; k < 1000; ++k) {
      const RatePoint x{rng.uniform() * 1.2 - 0.1, rng.uniform() * 1.2 - 0.1, rng.uniform() * 1.2 - 0.1};
      const Halfspaces h = to_halfspaces(full);
      if (std::abs(system_excess(h, x)) < 1e-9) continue;
      EXPECT_EQ(region_contains(full, x), region_contains(pruned, x));
    }
  }
}

TEST(PruneRedundant, KeepsBindingRdtRow) {
  Rng rng(77);
  bool found = false;
  for (int t = 0; t < 4000 && !found; ++t) {
    const BicChannel ch = random_channel(rng, 2, 2, 2, 2, 2);
    const FactoredInput in = random_factored_input(rng, {}, 2, 2, f_table(rng.below(256), 8, 2));
    const AtomValuation v = factored_valuation(ch, in);
    if (!check_cnst1(v)) continue;
    const RatePolytope hat = evaluate_region(RegionKind::Rhat, v);
    const RatePolytope without = [&] {
      RatePolytope p = hat;
      std::erase_if(p.ineqs, [](const RateInequality& r) { return r.label == "rdt1"; });
      return p;
    }();
    // binding: some vertex of the system without rdt1 violates it
    for (const auto& x : enumerate_vertices(without)) {
      if (row_excess(hat, "rdt1", x) > 1e-6) {
        found = true;
        break;
      }
    }
    if (!found) continue;
    const RatePolytope pruned = prune_redundant(hat);
    EXPECT_NE(pruned.find_label("rdt1"), nullptr);
  }
  EXPECT_TRUE(found);
}

TEST(SubstituteRates, AddsDefiningPair) {
  const RatePolytope p = system({"R1c", "R1p"}, {{"R1c", "1"}, {"R1p", "1"}});
  const RatePolytope s = substitute_rates(p, {{"R1", {"R1c", "R1p"}}});
  EXPECT_EQ(s.vars.size(), 3u);
  ASSERT_EQ(s.ineqs.size(), 4u);
  EXPECT_TRUE(s.ineqs[2].same_constraint(le("R1-R1c-R1p", "0")));
  EXPECT_TRUE(s.ineqs[3].same_constraint(ge("R1-R1c-R1p", "0")));
}

TEST(SubstituteRates, EmptyDefinitions) {
  const RatePolytope p = system({"x"}, {{"x", "1"}});
  EXPECT_TRUE(same_system(substitute_rates(p, {}), p));
}

TEST(SubstituteRates, FullSplitHasElevenVariables) {
  EXPECT_EQ(substitute_rates(raw_decoding_system(), rate_split_substitutions()).vars.size(), 11u);
}

TEST(SubstituteRates, UnknownPart) {
  EXPECT_THROW(substitute_rates(system({"x"}, {{"x", "1"}}), {{"R", {"x", "w"}}}), UnknownVariable);
}

TEST(Evaluate, AllZeroValuationGivesOrigin) {
  AtomValuation v;
  for (const auto& a : build_region(RegionKind::R).atoms()) v[a] = 0.0;
  const auto verts = enumerate_vertices(evaluate_region(RegionKind::R, v));
  ASSERT_EQ(verts.size(), 1u);
  EXPECT_LT(linf(verts[0], {0, 0, 0}), 1e-12);
}

TEST(Evaluate, NoiselessChannelIsBox) {
  // Y1 = X1, Y2 ignores X1 and sees X2, Y3 = X2; U1, U2 constant
  const BicChannel ch = BicChannel::make(Kernel::identity(2), fixtures::k2_from(2, 2, 2, [](auto, auto b) {
                                           return fixtures::bsc_row(b, 0.0);
                                         }),
                                         Kernel::identity(2));
  SimpleInput in{1, 1, {1.0}, {1.0}, Kernel::from_rows({{0.5, 0.5}}), Kernel::from_rows({{0.5, 0.5}})};
  const auto verts = enumerate_vertices(evaluate_region(RegionKind::Rp2, simple_valuation(ch, in)));
  const auto dom = dominant_points(verts);
  ASSERT_EQ(dom.size(), 1u);
  EXPECT_LT(linf(dom[0], {1, 0, 1}), 1e-12);
}

TEST(Evaluate, MissingAtom) {
  AtomValuation v{{MiAtom::parse("I(X1;Y1|U1)"), 0.5}};
  EXPECT_THROW(evaluate_region(RegionKind::Rp2, v), MissingAtom);
}

TEST(EnumerateVertices, Cube) { EXPECT_EQ(enumerate_vertices(cube()).size(), 8u); }

TEST(EnumerateVertices, Simplex) { EXPECT_EQ(enumerate_vertices(simplex3()).size(), 4u); }

TEST(EnumerateVertices, TooManyDimensions) {
  const RatePolytope p = evaluate(system({"a", "b", "c", "d"}, {{"a", "1"}}), {});
  EXPECT_THROW(enumerate_vertices(p), DimensionTooLarge);
}

TEST(EnumerateVertices, Unbounded) {
  EXPECT_THROW(enumerate_vertices(evaluate(system({"x", "y", "z"}, {{"-x", "0"}, {"-y", "0"}, {"-z", "0"}}), {})),
               UnboundedRegion);
}

TEST(DominantPoints, Cube) {
  const auto d = dominant_points(enumerate_vertices(cube()));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_LT(linf(d[0], {1, 1, 1}), 1e-12);
}

TEST(DominantPoints, Simplex) {
  const auto d = dominant_points(enumerate_vertices(simplex3()));
  ASSERT_EQ(d.size(), 3u);
  EXPECT_TRUE(has_point(d, {1, 0, 0}));
  EXPECT_TRUE(has_point(d, {0, 1, 0}));
  EXPECT_TRUE(has_point(d, {0, 0, 1}));
}

TEST(DominantPoints, Empty) { EXPECT_TRUE(dominant_points({}).empty()); }

TEST(DominantPoints, IdempotentAndOrderFree) {
  Rng rng(3);
  std::vector<RatePoint> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
  const auto once = dominant_points(pts);
  EXPECT_TRUE(same_point_set(dominant_points(once), once, 0.0));
  std::reverse(pts.begin(), pts.end());
  EXPECT_TRUE(same_point_set(dominant_points(pts), once, 0.0));
}

TEST(RegionContains, OriginAndVertices) {
  Rng rng(17);
  const AtomValuation v = simple_valuation(fixtures::degraded(), random_simple_input(rng, 2, 2, 2, 2));
  for (RegionKind k : {RegionKind::R1, RegionKind::R2, RegionKind::Rp1, RegionKind::Rp2}) {
    const RatePolytope p = evaluate_region(k, v);
    EXPECT_TRUE(region_contains(p, {0, 0, 0}));
    for (const auto& x : enumerate_vertices(p)) EXPECT_TRUE(region_contains(p, x));
  }
}

TEST(RegionContains, ScaledVertexLeaves) {
  const RatePolytope p = simplex3();
  EXPECT_FALSE(region_contains(p, {(1 + 1e-3) / 3, (1 + 1e-3) / 3, (1 + 1e-3) / 3}));
  EXPECT_TRUE(region_contains(p, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
}

TEST(DownsetHull, Examples) {
  const std::vector<RatePoint> cloud{{1, 0}, {0, 1}};
  EXPECT_TRUE(downset_hull_contains(cloud, {1, 0}));
  EXPECT_TRUE(downset_hull_contains(cloud, {0, 0}));
  EXPECT_TRUE(downset_hull_contains(cloud, {0.5, 0.5}));
  EXPECT_FALSE(downset_hull_contains(cloud, {0.9, 0.9}));
}

TEST(DownsetHull, AgreesWithHalfspacesOnGrid) {
  Rng rng(23);
  const BicChannel ch = fixtures::degraded();
  for (int t = 0; t < 4; ++t) {
    const AtomValuation v = simple_valuation(ch, random_simple_input(rng, 2, 2, 2, 2));
    for (RegionKind k : {RegionKind::R1, RegionKind::Rp2}) {
      const RatePolytope p = evaluate_region(k, v);
      const Halfspaces h = to_halfspaces(p);
      const auto verts = enumerate_vertices(p);
      for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
          for (int c = 0; c <= 8; ++c) {
            const RatePoint x{a / 8.0, b / 8.0, c / 8.0};
            if (std::abs(system_excess(h, x)) < 1e-6) continue;
            EXPECT_EQ(region_contains(p, x), downset_hull_contains(verts, x, 1e-6));
          }
    }
  }
}

TEST(Slice, CubeGivesSquare) {
  const auto poly = slice(enumerate_vertices(cube()), 2, 0.5);
  EXPECT_EQ(poly.size(), 4u);
}

TEST(Slice, SimplexApexIsPoint) {
  const auto poly = slice(enumerate_vertices(simplex3()), 2, 1.0);
  ASSERT_EQ(poly.size(), 1u);
  EXPECT_NEAR(poly[0][0], 0.0, 1e-12);
  EXPECT_NEAR(poly[0][1], 0.0, 1e-12);
}

TEST(Slice, OutsideRange) { EXPECT_THROW(slice(enumerate_vertices(cube()), 0, 1.5), Infeasible); }
