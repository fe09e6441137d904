// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "atspp/retree.hpp"

#include <gtest/gtest.h>

#include <random>

#include "atspp/instance.hpp"
#include "atspp/lp.hpp"
#include "oracles.hpp"

namespace atspp {
namespace {

TEST(BuildZ, GapPointF1) {
  const auto g = MakeGapInstance(1);
  const auto zv = BuildZ(g.point, FindNarrowCuts(g.point, 0, 3, 0.25));
  // Boundary arcs keep x / 1; arcs inside {u1, v1} get x / (1 - 1/2).
  EXPECT_DOUBLE_EQ(zv.z(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(zv.z(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(zv.z(1, 3), 0.5);
  EXPECT_DOUBLE_EQ(zv.z(2, 3), 0.5);
  EXPECT_DOUBLE_EQ(zv.z(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(zv.z(2, 1), 1.0);
  EXPECT_EQ(zv.z.Nonzeros().size(), 6u);
}

TEST(BuildZ, DropsBackwardAndSkippingArcs) {
  // s -> a -> t with a small s -> t arc that skips the middle layer.
  ArcWeights x(3);
  x(0, 1) = 0.9;
  x(0, 2) = 0.1;
  x(1, 2) = 0.9;
  const auto chain = FindNarrowCuts(x, 0, 2, 0.25);
  ASSERT_EQ(chain.layers.size(), 3u);
  const auto zv = BuildZ(x, chain);
  EXPECT_DOUBLE_EQ(zv.z(0, 2), 0);
  EXPECT_DOUBLE_EQ(zv.z(0, 1), 1);
  EXPECT_DOUBLE_EQ(zv.z(1, 2), 1);
}

TEST(BuildZ, ZeroBoundaryMassIsAChainViolation) {
  ArcWeights x(4);
  x(0, 2) = 1;
  x(2, 1) = 1;
  x(1, 3) = 1;
  NarrowCutChain chain;
  chain.n = 4;
  chain.t = 3;
  chain.cuts = {Cut::FromVertices({0}), Cut::FromVertices({0, 1}), Cut::FromVertices({0, 1, 2})};
  chain.layers = {Cut::Singleton(0), Cut::Singleton(1), Cut::Singleton(2), Cut::Singleton(3)};
  EXPECT_THROW(BuildZ(x, chain), ChainViolation);
}

TEST(DecomposeTrees, GapPointF1HasFourEqualTerms) {
  const auto g = MakeGapInstance(1);
  const auto zv = BuildZ(g.point, FindNarrowCuts(g.point, 0, 3, 0.25));
  const auto comb = DecomposeTrees(zv);
  ASSERT_EQ(comb.terms.size(), 4u);
  for (const auto& term : comb.terms) {
    EXPECT_DOUBLE_EQ(term.weight, 0.25);
    EXPECT_TRUE(oracle::ConnectsAll(term.arcs, 4));
    EXPECT_EQ(term.arcs.size(), 3u);
  }
  const auto marg = comb.Marginals();
  EXPECT_DOUBLE_EQ(marg(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(marg(0, 2), 0.5);
  EXPECT_DOUBLE_EQ(marg(1, 3), 0.5);
  EXPECT_DOUBLE_EQ(marg(2, 3), 0.5);
  EXPECT_TRUE(VerifyZ(zv, g.point, &comb).ok());
}

TEST(DecomposeTrees, DisconnectedLayerIsReported) {
  ArcWeights x(4);
  x(0, 1) = 0.5;
  x(0, 2) = 0.5;
  x(1, 3) = 0.5;
  x(2, 3) = 0.5;
  NarrowCutChain chain;
  chain.n = 4;
  chain.t = 3;
  chain.tau = 0.25;
  chain.cuts = {Cut::FromVertices({0}), Cut::FromVertices({0, 1, 2})};
  chain.layers = {Cut::Singleton(0), Cut::FromVertices({1, 2}), Cut::Singleton(3)};
  EXPECT_THROW(DecomposeTrees(BuildZ(x, chain)), LayerDecompositionError);
}

TEST(IsSpanningTree, Basics) {
  EXPECT_TRUE(IsSpanningTree({Arc{0, 1}, Arc{2, 1}}, 3));
  EXPECT_FALSE(IsSpanningTree({Arc{0, 1}, Arc{1, 0}}, 3));
  EXPECT_FALSE(IsSpanningTree({Arc{0, 1}}, 3));
  EXPECT_TRUE(IsSpanningTree({}, 1));
}

TEST(CrossingCounts, Directions) {
  const ArcSet arcs{Arc{0, 1}, Arc{2, 0}, Arc{1, 2}};
  EXPECT_EQ(CrossingCounts(arcs, Cut::FromVertices({0})), (std::pair<int, int>{1, 1}));
  EXPECT_EQ(CrossingCounts(arcs, Cut::FromVertices({0, 1})), (std::pair<int, int>{1, 1}));
}

// Each component's marginal law survives both combination rules.
TEST(Combine, ProductAndCouplingPreserveComponentLaws) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> parts(1, 4), num(1, 9);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<internal::Component> comps;
    int next_vertex = 0;
    const int c = 1 + trial % 4;
    for (int k = 0; k < c; ++k) {
      internal::Component comp;
      std::vector<double> w(parts(rng));
      double sum = 0;
      for (double& v : w) sum += (v = num(rng));
      for (double v : w) {
        comp.push_back({v / sum, ArcSet{Arc{next_vertex, next_vertex + 1}}});
        ++next_vertex;
      }
      comps.push_back(comp);
    }
    for (const auto& combined : {internal::Product(comps), internal::Couple(comps)}) {
      double total = 0;
      std::map<Arc, double> marg;
      for (const auto& [w, arcs] : combined) {
        total += w;
        EXPECT_EQ(arcs.size(), static_cast<std::size_t>(c));
        for (Arc a : arcs) marg[a] += w;
      }
      EXPECT_NEAR(total, 1, 1e-12);
      for (const auto& comp : comps) {
        for (const auto& [w, arcs] : comp) EXPECT_NEAR(marg[arcs[0]], w, 1e-12);
      }
    }
    std::size_t product = 1;
    for (const auto& comp : comps) product *= comp.size();
    EXPECT_EQ(internal::Product(comps).size(), product);
    std::size_t sizes = 0;
    for (const auto& comp : comps) sizes += comp.size();
    EXPECT_LE(internal::Couple(comps).size(), sizes - comps.size() + 1);
  }
}

// Checks the decomposition without VerifyZ: spanning (by connectivity and
// size), one forward crossing of every narrow cut, exact boundary
// marginals, and marginals dominated by z.
void ExpectValidDecomposition(const ArcWeights& x, int s, int t, double tau, const std::string& label) {
  const auto chain = FindNarrowCuts(x, s, t, tau);
  const auto zv = BuildZ(x, chain);
  const auto comb = DecomposeTrees(zv);
  const int n = x.n();
  double total = 0;
  for (const auto& term : comb.terms) {
    total += term.weight;
    EXPECT_GT(term.weight, 0) << label;
    EXPECT_EQ(static_cast<int>(term.arcs.size()), n - 1) << label;
    EXPECT_TRUE(oracle::ConnectsAll(term.arcs, n)) << label;
    for (Cut c : chain.cuts) {
      int fwd = 0, bwd = 0;
      for (Arc a : term.arcs) {
        if (c.Contains(a.tail) && !c.Contains(a.head)) ++fwd;
        if (!c.Contains(a.tail) && c.Contains(a.head)) ++bwd;
      }
      EXPECT_EQ(fwd, 1) << label;
      EXPECT_EQ(bwd, 0) << label;
    }
  }
  EXPECT_NEAR(total, 1, 1e-9) << label;
  const auto marg = comb.Marginals();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      EXPECT_LE(marg(u, v), zv.z(u, v) + 1e-9) << label;
      EXPECT_LE(zv.z(u, v), x(u, v) / (1 - 3 * tau) + 1e-9) << label;
      if (chain.LayerOf(v) == chain.LayerOf(u) + 1) {
        EXPECT_NEAR(marg(u, v), zv.z(u, v), 1e-9) << label;
      }
    }
  }
  for (Cut c : chain.cuts) {
    EXPECT_NEAR(oracle::OutMass(zv.z, c), 1, 1e-9) << label;
    EXPECT_NEAR(oracle::InMass(zv.z, c), 0, 1e-9) << label;
  }
  const auto rep = VerifyZ(zv, x, &comb);
  EXPECT_TRUE(rep.ok()) << label << ": " << (rep.ok() ? "" : rep.failures[0]);
}

TEST(DecomposeTrees, GapPoints) {
  for (int r = 1; r <= 6; ++r) {
    const auto g = MakeGapInstance(r);
    ExpectValidDecomposition(g.point, 0, 2 * r + 1, 0.25, "F_" + std::to_string(r));
  }
}

TEST(DecomposeTrees, PathMixtures) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3 + trial % 10;
    const auto x = oracle::RandomPathMixture(n, 0, n - 1, 1 + trial % 6, rng);
    ExpectValidDecomposition(x, 0, n - 1, (trial % 6) / 20.0, "trial " + std::to_string(trial));
  }
}

TEST(DecomposeTrees, LpOptima) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 5 + static_cast<int>(seed % 8);
    const auto inst = RandomInstance(n, seed, seed % 2 ? RandomModel::kClosure : RandomModel::kEuclideanPerturbed);
    ExpectValidDecomposition(SolveSubtourLp(inst).x, inst.s(), inst.t(), 0.25, "seed " + std::to_string(seed));
  }
}

TEST(DecomposeTrees, Deterministic) {
  std::mt19937_64 rng(2);
  const auto x = oracle::RandomPathMixture(9, 0, 8, 5, rng);
  const auto zv = BuildZ(x, FindNarrowCuts(x, 0, 8, 0.25));
  const auto a = DecomposeTrees(zv), b = DecomposeTrees(zv);
  ASSERT_EQ(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    EXPECT_EQ(a.terms[i].arcs, b.terms[i].arcs);
    EXPECT_EQ(a.terms[i].weight, b.terms[i].weight);
  }
}

TEST(VerifyZ, FlagsCapExcess) {
  const auto g = MakeGapInstance(1);
  auto zv = BuildZ(g.point, FindNarrowCuts(g.point, 0, 3, 0.25));
  zv.z(1, 2) = 2.5;
  const auto rep = VerifyZ(zv, g.point);
  EXPECT_FALSE(rep.ok());
  EXPECT_NEAR(rep.max_cap_excess, 2.5 - 0.5 * 4, 1e-12);
}

}  // namespace
}  // namespace atspp
