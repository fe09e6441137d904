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

#include "atspp/patch.hpp"

#include <gtest/gtest.h>

#include <random>

#include "atspp/exact.hpp"
#include "atspp/instance.hpp"
#include "oracles.hpp"

namespace atspp {
namespace {

TEST(HoffmanBounds, Values) {
  ArcWeights x(3);
  x(0, 1) = 1;
  x(1, 2) = 1;
  auto cfg = SampleConfig::Make(3, 0.25, 1);
  cfg.alpha = 2;
  const auto b = HoffmanBounds({Arc{0, 1}, Arc{1, 2}}, x, 0, 2, cfg);
  EXPECT_DOUBLE_EQ(b.lower(0, 1), 1);
  EXPECT_DOUBLE_EQ(b.lower(2, 0), 1);
  EXPECT_DOUBLE_EQ(b.lower(1, 0), 0);
  EXPECT_DOUBLE_EQ(b.upper(0, 1), 1 + 5 * 2);
  EXPECT_DOUBLE_EQ(b.upper(2, 0), 1);
  EXPECT_DOUBLE_EQ(b.upper(0, 2), 0);
}

TEST(VerifyHoffman, CaseCountsAndBruteSlack) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 3 + trial % 8;
    const auto x = oracle::RandomPathMixture(n, 0, n - 1, 1 + trial % 4, rng);
    const auto chain = FindNarrowCuts(x, 0, n - 1, 0.25);
    const auto comb = DecomposeTrees(BuildZ(x, chain));
    const auto cfg = SampleConfig::Make(n, 0.25, trial);
    const auto tree = SampleTree(comb, cfg);
    const auto b = HoffmanBounds(tree, x, 0, n - 1, cfg);
    const auto rep = VerifyHoffman(b.lower, b.upper, chain);
    EXPECT_TRUE(rep.ok()) << "trial " << trial;
    const long quarter = 1L << (n - 2);
    EXPECT_EQ(rep.cases[0].cuts, chain.k());
    EXPECT_EQ(rep.cases[1].cuts, quarter - chain.k());
    EXPECT_EQ(rep.cases[2].cuts, quarter);
    EXPECT_EQ(rep.cases[3].cuts, (1L << n) - 2 - 2 * quarter);
    double brute = std::numeric_limits<double>::infinity();
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
      brute = std::min(brute, oracle::InMass(b.upper, Cut(m)) - oracle::OutMass(b.lower, Cut(m)));
    }
    double reported = std::numeric_limits<double>::infinity();
    for (const auto& c : rep.cases) reported = std::min(reported, c.min_slack);
    EXPECT_NEAR(reported, brute, 1e-9);
  }
}

TEST(VerifyHoffman, ReportsViolation) {
  ArcWeights lower(3), upper(3);
  lower(0, 1) = 1;
  upper(0, 1) = 1;
  NarrowCutChain chain;
  chain.n = 3;
  chain.t = 2;
  chain.cuts = {Cut::Singleton(0), Cut::FromVertices({0, 1})};
  const auto rep = VerifyHoffman(lower, upper, chain);
  ASSERT_FALSE(rep.ok());
  EXPECT_GT(oracle::OutMass(lower, *rep.witness), oracle::InMass(upper, *rep.witness));
}

// Rebuilds the circulation independently and solves it as an LP.
double CirculationOracle(const ArcSet& arcs, const DirectedMetric& inst) {
  CirculationProblem<long long> p;
  p.n = inst.n();
  for (int u = 0; u < inst.n(); ++u) {
    for (int v = 0; v < inst.n(); ++v) {
      if (u == v) continue;
      const bool sampled = std::find(arcs.begin(), arcs.end(), Arc{u, v}) != arcs.end();
      const bool ts = u == inst.t() && v == inst.s();
      p.AddArc(u, v, sampled || ts ? 1 : 0, ts ? std::optional<long long>(1) : std::nullopt,
               static_cast<long long>(inst.cost(u, v)));
    }
  }
  return *oracle::CirculationLp(p);
}

TEST(AugmentToEulerian, BalancedCoveringAndOptimal) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 6);
    const auto inst = RandomInstance(n, seed, RandomModel::kClosure);
    std::mt19937_64 rng(seed);
    // Random spanning tree: each v > 0 hooks to an earlier vertex, in a
    // random direction.
    ArcSet tree;
    std::bernoulli_distribution dir(0.5);
    for (int v = 1; v < n; ++v) {
      const int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
      tree.push_back(dir(rng) ? Arc{u, v} : Arc{v, u});
    }
    std::sort(tree.begin(), tree.end());
    const auto g = AugmentToEulerian(tree, inst);
    EXPECT_EQ(g.multiplicity(inst.t(), inst.s()), 1);
    for (Arc a : tree) EXPECT_GE(g.multiplicity[a], 1);
    for (int v = 0; v < n; ++v) {
      long long in = 0, out = 0;
      for (int w = 0; w < n; ++w) {
        if (w == v) continue;
        in += g.multiplicity(w, v);
        out += g.multiplicity(v, w);
      }
      EXPECT_EQ(in, out);
    }
    EXPECT_NEAR(g.circulation_cost, CirculationOracle(tree, inst), 1e-6) << "seed " << seed;
  }
}

TEST(ExtractPath, SimpleCycle) {
  const auto inst = MakeGapInstance(1).metric;
  EulerianMultigraph g{ArcVector<long long>(4), 0};
  g.multiplicity(0, 1) = g.multiplicity(1, 2) = g.multiplicity(2, 3) = g.multiplicity(3, 0) = 1;
  const auto w = ExtractPath(g, inst);
  EXPECT_EQ(w.path, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(w.walk, w.path);
  EXPECT_DOUBLE_EQ(w.cost, PathCost(w.path, inst));
}

TEST(ExtractPath, ShortcutsRepeatedVisits) {
  // s=0 -> 1 -> 2 -> 1 -> 3=t plus t -> s.
  const auto inst = RandomInstance(4, 2, RandomModel::kClosure);
  EulerianMultigraph g{ArcVector<long long>(4), 0};
  g.multiplicity(0, 1) = g.multiplicity(1, 2) = g.multiplicity(2, 1) = g.multiplicity(1, 3) = 1;
  g.multiplicity(3, 0) = 1;
  const auto w = ExtractPath(g, inst);
  EXPECT_EQ(w.walk.size(), 5u);
  EXPECT_EQ(w.walk.front(), 0);
  EXPECT_EQ(w.walk.back(), 3);
  EXPECT_EQ(w.path, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_LE(w.cost, w.walk_cost + 1e-12);
}

TEST(ExtractPath, RejectsBadMultigraphs) {
  const auto inst = MakeGapInstance(1).metric;
  EulerianMultigraph unbalanced{ArcVector<long long>(4), 0};
  unbalanced.multiplicity(0, 1) = 1;
  unbalanced.multiplicity(3, 0) = 1;
  EXPECT_THROW(ExtractPath(unbalanced, inst), ValidationError);
  EulerianMultigraph double_ts{ArcVector<long long>(4), 0};
  double_ts.multiplicity(0, 3) = double_ts.multiplicity(3, 0) = 2;
  EXPECT_THROW(ExtractPath(double_ts, inst), ValidationError);
  EulerianMultigraph split{ArcVector<long long>(4), 0};
  split.multiplicity(0, 3) = split.multiplicity(3, 0) = 1;
  split.multiplicity(1, 2) = split.multiplicity(2, 1) = 1;
  EXPECT_THROW(ExtractPath(split, inst), ValidationError);
}

TEST(IsHamiltonianPath, Basics) {
  const auto inst = MakeGapInstance(1).metric;
  EXPECT_TRUE(IsHamiltonianPath({0, 2, 1, 3}, inst));
  EXPECT_FALSE(IsHamiltonianPath({0, 2, 2, 3}, inst));
  EXPECT_FALSE(IsHamiltonianPath({1, 0, 2, 3}, inst));
  EXPECT_FALSE(IsHamiltonianPath({0, 1, 3}, inst));
}

TEST(ApproximationBound, Formula) {
  auto cfg = SampleConfig::Make(10, 0.25, 1);
  EXPECT_NEAR(ApproximationBound(cfg, 2.0), (12 + 5 * cfg.alpha) * 2.0, 1e-9);
}

void ExpectRoundSound(const DirectedMetric& inst, std::uint64_t seed, const std::string& label) {
  RoundOptions opts;
  opts.seed = seed;
  const auto rep = Round(inst, opts);
  const auto& r = rep.result;
  EXPECT_TRUE(IsHamiltonianPath(r.path, inst)) << label;
  EXPECT_NEAR(r.cost, PathCost(r.path, inst), 1e-9) << label;
  EXPECT_LE(r.cost, rep.bound + 1e-9) << label;
  EXPECT_LE(r.cost, r.circulation_cost - inst.cost(inst.t(), inst.s()) + 1e-6) << label;
  if (inst.n() <= 12) {
    const double opt = HeldKarp(inst).cost;
    EXPECT_GE(r.cost, opt - 1e-9) << label;
    EXPECT_LE(rep.lp.value, opt + 1e-6) << label;
  }
  ASSERT_TRUE(rep.hoffman.has_value()) << label;
  EXPECT_TRUE(rep.hoffman->ok()) << label;
  EXPECT_TRUE(rep.structure.has_value() && rep.structure->ok()) << label;
  EXPECT_TRUE(rep.draw.good) << label;
}

TEST(Round, GapInstances) {
  for (int r = 1; r <= 5; ++r) ExpectRoundSound(MakeGapInstance(r).metric, 1, "F_" + std::to_string(r));
}

TEST(Round, RandomInstances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 10);
    const auto inst = RandomInstance(n, seed, seed % 2 ? RandomModel::kClosure : RandomModel::kEuclideanPerturbed);
    ExpectRoundSound(inst, seed, "seed " + std::to_string(seed));
  }
}

TEST(Round, TwoVertices) {
  const auto rep = Round(DirectedMetric(2, 0, 1, {0, 3, 8, 0}));
  EXPECT_EQ(rep.result.path, (std::vector<int>{0, 1}));
  EXPECT_DOUBLE_EQ(rep.result.cost, 3);
}

TEST(Round, DeterministicInSeed) {
  const auto inst = RandomInstance(10, 5, RandomModel::kEuclideanPerturbed);
  RoundOptions opts;
  opts.seed = 42;
  EXPECT_EQ(Round(inst, opts).result.path, Round(inst, opts).result.path);
  EXPECT_EQ(Round(inst, opts).draw.arcs, Round(inst, opts).draw.arcs);
}

}  // namespace
}  // namespace atspp
