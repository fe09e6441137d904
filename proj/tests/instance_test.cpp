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

#include "atspp/instance.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <random>
#include <string>

#include "atspp/exact.hpp"
#include "oracles.hpp"

namespace atspp {
namespace {

using ::testing::HasSubstr;

void ExpectTriangle(const DirectedMetric& m) {
  for (int u = 0; u < m.n(); ++u) {
    for (int v = 0; v < m.n(); ++v) {
      for (int w = 0; w < m.n(); ++w) {
        ASSERT_LE(m.cost(u, w), m.cost(u, v) + m.cost(v, w) + 1e-9) << u << " " << v << " " << w;
      }
    }
  }
}

template <typename F>
std::string ErrorOf(F&& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseInstance, TwoVertices) {
  const auto m = ParseInstance("atspp 1\nn 2\ns 0\nt 1\n0 5\n7 0\n");
  EXPECT_EQ(m.n(), 2);
  EXPECT_EQ(m.s(), 0);
  EXPECT_EQ(m.t(), 1);
  EXPECT_EQ(m.cost(0, 1), 5);
  EXPECT_EQ(m.cost(1, 0), 7);
}

TEST(ParseInstance, CommentsAndBlankLines) {
  const auto m = ParseInstance("# hello\natspp 1\n\nn 3\ns 2\nt 0\n# rows\n0 1 2\n1 0 1\n2 1 0\n");
  EXPECT_EQ(m.n(), 3);
  EXPECT_EQ(m.s(), 2);
  EXPECT_EQ(m.t(), 0);
  EXPECT_EQ(m.cost(2, 1), 1);
}

TEST(ParseInstance, GapInstanceRoundTrips) {
  const auto g = MakeGapInstance(2);
  const std::string text = FormatInstance(g.metric);
  const auto back = ParseInstance(text);
  EXPECT_EQ(back.n(), 6);
  EXPECT_EQ(back.matrix(), g.metric.matrix());
  EXPECT_EQ(back.s(), 0);
  EXPECT_EQ(back.t(), 5);
  ExpectTriangle(back);
}

TEST(ParseInstance, RandomInstancesRoundTripExactly) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = RandomInstance(9, seed, RandomModel::kEuclideanPerturbed);
    const auto back = ParseInstance(FormatInstance(m));
    EXPECT_EQ(back.matrix(), m.matrix());
  }
}

TEST(ParseInstance, ShortRowIsRejected) {
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nn 3\ns 0\nt 2\n0 1 2\n1 0\n2 1 0\n"); }),
              HasSubstr("row length"));
}

TEST(ParseInstance, MissingRowIsRejected) {
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nn 3\ns 0\nt 2\n0 1 2\n1 0 1\n"); }),
              HasSubstr("non-square"));
}

TEST(ParseInstance, MalformedHeader) {
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 2\nn 2\ns 0\nt 1\n0 1\n1 0\n"); }),
              HasSubstr("malformed header"));
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nm 2\ns 0\nt 1\n0 1\n1 0\n"); }),
              HasSubstr("malformed header"));
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nn x\ns 0\nt 1\n0 1\n1 0\n"); }),
              HasSubstr("malformed"));
}

TEST(ParseInstance, SameSourceAndSink) {
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nn 2\ns 1\nt 1\n0 1\n1 0\n"); }),
              HasSubstr("s and t must differ"));
}

TEST(ParseInstance, NegativeCost) {
  EXPECT_THAT(ErrorOf([] { ParseInstance("atspp 1\nn 2\ns 0\nt 1\n0 -1\n1 0\n"); }),
              HasSubstr("negative cost"));
}

TEST(ParseInstance, TriangleViolationRejectedUnlessCompleted) {
  const std::string text = "atspp 1\nn 3\ns 0\nt 2\n0 1 9\n1 0 1\n1 1 0\n";
  EXPECT_THAT(ErrorOf([&] { ParseInstance(text); }), HasSubstr("triangle"));
  const auto m = ParseInstance(text, {.complete = true});
  EXPECT_EQ(m.cost(0, 2), 2);
  ExpectTriangle(m);
}

TEST(ParseInstance, MissingArcsWithCompletion) {
  const auto m = ParseInstance("atspp 1\nn 3\ns 0\nt 2\n0 1 -\n- 0 1\n- - 0\n", {.complete = true});
  EXPECT_EQ(m.cost(0, 2), 2);
  EXPECT_EQ(m.cost(2, 0), 3 * 1 + 1);
}

TEST(MetricCompletion, PathDigraph) {
  PartialDigraph g{3, 0, 2, {{0, 1, 1}, {1, 2, 1}}, {}};
  EXPECT_EQ(MetricCompletion(g).cost(0, 2), 2);
}

TEST(MetricCompletion, MatchesDijkstraOnGapGraphs) {
  for (int r = 1; r <= 6; ++r) {
    const auto g = GapFamily::Graph(r);
    const auto m = MetricCompletion(g);
    const auto dist = oracle::Dijkstra(g);
    double max_cost = 0;
    for (const auto& a : g.arcs) max_cost = std::max(max_cost, a.cost);
    const double big = g.n * max_cost + 1;
    for (int u = 0; u < g.n; ++u) {
      for (int v = 0; v < g.n; ++v) {
        EXPECT_EQ(m.cost(u, v), dist[u][v].value_or(big)) << "r=" << r << " " << u << "->" << v;
      }
    }
    ExpectTriangle(m);
  }
}

TEST(MetricCompletion, G5SourceToSinkCostsTwo) {
  const auto g = GapFamily::Graph(5);
  const auto dist = oracle::Dijkstra(g);
  ASSERT_TRUE(dist[0][GapFamily::T(5)].has_value());
  EXPECT_EQ(*dist[0][GapFamily::T(5)], 2);
  EXPECT_EQ(MetricCompletion(g).cost(0, GapFamily::T(5)), 2);
}

TEST(MetricCompletion, G1SinkToSourceIsBig) {
  const auto g = GapFamily::Graph(1);
  const auto m = MetricCompletion(g);
  EXPECT_EQ(m.cost(GapFamily::T(1), 0), 4 * 1 + 1);
}

TEST(MetricCompletion, UnreachableSinkFails) {
  PartialDigraph g{3, 0, 2, {{0, 1, 1}, {2, 1, 1}}, {}};
  EXPECT_THAT(ErrorOf([&] { MetricCompletion(g); }), HasSubstr("unreachable"));
}

TEST(MetricCompletion, IsIdempotent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = oracle::RandomMetric(2 + trial % 9, rng);
    EXPECT_EQ(MetricCompletion(ToPartialDigraph(m)), m);
  }
  const auto f = MakeGapInstance(3).metric;
  EXPECT_EQ(MetricCompletion(ToPartialDigraph(f)), f);
}

TEST(GapInstance, SizesAndPointCost) {
  for (int r : {1, 5}) {
    const auto g = MakeGapInstance(r);
    EXPECT_EQ(g.metric.n(), 2 * r + 2);
    EXPECT_EQ(g.metric.CostOf(g.point), r + 1);
  }
}

TEST(GapInstance, OptimumOfF2IsThree) {
  EXPECT_EQ(HeldKarp(MakeGapInstance(2).metric).cost, 3);
  EXPECT_EQ(oracle::PermutationOpt(MakeGapInstance(2).metric), 3);
}

TEST(GapInstance, RejectsSmallR) { EXPECT_THROW(MakeGapInstance(0), InputError); }

TEST(GapInstance, PointIsHalfOnEveryGraphArc) {
  const auto g = MakeGapInstance(4);
  const auto graph = GapFamily::Graph(4);
  EXPECT_EQ(g.point.Nonzeros().size(), graph.arcs.size());
  for (const auto& a : graph.arcs) EXPECT_EQ(g.point(a.tail, a.head), 0.5);
}

TEST(RandomInstance, TwoVertices) {
  const auto m = RandomInstance(2, 99, RandomModel::kClosure);
  EXPECT_EQ(m.n(), 2);
  EXPECT_GT(m.cost(0, 1), 0);
  EXPECT_GT(m.cost(1, 0), 0);
}

TEST(RandomInstance, TriangleInequalityExhaustive) {
  ExpectTriangle(RandomInstance(8, 1, RandomModel::kClosure));
  for (int n : {3, 10, 25, 64}) {
    for (auto model : {RandomModel::kClosure, RandomModel::kEuclideanPerturbed}) {
      ExpectTriangle(RandomInstance(n, 5, model));
    }
  }
}

TEST(RandomInstance, Deterministic) {
  for (auto model : {RandomModel::kClosure, RandomModel::kEuclideanPerturbed}) {
    EXPECT_EQ(RandomInstance(12, 3, model), RandomInstance(12, 3, model));
    EXPECT_NE(RandomInstance(12, 3, model), RandomInstance(12, 4, model));
  }
}

TEST(RandomInstance, CanonicalTerminals) {
  const auto m = RandomInstance(7, 1, RandomModel::kEuclideanPerturbed);
  EXPECT_EQ(m.s(), 0);
  EXPECT_EQ(m.t(), 6);
}

TEST(RandomInstance, RejectsTinyN) { EXPECT_THROW(RandomInstance(1, 1, RandomModel::kClosure), InputError); }

TEST(ParseModel, Names) {
  EXPECT_EQ(ParseModel("closure"), RandomModel::kClosure);
  EXPECT_EQ(ParseModel("euclidean-perturbed"), RandomModel::kEuclideanPerturbed);
  EXPECT_THROW(ParseModel("grid"), InputError);
}

TEST(DirectedMetric, ValidatesInvariants) {
  EXPECT_THROW(DirectedMetric(2, 0, 1, {0, 1, 1}), InputError);
  EXPECT_THROW(DirectedMetric(2, 0, 1, {1, 1, 1, 0}), InputError);
  EXPECT_THROW(DirectedMetric(2, 0, 1, {0, std::nan(""), 1, 0}), InputError);
  EXPECT_THROW(DirectedMetric(2, 0, 0, {0, 1, 1, 0}), InputError);
  EXPECT_THROW(DirectedMetric(1, 0, 0, {0}), InputError);
}

}  // namespace
}  // namespace atspp
