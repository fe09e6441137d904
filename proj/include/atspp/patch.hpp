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

// Turning a sampled spanning arc set into a Hamiltonian s-t path: integral
// min-cost circulation with lower bounds (every sampled arc and ts at least
// once, ts at most once), Eulerian circuit, drop ts, shortcut. Also the full
// rounding pipeline.

#ifndef ATSPP_PATCH_HPP_
#define ATSPP_PATCH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/flows.hpp"
#include "atspp/instance.hpp"
#include "atspp/lp.hpp"
#include "atspp/narrowcuts.hpp"
#include "atspp/retree.hpp"
#include "atspp/sampler.hpp"

namespace atspp {

struct HoffmanBoundsResult {
  ArcWeights lower;
  ArcWeights upper;
};

// lower_a = 1 on sampled arcs and on ts, else 0.
// upper_ts = 1; upper_a = 1 + (1 + 1/tau) alpha x_a on sampled arcs and
// (1 + 1/tau) alpha x_a elsewhere.
inline HoffmanBoundsResult HoffmanBounds(const ArcSet& arcs, const ArcWeights& x, int s, int t,
                                         const SampleConfig& cfg) {
  const int n = x.n();
  HoffmanBoundsResult b{ArcWeights(n), ArcWeights(n)};
  const double scale = (1 + 1 / cfg.tau) * cfg.alpha;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) b.upper(u, v) = scale * x(u, v);
    }
  }
  for (Arc a : arcs) {
    b.lower[a] = 1;
    b.upper[a] += 1;
  }
  b.lower(t, s) = 1;
  b.upper(t, s) = 1;
  return b;
}

enum class CutCase { kNarrowST = 0, kWideST = 1, kTS = 2, kNonSeparating = 3 };

inline const char* CutCaseName(CutCase c) {
  switch (c) {
    case CutCase::kNarrowST: return "narrow s-t";
    case CutCase::kWideST: return "non-narrow s-t";
    case CutCase::kTS: return "t-s";
    case CutCase::kNonSeparating: return "non-separating";
  }
  return "?";
}

struct HoffmanReport {
  struct CaseStats {
    long cuts = 0;
    double min_slack = std::numeric_limits<double>::infinity();  // u(in) - l(out)
  };
  std::array<CaseStats, 4> cases;
  long cuts_checked = 0;
  std::optional<Cut> witness;  // first violated cut
  bool ok() const { return !witness.has_value(); }
};

// Checks l(out(U)) <= u(in(U)) on all 2^n - 2 nontrivial cuts and records
// the minimum slack per cut class.
inline HoffmanReport VerifyHoffman(const ArcWeights& lower, const ArcWeights& upper,
                                   const NarrowCutChain& chain, double tol = 1e-9) {
  const int n = lower.n();
  if (n > 20) throw InputError("exhaustive Hoffman check needs n <= 20");
  const int s = chain.s, t = chain.t;
  HoffmanReport rep;
  const std::uint64_t full = Cut::Full(n).mask();
  for (std::uint64_t m = 1; m < full; ++m) {
    const Cut cut(m);
    const std::uint64_t outside = full & ~m;
    double out_lower = 0, in_upper = 0;
    for (std::uint64_t a = m; a != 0; a &= a - 1) {
      const int u = std::countr_zero(a);
      for (std::uint64_t b = outside; b != 0; b &= b - 1) {
        const int v = std::countr_zero(b);
        out_lower += lower(u, v);
        in_upper += upper(v, u);
      }
    }
    CutCase kind;
    if (cut.Contains(s) && !cut.Contains(t)) {
      kind = chain.IsNarrow(cut) ? CutCase::kNarrowST : CutCase::kWideST;
    } else if (cut.Contains(t) && !cut.Contains(s)) {
      kind = CutCase::kTS;
    } else {
      kind = CutCase::kNonSeparating;
    }
    auto& st = rep.cases[static_cast<int>(kind)];
    ++st.cuts;
    ++rep.cuts_checked;
    const double slack = in_upper - out_lower;
    st.min_slack = std::min(st.min_slack, slack);
    if (slack < -tol && !rep.witness) rep.witness = cut;
  }
  return rep;
}

struct EulerianMultigraph {
  ArcVector<long long> multiplicity;  // includes ts exactly once
  double circulation_cost = 0;
};

// Minimum-cost integral circulation with lower bound 1 on every sampled arc
// and on ts, upper bound 1 on ts, and no other upper bound.
inline EulerianMultigraph AugmentToEulerian(const ArcSet& arcs, const DirectedMetric& inst) {
  const int n = inst.n(), s = inst.s(), t = inst.t();
  ArcVector<long long> lower(n);
  for (Arc a : arcs) lower[a] = 1;
  lower(t, s) = 1;
  CirculationProblem<long long> prob;
  prob.n = n;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      std::optional<long long> upper;
      if (u == t && v == s) upper = 1;
      prob.AddArc(u, v, lower(u, v), upper, inst.cost(u, v));
    }
  }
  auto res = MinCostCirculation(prob);
  if (!res.feasible) {
    throw InfeasibleError("no circulation covers the sampled arcs (internal error: arc set "
                          "should be weakly connected)");
  }
  EulerianMultigraph g{res.Aggregate(prob), 0};
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) g.circulation_cost += static_cast<double>(g.multiplicity(u, v)) * inst.cost(u, v);
    }
  }
  if (g.multiplicity(t, s) != 1) throw ValidationError("circulation uses ts more than once");
  return g;
}

struct WalkResult {
  std::vector<int> path;  // Hamiltonian s-t path
  std::vector<int> walk;  // Eulerian s-t walk before shortcutting
  double cost = 0;
  double walk_cost = 0;
  double circulation_cost = 0;
  double tree_cost = 0;
  double lp_value = 0;
  double ratio = 0;  // cost / lp_value
};

// Follows an Eulerian circuit that starts with the single ts arc, drops
// that arc, and shortcuts the s-t walk to first visits.
inline WalkResult ExtractPath(const EulerianMultigraph& g, const DirectedMetric& inst) {
  const int n = inst.n(), s = inst.s(), t = inst.t();
  const auto& mult = g.multiplicity;
  long long total = 0;
  for (int v = 0; v < n; ++v) {
    long long in = 0, out = 0;
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      out += mult(v, w);
      in += mult(w, v);
      if (mult(v, w) < 0) throw InputError("negative arc multiplicity");
    }
    if (in != out) throw ValidationError("multigraph is not Eulerian at vertex " + inst.name(v));
    total += out;
  }
  if (mult(t, s) != 1) throw ValidationError("multigraph must contain ts exactly once");

  // Hierholzer from s, then rotate so the circuit starts with ts.
  ArcVector<long long> left = mult;
  std::vector<int> stack{s}, circuit;
  std::vector<int> scan(n, 0);
  while (!stack.empty()) {
    const int u = stack.back();
    int& w = scan[u];
    while (w < n && (w == u || left(u, w) == 0)) ++w;
    if (w < n) {
      --left(u, w);
      stack.push_back(w);
    } else {
      circuit.push_back(u);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  if (static_cast<long long>(circuit.size()) != total + 1) {
    throw ValidationError("multigraph is not connected");
  }
  circuit.pop_back();  // closed: last == first
  const std::size_t len = circuit.size();
  std::size_t at_t = len;
  for (std::size_t i = 0; i < len; ++i) {
    if (circuit[i] == t && circuit[(i + 1) % len] == s) at_t = i;
  }
  WalkResult res;
  for (std::size_t k = 1; k <= len; ++k) res.walk.push_back(circuit[(at_t + k) % len]);
  std::vector<char> seen(n, 0);
  for (int v : res.walk) {
    if (!seen[v]) {
      seen[v] = 1;
      res.path.push_back(v);
    }
  }
  if (static_cast<int>(res.path.size()) != n || res.path.front() != s || res.path.back() != t) {
    throw ValidationError("walk does not yield a Hamiltonian s-t path");
  }
  for (std::size_t i = 0; i + 1 < res.walk.size(); ++i) {
    res.walk_cost += inst.cost(res.walk[i], res.walk[i + 1]);
  }
  for (std::size_t i = 0; i + 1 < res.path.size(); ++i) {
    res.cost += inst.cost(res.path[i], res.path[i + 1]);
  }
  res.circulation_cost = g.circulation_cost;
  return res;
}

inline bool IsHamiltonianPath(const std::vector<int>& path, const DirectedMetric& inst) {
  if (static_cast<int>(path.size()) != inst.n()) return false;
  if (path.front() != inst.s() || path.back() != inst.t()) return false;
  std::vector<char> seen(inst.n(), 0);
  for (int v : path) {
    if (v < 0 || v >= inst.n() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

inline double PathCost(const std::vector<int>& path, const DirectedMetric& inst) {
  double c = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) c += inst.cost(path[i], path[i + 1]);
  return c;
}

struct RoundOptions {
  double tau = 0.25;
  std::uint64_t seed = 1;
  int max_tries = 64;
  double tol = kDefaultLpTolerance;
  int verify_hoffman_max_n = 16;
  int verify_structure_max_n = 20;
};

// Everything the pipeline computed, for reporting and certification.
struct RoundReport {
  LpSolution<double> lp;
  NarrowCutChain chain;
  NarrowCutStats cut_stats;
  std::optional<StructureReport> structure;
  ReroutedVector rerouted;
  TreeCombination combination;
  ZReport z_report;
  SampleConfig config;
  DrawResult draw;
  std::optional<HoffmanReport> hoffman;
  EulerianMultigraph multigraph;
  WalkResult result;
  double bound = 0;  // (3/(1-3tau) + (1+1/tau) alpha) * lp_value
};

inline double ApproximationBound(const SampleConfig& cfg, double lp_value) {
  return (3 / (1 - 3 * cfg.tau) + (1 + 1 / cfg.tau) * cfg.alpha) * lp_value;
}

// LP -> narrow cuts -> rerouted vector and tree decomposition -> sampled tree
// -> circulation -> Eulerian walk -> shortcut path. Throws ValidationError if
// any certificate or the final cost bound fails.
inline RoundReport Round(const DirectedMetric& inst, const RoundOptions& opts = {}) {
  RoundReport rep;
  LpOptions lp_opts;
  lp_opts.tol = opts.tol;
  rep.lp = SolveSubtourLp<double>(inst, lp_opts);
  const ArcWeights& x = rep.lp.x;
  const double lp_value = rep.lp.value;

  rep.chain = FindNarrowCuts(x, inst.s(), inst.t(), opts.tau, opts.tol, &rep.cut_stats);
  if (inst.n() <= opts.verify_structure_max_n) {
    rep.structure = VerifyStructure(x, rep.chain);
    if (!rep.structure->ok()) throw ValidationError("narrow-cut structure: " + rep.structure->failures[0]);
  }
  rep.rerouted = BuildZ(x, rep.chain);
  rep.combination = DecomposeTrees(rep.rerouted, &inst);
  rep.z_report = VerifyZ(rep.rerouted, x, &rep.combination);
  if (!rep.z_report.ok()) throw ValidationError("rerouted vector: " + rep.z_report.failures[0]);

  rep.config = SampleConfig::Make(inst.n(), opts.tau, opts.seed);
  rep.draw = DrawUntilGood(rep.combination, x, inst, rep.config, opts.max_tries, &rep.chain);
  for (Cut c : rep.chain.cuts) {
    auto [fwd, bwd] = CrossingCounts(rep.draw.arcs, c);
    if (fwd != 1 || bwd != 0) throw ValidationError("sample crosses narrow cut " + FormatCut(c) + " badly");
  }
  if (inst.n() <= opts.verify_hoffman_max_n) {
    auto b = HoffmanBounds(rep.draw.arcs, x, inst.s(), inst.t(), rep.config);
    rep.hoffman = VerifyHoffman(b.lower, b.upper, rep.chain);
    if (!rep.hoffman->ok()) {
      throw ValidationError("Hoffman condition fails on cut " + FormatCut(*rep.hoffman->witness));
    }
  }
  rep.multigraph = AugmentToEulerian(rep.draw.arcs, inst);
  rep.result = ExtractPath(rep.multigraph, inst);
  rep.result.tree_cost = rep.draw.cost;
  rep.result.lp_value = lp_value;
  rep.result.ratio = lp_value > 0 ? rep.result.cost / lp_value : 1.0;
  rep.bound = ApproximationBound(rep.config, lp_value);

  const double c_ts = inst.cost(inst.t(), inst.s());
  const double rel = 1e-6 * std::max(1.0, rep.result.circulation_cost);
  if (rep.result.cost > rep.result.circulation_cost - c_ts + rel) {
    throw ValidationError("shortcut path costs more than the circulation minus ts");
  }
  const double patch_cap = rep.result.tree_cost + (1 + 1 / opts.tau) * rep.config.alpha * lp_value;
  if (rep.result.circulation_cost - c_ts > patch_cap + rel) {
    throw ValidationError("circulation exceeds the tree-plus-patching bound");
  }
  if (rep.result.cost > rep.bound * (1 + 1e-9) + 1e-9) {
    throw ValidationError("path cost exceeds the approximation bound");
  }
  if (rep.result.cost < lp_value - opts.tol * std::max(1.0, lp_value)) {
    throw ValidationError("path cost below the LP value");
  }
  return rep;
}

}  // namespace atspp

#endif  // ATSPP_PATCH_HPP_
