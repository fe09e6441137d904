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

// Narrow s-t cuts of an LP point x: s-t cuts U ({s} <= U <= V - t) with
// x(out(U)) < 1 + tau. For tau <= 1/4 and LP-feasible x they are nested, so
// they form a chain {s} = U_1 < U_2 < ... < U_k = V - t.

#ifndef ATSPP_NARROWCUTS_HPP_
#define ATSPP_NARROWCUTS_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/flows.hpp"
#include "atspp/lp.hpp"
#include "atspp/rng.hpp"

namespace atspp {

// Strict narrowness test with the LP tolerance: a cut exactly at 1 + tau is
// not narrow, nor is one within tol below it.
inline bool IsNarrowValue(double out_mass, double tau, double tol) {
  return out_mass < 1 + tau - tol;
}

struct NarrowCutChain {
  int n = 0;
  int s = 0;
  int t = 1;
  double tau = 0.25;
  std::vector<Cut> cuts;    // U_1 = {s} < ... < U_k = V - t
  std::vector<Cut> layers;  // L_1 = {s}, L_i = U_i - U_{i-1}, L_{k+1} = {t}

  int k() const { return static_cast<int>(cuts.size()); }

  bool IsNarrow(Cut c) const { return std::binary_search(cuts.begin(), cuts.end(), c, BySize); }

  // Index i such that v lies in layers[i].
  int LayerOf(int v) const {
    for (int i = 0; i < static_cast<int>(layers.size()); ++i) {
      if (layers[i].Contains(v)) return i;
    }
    return -1;
  }

  static bool BySize(Cut a, Cut b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

struct NarrowCutStats {
  int calls = 0;       // invocations of the recursive procedure
  int splits = 0;      // invocations that found a cut and recursed
  int flow_calls = 0;  // max-flow computations
};

class ChainViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

namespace internal {

class NarrowCutFinder {
 public:
  NarrowCutFinder(const ArcWeights& x, double tau, double tol) : x_(x), tau_(tau), tol_(tol) {}

  // All non-trivial narrow cuts of the graph whose nodes are `groups`
  // (disjoint vertex sets), with start group `src` and end group `snk`.
  std::vector<Cut> Find(const std::vector<Cut>& groups, int src, int snk) {
    ++stats.calls;
    const int m = static_cast<int>(groups.size());
    if (m < 4) return {};
    ArcWeights w(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i != j) w(i, j) = x_.Between(groups[i], groups[j]);
      }
    }
    for (int u = 0; u < m; ++u) {
      if (u == src || u == snk) continue;
      for (int v = 0; v < m; ++v) {
        if (v == src || v == snk || v == u) continue;
        std::vector<int> map(m);
        for (int i = 0; i < m; ++i) map[i] = i;
        map[u] = src;
        map[v] = snk;
        FlowNetwork<double> net{m, {}, src, snk};
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            if (i != j && w(i, j) > 0 && map[i] != map[j]) net.AddArc(map[i], map[j], w(i, j));
          }
        }
        ++stats.flow_calls;
        auto flow = MaxFlow(net);
        if (!IsNarrowValue(flow.value, tau_, tol_)) continue;
        ++stats.splits;
        const Cut side = flow.source_side.With(u);
        Cut found;
        std::vector<Cut> inside_groups, outside_groups;
        for (int i = 0; i < m; ++i) {
          if (side.Contains(i)) {
            found = found.Union(groups[i]);
            inside_groups.push_back(groups[i]);
          } else {
            outside_groups.push_back(groups[i]);
          }
        }
        std::vector<Cut> result{found};
        // Contract the found cut into the new start node.
        {
          std::vector<Cut> g{found};
          int new_snk = -1;
          for (int i = 0; i < m; ++i) {
            if (side.Contains(i)) continue;
            if (i == snk) new_snk = static_cast<int>(g.size());
            g.push_back(groups[i]);
          }
          for (Cut c : Find(g, 0, new_snk)) result.push_back(c);
        }
        // Contract the complement into the new end node.
        {
          std::vector<Cut> g;
          int new_src = -1;
          Cut rest;
          for (int i = 0; i < m; ++i) {
            if (!side.Contains(i)) {
              rest = rest.Union(groups[i]);
              continue;
            }
            if (i == src) new_src = static_cast<int>(g.size());
            g.push_back(groups[i]);
          }
          g.push_back(rest);
          for (Cut c : Find(g, new_src, static_cast<int>(g.size()) - 1)) result.push_back(c);
        }
        return result;
      }
    }
    return {};
  }

  NarrowCutStats stats;

 private:
  const ArcWeights& x_;
  double tau_;
  double tol_;
};

}  // namespace internal

// Recursive contraction search: for every ordered pair (u, v) of
// non-terminal nodes, contract {s', u} and {t', v} and test whether the
// minimum cut between them is narrow; on success, recurse on the graph with
// the cut contracted into the start node and on the graph with its
// complement contracted into the end node.
inline NarrowCutChain FindNarrowCuts(const ArcWeights& x, int s, int t, double tau,
                                     double tol = kDefaultLpTolerance,
                                     NarrowCutStats* stats = nullptr) {
  if (!(tau >= 0 && tau <= 0.25)) throw InputError("tau must lie in [0, 1/4]");
  const int n = x.n();
  if (s == t || s < 0 || t < 0 || s >= n || t >= n) throw InputError("bad s or t");
  std::vector<Cut> groups;
  for (int v = 0; v < n; ++v) groups.push_back(Cut::Singleton(v));
  internal::NarrowCutFinder finder(x, tau, tol);
  std::vector<Cut> found = finder.Find(groups, s, t);
  if (stats) *stats = finder.stats;

  NarrowCutChain chain;
  chain.n = n;
  chain.s = s;
  chain.t = t;
  chain.tau = tau;
  chain.cuts.push_back(Cut::Singleton(s));
  chain.cuts.push_back(Cut::Full(n).Without(t));
  for (Cut c : found) chain.cuts.push_back(c);
  std::sort(chain.cuts.begin(), chain.cuts.end(), NarrowCutChain::BySize);
  chain.cuts.erase(std::unique(chain.cuts.begin(), chain.cuts.end()), chain.cuts.end());
  for (std::size_t i = 1; i < chain.cuts.size(); ++i) {
    if (!chain.cuts[i - 1].IsSubsetOf(chain.cuts[i])) {
      throw ChainViolation("narrow cuts " + FormatCut(chain.cuts[i - 1]) + " and " +
                           FormatCut(chain.cuts[i]) + " are not nested");
    }
  }
  chain.layers.push_back(chain.cuts.front());
  for (std::size_t i = 1; i < chain.cuts.size(); ++i) {
    chain.layers.push_back(chain.cuts[i].Minus(chain.cuts[i - 1]));
  }
  chain.layers.push_back(Cut::Singleton(t));
  return chain;
}

// Undirected weight between u and v: x(u,v) + x(v,u).
inline double UndirectedWeight(const ArcWeights& x, int u, int v) { return x(u, v) + x(v, u); }

struct PartitionCheck {
  int layer = 0;
  int size = 0;
  enum class Mode { kTrivial, kCertified, kSampled } mode = Mode::kTrivial;
  long partitions = 0;
  double min_slack = std::numeric_limits<double>::infinity();  // bound - required
  std::vector<int> witness;  // block label per layer vertex at the minimum
};

inline const char* ModeName(PartitionCheck::Mode m) {
  switch (m) {
    case PartitionCheck::Mode::kTrivial: return "trivial";
    case PartitionCheck::Mode::kCertified: return "certified";
    case PartitionCheck::Mode::kSampled: return "sampled";
  }
  return "?";
}

struct StructureReport {
  std::vector<std::string> failures;
  std::vector<double> boundary_mass;  // x(L_i -> L_{i+1}), i = 1..k
  double min_boundary_slack = std::numeric_limits<double>::infinity();
  std::vector<PartitionCheck> partitions;
  bool ok() const { return failures.empty(); }
};

struct StructureOptions {
  double tol = 1e-9;
  int exhaustive_limit = 12;
  int samples = 1000;
  std::uint64_t seed = 1;
};

namespace internal {

class PartitionEnumerator {
 public:
  PartitionEnumerator(std::vector<int> verts, const ArcWeights& x, double tau)
      : verts_(std::move(verts)), tau_(tau), size_(static_cast<int>(verts_.size())),
        w_(static_cast<std::size_t>(size_) * size_) {
    for (int i = 0; i < size_; ++i) {
      for (int j = 0; j < size_; ++j) {
        w_[i * size_ + j] = i == j ? 0 : UndirectedWeight(x, verts_[i], verts_[j]);
      }
    }
  }

  void Exhaustive(PartitionCheck& out) {
    block_.assign(size_, 0);
    Recurse(0, 0, 0.0, out);
  }

  void Sample(PartitionCheck& out, Rng& rng, int samples) {
    block_.assign(size_, 0);
    for (int it = 0; it < samples; ++it) {
      const int blocks = 1 + static_cast<int>(UniformBelow(rng, size_));
      std::vector<int> relabel(size_, -1);
      int used = 0;
      for (int i = 0; i < size_; ++i) {
        const int b = static_cast<int>(UniformBelow(rng, blocks));
        if (relabel[b] < 0) relabel[b] = used++;
        block_[i] = relabel[b];
      }
      double crossing = 0;
      for (int i = 0; i < size_; ++i) {
        for (int j = i + 1; j < size_; ++j) {
          if (block_[i] != block_[j]) crossing += w_[i * size_ + j];
        }
      }
      Record(crossing, used, out);
    }
  }

 private:
  void Recurse(int j, int blocks, double crossing, PartitionCheck& out) {
    if (j == size_) {
      Record(crossing, blocks, out);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      double add = 0;
      for (int i = 0; i < j; ++i) {
        if (block_[i] != b) add += w_[i * size_ + j];
      }
      block_[j] = b;
      Recurse(j + 1, b == blocks ? blocks + 1 : blocks, crossing + add, out);
    }
  }

  void Record(double crossing, int blocks, PartitionCheck& out) {
    ++out.partitions;
    const double slack = crossing - (blocks - 1 - 2 * tau_);
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.witness = block_;
    }
  }

  std::vector<int> verts_;
  double tau_;
  int size_;
  std::vector<double> w_;
  std::vector<int> block_;
};

}  // namespace internal

// Checks the chain's structural guarantees:
//   (a) no two cuts cross;
//   (b) x(L_i -> L_{i+1}) >= 1 - 3 tau for every consecutive layer pair;
//   (c) for every layer L and partition pi of L, the undirected x-weight
//       between blocks is at least |pi| - 1 - 2 tau. Layers up to
//       `exhaustive_limit` vertices are enumerated; larger ones are sampled.
inline StructureReport VerifyStructure(const ArcWeights& x, const NarrowCutChain& chain,
                                       const StructureOptions& opts = {}) {
  StructureReport rep;
  const double tau = chain.tau;
  for (std::size_t i = 0; i < chain.cuts.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.cuts.size(); ++j) {
      if (chain.cuts[i].Crosses(chain.cuts[j])) {
        rep.failures.push_back("crossing narrow cuts " + FormatCut(chain.cuts[i]) + " and " +
                               FormatCut(chain.cuts[j]));
      }
    }
  }
  for (int i = 0; i + 1 < static_cast<int>(chain.layers.size()); ++i) {
    const double mass = x.Between(chain.layers[i], chain.layers[i + 1]);
    rep.boundary_mass.push_back(mass);
    const double slack = mass - (1 - 3 * tau);
    rep.min_boundary_slack = std::min(rep.min_boundary_slack, slack);
    if (slack < -opts.tol) {
      rep.failures.push_back("boundary mass " + std::to_string(mass) + " below 1-3tau between " +
                             FormatCut(chain.layers[i]) + " and " +
                             FormatCut(chain.layers[i + 1]));
    }
  }
  Rng rng(DeriveSeed(opts.seed, 0x5a17));
  for (int i = 0; i < static_cast<int>(chain.layers.size()); ++i) {
    PartitionCheck pc;
    pc.layer = i;
    auto verts = chain.layers[i].Vertices();
    pc.size = static_cast<int>(verts.size());
    if (pc.size >= 2) {
      internal::PartitionEnumerator e(verts, x, tau);
      if (pc.size <= opts.exhaustive_limit) {
        pc.mode = PartitionCheck::Mode::kCertified;
        e.Exhaustive(pc);
      } else {
        pc.mode = PartitionCheck::Mode::kSampled;
        e.Sample(pc, rng, opts.samples);
      }
      if (pc.min_slack < -opts.tol) {
        rep.failures.push_back("partition bound violated on layer " + FormatCut(chain.layers[i]) +
                               " (slack " + std::to_string(pc.min_slack) + ")");
      }
    }
    rep.partitions.push_back(std::move(pc));
  }
  return rep;
}

}  // namespace atspp

#endif  // ATSPP_NARROWCUTS_HPP_
