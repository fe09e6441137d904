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

// Rerouting an LP point onto its narrow-cut chain, and decomposing the result
// into a convex combination of spanning trees.
//
// Given the chain with layers L_1..L_{k+1}, the rerouted vector is
//
//   z_a = x_a / x(L_i -> L_{i+1})   for a from L_i to L_{i+1},
//   z_a = x_a / (1 - 2 tau)         for a inside a layer,
//   z_a = 0                         otherwise,
//
// so every narrow cut carries exactly one unit of z forward and none back.

#ifndef ATSPP_RETREE_HPP_
#define ATSPP_RETREE_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/instance.hpp"
#include "atspp/narrowcuts.hpp"
#include "atspp/simplex.hpp"

namespace atspp {

// One edge of the undirected bi-edge multigraph H. Each vertex pair carries
// two parallel edges, one per arc orientation; `arc` names the edge.
struct HEdge {
  Arc arc;
  double weight;
  int lo() const { return std::min(arc.tail, arc.head); }
  int hi() const { return std::max(arc.tail, arc.head); }
};

// The undirected view of a directed weight vector: one parallel edge per arc.
inline std::vector<HEdge> Undirect(const ArcWeights& w) {
  std::vector<HEdge> out;
  for (int u = 0; u < w.n(); ++u) {
    for (int v = 0; v < w.n(); ++v) {
      if (u != v) out.push_back({Arc{u, v}, w(u, v)});
    }
  }
  return out;
}

struct ReroutedVector {
  ArcWeights z;
  NarrowCutChain chain;
  double tau = 0.25;
};

struct TreeTerm {
  double weight = 0;
  ArcSet arcs;  // sorted; undirected shadow is a spanning tree
};

struct TreeCombination {
  int n = 0;
  std::vector<TreeTerm> terms;

  ArcWeights Marginals() const {
    ArcWeights m(n);
    for (const auto& term : terms) {
      for (Arc a : term.arcs) m[a] += term.weight;
    }
    return m;
  }
  double TotalWeight() const {
    double sum = 0;
    for (const auto& term : terms) sum += term.weight;
    return sum;
  }
};

class LayerDecompositionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline ReroutedVector BuildZ(const ArcWeights& x, const NarrowCutChain& chain) {
  const int n = x.n();
  std::vector<int> layer(n);
  for (int v = 0; v < n; ++v) layer[v] = chain.LayerOf(v);
  std::vector<double> boundary(chain.layers.size(), 0.0);
  for (int i = 0; i + 1 < static_cast<int>(chain.layers.size()); ++i) {
    boundary[i] = x.Between(chain.layers[i], chain.layers[i + 1]);
    if (!(boundary[i] > 0)) {
      throw ChainViolation("zero x-mass from layer " + FormatCut(chain.layers[i]) + " to " +
                           FormatCut(chain.layers[i + 1]));
    }
  }
  ReroutedVector out{ArcWeights(n), chain, chain.tau};
  for (const auto& [a, xa] : x.Nonzeros()) {
    const int li = layer[a.tail], lj = layer[a.head];
    if (lj == li + 1) {
      out.z[a] = xa / boundary[li];
    } else if (li == lj) {
      out.z[a] = xa / (1 - 2 * chain.tau);
    }
  }
  return out;
}

namespace internal {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int Find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  bool Unite(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Kruskal over `edges` in the given order, restricted to the vertex set
// `verts`. Returns edge indices of a spanning tree, or empty if the edges do
// not connect `verts`.
inline std::vector<int> SpanningTreeInOrder(const std::vector<HEdge>& edges,
                                            const std::vector<int>& order,
                                            const std::vector<int>& verts, int n) {
  UnionFind uf(n);
  std::vector<int> picked;
  for (int e : order) {
    if (uf.Unite(edges[e].arc.tail, edges[e].arc.head)) picked.push_back(e);
  }
  if (picked.size() + 1 != verts.size()) return {};
  return picked;
}

// A distribution over arc sets; weights sum to 1.
using Component = std::vector<std::pair<double, ArcSet>>;

// Fractional packing of spanning trees of one layer under capacities z,
// by column generation: the master maximizes the total tree weight, and the
// pricing step is a minimum spanning tree under the capacity duals. The
// packing value is at least 1 whenever the layer satisfies the partition
// inequalities, and the returned weights are scaled to sum to 1.
inline Component PackLayerTrees(const ArcWeights& z, Cut layer, const DirectedMetric* costs) {
  const auto verts = layer.Vertices();
  if (verts.size() <= 1) return {{1.0, {}}};
  std::vector<HEdge> edges;
  for (int u : verts) {
    for (int v : verts) {
      if (u != v && z(u, v) > 1e-12) edges.push_back({Arc{u, v}, z(u, v)});
    }
  }
  const int m = static_cast<int>(edges.size());
  auto cost_of = [&](int e) { return costs ? costs->cost(edges[e].arc) : 0.0; };

  std::vector<std::vector<int>> columns;
  {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (edges[a].weight != edges[b].weight) return edges[a].weight > edges[b].weight;
      return cost_of(a) < cost_of(b);
    });
    auto tree = SpanningTreeInOrder(edges, order, verts, z.n());
    if (tree.empty()) {
      throw LayerDecompositionError("support of z does not connect layer " + FormatCut(layer));
    }
    columns.push_back(std::move(tree));
  }

  std::vector<double> lambda;
  for (int round = 0;; ++round) {
    if (round > 50 * (m + 1)) throw LayerDecompositionError("tree packing did not converge");
    LinearProgram<double> master;
    master.num_vars = static_cast<int>(columns.size());
    master.objective.assign(columns.size(), -1.0);
    master.rows.resize(m);
    for (int e = 0; e < m; ++e) {
      master.rows[e].sense = Sense::kLessEqual;
      master.rows[e].rhs = edges[e].weight;
    }
    for (int j = 0; j < static_cast<int>(columns.size()); ++j) {
      for (int e : columns[j]) master.rows[e].coeffs.push_back({j, 1.0});
    }
    auto res = SolveLp(master);
    if (res.status != LpStatus::kOptimal) throw LayerDecompositionError("tree packing LP failed");
    lambda = res.x;
    const double value = -res.objective;
    if (value >= 1 - 1e-12) break;
    // Price: spanning tree minimizing the dual weight sum.
    std::vector<double> price(m);
    for (int e = 0; e < m; ++e) price[e] = std::max(0.0, -res.duals[e]);
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (price[a] != price[b]) return price[a] < price[b];
      return cost_of(a) < cost_of(b);
    });
    auto tree = SpanningTreeInOrder(edges, order, verts, z.n());
    double reduced = 0;
    for (int e : tree) reduced += price[e];
    std::sort(tree.begin(), tree.end());
    bool seen = false;
    for (auto col : columns) {
      std::sort(col.begin(), col.end());
      if (col == tree) seen = true;
    }
    if (reduced >= 1 - 1e-10 || seen) {
      throw LayerDecompositionError("tree packing on layer " + FormatCut(layer) +
                                    " has value " + std::to_string(value) + " < 1");
    }
    columns.push_back(std::move(tree));
  }

  double total = 0;
  for (double l : lambda) total += l;
  Component out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (lambda[j] <= 1e-15) continue;
    ArcSet arcs;
    for (int e : columns[j]) arcs.push_back(edges[e].arc);
    std::sort(arcs.begin(), arcs.end());
    out.push_back({lambda[j] / total, std::move(arcs)});
  }
  return out;
}

// Couples independent components on a common [0, 1) axis: each component
// lays its items out as consecutive intervals, and every elementary interval
// of the merged breakpoints becomes one term picking the item active there.
// Each item's total weight equals its component weight.
inline std::vector<std::pair<double, ArcSet>> Couple(const std::vector<Component>& comps) {
  std::vector<std::vector<double>> cum(comps.size());
  std::vector<double> points{0.0, 1.0};
  for (std::size_t c = 0; c < comps.size(); ++c) {
    double acc = 0;
    for (std::size_t j = 0; j < comps[c].size(); ++j) {
      acc += comps[c][j].first;
      cum[c].push_back(j + 1 == comps[c].size() ? 1.0 : std::min(acc, 1.0));
      if (j + 1 < comps[c].size()) points.push_back(cum[c].back());
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::pair<double, ArcSet>> out;
  std::vector<std::size_t> idx(comps.size(), 0);
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    const double lo = points[p], hi = points[p + 1];
    const double mid = 0.5 * (lo + hi);
    ArcSet arcs;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      while (idx[c] + 1 < cum[c].size() && cum[c][idx[c]] <= mid) ++idx[c];
      const auto& item = comps[c][idx[c]].second;
      arcs.insert(arcs.end(), item.begin(), item.end());
    }
    std::sort(arcs.begin(), arcs.end());
    out.push_back({hi - lo, std::move(arcs)});
  }
  return out;
}

// Independent product of the components: one term per combination of
// items, weighted by the product of the item weights.
inline std::vector<std::pair<double, ArcSet>> Product(const std::vector<Component>& comps) {
  std::vector<std::pair<double, ArcSet>> out{{1.0, {}}};
  for (const auto& comp : comps) {
    std::vector<std::pair<double, ArcSet>> next;
    next.reserve(out.size() * comp.size());
    for (const auto& [w, arcs] : out) {
      for (const auto& [iw, item] : comp) {
        ArcSet merged = arcs;
        merged.insert(merged.end(), item.begin(), item.end());
        std::sort(merged.begin(), merged.end());
        next.push_back({w * iw, std::move(merged)});
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace internal

// Above this many product terms DecomposeTrees couples the components
// instead of taking their independent product.
inline constexpr std::size_t kMaxProductTerms = 4096;

inline bool IsSpanningTree(const ArcSet& arcs, int n) {
  if (static_cast<int>(arcs.size()) != n - 1) return false;
  internal::UnionFind uf(n);
  for (Arc a : arcs) {
    if (!uf.Unite(a.tail, a.head)) return false;
  }
  return true;
}

// Number of arcs leaving (first) and entering (second) `cut`.
inline std::pair<int, int> CrossingCounts(const ArcSet& arcs, Cut cut) {
  int fwd = 0, bwd = 0;
  for (Arc a : arcs) {
    const bool tail_in = cut.Contains(a.tail), head_in = cut.Contains(a.head);
    if (tail_in && !head_in) ++fwd;
    if (!tail_in && head_in) ++bwd;
  }
  return {fwd, bwd};
}

// Writes z as a convex combination of arc sets whose shadows are spanning
// trees: (i) per layer, a fractional packing of spanning trees of the layer
// under the within-layer z-weights, scaled to total weight 1; (ii) per
// consecutive layer pair, the categorical choice of one boundary arc a with
// probability z_a; (iii) the pieces are combined independently (or, past
// kMaxProductTerms, coupled on a common axis) and terms with identical arc
// sets merged. Boundary marginals equal z; within-layer
// marginals are at most z. `costs`, when given, breaks ties toward cheaper
// trees.
inline TreeCombination DecomposeTrees(const ReroutedVector& zv,
                                      const DirectedMetric* costs = nullptr) {
  const auto& chain = zv.chain;
  const int n = zv.z.n();
  std::vector<internal::Component> comps;
  for (int i = 0; i + 1 < static_cast<int>(chain.layers.size()); ++i) {
    internal::Component boundary;
    double total = 0;
    for (int u : chain.layers[i].Vertices()) {
      for (int v : chain.layers[i + 1].Vertices()) {
        if (zv.z(u, v) > 0) {
          boundary.push_back({zv.z(u, v), ArcSet{Arc{u, v}}});
          total += zv.z(u, v);
        }
      }
    }
    if (boundary.empty() || std::abs(total - 1) > 1e-9) {
      throw ChainViolation("boundary z-mass after " + FormatCut(chain.layers[i]) + " is " +
                           std::to_string(total) + ", expected 1");
    }
    comps.push_back(std::move(boundary));
  }
  for (Cut layer : chain.layers) {
    if (layer.size() >= 2) comps.push_back(internal::PackLayerTrees(zv.z, layer, costs));
  }
  std::size_t product = 1;
  for (const auto& comp : comps) {
    product = std::min(product * comp.size(), kMaxProductTerms + 1);
  }
  auto coupled = product <= kMaxProductTerms ? internal::Product(comps) : internal::Couple(comps);
  std::map<ArcSet, std::size_t> index;
  TreeCombination comb;
  comb.n = n;
  for (auto& [w, arcs] : coupled) {
    if (!(w > 0)) continue;
    auto it = index.find(arcs);
    if (it != index.end()) {
      comb.terms[it->second].weight += w;
    } else {
      index.emplace(arcs, comb.terms.size());
      comb.terms.push_back({w, std::move(arcs)});
    }
  }
  return comb;
}

struct ZReport {
  std::vector<std::string> failures;
  double max_cap_excess = 0;        // max_a z_a - x_a / (1 - 3 tau)
  double max_forward_residual = 0;  // max_i |z(out(U_i)) - 1|
  double max_backward_mass = 0;     // max_i z(in(U_i))
  double max_boundary_marginal_residual = 0;
  double max_marginal_excess = 0;   // max_a marginal_a - z_a
  double weight_residual = 0;       // |sum lambda - 1|
  int terms = 0;
  bool ok() const { return failures.empty(); }
};

// Checks nonnegativity, z <= x/(1-3tau), z(out(U_i)) = 1 and z(in(U_i)) = 0
// directly; membership of the undirected z in the spanning-tree polytope is
// certified by the decomposition: every term a spanning tree, weights
// summing to one, marginals dominated by z.
inline ZReport VerifyZ(const ReroutedVector& zv, const ArcWeights& x,
                       const TreeCombination* comb = nullptr, double tol = 1e-9) {
  ZReport rep;
  const int n = zv.z.n();
  const double cap = 1 / (1 - 3 * zv.tau);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const double za = zv.z(u, v);
      if (za < -tol) rep.failures.push_back("negative z on arc " + std::to_string(u) + "->" + std::to_string(v));
      const double excess = za - x(u, v) * cap;
      rep.max_cap_excess = std::max(rep.max_cap_excess, excess);
      if (excess > tol) {
        rep.failures.push_back("z exceeds x/(1-3tau) on arc " + std::to_string(u) + "->" +
                               std::to_string(v));
      }
    }
  }
  for (Cut c : zv.chain.cuts) {
    const double out = zv.z.Out(c), in = zv.z.In(c);
    rep.max_forward_residual = std::max(rep.max_forward_residual, std::abs(out - 1));
    rep.max_backward_mass = std::max(rep.max_backward_mass, in);
    if (std::abs(out - 1) > tol) rep.failures.push_back("z(out" + FormatCut(c) + ") != 1");
    if (in > tol) rep.failures.push_back("z(in" + FormatCut(c) + ") != 0");
  }
  if (comb) {
    rep.terms = static_cast<int>(comb->terms.size());
    rep.weight_residual = std::abs(comb->TotalWeight() - 1);
    if (rep.weight_residual > tol) rep.failures.push_back("tree weights do not sum to 1");
    for (const auto& term : comb->terms) {
      if (!(term.weight > 0)) rep.failures.push_back("nonpositive tree weight");
      if (!IsSpanningTree(term.arcs, n)) {
        rep.failures.push_back("decomposition term is not a spanning tree");
      }
      for (Cut c : zv.chain.cuts) {
        auto [fwd, bwd] = CrossingCounts(term.arcs, c);
        if (fwd != 1 || bwd != 0) {
          rep.failures.push_back("term crosses narrow cut " + FormatCut(c) + " " +
                                 std::to_string(fwd) + " forward, " + std::to_string(bwd) +
                                 " backward");
        }
      }
    }
    const ArcWeights marg = comb->Marginals();
    std::vector<int> layer(n);
    for (int v = 0; v < n; ++v) layer[v] = zv.chain.LayerOf(v);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const double diff = marg(u, v) - zv.z(u, v);
        rep.max_marginal_excess = std::max(rep.max_marginal_excess, diff);
        if (diff > tol) rep.failures.push_back("tree marginal exceeds z");
        if (layer[v] == layer[u] + 1) {
          rep.max_boundary_marginal_residual =
              std::max(rep.max_boundary_marginal_residual, std::abs(diff));
          if (std::abs(diff) > tol) rep.failures.push_back("boundary marginal differs from z");
        }
      }
    }
  }
  return rep;
}

}  // namespace atspp

#endif  // ATSPP_RETREE_HPP_
