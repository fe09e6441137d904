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

// Randomized swap rounding of a convex combination of spanning trees, and
// the thinness / cost measurements used to accept a sample.

#ifndef ATSPP_SAMPLER_HPP_
#define ATSPP_SAMPLER_HPP_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/instance.hpp"
#include "atspp/narrowcuts.hpp"
#include "atspp/retree.hpp"
#include "atspp/rng.hpp"

namespace atspp {

struct SampleConfig {
  std::uint64_t seed = 0;
  double tau = 0.25;
  int n = 2;
  double alpha = 0;  // thinness target
  double beta = 0;   // cost target, as a multiple of the LP value

  // alpha = (2 + 1/tau) * 24 ln n / max(1, ln ln n), beta = 3 / (1 - 3 tau).
  // The max(1, .) guard keeps alpha finite and positive for n < e^e, where
  // ln ln n <= 1.
  static SampleConfig Make(int n, double tau, std::uint64_t seed) {
    if (!(tau > 0 && tau <= 0.25)) throw InputError("tau must lie in (0, 1/4]");
    if (n < 2) throw InputError("need n >= 2");
    SampleConfig cfg;
    cfg.seed = seed;
    cfg.tau = tau;
    cfg.n = n;
    const double ln = std::log(static_cast<double>(n));
    cfg.alpha = (2 + 1 / tau) * 24 * ln / std::max(1.0, std::log(ln));
    cfg.beta = 3 / (1 - 3 * tau);
    return cfg;
  }

  SampleConfig WithSeed(std::uint64_t s) const {
    SampleConfig c = *this;
    c.seed = s;
    return c;
  }
};

namespace internal {

// Vertex labels of the component containing `root` in `tree` minus `skip`.
inline std::uint64_t SideOf(const ArcSet& tree, Arc skip, int root, int n) {
  std::vector<std::vector<int>> adj(n);
  for (Arc a : tree) {
    if (a == skip) continue;
    adj[a.tail].push_back(a.head);
    adj[a.head].push_back(a.tail);
  }
  std::uint64_t seen = std::uint64_t{1} << root;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!((seen >> v) & 1U)) {
        seen |= std::uint64_t{1} << v;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// Arcs on the tree path between `from` and `to`.
inline ArcSet TreePath(const ArcSet& tree, int from, int to, int n) {
  std::vector<std::vector<std::pair<int, Arc>>> adj(n);
  for (Arc a : tree) {
    adj[a.tail].push_back({a.head, a});
    adj[a.head].push_back({a.tail, a});
  }
  std::vector<int> prev(n, -1);
  std::vector<Arc> via(n);
  std::vector<int> stack{from};
  prev[from] = from;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& [v, a] : adj[u]) {
      if (prev[v] < 0) {
        prev[v] = u;
        via[v] = a;
        stack.push_back(v);
      }
    }
  }
  ArcSet path;
  for (int v = to; v != from; v = prev[v]) path.push_back(via[v]);
  return path;
}

inline void EraseArc(ArcSet& set, Arc a) { set.erase(std::lower_bound(set.begin(), set.end(), a)); }
inline void InsertArc(ArcSet& set, Arc a) { set.insert(std::lower_bound(set.begin(), set.end(), a), a); }

// Merges two spanning trees with weights w1, w2 into one by repeated
// symmetric exchanges. Each exchange keeps the weighted indicator sum a
// martingale, so marginals are preserved.
inline ArcSet MergeTrees(ArcSet b1, double w1, ArcSet b2, double w2, int n, Rng& rng) {
  for (;;) {
    std::optional<Arc> e;
    for (Arc a : b1) {
      if (!std::binary_search(b2.begin(), b2.end(), a)) {
        e = a;
        break;
      }
    }
    if (!e) return b1;
    const std::uint64_t side = SideOf(b1, *e, e->tail, n);
    std::optional<Arc> f;
    for (Arc a : TreePath(b2, e->tail, e->head, n)) {
      const bool crosses = ((side >> a.tail) & 1U) != ((side >> a.head) & 1U);
      if (crosses && (!f || a < *f)) f = a;
    }
    assert(f.has_value());
    if (UniformUnit(rng) * (w1 + w2) < w1) {
      EraseArc(b2, *f);
      InsertArc(b2, *e);
    } else {
      EraseArc(b1, *e);
      InsertArc(b1, *f);
    }
  }
}

}  // namespace internal

// Swap rounding: fold the terms, heaviest first, merging the running tree
// with the next term. The result is a spanning tree drawn with the
// combination's marginals and negatively correlated edge indicators; it is
// a deterministic function of cfg.seed.
inline ArcSet SampleTree(const TreeCombination& comb, const SampleConfig& cfg) {
  if (comb.terms.empty()) throw InputError("empty tree combination");
  std::vector<std::size_t> order(comb.terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return comb.terms[a].weight > comb.terms[b].weight;
  });
  Rng rng(MixSeed(cfg.seed));
  ArcSet current = comb.terms[order[0]].arcs;
  double weight = comb.terms[order[0]].weight;
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& term = comb.terms[order[i]];
    current = internal::MergeTrees(std::move(current), weight, term.arcs, term.weight, comb.n, rng);
    weight += term.weight;
  }
  return current;
}

inline double CostOf(const ArcSet& arcs, const DirectedMetric& inst) { return inst.CostOf(arcs); }

enum class ThinnessMode { kExhaustive, kNarrowPlusSampled };

struct ThinnessResult {
  double alpha_obs = 0;  // max over inspected cuts of |A & out(U)| / x(out(U))
  Cut witness;
  long cuts_inspected = 0;
};

struct ThinnessOptions {
  ThinnessMode mode = ThinnessMode::kExhaustive;
  const NarrowCutChain* chain = nullptr;  // narrow cuts added in sampled mode
  int samples = 10000;
  std::uint64_t seed = 0;
};

namespace internal {

class CutScanner {
 public:
  CutScanner(const ArcSet& arcs, const ArcWeights& x) : n_(x.n()), x_(x), out_arcs_(n_, 0) {
    for (Arc a : arcs) out_arcs_[a.tail] |= std::uint64_t{1} << a.head;
  }

  void Inspect(Cut cut, ThinnessResult& res) {
    ++res.cuts_inspected;
    const std::uint64_t inside = cut.mask();
    const std::uint64_t outside = cut.Complement(n_).mask();
    int count = 0;
    double mass = 0;
    for (std::uint64_t m = inside; m != 0; m &= m - 1) {
      const int u = std::countr_zero(m);
      count += std::popcount(out_arcs_[u] & outside);
      for (std::uint64_t o = outside; o != 0; o &= o - 1) mass += x_(u, std::countr_zero(o));
    }
    double ratio = 0;
    if (count > 0) {
      ratio = mass > 1e-12 ? count / mass : std::numeric_limits<double>::infinity();
    }
    if (res.cuts_inspected == 1 || ratio > res.alpha_obs) {
      res.alpha_obs = ratio;
      res.witness = cut;
    }
  }

 private:
  int n_;
  const ArcWeights& x_;
  std::vector<std::uint64_t> out_arcs_;
};

}  // namespace internal

// Observed thinness of an arc set against x. Exhaustive mode inspects all
// 2^n - 2 nontrivial cuts (n <= 20); the sampled mode inspects the narrow
// cuts of `chain` plus `samples` uniformly random nontrivial cuts.
inline ThinnessResult Thinness(const ArcSet& arcs, const ArcWeights& x,
                               const ThinnessOptions& opts = {}) {
  const int n = x.n();
  internal::CutScanner scan(arcs, x);
  ThinnessResult res;
  if (opts.mode == ThinnessMode::kExhaustive) {
    if (n > 20) throw InputError("exhaustive thinness needs n <= 20");
    for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) scan.Inspect(Cut(m), res);
    return res;
  }
  if (opts.chain) {
    for (Cut c : opts.chain->cuts) scan.Inspect(c, res);
  }
  Rng rng(DeriveSeed(opts.seed, 0x7417));
  const std::uint64_t full = Cut::Full(n).mask();
  for (int i = 0; i < opts.samples; ++i) {
    std::uint64_t m;
    do {
      m = rng() & full;
    } while (m == 0 || m == full);
    scan.Inspect(Cut(m), res);
  }
  return res;
}

struct DrawResult {
  ArcSet arcs;
  int tries = 0;
  double cost = 0;
  ThinnessResult thinness;
  bool good = false;
};

class DrawExhausted : public ValidationError {
 public:
  explicit DrawExhausted(DrawResult best)
      : ValidationError("no alpha-thin, beta-approximate sample within the try budget"),
        best_(std::move(best)) {}
  const DrawResult& best() const { return best_; }

 private:
  DrawResult best_;
};

// Draws samples (try i uses seed DeriveSeed(cfg.seed, i)) until one costs at
// most beta times the LP value of x and has observed thinness at most alpha.
// Thinness is exhaustive for n <= 16 and narrow-plus-sampled above.
inline DrawResult DrawUntilGood(const TreeCombination& comb, const ArcWeights& x,
                                const DirectedMetric& inst, const SampleConfig& cfg,
                                int max_tries, const NarrowCutChain* chain = nullptr) {
  if (max_tries < 1) throw InputError("max_tries must be at least 1");
  const double lp_value = inst.CostOf(x);
  const double cost_cap = cfg.beta * lp_value;
  std::optional<DrawResult> best;
  double best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i < max_tries; ++i) {
    const std::uint64_t seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(i));
    DrawResult d;
    d.arcs = SampleTree(comb, cfg.WithSeed(seed));
    d.tries = i + 1;
    d.cost = CostOf(d.arcs, inst);
    ThinnessOptions topts;
    topts.mode = inst.n() <= 16 ? ThinnessMode::kExhaustive : ThinnessMode::kNarrowPlusSampled;
    topts.chain = chain;
    topts.seed = seed;
    d.thinness = Thinness(d.arcs, x, topts);
    d.good = d.cost <= cost_cap * (1 + 1e-12) + 1e-12 && d.thinness.alpha_obs <= cfg.alpha;
    if (d.good) return d;
    const double score = std::max(cost_cap > 0 ? d.cost / cost_cap : d.cost,
                                  d.thinness.alpha_obs / cfg.alpha);
    if (score < best_score) {
      best_score = score;
      best = d;
    }
  }
  throw DrawExhausted(*best);
}

}  // namespace atspp

#endif  // ATSPP_SAMPLER_HPP_
