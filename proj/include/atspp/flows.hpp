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

// Max-flow / min-cut (Dinic) and min-cost circulation with lower bounds
// (successive shortest paths). Both are templated on the numeric type so the
// same code serves double, integral and exact rational data.

#ifndef ATSPP_FLOWS_HPP_
#define ATSPP_FLOWS_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <type_traits>
#include <vector>

#include "atspp/common.hpp"

namespace atspp {

// Residual amounts at or below Epsilon<T>() count as zero.
template <typename T>
constexpr T Epsilon() {
  if constexpr (std::is_floating_point_v<T>) {
    return T(1e-12);
  } else {
    return T(0);
  }
}

template <typename T>
struct FlowNetwork {
  struct Edge {
    int tail;
    int head;
    T capacity;
  };
  int n = 0;
  std::vector<Edge> arcs;
  int source = 0;
  int sink = 1;

  void AddArc(int tail, int head, T capacity) { arcs.push_back({tail, head, capacity}); }
};

template <typename T>
struct MaxFlowResult {
  T value{};
  Cut source_side;  // vertices reachable from the source in the final residual graph
  std::vector<T> flow;  // per input arc
};

namespace internal {

// Residual graph with paired forward/backward edges.
template <typename T>
class Residual {
 public:
  struct Edge {
    int to;
    T cap;
    double cost;
  };

  explicit Residual(int n) : adj_(n) {}

  int AddEdge(int u, int v, T cap, double cost = 0) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({v, cap, cost});
    edges_.push_back({u, T(0), -cost});
    adj_[u].push_back(id);
    adj_[v].push_back(id + 1);
    return id;
  }

  int size() const { return static_cast<int>(adj_.size()); }
  std::vector<Edge>& edges() { return edges_; }
  const std::vector<int>& adj(int v) const { return adj_[v]; }

  void Push(int e, const T& amount) {
    edges_[e].cap -= amount;
    edges_[e ^ 1].cap += amount;
  }

  std::vector<char> Reachable(int from) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int e : adj_[u]) {
        if (edges_[e].cap > Epsilon<T>() && !seen[edges_[e].to]) {
          seen[edges_[e].to] = 1;
          stack.push_back(edges_[e].to);
        }
      }
    }
    return seen;
  }

  // Dinic's blocking-flow max flow. Returns the value pushed.
  T MaxFlow(int s, int t) {
    T total(0);
    if (s == t) return total;
    std::vector<int> level(adj_.size()), it(adj_.size());
    for (;;) {
      std::fill(level.begin(), level.end(), -1);
      std::deque<int> q{s};
      level[s] = 0;
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int e : adj_[u]) {
          if (edges_[e].cap > Epsilon<T>() && level[edges_[e].to] < 0) {
            level[edges_[e].to] = level[u] + 1;
            q.push_back(edges_[e].to);
          }
        }
      }
      if (level[t] < 0) break;
      std::fill(it.begin(), it.end(), 0);
      for (;;) {
        T pushed = Augment(s, t, std::nullopt, level, it);
        if (!(pushed > Epsilon<T>())) break;
        total += pushed;
      }
    }
    return total;
  }

 private:
  T Augment(int u, int t, std::optional<T> limit, const std::vector<int>& level,
            std::vector<int>& it) {
    if (u == t) return limit.value_or(T(0));
    for (int& i = it[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      const int e = adj_[u][i];
      Edge& edge = edges_[e];
      if (!(edge.cap > Epsilon<T>()) || level[edge.to] != level[u] + 1) continue;
      T want = limit && *limit < edge.cap ? *limit : edge.cap;
      T got = Augment(edge.to, t, want, level, it);
      if (got > Epsilon<T>()) {
        Push(e, got);
        return got;
      }
    }
    return T(0);
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
};

}  // namespace internal

// Maximum source-sink flow and a source-side minimum cut.
template <typename T>
MaxFlowResult<T> MaxFlow(const FlowNetwork<T>& net) {
  if (net.n > kMaxVertices) throw InputError("flow network too large");
  internal::Residual<T> g(net.n);
  std::vector<int> ids;
  ids.reserve(net.arcs.size());
  for (const auto& a : net.arcs) {
    if (a.capacity < T(0)) throw InputError("negative capacity");
    ids.push_back(g.AddEdge(a.tail, a.head, a.capacity));
  }
  MaxFlowResult<T> out;
  out.value = g.MaxFlow(net.source, net.sink);
  const auto seen = g.Reachable(net.source);
  for (int v = 0; v < net.n; ++v) {
    if (seen[v]) out.source_side = out.source_side.With(v);
  }
  out.flow.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.flow.push_back(net.arcs[i].capacity - g.edges()[ids[i]].cap);
  }
  return out;
}

// Max flow on the complete digraph with capacities w, from `source` to `sink`.
template <typename T>
MaxFlowResult<T> MaxFlow(const ArcVector<T>& w, int source, int sink) {
  FlowNetwork<T> net{w.n(), {}, source, sink};
  for (const auto& [a, cap] : w.Nonzeros()) net.AddArc(a.tail, a.head, cap);
  return MaxFlow(net);
}

// Circulation problem with bounds lower <= f <= upper per arc. An absent
// upper bound means unbounded; the solver substitutes
// UnboundedCapacity() = (sum of lower bounds) + n + 1.
template <typename T>
struct CirculationProblem {
  struct Edge {
    int tail;
    int head;
    T lower;
    std::optional<T> upper;
    double cost;
  };
  int n = 0;
  std::vector<Edge> arcs;

  void AddArc(int tail, int head, T lower, std::optional<T> upper, double cost) {
    arcs.push_back({tail, head, lower, upper, cost});
  }

  T UnboundedCapacity() const {
    T sum(0);
    for (const auto& a : arcs) sum += a.lower;
    return sum + T(n) + T(1);
  }

  T Upper(const Edge& a) const { return a.upper ? *a.upper : UnboundedCapacity(); }

  // l(out(U)) - u(in(U)); positive means the cut violates Hoffman's condition.
  T HoffmanExcess(Cut set) const {
    T excess(0);
    for (const auto& a : arcs) {
      const bool tail_in = set.Contains(a.tail), head_in = set.Contains(a.head);
      if (tail_in && !head_in) excess += a.lower;
      if (!tail_in && head_in) excess -= Upper(a);
    }
    return excess;
  }
};

template <typename T>
struct CirculationResult {
  bool feasible = false;
  std::vector<T> flow;  // per input arc, when feasible
  double cost = 0;
  std::optional<Cut> violated_cut;  // when infeasible

  ArcVector<T> Aggregate(const CirculationProblem<T>& prob) const {
    ArcVector<T> out(prob.n);
    for (std::size_t i = 0; i < flow.size(); ++i) {
      out(prob.arcs[i].tail, prob.arcs[i].head) += flow[i];
    }
    return out;
  }
};

// Minimum-cost circulation: f = lower + f', with f' routed from vertices of
// positive lower-bound excess to vertices of negative excess by successive
// shortest paths. Negative-cost arcs are pre-saturated so every residual cost
// starts nonnegative. Integral bounds give an integral circulation.
template <typename T>
CirculationResult<T> MinCostCirculation(const CirculationProblem<T>& prob) {
  const int n = prob.n;
  const int super_source = n, super_sink = n + 1;
  internal::Residual<T> g(n + 2);
  std::vector<T> excess(n, T(0));
  std::vector<int> ids;
  std::vector<T> base(prob.arcs.size());
  for (std::size_t i = 0; i < prob.arcs.size(); ++i) {
    const auto& a = prob.arcs[i];
    const T upper = prob.Upper(a);
    if (a.lower < T(0) || upper < a.lower) throw InputError("circulation bounds need 0 <= l <= u");
    T start = a.lower;
    if (a.cost < 0) start = upper;
    base[i] = start;
    excess[a.head] += start;
    excess[a.tail] -= start;
    if (a.cost < 0) {
      // f = upper - g with 0 <= g <= upper - lower, routed on the reverse.
      ids.push_back(g.AddEdge(a.head, a.tail, upper - a.lower, -a.cost));
    } else {
      ids.push_back(g.AddEdge(a.tail, a.head, upper - a.lower, a.cost));
    }
  }
  T demand(0);
  for (int v = 0; v < n; ++v) {
    if (excess[v] > T(0)) {
      g.AddEdge(super_source, v, excess[v]);
      demand += excess[v];
    } else if (excess[v] < T(0)) {
      g.AddEdge(v, super_sink, -excess[v]);
    }
  }

  // Bellman-Ford (queue based) shortest paths; all residual costs are
  // nonnegative initially and SSP keeps the residual free of negative cycles.
  T routed(0);
  const int total = n + 2;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (;;) {
    std::vector<double> dist(total, kInf);
    std::vector<int> via(total, -1);
    std::vector<char> queued(total, 0);
    std::deque<int> q{super_source};
    dist[super_source] = 0;
    queued[super_source] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      queued[u] = 0;
      for (int e : g.adj(u)) {
        const auto& edge = g.edges()[e];
        if (!(edge.cap > Epsilon<T>())) continue;
        const double nd = dist[u] + edge.cost;
        if (nd < dist[edge.to] - 1e-12) {
          dist[edge.to] = nd;
          via[edge.to] = e;
          if (!queued[edge.to]) {
            queued[edge.to] = 1;
            q.push_back(edge.to);
          }
        }
      }
    }
    if (dist[super_sink] == kInf) break;
    std::optional<T> bottleneck;
    for (int v = super_sink; v != super_source; v = g.edges()[via[v] ^ 1].to) {
      const T& cap = g.edges()[via[v]].cap;
      if (!bottleneck || cap < *bottleneck) bottleneck = cap;
    }
    for (int v = super_sink; v != super_source; v = g.edges()[via[v] ^ 1].to) {
      g.Push(via[v], *bottleneck);
    }
    routed += *bottleneck;
  }

  CirculationResult<T> out;
  if (routed < demand - Epsilon<T>() * T(n + 1)) {
    const auto seen = g.Reachable(super_source);
    Cut reach;
    for (int v = 0; v < n; ++v) {
      if (seen[v]) reach = reach.With(v);
    }
    // The unreachable side carries more forced inflow than its capacity to
    // receive it; check both orientations to be safe.
    const Cut candidates[] = {reach.Complement(n), reach};
    for (Cut c : candidates) {
      if (!c.empty() && c != Cut::Full(n) && prob.HoffmanExcess(c) > Epsilon<T>()) {
        out.violated_cut = c;
        break;
      }
    }
    if (!out.violated_cut && n <= 20) {
      for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
        if (prob.HoffmanExcess(Cut(m)) > Epsilon<T>()) {
          out.violated_cut = Cut(m);
          break;
        }
      }
    }
    return out;
  }
  out.feasible = true;
  out.flow.resize(prob.arcs.size());
  for (std::size_t i = 0; i < prob.arcs.size(); ++i) {
    const auto& a = prob.arcs[i];
    const T pushed = (prob.Upper(a) - a.lower) - g.edges()[ids[i]].cap;
    out.flow[i] = a.cost < 0 ? base[i] - pushed : base[i] + pushed;
    out.cost += static_cast<double>(out.flow[i]) * a.cost;
  }
  return out;
}

}  // namespace atspp

#endif  // ATSPP_FLOWS_HPP_
