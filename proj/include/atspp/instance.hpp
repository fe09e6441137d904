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

// Problem instances: asymmetric metrics with a source and a sink, the text
// format, metric completion of partial digraphs, and instance generators.

#ifndef ATSPP_INSTANCE_HPP_
#define ATSPP_INSTANCE_HPP_

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/rng.hpp"

namespace atspp {

// Complete asymmetric metric on n vertices with distinguished s != t.
class DirectedMetric {
 public:
  DirectedMetric() = default;

  // Checks shape, s/t, finiteness, nonnegativity and the zero diagonal.
  // The triangle inequality is checked separately by CheckTriangle().
  DirectedMetric(int n, int s, int t, std::vector<double> costs,
                 std::vector<std::string> names = {})
      : n_(n), s_(s), t_(t), cost_(std::move(costs)), names_(std::move(names)) {
    if (n_ < 2 || n_ > kMaxVertices) {
      throw InputError("vertex count must be in [2, 64], got " + std::to_string(n_));
    }
    if (cost_.size() != static_cast<std::size_t>(n_) * n_) {
      throw InputError("cost matrix must be n x n");
    }
    if (s_ < 0 || s_ >= n_ || t_ < 0 || t_ >= n_) throw InputError("s or t out of range");
    if (s_ == t_) throw InputError("s and t must differ");
    if (!names_.empty() && names_.size() != static_cast<std::size_t>(n_)) {
      throw InputError("names must have one entry per vertex");
    }
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        const double c = cost(u, v);
        if (!std::isfinite(c)) throw InputError("cost must be finite");
        if (c < 0) throw InputError("negative cost");
        if (u == v && c != 0) throw InputError("diagonal cost must be zero");
      }
    }
  }

  int n() const { return n_; }
  int s() const { return s_; }
  int t() const { return t_; }
  double cost(int u, int v) const { return cost_[static_cast<std::size_t>(u) * n_ + v]; }
  double cost(Arc a) const { return cost(a.tail, a.head); }
  const std::vector<double>& matrix() const { return cost_; }

  std::string name(int v) const {
    return names_.empty() ? std::to_string(v) : names_[v];
  }
  const std::vector<std::string>& names() const { return names_; }

  double MaxCost() const { return *std::max_element(cost_.begin(), cost_.end()); }

  // Returns a violating triple (u, v, w) with cost(u,w) > cost(u,v) + cost(v,w),
  // if any. Comparison allows a relative slack of 1e-12 for decimal input.
  std::optional<std::array<int, 3>> FindTriangleViolation() const {
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        for (int w = 0; w < n_; ++w) {
          const double direct = cost(u, w);
          const double via = cost(u, v) + cost(v, w);
          if (direct > via + 1e-12 * std::max(1.0, direct)) return std::array<int, 3>{u, v, w};
        }
      }
    }
    return std::nullopt;
  }

  void CheckTriangle() const {
    if (auto bad = FindTriangleViolation()) {
      const auto [u, v, w] = *bad;
      throw InputError("triangle inequality violated: c(" + name(u) + "," + name(w) + ") > c(" +
                       name(u) + "," + name(v) + ") + c(" + name(v) + "," + name(w) + ")");
    }
  }

  // Total cost of a weighted arc vector.
  double CostOf(const ArcWeights& x) const {
    double sum = 0;
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        if (u != v) sum += cost(u, v) * x(u, v);
      }
    }
    return sum;
  }

  double CostOf(const ArcSet& arcs) const {
    double sum = 0;
    for (Arc a : arcs) sum += cost(a);
    return sum;
  }

  friend bool operator==(const DirectedMetric&, const DirectedMetric&) = default;

 private:
  int n_ = 0;
  int s_ = 0;
  int t_ = 1;
  std::vector<double> cost_;
  std::vector<std::string> names_;
};

// A digraph with arc costs that need not be complete or metric.
struct PartialDigraph {
  struct WeightedArc {
    int tail;
    int head;
    double cost;
  };
  int n = 0;
  int s = 0;
  int t = 1;
  std::vector<WeightedArc> arcs;
  std::vector<std::string> names;
};

// Shortest-path closure. Pairs with no connecting path get
// BIG = n * (max arc cost) + 1, which exceeds every finite distance, so the
// result satisfies the triangle inequality everywhere.
inline DirectedMetric MetricCompletion(const PartialDigraph& g) {
  const int n = g.n;
  if (n < 2 || n > kMaxVertices) throw InputError("vertex count must be in [2, 64]");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, kInf);
  auto at = [&](int u, int v) -> double& { return d[static_cast<std::size_t>(u) * n + v]; };
  double max_cost = 0;
  for (int v = 0; v < n; ++v) at(v, v) = 0;
  for (const auto& a : g.arcs) {
    if (a.tail < 0 || a.tail >= n || a.head < 0 || a.head >= n) {
      throw InputError("arc endpoint out of range");
    }
    if (!(a.cost >= 0) || !std::isfinite(a.cost)) throw InputError("negative cost");
    if (a.tail == a.head) continue;
    at(a.tail, a.head) = std::min(at(a.tail, a.head), a.cost);
    max_cost = std::max(max_cost, a.cost);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (at(i, k) == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = at(i, k) + at(k, j);
        if (via < at(i, j)) at(i, j) = via;
      }
    }
  }
  if (at(g.s, g.t) == kInf) throw InputError("t is unreachable from s");
  const double big = n * max_cost + 1;
  for (double& x : d) {
    if (x == kInf) x = big;
  }
  return DirectedMetric(n, g.s, g.t, std::move(d), g.names);
}

inline PartialDigraph ToPartialDigraph(const DirectedMetric& m) {
  PartialDigraph g{m.n(), m.s(), m.t(), {}, m.names()};
  for (int u = 0; u < m.n(); ++u) {
    for (int v = 0; v < m.n(); ++v) {
      if (u != v) g.arcs.push_back({u, v, m.cost(u, v)});
    }
  }
  return g;
}

// The lower-bound family: vertices s, u_1..u_r, v_1..v_r, t (indices 0,
// 1..r, r+1..2r, 2r+1). Arcs su_1, sv_1, u_r t, v_r t and the backward chain
// arcs u_{i+1}u_i, v_{i+1}v_i cost 1; the cross arcs u_1 v_r, v_1 u_r and the
// forward chain arcs u_i u_{i+1}, v_i v_{i+1} cost 0.
struct GapFamily {
  static int U(int i) { return i; }
  static int V(int r, int i) { return r + i; }
  static int T(int r) { return 2 * r + 1; }

  static PartialDigraph Graph(int r) {
    if (r < 1) throw InputError("gap instance needs r >= 1");
    if (2 * r + 2 > kMaxVertices) throw InputError("gap instance too large");
    PartialDigraph g;
    g.n = 2 * r + 2;
    g.s = 0;
    g.t = T(r);
    g.names.push_back("s");
    for (int i = 1; i <= r; ++i) g.names.push_back("u" + std::to_string(i));
    for (int i = 1; i <= r; ++i) g.names.push_back("v" + std::to_string(i));
    g.names.push_back("t");
    g.arcs.push_back({0, U(1), 1});
    g.arcs.push_back({0, V(r, 1), 1});
    g.arcs.push_back({U(r), T(r), 1});
    g.arcs.push_back({V(r, r), T(r), 1});
    g.arcs.push_back({U(1), V(r, r), 0});
    g.arcs.push_back({V(r, 1), U(r), 0});
    for (int i = 1; i < r; ++i) {
      g.arcs.push_back({U(i + 1), U(i), 1});
      g.arcs.push_back({V(r, i + 1), V(r, i), 1});
      g.arcs.push_back({U(i), U(i + 1), 0});
      g.arcs.push_back({V(r, i), V(r, i + 1), 0});
    }
    return g;
  }
};

struct GapInstance {
  DirectedMetric metric;
  ArcWeights point;  // 1/2 on every arc of the underlying graph
};

inline GapInstance MakeGapInstance(int r) {
  PartialDigraph g = GapFamily::Graph(r);
  GapInstance out{MetricCompletion(g), ArcWeights(g.n)};
  for (const auto& a : g.arcs) out.point(a.tail, a.head) = 0.5;
  return out;
}

enum class RandomModel { kEuclideanPerturbed, kClosure };

inline std::string_view ModelName(RandomModel m) {
  return m == RandomModel::kClosure ? "closure" : "euclidean";
}

inline RandomModel ParseModel(std::string_view s) {
  if (s == "closure") return RandomModel::kClosure;
  if (s == "euclidean" || s == "euclidean-perturbed") return RandomModel::kEuclideanPerturbed;
  throw InputError("unknown random model '" + std::string(s) + "'");
}

// Random integer-cost metric, s = 0 and t = n-1. Deterministic in
// (n, seed, model).
//   closure:   a random Hamiltonian cycle plus each other arc with
//              probability 0.3, costs uniform in [1, 100], then
//              shortest-path closure.
//   euclidean: integer points in [0, 1000]^2, rounded distance plus an
//              independent per-arc perturbation in [0, 49], then closure.
inline DirectedMetric RandomInstance(int n, std::uint64_t seed, RandomModel model) {
  if (n < 2) throw InputError("random instance needs n >= 2");
  if (n > kMaxVertices) throw InputError("random instance too large");
  Rng rng(DeriveSeed(seed, model == RandomModel::kClosure ? 1 : 2));
  PartialDigraph g;
  g.n = n;
  g.s = 0;
  g.t = n - 1;
  if (model == RandomModel::kClosure) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[UniformBelow(rng, static_cast<std::uint64_t>(i) + 1)]);
    }
    std::vector<char> on_cycle(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
      const int u = perm[i], v = perm[(i + 1) % n];
      on_cycle[static_cast<std::size_t>(u) * n + v] = 1;
      g.arcs.push_back({u, v, static_cast<double>(1 + UniformBelow(rng, 100))});
    }
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v || on_cycle[static_cast<std::size_t>(u) * n + v]) continue;
        const bool keep = UniformUnit(rng) < 0.3;
        const double c = static_cast<double>(1 + UniformBelow(rng, 100));
        if (keep) g.arcs.push_back({u, v, c});
      }
    }
  } else {
    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) {
      p.first = static_cast<double>(UniformBelow(rng, 1001));
      p.second = static_cast<double>(UniformBelow(rng, 1001));
    }
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const double dx = pts[u].first - pts[v].first;
        const double dy = pts[u].second - pts[v].second;
        const double c = std::round(std::sqrt(dx * dx + dy * dy)) +
                         static_cast<double>(UniformBelow(rng, 50));
        g.arcs.push_back({u, v, c});
      }
    }
  }
  return MetricCompletion(g);
}

struct ParseOptions {
  // Treat the matrix as a partial digraph ("-" marks a missing arc) and
  // replace it by its metric completion instead of rejecting it.
  bool complete = false;
};

namespace internal {

inline std::vector<std::string_view> SplitWords(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline long ParseInt(std::string_view tok, const char* what) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(tok) + "'");
  }
  return v;
}

inline double ParseDouble(std::string_view tok) {
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw InputError("malformed cost: '" + std::string(tok) + "'");
  }
  return v;
}

inline std::string FormatDouble(double v) {
  std::array<char, 64> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

}  // namespace internal

// Parses the text format:
//   atspp 1
//   n <int>
//   s <index>
//   t <index>
//   n rows of n costs (row = tail vertex)
// Lines starting with '#' and blank lines are ignored.
inline DirectedMetric ParseInstance(std::string_view text, ParseOptions opts = {}) {
  std::vector<std::vector<std::string_view>> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    auto words = internal::SplitWords(line);
    if (!words.empty() && words[0][0] != '#') lines.push_back(std::move(words));
    pos = end + 1;
  }
  auto header = [&](std::size_t i, std::string_view key) -> std::string_view {
    if (i >= lines.size() || lines[i].size() != 2 || lines[i][0] != key) {
      throw InputError("malformed header: expected '" + std::string(key) + " <value>'");
    }
    return lines[i][1];
  };
  if (header(0, "atspp") != "1") throw InputError("malformed header: unsupported version");
  const long n = internal::ParseInt(header(1, "n"), "vertex count");
  const long s = internal::ParseInt(header(2, "s"), "source index");
  const long t = internal::ParseInt(header(3, "t"), "sink index");
  if (n < 2 || n > kMaxVertices) throw InputError("malformed header: n must be in [2, 64]");
  if (lines.size() != static_cast<std::size_t>(4 + n)) {
    throw InputError("matrix must have exactly n rows (non-square matrix)");
  }
  if (s == t) throw InputError("s and t must differ");
  PartialDigraph partial{static_cast<int>(n), static_cast<int>(s), static_cast<int>(t), {}, {}};
  std::vector<double> cost(static_cast<std::size_t>(n) * n, 0.0);
  for (long u = 0; u < n; ++u) {
    const auto& row = lines[4 + u];
    if (row.size() != static_cast<std::size_t>(n)) {
      throw InputError("row length: row " + std::to_string(u) + " has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    }
    for (long v = 0; v < n; ++v) {
      if (opts.complete && row[v] == "-") {
        if (u == v) throw InputError("diagonal entry cannot be missing");
        continue;
      }
      const double c = internal::ParseDouble(row[v]);
      if (c < 0) throw InputError("negative cost");
      cost[u * n + v] = c;
      if (u != v) partial.arcs.push_back({static_cast<int>(u), static_cast<int>(v), c});
    }
  }
  if (opts.complete) return MetricCompletion(partial);
  DirectedMetric m(static_cast<int>(n), static_cast<int>(s), static_cast<int>(t), std::move(cost));
  m.CheckTriangle();
  return m;
}

inline std::string FormatInstance(const DirectedMetric& m) {
  std::ostringstream out;
  out << "atspp 1\n";
  if (!m.names().empty()) {
    out << "# vertices:";
    for (const auto& name : m.names()) out << ' ' << name;
    out << '\n';
  }
  out << "n " << m.n() << "\ns " << m.s() << "\nt " << m.t() << '\n';
  for (int u = 0; u < m.n(); ++u) {
    for (int v = 0; v < m.n(); ++v) {
      if (v > 0) out << ' ';
      out << internal::FormatDouble(m.cost(u, v));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace atspp

#endif  // ATSPP_INSTANCE_HPP_
