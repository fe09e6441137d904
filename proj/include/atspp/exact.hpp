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

// Exact oracles: Held-Karp for the optimal Hamiltonian s-t path and
// exhaustive cut enumeration.

#ifndef ATSPP_EXACT_HPP_
#define ATSPP_EXACT_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/instance.hpp"

namespace atspp {

struct ExactResult {
  double cost = 0;
  std::vector<int> path;  // s ... t, every vertex once
  long states_expanded = 0;
};

inline constexpr int kHeldKarpMaxVertices = 22;

// Subset DP over the interior vertices V - {s, t}: best[S][v] is the cheapest
// path from s through exactly S ending at v in S. t is appended last.
inline ExactResult HeldKarp(const DirectedMetric& inst) {
  const int n = inst.n(), s = inst.s(), t = inst.t();
  if (n > kHeldKarpMaxVertices) throw InputError("Held-Karp supports n <= 22");
  std::vector<int> inner;
  for (int v = 0; v < n; ++v) {
    if (v != s && v != t) inner.push_back(v);
  }
  const int m = static_cast<int>(inner.size());
  ExactResult res;
  if (m == 0) {
    res.cost = inst.cost(s, t);
    res.path = {s, t};
    return res;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> best(subsets * m, kInf);
  std::vector<std::int8_t> prev(subsets * m, -1);
  auto at = [&](std::size_t set, int last) { return set * m + last; };
  for (int j = 0; j < m; ++j) best[at(std::size_t{1} << j, j)] = inst.cost(s, inner[j]);
  for (std::size_t set = 1; set < subsets; ++set) {
    for (int last = 0; last < m; ++last) {
      if (!((set >> last) & 1U)) continue;
      const double here = best[at(set, last)];
      if (here == kInf) continue;
      ++res.states_expanded;
      for (int next = 0; next < m; ++next) {
        if ((set >> next) & 1U) continue;
        const std::size_t grown = set | (std::size_t{1} << next);
        const double cand = here + inst.cost(inner[last], inner[next]);
        if (cand < best[at(grown, next)]) {
          best[at(grown, next)] = cand;
          prev[at(grown, next)] = static_cast<std::int8_t>(last);
        }
      }
    }
  }
  const std::size_t full = subsets - 1;
  int last = -1;
  res.cost = kInf;
  for (int j = 0; j < m; ++j) {
    const double cand = best[at(full, j)] + inst.cost(inner[j], t);
    if (cand < res.cost) {
      res.cost = cand;
      last = j;
    }
  }
  std::vector<int> rev{t};
  for (std::size_t set = full; last >= 0;) {
    rev.push_back(inner[last]);
    const int p = prev[at(set, last)];
    set &= ~(std::size_t{1} << last);
    last = p;
  }
  rev.push_back(s);
  res.path.assign(rev.rbegin(), rev.rend());
  return res;
}

inline constexpr int kEnumerateMaxVertices = 20;

// All nontrivial subsets (neither empty nor V) passing `keep`, in increasing
// bitmask order.
inline std::vector<Cut> EnumerateCuts(int n, const std::function<bool(Cut)>& keep) {
  if (n > kEnumerateMaxVertices) throw InputError("cut enumeration supports n <= 20");
  std::vector<Cut> out;
  for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) {
    if (keep(Cut(m))) out.push_back(Cut(m));
  }
  return out;
}

inline std::vector<Cut> EnumerateCuts(int n) {
  return EnumerateCuts(n, [](Cut) { return true; });
}

}  // namespace atspp

#endif  // ATSPP_EXACT_HPP_
