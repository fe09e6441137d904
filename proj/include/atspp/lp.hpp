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

// Subtour-elimination LP for s-t Hamiltonian paths, solved by row generation:
//
//   min  sum c_a x_a
//   x(out(s)) = x(in(t)) = 1,  x(in(s)) = x(out(t)) = 0,
//   x(out(v)) = x(in(v)) = 1            for v != s, t,
//   x(out(U)) >= 1                       for s in U, U != V,
//   x >= 0.
//
// The restricted master holds the degree rows; cut rows are added when the
// min-cut separation oracle finds them violated.

#ifndef ATSPP_LP_HPP_
#define ATSPP_LP_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "atspp/common.hpp"
#include "atspp/flows.hpp"
#include "atspp/instance.hpp"
#include "atspp/simplex.hpp"

namespace atspp {

inline constexpr double kDefaultLpTolerance = 1e-7;

template <typename T>
struct LpSolution {
  ArcVector<T> x;
  T value{};
  std::vector<Cut> active_cuts;  // generated rows, in order of generation
  int iterations = 0;            // master solves
  std::vector<T> objective_history;
};

class LpIterationLimit : public Error {
 public:
  LpIterationLimit(LpSolution<double> last, Cut violated)
      : Error("LP row generation hit its iteration cap"),
        last_(std::move(last)),
        violated_(violated) {}
  const LpSolution<double>& last() const { return last_; }
  Cut violated() const { return violated_; }

 private:
  LpSolution<double> last_;
  Cut violated_;
};

struct SeparatedCut {
  Cut cut;
  double value;  // x(out(cut))
};

// All cuts found by the per-target max-flow sweep with x(out(U)) < 1 - tol,
// deduplicated, most violated first. Each U contains s and misses the target.
template <typename T>
std::vector<SeparatedCut> SeparateAll(int s, const ArcVector<T>& x, double tol) {
  std::vector<SeparatedCut> found;
  for (int v = 0; v < x.n(); ++v) {
    if (v == s) continue;
    auto flow = MaxFlow(x, s, v);
    if (flow.value < T(1) - T(tol)) {
      const bool dup = std::any_of(found.begin(), found.end(),
                                   [&](const SeparatedCut& c) { return c.cut == flow.source_side; });
      if (!dup) found.push_back({flow.source_side, static_cast<double>(flow.value)});
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const SeparatedCut& a, const SeparatedCut& b) { return a.value < b.value; });
  return found;
}

// A cut {s} <= U != V with x(out(U)) < 1 - tol, or nothing if none exists.
template <typename T>
std::optional<Cut> Separate(const DirectedMetric& inst, const ArcVector<T>& x, double tol) {
  auto all = SeparateAll(inst.s(), x, tol);
  if (all.empty()) return std::nullopt;
  return all.front().cut;
}

struct LpOptions {
  double tol = kDefaultLpTolerance;
  int max_iterations = 1000;
  SimplexOptions simplex;
};

template <typename T = double>
LpSolution<T> SolveSubtourLp(const DirectedMetric& inst, const LpOptions& opts = {}) {
  if (!(opts.tol > 0) || opts.tol > 1e-4) throw InputError("LP tolerance must lie in (0, 1e-4]");
  const int n = inst.n(), s = inst.s(), t = inst.t();
  std::vector<Arc> arcs;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) arcs.push_back({u, v});
    }
  }
  LinearProgram<T> master;
  master.num_vars = static_cast<int>(arcs.size());
  for (Arc a : arcs) master.objective.push_back(T(inst.cost(a)));
  auto degree_row = [&](int v, bool out, int rhs) {
    LpRow<T> row;
    for (int j = 0; j < master.num_vars; ++j) {
      if ((out && arcs[j].tail == v) || (!out && arcs[j].head == v)) row.coeffs.push_back({j, T(1)});
    }
    row.sense = Sense::kEqual;
    row.rhs = T(rhs);
    master.rows.push_back(std::move(row));
  };
  for (int v = 0; v < n; ++v) {
    degree_row(v, /*out=*/true, v == t ? 0 : 1);
    degree_row(v, /*out=*/false, v == s ? 0 : 1);
  }

  LpSolution<T> sol;
  sol.x = ArcVector<T>(n);
  for (;;) {
    auto res = SolveLp(master, opts.simplex);
    ++sol.iterations;
    if (res.status == LpStatus::kInfeasible) throw InfeasibleError("subtour LP master is infeasible");
    if (res.status != LpStatus::kOptimal) throw Error("simplex failed on the subtour LP master");
    sol.x = ArcVector<T>(n);
    for (int j = 0; j < master.num_vars; ++j) {
      T v = res.x[j];
      if constexpr (std::is_floating_point_v<T>) {
        if (v < T(1e-12)) v = T(0);
      }
      sol.x[arcs[j]] = v;
    }
    sol.value = res.objective;
    sol.objective_history.push_back(res.objective);

    auto cuts = SeparateAll(s, sol.x, opts.tol);
    if (cuts.empty()) return sol;
    if (sol.iterations >= opts.max_iterations) {
      LpSolution<double> last;
      last.x = ArcWeights(n);
      for (Arc a : arcs) last.x[a] = static_cast<double>(sol.x[a]);
      last.value = static_cast<double>(sol.value);
      last.active_cuts = sol.active_cuts;
      last.iterations = sol.iterations;
      throw LpIterationLimit(std::move(last), cuts.front().cut);
    }
    for (const auto& c : cuts) {
      LpRow<T> row;
      for (int j = 0; j < master.num_vars; ++j) {
        if (c.cut.Contains(arcs[j].tail) && !c.cut.Contains(arcs[j].head)) {
          row.coeffs.push_back({j, T(1)});
        }
      }
      row.sense = Sense::kGreaterEqual;
      row.rhs = T(1);
      master.rows.push_back(std::move(row));
      sol.active_cuts.push_back(c.cut);
    }
  }
}

inline LpSolution<double> ToDouble(const LpSolution<double>& sol) { return sol; }

template <typename T>
LpSolution<double> ToDouble(const LpSolution<T>& sol) {
  LpSolution<double> out;
  out.x = ArcWeights(sol.x.n());
  for (const auto& [a, v] : sol.x.Nonzeros()) out.x[a] = static_cast<double>(v);
  out.value = static_cast<double>(sol.value);
  out.active_cuts = sol.active_cuts;
  out.iterations = sol.iterations;
  for (const auto& v : sol.objective_history) out.objective_history.push_back(static_cast<double>(v));
  return out;
}

struct ConstraintViolation {
  std::string constraint;  // e.g. "out(3) = 1", "x(2,5) >= 0", "cut {0,1}"
  double amount;           // how far the constraint is from holding
};

struct FeasibilityReport {
  std::vector<ConstraintViolation> violations;
  double worst_degree = 0;
  double worst_nonnegativity = 0;
  double worst_cut = 0;
  bool ok() const { return violations.empty(); }
};

inline std::string FormatCut(Cut c, const DirectedMetric* inst = nullptr) {
  std::string out = "{";
  bool first = true;
  for (int v : c.Vertices()) {
    if (!first) out += ",";
    out += inst ? inst->name(v) : std::to_string(v);
    first = false;
  }
  return out + "}";
}

// Checks every constraint of the subtour LP; cut rows through Separate().
inline FeasibilityReport CheckFeasible(const DirectedMetric& inst, const ArcWeights& x,
                                       double tol = kDefaultLpTolerance) {
  FeasibilityReport rep;
  const int n = inst.n(), s = inst.s(), t = inst.t();
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && x(u, v) < -tol) {
        rep.violations.push_back({"x(" + inst.name(u) + "," + inst.name(v) + ") >= 0", -x(u, v)});
        rep.worst_nonnegativity = std::max(rep.worst_nonnegativity, -x(u, v));
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    const Cut single = Cut::Singleton(v);
    const double out = x.Out(single), in = x.In(single);
    const double want_out = v == t ? 0 : 1, want_in = v == s ? 0 : 1;
    if (std::abs(out - want_out) > tol) {
      rep.violations.push_back({"out(" + inst.name(v) + ") = " + std::to_string(int(want_out)),
                                std::abs(out - want_out)});
      rep.worst_degree = std::max(rep.worst_degree, std::abs(out - want_out));
    }
    if (std::abs(in - want_in) > tol) {
      rep.violations.push_back({"in(" + inst.name(v) + ") = " + std::to_string(int(want_in)),
                                std::abs(in - want_in)});
      rep.worst_degree = std::max(rep.worst_degree, std::abs(in - want_in));
    }
  }
  ArcWeights clipped(n);
  for (const auto& [a, v] : x.Nonzeros()) clipped[a] = std::max(v, 0.0);
  auto cuts = SeparateAll(s, clipped, tol);
  if (!cuts.empty()) {
    rep.worst_cut = 1 - cuts.front().value;
    rep.violations.push_back({"cut " + FormatCut(cuts.front().cut, &inst), rep.worst_cut});
  }
  return rep;
}

}  // namespace atspp

#endif  // ATSPP_LP_HPP_
