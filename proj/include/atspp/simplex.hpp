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

// Dense two-phase tableau simplex for small linear programs
//
//   minimize    c^T x
//   subject to  a_i^T x  (<=, =, >=)  b_i
//               x >= 0
//
// The scalar type is a template parameter: double uses pivot tolerances,
// exact types (boost::multiprecision::cpp_rational) pivot exactly. Entering
// columns follow Dantzig's rule and fall back to Bland's rule after a run of
// degenerate pivots, which rules out cycling.

#ifndef ATSPP_SIMPLEX_HPP_
#define ATSPP_SIMPLEX_HPP_

#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

namespace atspp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

template <typename T>
struct LpRow {
  std::vector<std::pair<int, T>> coeffs;
  Sense sense = Sense::kGreaterEqual;
  T rhs{};
};

template <typename T>
struct LinearProgram {
  int num_vars = 0;
  std::vector<T> objective;  // minimized
  std::vector<LpRow<T>> rows;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

template <typename T>
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<T> x;
  T objective{};
  // y with c - A^T y >= 0 on every column at optimality: y_i <= 0 on <=
  // rows, y_i >= 0 on >= rows.
  std::vector<T> duals;
  long pivots = 0;
};

struct SimplexOptions {
  long max_pivots = 200000;
  int degenerate_streak_for_bland = 50;
};

template <typename T>
struct SimplexTolerance {
  static T Pivot() {
    if constexpr (std::is_floating_point_v<T>) return T(1e-9); else return T(0);
  }
  static T Feasibility() {
    if constexpr (std::is_floating_point_v<T>) return T(1e-7); else return T(0);
  }
};

namespace internal {

template <typename T>
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * (cols + 1)),
                                obj_(cols + 1), basis_(rows, -1) {}

  T& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  const T& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * (cols_ + 1) + c]; }
  T& rhs(int r) { return at(r, cols_); }
  T& obj(int c) { return obj_[c]; }
  int& basis(int r) { return basis_[r]; }
  int rows() const { return m_; }
  int cols() const { return cols_; }

  void SetCosts(const std::vector<T>& cost) {
    for (int c = 0; c <= cols_; ++c) obj_[c] = c < cols_ ? cost[c] : T(0);
    for (int r = 0; r < m_; ++r) {
      const T& cb = cost[basis_[r]];
      if (cb == T(0)) continue;
      for (int c = 0; c <= cols_; ++c) obj_[c] -= cb * at(r, c);
    }
  }

  void Pivot(int pr, int pc) {
    const T inv = T(1) / at(pr, pc);
    std::vector<int> nz;
    for (int c = 0; c <= cols_; ++c) {
      if (at(pr, c) != T(0)) {
        at(pr, c) *= inv;
        nz.push_back(c);
      }
    }
    at(pr, pc) = T(1);
    auto eliminate = [&](T* row) {
      const T f = row[pc];
      if (f == T(0)) return;
      for (int c : nz) row[c] -= f * at(pr, c);
      row[pc] = T(0);
    };
    for (int r = 0; r < m_; ++r) {
      if (r != pr) eliminate(&at(r, 0));
    }
    eliminate(obj_.data());
    basis_[pr] = pc;
  }

 private:
  int m_;
  int cols_;
  std::vector<T> a_;
  std::vector<T> obj_;  // reduced costs; last entry is -objective
  std::vector<int> basis_;
};

template <typename T>
T Abs(const T& v) {
  return v < T(0) ? -v : v;
}

// Runs primal simplex on the current reduced-cost row. `allowed[c]` gates
// which columns may enter.
template <typename T>
LpStatus RunSimplex(Tableau<T>& tab, const std::vector<char>& allowed, const SimplexOptions& opts,
                    long& pivots) {
  const T eps = SimplexTolerance<T>::Pivot();
  int degenerate = 0;
  for (;;) {
    if (pivots >= opts.max_pivots) return LpStatus::kIterationLimit;
    const bool bland = degenerate >= opts.degenerate_streak_for_bland;
    int enter = -1;
    T best(0);
    for (int c = 0; c < tab.cols(); ++c) {
      if (!allowed[c] || !(tab.obj(c) < -eps)) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (enter < 0 || tab.obj(c) < best) {
        enter = c;
        best = tab.obj(c);
      }
    }
    if (enter < 0) return LpStatus::kOptimal;
    int leave = -1;
    T ratio(0);
    for (int r = 0; r < tab.rows(); ++r) {
      const T& a = tab.at(r, enter);
      if (!(a > eps)) continue;
      const T q = tab.rhs(r) / a;
      if (leave < 0 || q < ratio - eps ||
          (!(q > ratio + eps) && tab.basis(r) < tab.basis(leave))) {
        leave = r;
        ratio = q;
      }
    }
    if (leave < 0) return LpStatus::kUnbounded;
    degenerate = (ratio > eps) ? 0 : degenerate + 1;
    tab.Pivot(leave, enter);
    ++pivots;
  }
}

}  // namespace internal

template <typename T>
LpResult<T> SolveLp(const LinearProgram<T>& lp, const SimplexOptions& opts = {}) {
  const int nv = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  std::vector<int> sign(m, 1);
  std::vector<Sense> sense(m);
  int slacks = 0, artificials = 0;
  for (int i = 0; i < m; ++i) {
    sense[i] = lp.rows[i].sense;
    if (lp.rows[i].rhs < T(0)) {
      sign[i] = -1;
      if (sense[i] == Sense::kLessEqual) {
        sense[i] = Sense::kGreaterEqual;
      } else if (sense[i] == Sense::kGreaterEqual) {
        sense[i] = Sense::kLessEqual;
      }
    }
    if (sense[i] != Sense::kEqual) ++slacks;
    if (sense[i] != Sense::kLessEqual) ++artificials;
  }
  const int cols = nv + slacks + artificials;
  internal::Tableau<T> tab(m, cols);
  std::vector<int> unit_col(m);
  std::vector<char> is_artificial(cols, 0);
  int next_slack = nv, next_art = nv + slacks;
  for (int i = 0; i < m; ++i) {
    const T sg(sign[i]);
    for (const auto& [j, v] : lp.rows[i].coeffs) tab.at(i, j) += sg * v;
    tab.rhs(i) = sg * lp.rows[i].rhs;
    if (sense[i] == Sense::kLessEqual) {
      tab.at(i, next_slack) = T(1);
      unit_col[i] = next_slack++;
    } else {
      if (sense[i] == Sense::kGreaterEqual) tab.at(i, next_slack++) = T(-1);
      tab.at(i, next_art) = T(1);
      is_artificial[next_art] = 1;
      unit_col[i] = next_art++;
    }
    tab.basis(i) = unit_col[i];
  }

  LpResult<T> result;
  std::vector<char> allowed(cols, 1);
  if (artificials > 0) {
    std::vector<T> phase1(cols, T(0));
    for (int c = 0; c < cols; ++c) {
      if (is_artificial[c]) phase1[c] = T(1);
    }
    tab.SetCosts(phase1);
    const LpStatus st = internal::RunSimplex(tab, allowed, opts, result.pivots);
    if (st == LpStatus::kIterationLimit) {
      result.status = st;
      return result;
    }
    if (-tab.obj(cols) > SimplexTolerance<T>::Feasibility()) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible; rows where
    // that is impossible are redundant and stay inert.
    for (int r = 0; r < m; ++r) {
      if (!is_artificial[tab.basis(r)]) continue;
      int best = -1;
      for (int c = 0; c < cols; ++c) {
        if (is_artificial[c]) continue;
        if (internal::Abs(tab.at(r, c)) > SimplexTolerance<T>::Pivot() &&
            (best < 0 || internal::Abs(tab.at(r, c)) > internal::Abs(tab.at(r, best)))) {
          best = c;
        }
      }
      if (best >= 0) {
        tab.Pivot(r, best);
        ++result.pivots;
      }
    }
    for (int c = 0; c < cols; ++c) {
      if (is_artificial[c]) allowed[c] = 0;
    }
  }

  std::vector<T> cost(cols, T(0));
  for (int j = 0; j < nv && j < static_cast<int>(lp.objective.size()); ++j) cost[j] = lp.objective[j];
  tab.SetCosts(cost);
  result.status = internal::RunSimplex(tab, allowed, opts, result.pivots);
  if (result.status != LpStatus::kOptimal) return result;

  result.x.assign(nv, T(0));
  for (int r = 0; r < m; ++r) {
    if (tab.basis(r) < nv) result.x[tab.basis(r)] = tab.rhs(r);
  }
  result.objective = T(0);
  for (int j = 0; j < nv && j < static_cast<int>(lp.objective.size()); ++j) {
    result.objective += lp.objective[j] * result.x[j];
  }
  result.duals.assign(m, T(0));
  for (int i = 0; i < m; ++i) {
    T y(0);
    for (int r = 0; r < m; ++r) {
      const T& cb = cost[tab.basis(r)];
      if (cb != T(0)) y += cb * tab.at(r, unit_col[i]);
    }
    result.duals[i] = T(sign[i]) * y;
  }
  return result;
}

}  // namespace atspp

#endif  // ATSPP_SIMPLEX_HPP_
