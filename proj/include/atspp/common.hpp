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

// Shared vocabulary: vertex subsets, arc-indexed weight vectors, errors.

#ifndef ATSPP_COMMON_HPP_
#define ATSPP_COMMON_HPP_

#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace atspp {

inline constexpr int kMaxVertices = 64;

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input or a violated precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A certificate or bound check failed.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An optimization or circulation problem has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A vertex subset of {0, ..., n-1}, n <= 64, stored as a bitmask.
class Cut {
 public:
  constexpr Cut() = default;
  constexpr explicit Cut(std::uint64_t mask) : mask_(mask) {}

  static Cut Singleton(int v) { return Cut(std::uint64_t{1} << v); }
  static Cut Full(int n) {
    return Cut(n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static Cut FromVertices(const std::vector<int>& vs) {
    Cut c;
    for (int v : vs) c = c.With(v);
    return c;
  }

  constexpr std::uint64_t mask() const { return mask_; }
  bool Contains(int v) const { return (mask_ >> v) & 1U; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }

  Cut With(int v) const { return Cut(mask_ | (std::uint64_t{1} << v)); }
  Cut Without(int v) const { return Cut(mask_ & ~(std::uint64_t{1} << v)); }
  Cut Complement(int n) const { return Cut(Full(n).mask_ & ~mask_); }
  Cut Union(Cut o) const { return Cut(mask_ | o.mask_); }
  Cut Intersect(Cut o) const { return Cut(mask_ & o.mask_); }
  Cut Minus(Cut o) const { return Cut(mask_ & ~o.mask_); }
  bool IsSubsetOf(Cut o) const { return (mask_ & ~o.mask_) == 0; }

  // True when neither set contains the other (both differences non-empty).
  bool Crosses(Cut o) const { return !Minus(o).empty() && !o.Minus(*this).empty(); }

  std::vector<int> Vertices() const {
    std::vector<int> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr bool operator==(Cut a, Cut b) { return a.mask_ == b.mask_; }
  friend constexpr auto operator<=>(Cut a, Cut b) { return a.mask_ <=> b.mask_; }

 private:
  std::uint64_t mask_ = 0;
};

// Directed arc (tail, head) with tail != head.
struct Arc {
  int tail = 0;
  int head = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Nonnegative weights on the arcs of the complete digraph on n vertices.
// Absent entries are zero. Backed by a dense n*n array; `Nonzeros()` gives
// the sparse view.
template <typename T>
class ArcVector {
 public:
  ArcVector() = default;
  explicit ArcVector(int n) : n_(n), w_(static_cast<std::size_t>(n) * n, T(0)) {}

  int n() const { return n_; }

  const T& operator()(int u, int v) const { return w_[Index(u, v)]; }
  T& operator()(int u, int v) { return w_[Index(u, v)]; }
  const T& operator[](Arc a) const { return (*this)(a.tail, a.head); }
  T& operator[](Arc a) { return (*this)(a.tail, a.head); }

  std::vector<std::pair<Arc, T>> Nonzeros() const {
    std::vector<std::pair<Arc, T>> out;
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        if (u != v && (*this)(u, v) != T(0)) out.push_back({Arc{u, v}, (*this)(u, v)});
      }
    }
    return out;
  }

  T Total() const {
    T sum(0);
    for (const T& x : w_) sum += x;
    return sum;
  }

  // Weight on arcs leaving `from` and entering `to` (the two sets are
  // expected to be disjoint).
  T Between(Cut from, Cut to) const {
    T sum(0);
    for (int u : from.Vertices()) {
      for (int v : to.Vertices()) {
        if (u != v) sum += (*this)(u, v);
      }
    }
    return sum;
  }
  T Out(Cut set) const { return Between(set, set.Complement(n_)); }
  T In(Cut set) const { return Between(set.Complement(n_), set); }

  // Entries with |value| <= eps are reset to zero.
  void Clean(const T& eps) {
    for (T& x : w_) {
      if (x <= eps && x >= -eps) x = T(0);
    }
  }

  friend bool operator==(const ArcVector&, const ArcVector&) = default;

 private:
  std::size_t Index(int u, int v) const {
    assert(u >= 0 && u < n_ && v >= 0 && v < n_);
    return static_cast<std::size_t>(u) * n_ + v;
  }

  int n_ = 0;
  std::vector<T> w_;
};

using ArcWeights = ArcVector<double>;

// A set of directed arcs, kept sorted.
using ArcSet = std::vector<Arc>;

inline int ArcId(Arc a, int n) { return a.tail * n + a.head; }
inline Arc ArcFromId(int id, int n) { return Arc{id / n, id % n}; }

}  // namespace atspp

#endif  // ATSPP_COMMON_HPP_
