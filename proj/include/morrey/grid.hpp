#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <string>

#include "morrey/error.hpp"

namespace morrey {

/// Planar point. One-dimensional problems only use the first coordinate.
using Point = std::array<double, 2>;

/// Zero-based lattice index. Documentation and archives that follow the
/// 1-based convention (x_1 = -ell) convert through from_one_based /
/// to_one_based; everything inside the library is zero-based. For n = 1 the
/// second component is always 0.
struct NodeIndex {
  int i = 0;
  int j = 0;

  friend constexpr auto operator<=>(const NodeIndex&, const NodeIndex&) = default;

  static constexpr NodeIndex from_one_based(int i1, int j1 = 1) {
    return NodeIndex{i1 - 1, j1 - 1};
  }
  constexpr std::array<int, 2> to_one_based() const { return {i + 1, j + 1}; }
};

/// Uniform square lattice on [-ell, ell]^n with spacing h = 1/k.
///
/// Node coordinates are computed as (i - ell*k) / k, which is exact for every
/// node whose coordinate is an integer. In particular the constraint points
/// +-1 (and (0, +-1) in the plane) coincide bit-exactly with grid nodes.
class Grid {
 public:
  Grid() = default;

  int dim() const { return n_; }
  int ell() const { return ell_; }
  int k() const { return k_; }
  /// Nodes per axis, 2*ell*k + 1.
  int nodes_per_axis() const { return nodes_; }
  double spacing() const { return 1.0 / static_cast<double>(k_); }

  /// Total stored values: N for n = 1, N*N for n = 2.
  std::size_t size() const {
    const auto n = static_cast<std::size_t>(nodes_);
    return n_ == 1 ? n : n * n;
  }

  double coordinate(int axis_index) const {
    return (static_cast<double>(axis_index) - static_cast<double>(ell_) * k_) /
           static_cast<double>(k_);
  }

  Point point(NodeIndex idx) const {
    if (n_ == 1) return {coordinate(idx.i), 0.0};
    return {coordinate(idx.i), coordinate(idx.j)};
  }

  bool contains(NodeIndex idx) const {
    if (idx.i < 0 || idx.i >= nodes_) return false;
    if (n_ == 1) return idx.j == 0;
    return idx.j >= 0 && idx.j < nodes_;
  }

  std::size_t linear(NodeIndex idx) const {
    if (n_ == 1) return static_cast<std::size_t>(idx.i);
    return static_cast<std::size_t>(idx.i) * static_cast<std::size_t>(nodes_) +
           static_cast<std::size_t>(idx.j);
  }

  NodeIndex node(std::size_t linear_index) const {
    if (n_ == 1) return {static_cast<int>(linear_index), 0};
    const auto n = static_cast<std::size_t>(nodes_);
    return {static_cast<int>(linear_index / n), static_cast<int>(linear_index % n)};
  }

  /// Axis index whose coordinate equals `integer_coordinate` exactly.
  int axis_index_of(int integer_coordinate) const {
    const int idx = (integer_coordinate + ell_) * k_;
    detail::require(idx >= 0 && idx < nodes_, "coordinate outside the grid");
    return idx;
  }

  /// The corner v_{N,N}. Only meaningful for n = 2; the forward stencil never
  /// reads it and measurements skip it.
  NodeIndex corner() const { return {nodes_ - 1, nodes_ - 1}; }
  bool is_corner(NodeIndex idx) const {
    return n_ == 2 && idx.i == nodes_ - 1 && idx.j == nodes_ - 1;
  }

  bool inside(const Point& p) const {
    const double l = static_cast<double>(ell_);
    if (!(std::abs(p[0]) <= l)) return false;
    return n_ == 1 || std::abs(p[1]) <= l;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  friend Grid make_grid(int n, int ell, int k);

  int n_ = 2;
  int ell_ = 2;
  int k_ = 1;
  int nodes_ = 5;
};

/// Builds the lattice used throughout. `ell` must be at least 2 so that the
/// pinned points +-1 are interior nodes.
inline Grid make_grid(int n, int ell, int k) {
  detail::require(n == 1 || n == 2, "grid dimension must be 1 or 2, got " + std::to_string(n));
  detail::require(ell >= 2, "ell must be an integer >= 2, got " + std::to_string(ell));
  detail::require(k >= 1, "k must be a positive integer, got " + std::to_string(k));
  detail::require(static_cast<long long>(2) * ell * k + 1 <= 20001, "grid too large");
  Grid g;
  g.n_ = n;
  g.ell_ = ell;
  g.k_ = k;
  g.nodes_ = 2 * ell * k + 1;
  return g;
}

}  // namespace morrey
