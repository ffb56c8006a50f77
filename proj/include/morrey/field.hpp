#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/grid.hpp"

namespace morrey {

/// Node values of a candidate function on a Grid.
///
/// Storage is row-major: row i is x_i, column j is y_j. For n = 2 the corner
/// v_{N,N} is kept in the array. The forward-difference energy never reads it
/// (it starts as 0 and stays there), the symmetric stencil treats it as an
/// ordinary node, and the measurements skip it.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}
  ScalarField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    detail::require(values_.size() == grid_.size(), "value count does not match grid");
  }

  /// Samples `f(point)` at every node (the n = 2 corner stays 0).
  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t q = 0; q < grid.size(); ++q) {
      const NodeIndex idx = grid.node(q);
      if (grid.is_corner(idx)) continue;
      out.values_[q] = std::invoke(f, grid.point(idx));
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double operator()(NodeIndex idx) const { return values_[grid_.linear(idx)]; }
  double& operator()(NodeIndex idx) { return values_[grid_.linear(idx)]; }
  double operator()(int i, int j = 0) const { return (*this)(NodeIndex{i, j}); }
  double& operator()(int i, int j = 0) { return (*this)(NodeIndex{i, j}); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  ScalarField& operator+=(const ScalarField& o) {
    same_grid(o);
    for (std::size_t q = 0; q < values_.size(); ++q) values_[q] += o.values_[q];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    same_grid(o);
    for (std::size_t q = 0; q < values_.size(); ++q) values_[q] -= o.values_[q];
    return *this;
  }
  ScalarField& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  ScalarField& operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
  }

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator-(ScalarField a) { return a *= -1.0; }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  void same_grid(const ScalarField& o) const {
    detail::require(grid_ == o.grid_, "fields live on different grids");
  }

  Grid grid_;
  std::vector<double> values_;
};

struct Constraint {
  NodeIndex node;
  double value = 0.0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Pinned nodes with prescribed values.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(const Grid& grid, std::vector<Constraint> entries) : entries_(std::move(entries)) {
    for (std::size_t a = 0; a < entries_.size(); ++a) {
      detail::require(grid.contains(entries_[a].node), "constraint node out of range");
      detail::require(!grid.is_corner(entries_[a].node), "the corner node cannot be pinned");
      detail::require(std::isfinite(entries_[a].value), "constraint value must be finite");
      for (std::size_t b = 0; b < a; ++b) {
        detail::require(entries_[a].node != entries_[b].node, "constraint nodes must be distinct");
        detail::require(entries_[a].value != entries_[b].value,
                        "constraint values must be distinct");
      }
    }
  }

  const std::vector<Constraint>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// One flag per stored value: 1 where the node is pinned.
  std::vector<unsigned char> mask(const Grid& grid) const {
    std::vector<unsigned char> m(grid.size(), 0);
    for (const auto& c : entries_) m[grid.linear(c.node)] = 1;
    return m;
  }

  bool pins(NodeIndex idx) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Constraint& c) { return c.node == idx; });
  }

  /// Writes the prescribed values into `field`.
  void apply(ScalarField& field) const {
    for (const auto& c : entries_) field(c.node) = c.value;
  }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  std::vector<Constraint> entries_;
};

/// u(0,1) = 1, u(0,-1) = -1 in the plane; u(1) = 1, u(-1) = -1 on the line.
/// The first entry is always the +1 pin.
inline ConstraintSet canonical_constraints(const Grid& grid) {
  if (grid.dim() == 1) {
    return ConstraintSet(grid, {{{grid.axis_index_of(1), 0}, 1.0},
                                {{grid.axis_index_of(-1), 0}, -1.0}});
  }
  const int mid = grid.axis_index_of(0);
  return ConstraintSet(grid, {{{mid, grid.axis_index_of(1)}, 1.0},
                              {{mid, grid.axis_index_of(-1)}, -1.0}});
}

inline bool is_canonical(const Grid& grid, const ConstraintSet& constraints) {
  return constraints == canonical_constraints(grid);
}

namespace detail {

// Fractional axis position of coordinate x; snaps to the nearest node when
// within round-off so that evaluation at node coordinates is exact.
inline void locate(const Grid& g, double x, int& cell, double& frac) {
  const int last = g.nodes_per_axis() - 1;
  double t = (x + static_cast<double>(g.ell())) * static_cast<double>(g.k());
  const double r = std::round(t);
  if (std::abs(t - r) <= 1e-9) t = r;
  cell = std::clamp(static_cast<int>(std::floor(t)), 0, last - 1);
  frac = t - static_cast<double>(cell);
}

}  // namespace detail

/// Multilinear interpolation of the node values. Exact at nodes and exact for
/// affine fields. Unless `use_corner` is set, the top-right cell, whose fourth
/// corner v_{N,N} the forward stencil leaves unused, is interpolated by the
/// affine function through its three remaining nodes.
inline double interpolate(const ScalarField& field, const Point& p, bool use_corner = false) {
  const Grid& g = field.grid();
  if (!g.inside(p)) throw DomainError("interpolation point outside the grid domain");
  int ci = 0;
  double fx = 0.0;
  detail::locate(g, p[0], ci, fx);
  if (g.dim() == 1) return (1.0 - fx) * field(ci) + fx * field(ci + 1);

  int cj = 0;
  double fy = 0.0;
  detail::locate(g, p[1], cj, fy);
  const double v00 = field(ci, cj);
  const double v10 = field(ci + 1, cj);
  const double v01 = field(ci, cj + 1);
  const int last = g.nodes_per_axis() - 1;
  if (!use_corner && ci + 1 == last && cj + 1 == last) {
    if (fx == 0.0 && fy == 0.0) return v00;
    if (fy == 0.0 && fx == 1.0) return v10;
    if (fx == 0.0 && fy == 1.0) return v01;
    return v00 + fx * (v10 - v00) + fy * (v01 - v00);
  }
  const double v11 = field(ci + 1, cj + 1);
  const double lo = (1.0 - fx) * v00 + fx * v10;
  const double hi = (1.0 - fx) * v01 + fx * v11;
  return (1.0 - fy) * lo + fy * hi;
}

}  // namespace morrey
