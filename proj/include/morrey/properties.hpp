#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

/// One named measurement with its tolerance and verdict.
struct PropertyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  /// Records `value` and passes it when value <= tolerance.
  PropertyCheck& add_at_most(std::string name, double value, double tolerance) {
    checks.push_back({std::move(name), value, tolerance, value <= tolerance});
    return checks.back();
  }
  /// Records `value` and passes it when value > threshold.
  PropertyCheck& add_above(std::string name, double value, double threshold) {
    checks.push_back({std::move(name), value, threshold, value > threshold});
    return checks.back();
  }
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
  }
};

namespace detail {

inline bool skip_node(const Grid& g, NodeIndex idx) { return g.is_corner(idx); }

}  // namespace detail

/// max |u(x, -y) + u(x, y)| (plane) or max |u(-x) + u(x)| (line). Zero for the
/// canonical extremal, which is odd across the midplane.
inline double check_reflection_antisymmetry(const ScalarField& field) {
  const Grid& g = field.grid();
  const int n = g.nodes_per_axis();
  double worst = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(field(i) + field(n - 1 - i)));
    return worst;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const NodeIndex a{i, j};
      const NodeIndex b{i, n - 1 - j};
      if (detail::skip_node(g, a) || detail::skip_node(g, b)) continue;
      worst = std::max(worst, std::abs(field(a) + field(b)));
    }
  }
  return worst;
}

/// max |u(-x, y) - u(x, y)|. In the plane, symmetry about the line through
/// the two pins reduces to this mirror symmetry.
inline double check_cylindrical_symmetry(const ScalarField& field) {
  const Grid& g = field.grid();
  if (g.dim() != 2) throw ValidationError("cylindrical symmetry check needs a planar field");
  const int n = g.nodes_per_axis();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const NodeIndex a{i, j};
      const NodeIndex b{n - 1 - i, j};
      if (detail::skip_node(g, a) || detail::skip_node(g, b)) continue;
      worst = std::max(worst, std::abs(field(a) - field(b)));
    }
  }
  return worst;
}

struct BoundsReport {
  /// Largest overshoot of beta <= u <= alpha over all nodes.
  double global_violation = 0.0;
  /// Largest overshoot of mid < u < alpha on the open half-space containing
  /// the alpha pin, and of beta < u < mid on the other one.
  double upper_violation = 0.0;
  double lower_violation = 0.0;
  double worst() const { return std::max({global_violation, upper_violation, lower_violation}); }
};

/// Pointwise bounds implied by the two pinned values alpha > beta: the field
/// lies between them, above the midvalue on alpha's side of the bisecting
/// hyperplane and below it on the other side.
inline BoundsReport check_pointwise_bounds(const ScalarField& field,
                                           const ConstraintSet& constraints) {
  detail::require(constraints.size() == 2, "pointwise bounds need exactly two pins");
  const Grid& g = field.grid();
  Constraint hi = constraints.entries()[0];
  Constraint lo = constraints.entries()[1];
  if (hi.value < lo.value) std::swap(hi, lo);
  const Point ph = g.point(hi.node);
  const Point pl = g.point(lo.node);
  const Point axis{ph[0] - pl[0], ph[1] - pl[1]};
  const Point center{0.5 * (ph[0] + pl[0]), 0.5 * (ph[1] + pl[1])};
  const double mid = 0.5 * (hi.value + lo.value);

  BoundsReport r;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const NodeIndex idx = g.node(q);
    if (detail::skip_node(g, idx)) continue;
    const double u = field.values()[q];
    r.global_violation = std::max({r.global_violation, u - hi.value, lo.value - u});
    const Point x = g.point(idx);
    const double side = (x[0] - center[0]) * axis[0] + (x[1] - center[1]) * axis[1];
    if (side > 0.0) {
      r.upper_violation = std::max({r.upper_violation, mid - u, u - hi.value});
    } else if (side < 0.0) {
      r.lower_violation = std::max({r.lower_violation, u - mid, lo.value - u});
    }
  }
  return r;
}

struct MidplaneReport {
  std::size_t nodes = 0;
  /// Nodes where the central difference of u across the midplane is <= 0.
  std::size_t violations = 0;
  /// Largest |du/dy| among violating nodes (0 if none).
  double worst_violation = 0.0;
  /// Smallest central difference seen.
  double min_derivative = 0.0;
};

/// Central differences of u in the pin direction (y in the plane, x on the
/// line) at the interior midplane nodes.
inline MidplaneReport check_midplane_gradient_sign(const ScalarField& field) {
  const Grid& g = field.grid();
  const int n = g.nodes_per_axis();
  const int mid = g.axis_index_of(0);
  const double inv2h = 0.5 / g.spacing();
  MidplaneReport r;
  r.min_derivative = std::numeric_limits<double>::infinity();
  auto visit = [&](double d) {
    ++r.nodes;
    r.min_derivative = std::min(r.min_derivative, d);
    if (!(d > 0.0)) {
      ++r.violations;
      r.worst_violation = std::max(r.worst_violation, std::abs(d));
    }
  };
  if (g.dim() == 1) {
    visit((field(mid + 1) - field(mid - 1)) * inv2h);
    return r;
  }
  for (int i = 1; i + 1 < n; ++i) visit((field(i, mid + 1) - field(i, mid - 1)) * inv2h);
  return r;
}

struct GradientFloorReport {
  /// Smallest central-difference |Du| over the examined nodes.
  double min_magnitude = 0.0;
  NodeIndex where;
  std::size_t nodes = 0;
  double threshold = 0.0;
  bool pass = false;
};

/// Smallest central-difference gradient magnitude over interior nodes that
/// are farther than 2h from every pin.
inline GradientFloorReport check_nonvanishing_gradient(const ScalarField& field,
                                                       const ConstraintSet& constraints,
                                                       double threshold = 0.0) {
  const Grid& g = field.grid();
  const int n = g.nodes_per_axis();
  const double h = g.spacing();
  const double inv2h = 0.5 / h;
  GradientFloorReport r;
  r.threshold = threshold;
  r.min_magnitude = std::numeric_limits<double>::infinity();
  auto near_pin = [&](NodeIndex idx) {
    for (const auto& c : constraints.entries()) {
      const double di = idx.i - c.node.i;
      const double dj = idx.j - c.node.j;
      if (di * di + dj * dj <= 4.0) return true;
    }
    return false;
  };
  const int jmax = g.dim() == 1 ? 1 : n - 1;
  for (int i = 1; i + 1 < n; ++i) {
    for (int j = g.dim() == 1 ? 0 : 1; j < jmax; ++j) {
      const NodeIndex idx{i, j};
      if (near_pin(idx)) continue;
      const double gx = (field(i + 1, j) - field(i - 1, j)) * inv2h;
      const double gy = g.dim() == 1 ? 0.0 : (field(i, j + 1) - field(i, j - 1)) * inv2h;
      const double m = std::hypot(gx, gy);
      ++r.nodes;
      if (m < r.min_magnitude) {
        r.min_magnitude = m;
        r.where = idx;
      }
    }
  }
  if (r.nodes == 0) r.min_magnitude = 0.0;
  r.pass = r.nodes > 0 && r.min_magnitude > threshold;
  return r;
}

struct EnergyGapReport {
  double total = 0.0;
  double outside = 0.0;
  /// outside / total; 0 for a constant field.
  double fraction = 0.0;
  bool degenerate = true;
};

/// Share of the discrete energy carried by cells located outside the open
/// unit ball centred at the origin (a forward cell sits at its anchor node, a
/// symmetric cell at its centre). A positive share is the
/// mechanism that makes Morrey's estimate on balls strict.
inline EnergyGapReport morrey_estimate_gap(const ScalarField& field, const EnergyParams& params) {
  const Grid& g = field.grid();
  validate(params, g);
  detail::require_finite(field);
  const int n = g.nodes_per_axis();
  const detail::CellPower pw(params);
  EnergyGapReport r;
  auto add = [&](const Point& x, double term) {
    r.total += term;
    if (std::hypot(x[0], x[1]) >= 1.0) r.outside += term;
  };
  auto term = [&](double s) { return pw.term(s, pw.weight(s)); };
  if (g.dim() == 1) {
    for (int i = 0; i + 1 < n; ++i) {
      const double d = field(i + 1) - field(i);
      add(g.point({i, 0}), term(d * d));
    }
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        double cell = 0.0;
        const double dx0 = field(i + 1, j) - field(i, j);
        const double dy0 = field(i, j + 1) - field(i, j);
        if (params.stencil == Stencil::forward) {
          cell = term(dx0 * dx0 + dy0 * dy0);
        } else {
          const double dx[2] = {dx0, field(i + 1, j + 1) - field(i, j + 1)};
          const double dy[2] = {dy0, field(i + 1, j + 1) - field(i + 1, j)};
          for (double a : dx) {
            for (double b : dy) cell += 0.25 * term(a * a + b * b);
          }
        }
        Point at = g.point({i, j});
        if (params.stencil == Stencil::symmetric) {
          at[0] += 0.5 * g.spacing();
          at[1] += 0.5 * g.spacing();
        }
        add(at, cell);
      }
    }
  }
  if (r.total > 0.0) {
    r.fraction = r.outside / r.total;
    r.degenerate = false;
  }
  return r;
}

}  // namespace morrey
