#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

struct LevelDeficit {
  double level = 0.0;
  /// max(0, t - u(q)) over nodes q of the upper half-plane inside the hull of
  /// {u >= t}.
  double upper = 0.0;
  /// max(0, u(q) + t) over nodes q of the lower half-plane inside the hull of
  /// {u <= -t}.
  double lower = 0.0;
  std::size_t upper_nodes = 0;
  std::size_t lower_nodes = 0;
};

struct QuasiconcavityReport {
  std::vector<LevelDeficit> levels;
  double worst() const {
    double w = 0.0;
    for (const auto& l : levels) w = std::max({w, l.upper, l.lower});
    return w;
  }
};

inline constexpr double kMinQuasiconcavityLevel = 0.1;
inline constexpr double kMaxQuasiconcavityLevel = 0.9;

namespace detail {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline std::int64_t cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<LatticePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Closed-hull membership in exact integer arithmetic.
inline bool hull_contains(const std::vector<LatticePoint>& hull, const LatticePoint& q) {
  if (hull.empty()) return false;
  if (hull.size() == 1) return hull[0] == q;
  if (hull.size() == 2) {
    const auto& a = hull[0];
    const auto& b = hull[1];
    return cross(a, b, q) == 0 && std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (cross(hull[i], hull[(i + 1) % hull.size()], q) < 0) return false;
  }
  return true;
}

// Worst deficit of `value(q) >= t` over nodes of one half-plane inside the
// hull of the nodes that satisfy it. `sign` = +1 tests superlevel sets of u,
// -1 tests sublevel sets {u <= -t}.
inline double half_plane_deficit(const ScalarField& f, double t, int sign, bool upper,
                                 std::size_t& members) {
  const Grid& g = f.grid();
  const int n = g.nodes_per_axis();
  const int mid = g.axis_index_of(0);
  const int j_lo = upper ? mid + 1 : 0;
  const int j_hi = upper ? n : mid;
  std::vector<LatticePoint> set;
  for (int i = 0; i < n; ++i) {
    for (int j = j_lo; j < j_hi; ++j) {
      if (g.is_corner({i, j})) continue;
      if (sign * f(i, j) >= t) set.push_back({i, j});
    }
  }
  members = set.size();
  if (set.empty()) {
    throw DomainError("empty level set at level " + std::to_string(t) +
                      (upper ? " (upper half-plane)" : " (lower half-plane)"));
  }
  const auto hull = convex_hull(set);
  std::int64_t xmin = hull[0].x, xmax = hull[0].x, ymin = hull[0].y, ymax = hull[0].y;
  for (const auto& p : hull) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double worst = 0.0;
  for (auto i = xmin; i <= xmax; ++i) {
    for (auto j = ymin; j <= ymax; ++j) {
      const NodeIndex idx{static_cast<int>(i), static_cast<int>(j)};
      if (g.is_corner(idx) || !hull_contains(hull, {i, j})) continue;
      worst = std::max(worst, t - sign * f(idx));
    }
  }
  return worst;
}

}  // namespace detail

/// Convex-hull test of the level sets of a canonical planar field: for each
/// level t the hull of {u >= t} in y > 0 must not contain nodes below t, and
/// the hull of {u <= -t} in y < 0 must not contain nodes above -t. Levels are
/// restricted to [0.1, 0.9], away from the midplane and the pins.
inline QuasiconcavityReport check_quasiconcavity(const ScalarField& field,
                                                 const std::vector<double>& levels) {
  const Grid& g = field.grid();
  if (g.dim() != 2) throw ValidationError("quasiconcavity check needs a planar field");
  detail::require(!levels.empty(), "at least one level is required");
  QuasiconcavityReport r;
  for (double t : levels) {
    detail::require(t >= kMinQuasiconcavityLevel && t <= kMaxQuasiconcavityLevel,
                    "quasiconcavity levels must lie in [0.1, 0.9]");
    LevelDeficit d;
    d.level = t;
    d.upper = detail::half_plane_deficit(field, t, +1, true, d.upper_nodes);
    d.lower = detail::half_plane_deficit(field, t, -1, false, d.lower_nodes);
    r.levels.push_back(d);
  }
  return r;
}

}  // namespace morrey
