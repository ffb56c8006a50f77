#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

/// The one-dimensional extremal with u(-1) = -1, u(1) = 1: clamp(x, -1, 1).
inline double exact_extremal_1d(double x) { return std::clamp(x, -1.0, 1.0); }

/// Sharp constant of Morrey's inequality on the line.
inline constexpr double exact_sharp_constant_1d() { return 1.0; }

/// exact_extremal_1d at the nodes of a one-dimensional grid. Piecewise linear
/// with kinks at nodes, so the discrete energy equals the continuum one.
inline ScalarField sample_extremal_1d(const Grid& grid) {
  detail::require(grid.dim() == 1, "sample_extremal_1d needs a one-dimensional grid");
  return ScalarField::sample(grid, [](const Point& x) { return exact_extremal_1d(x[0]); });
}

struct HolderBound {
  /// |u(x) - u(y)| / |x - y|^{1 - 1/p}.
  double ratio = 0.0;
  /// (integral from y to x of |u'|^p)^{1/p}, u' taken as the difference
  /// quotient on each sample interval.
  double bound = 0.0;
  bool holds() const { return ratio <= bound * (1.0 + 1e-12) + 1e-300; }
};

/// Hölder ratio of u over [y, x] against the bound from the fundamental
/// theorem of calculus and Hölder's inequality. `samples` are u at
/// `points`, which must be increasing, start at y and end at x.
inline HolderBound holder_ratio_integral_bound(std::span<const double> samples,
                                               std::span<const double> points, double p) {
  detail::require(samples.size() == points.size(), "samples and points differ in length");
  detail::require(samples.size() >= 2, "need at least two samples");
  detail::require(p > 1.0, "p must exceed 1");
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dx = points[i + 1] - points[i];
    detail::require(dx > 0.0, "sample points must be strictly increasing");
    const double slope = (samples[i + 1] - samples[i]) / dx;
    integral += std::pow(std::abs(slope), p) * dx;
  }
  const double span = points.back() - points.front();
  HolderBound r;
  r.ratio = std::abs(samples.back() - samples.front()) / std::pow(span, 1.0 - 1.0 / p);
  r.bound = std::pow(integral, 1.0 / p);
  return r;
}

}  // namespace morrey
