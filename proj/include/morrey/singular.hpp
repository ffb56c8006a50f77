#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

struct SingularFitOptions {
  /// Circle radii; empty selects default_radii(grid, center, reach).
  std::vector<double> radii;
  /// Upper limit for default radii, normally half the distance to the other
  /// singular point.
  double reach = 1.0;
  /// Interpolated samples per circle.
  int angles = 64;
};

namespace detail {

// Keys cubic convolution kernel (a = -1/2).
inline double keys_kernel(double t) {
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

// Cubic convolution interpolation on the 4^n stencil around x. Falls back to
// interpolate() where the stencil leaves the grid or touches the corner.
inline double cubic_interpolate(const ScalarField& field, const Point& x) {
  const Grid& g = field.grid();
  const double h = g.spacing();
  const int last = g.nodes_per_axis() - 1;
  const double si = (x[0] + g.ell()) / h;
  const int i0 = static_cast<int>(std::floor(si));
  if (i0 - 1 < 0 || i0 + 2 > last) return interpolate(field, x);
  if (g.dim() == 1) {
    double v = 0.0;
    for (int a = -1; a <= 2; ++a) v += keys_kernel(si - (i0 + a)) * field(i0 + a);
    return v;
  }
  const double sj = (x[1] + g.ell()) / h;
  const int j0 = static_cast<int>(std::floor(sj));
  if (j0 - 1 < 0 || j0 + 2 > last || (i0 + 2 == last && j0 + 2 == last)) {
    return interpolate(field, x);
  }
  double v = 0.0;
  for (int a = -1; a <= 2; ++a) {
    const double wa = keys_kernel(si - (i0 + a));
    for (int b = -1; b <= 2; ++b) v += wa * keys_kernel(sj - (j0 + b)) * field(i0 + a, j0 + b);
  }
  return v;
}

}  // namespace detail

struct SingularFit {
  Point center{};
  /// Radii used, strictly decreasing.
  std::vector<double> radii;
  /// Slope of log|u(center) - u(x)| against log|x - center|.
  double exponent = 0.0;
  /// exp(intercept): the coefficient in |u(center) - u(x)| ~ gamma r^exponent.
  double gamma = 0.0;
  /// Root-mean-square residual of the regression in log space.
  double residual = 0.0;
  /// Number of (radius, angle) samples in the regression.
  std::size_t samples = 0;
};

/// (p - n) / (p - 1).
inline double singular_exponent(double p, int n) {
  return (p - static_cast<double>(n)) / (p - 1.0);
}

/// Surface area of the unit sphere in R^n for n = 1, 2 (n * omega_n).
inline double unit_sphere_area(int n) {
  detail::require(n == 1 || n == 2, "dimension must be 1 or 2");
  return n == 1 ? 2.0 : 2.0 * std::numbers::pi;
}

/// Weight of the point mass in -Delta_p u implied by the growth
/// u(x0) - u(x) ~ gamma |x - x0|^{(p-n)/(p-1)}:  n omega_n ((p-n)/(p-1) gamma)^{p-1}.
inline double dirac_weight_from_gamma(double gamma, double p, int n) {
  return unit_sphere_area(n) * std::pow(singular_exponent(p, n) * gamma, p - 1.0);
}

/// Weight of the point mass at each pin of an extremal with pins x0, y0 and
/// values alpha, beta, for sharp constant c_star:
/// |alpha - beta|^{p-1} / (c_star^p |x0 - y0|^{p-n}).
inline double dirac_weight_from_constant(double c_star, double alpha, double beta,
                                         double distance, double p, int n) {
  return std::pow(std::abs(alpha - beta), p - 1.0) /
         (std::pow(c_star, p) * std::pow(distance, p - static_cast<double>(n)));
}

/// Seven radii in geometric progression from `top` down to 3h, where `top`
/// is the smaller of `reach` and half the distance from `center` to the
/// domain boundary. Pass half the distance to the other singular point as
/// `reach`. At 3h the cubic sampling stencil stays clear of the centre node.
inline std::vector<double> default_radii(const Grid& grid, const Point& center, double reach) {
  const double h = grid.spacing();
  const double l = static_cast<double>(grid.ell());
  double room = l - std::abs(center[0]);
  if (grid.dim() == 2) room = std::min(room, l - std::abs(center[1]));
  const double top = std::min(reach, 0.5 * room);
  const double bottom = 3.0 * h;
  if (!(top > bottom)) {
    throw ValidationError("grid too coarse for a singular fit: 3h must be below " +
                          std::to_string(top));
  }
  constexpr int kCount = 7;
  std::vector<double> r(kCount);
  for (int a = 0; a < kCount; ++a) {
    r[a] = top * std::pow(bottom / top, static_cast<double>(a) / (kCount - 1));
  }
  r.front() = top;
  r.back() = bottom;
  return r;
}

/// Least-squares fit of log|u(center) - u(x)| against log|x - center| over
/// circles around a pinned node, sampled by cubic convolution. The field must
/// have a strict local extremum at `center` over the sampled annulus.
inline SingularFit fit_singular_exponent(const ScalarField& field, const Point& center,
                                         const EnergyParams& params,
                                         const SingularFitOptions& options = {}) {
  const Grid& g = field.grid();
  validate(params, g);
  detail::require(g.inside(center), "fit center outside the grid");
  detail::require(options.angles >= 1, "need at least one sample per circle");

  SingularFit fit;
  fit.center = center;
  fit.radii = options.radii.empty() ? default_radii(g, center, options.reach) : options.radii;
  std::sort(fit.radii.begin(), fit.radii.end(), std::greater<>());
  fit.radii.erase(std::unique(fit.radii.begin(), fit.radii.end()), fit.radii.end());
  detail::require(fit.radii.size() >= 4, "a singular fit needs at least 4 distinct radii");
  detail::require(fit.radii.back() > 0.0, "radii must be positive");

  const double u0 = interpolate(field, center);
  const int angles = g.dim() == 1 ? 2 : options.angles;
  std::vector<double> xs;
  std::vector<double> ys;
  int sign = 0;
  for (double r : fit.radii) {
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * std::numbers::pi * a / angles;
      const Point x = g.dim() == 1 ? Point{center[0] + (a == 0 ? r : -r), 0.0}
                                   : Point{center[0] + r * std::cos(th), center[1] + r * std::sin(th)};
      if (!g.inside(x)) throw DomainError("fit circle leaves the grid domain");
      const double d = u0 - detail::cubic_interpolate(field, x);
      const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) {
        throw DomainError("field is not strictly extremal at the fit center");
      }
      sign = s;
      xs.push_back(std::log(r));
      ys.push_back(std::log(std::abs(d)));
    }
  }

  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    mx += xs[q];
    my += ys[q];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    sxx += (xs[q] - mx) * (xs[q] - mx);
    sxy += (xs[q] - mx) * (ys[q] - my);
  }
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.gamma = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    const double e = ys[q] - (intercept + fit.exponent * xs[q]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  fit.samples = xs.size();
  return fit;
}

/// Fit around pin `which` of `constraints`, with default radii reaching half
/// way to the nearest other pin.
inline SingularFit fit_singular_exponent(const ScalarField& field, const ConstraintSet& constraints,
                                         std::size_t which, const EnergyParams& params,
                                         SingularFitOptions options = {}) {
  detail::require(which < constraints.size(), "pin index out of range");
  const Grid& g = field.grid();
  const Point c = g.point(constraints.entries()[which].node);
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < constraints.size(); ++q) {
    if (q == which) continue;
    const Point o = g.point(constraints.entries()[q].node);
    nearest = std::min(nearest, std::hypot(o[0] - c[0], o[1] - c[1]));
  }
  options.reach = 0.5 * nearest;
  return fit_singular_exponent(field, c, params, options);
}

}  // namespace morrey
