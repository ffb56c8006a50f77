#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"
#include "morrey/holder.hpp"

namespace morrey {

/// Point evaluator for a canonical extremal held as a grid field. Returns
/// nullopt outside the grid domain. Set `use_corner` for fields whose corner
/// node carries a value (symmetric stencil).
class FieldEvaluator {
 public:
  explicit FieldEvaluator(ScalarField field, bool use_corner = false)
      : field_(std::move(field)), use_corner_(use_corner) {}
  std::optional<double> operator()(const Point& x) const {
    if (!field_.grid().inside(x)) return std::nullopt;
    return interpolate(field_, x, use_corner_);
  }
  const ScalarField& field() const { return field_; }

 private:
  ScalarField field_;
  bool use_corner_;
};

/// The extremal for pins (x0, alpha), (y0, beta) built from a canonical one w
/// (w = 1 at (0, 1), w = -1 at (0, -1); on the line w(1) = 1, w(-1) = -1):
///
///     u(x) = (alpha - beta) / 2 * w(S x) + (alpha + beta) / 2,
///
/// where S is the similarity taking x0 to (0, 1) and y0 to (0, -1) (a
/// rotation, a scaling by 2 / |x0 - y0| and a translation).
template <class Canonical>
class TransformedExtremal {
 public:
  TransformedExtremal(Canonical canonical, int dim, Point x0, Point y0, double alpha, double beta)
      : w_(std::move(canonical)), dim_(dim), x0_(x0), alpha_(alpha), beta_(beta) {
    detail::require(dim == 1 || dim == 2, "dimension must be 1 or 2");
    detail::require(alpha != beta, "pinned values must differ");
    const double ex = y0[0] - x0[0];
    const double ey = dim == 1 ? 0.0 : y0[1] - x0[1];
    const double d = std::hypot(ex, ey);
    detail::require(d > 0.0, "pinned points must differ");
    scale_ = 2.0 / d;
    // Unit vector e = (y0 - x0) / |y0 - x0| must land on the canonical
    // direction from (0, 1) to (0, -1), which is -e2 (or -1 on the line).
    c_ = ex / d;
    s_ = ey / d;
  }

  /// S x.
  Point to_canonical(const Point& x) const {
    const double dx = x[0] - x0_[0];
    if (dim_ == 1) return {1.0 - scale_ * dx * c_, 0.0};
    const double dy = x[1] - x0_[1];
    // Rotation R with R e = -e2: R = [[-s, c], [-c, -s]] applied to (dx, dy).
    const double rx = -s_ * dx + c_ * dy;
    const double ry = -c_ * dx - s_ * dy;
    return {scale_ * rx, 1.0 + scale_ * ry};
  }

  std::optional<double> operator()(const Point& x) const {
    const std::optional<double> w = w_(to_canonical(x));
    if (!w) return std::nullopt;
    return 0.5 * (alpha_ - beta_) * *w + 0.5 * (alpha_ + beta_);
  }

  /// Throws DomainError instead of returning nullopt.
  double at(const Point& x) const {
    const auto v = (*this)(x);
    if (!v) throw DomainError("point maps outside the canonical extremal's domain");
    return *v;
  }

 private:
  Canonical w_;
  int dim_;
  Point x0_;
  double alpha_;
  double beta_;
  double scale_ = 1.0;
  double c_ = 0.0;
  double s_ = -1.0;
};

inline TransformedExtremal<FieldEvaluator> transform_extremal(const ScalarField& canonical,
                                                              const Point& x0, const Point& y0,
                                                              double alpha, double beta,
                                                              bool use_corner = false) {
  return {FieldEvaluator(canonical, use_corner), canonical.grid().dim(), x0, y0, alpha, beta};
}

struct StabilityReport {
  /// Hölder argmax of the test field, where the matched extremal is pinned.
  NodeIndex x0;
  NodeIndex y0;
  double seminorm = 0.0;
  /// Exponent q of the inequality: p for p > 2, p / (p - 1) for p <= 2.
  double exponent = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs; nonnegative when the inequality holds.
  double slack = 0.0;
  /// slack / rhs.
  double relative_slack = 0.0;
};

/// Evaluates both sides of the stability inequality for `test` against the
/// extremal that matches it at its Hölder argmax:
///
///     p > 2:      (C/2)^p ||Du - Dv||^p + [v]^p <= C^p ||Dv||^p
///     1 < p <= 2: (1/2)^q ||u' - v'||^q + [v]^q <= ||v'||^q,  q = p / (p - 1)
///
/// `canonical` evaluates the canonical extremal (returning nullopt outside
/// its domain) and `c_star` is the constant it realises. Every grid node must
/// map inside the canonical domain.
template <class Canonical>
StabilityReport check_stability(const ScalarField& test, const EnergyParams& params,
                                const Canonical& canonical, double c_star,
                                const HolderOptions& holder = {}) {
  const Grid& g = test.grid();
  validate(params, g);
  detail::require(c_star > 0.0, "sharp constant estimate must be positive");
  const double p = params.p;
  detail::require(p > 2.0 || g.dim() == 1, "the p <= 2 form of the inequality is one-dimensional");

  HolderOptions opt = holder;
  const HolderReport hr = holder_seminorm(test, params, ConstraintSet{}, opt);
  if (hr.degenerate) throw ValidationError("test field is constant; its Hölder argmax is undefined");

  StabilityReport r;
  r.x0 = hr.first;
  r.y0 = hr.second;
  r.seminorm = hr.seminorm;
  const double alpha = test(r.x0);
  const double beta = test(r.y0);
  const TransformedExtremal<const Canonical&> u(canonical, g.dim(), g.point(r.x0), g.point(r.y0),
                                                alpha, beta);

  ScalarField extremal(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const NodeIndex idx = g.node(q);
    if (g.is_corner(idx) && params.stencil == Stencil::forward) continue;
    const auto v = u(g.point(idx));
    if (!v) {
      throw DomainError("matched extremal does not cover the grid: node (" +
                        std::to_string(idx.i) + ", " + std::to_string(idx.j) +
                        ") maps outside the canonical domain");
    }
    extremal.values()[q] = *v;
  }

  const double norm_v = physical_dirichlet_norm(test, params);
  const double norm_diff = physical_dirichlet_norm(extremal - test, params);
  if (p > 2.0) {
    r.exponent = p;
    r.lhs = std::pow(0.5 * c_star, p) * std::pow(norm_diff, p) + std::pow(r.seminorm, p);
    r.rhs = std::pow(c_star * norm_v, p);
  } else {
    const double q = p / (p - 1.0);
    r.exponent = q;
    r.lhs = std::pow(0.5 * norm_diff, q) + std::pow(r.seminorm, q);
    r.rhs = std::pow(norm_v, q);
  }
  r.slack = r.rhs - r.lhs;
  r.relative_slack = r.rhs > 0.0 ? r.slack / r.rhs : 0.0;
  return r;
}

}  // namespace morrey
