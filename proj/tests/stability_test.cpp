#include <gtest/gtest.h>

#include <optional>

#include "support.hpp"

using namespace morrey;

namespace {

std::optional<double> exact_line(const Point& x) { return exact_extremal_1d(x[0]); }

/// A generic planar field pinned canonically, with no reflection symmetry.
ScalarField asymmetric_canonical(const Grid& g) {
  ScalarField f = ScalarField::sample(g, [](const Point& x) {
    return std::tanh(x[1]) + 0.1 * x[0] + 0.05 * x[0] * x[1];
  });
  canonical_constraints(g).apply(f);
  return f;
}

ScalarField converged_extremal(const Grid& g) {
  const ConstraintSet c = canonical_constraints(g);
  DescentConfig cfg;
  cfg.tau = 1e-4;
  cfg.adaptive = true;
  cfg.max_iters = 200000;
  cfg.grad_tol_rel = 1e-9;
  const EnergyParams params{4.0, 0.0, Stencil::symmetric};
  return run_descent(default_initial_guess(g, c), params, cfg, c).field;
}

}  // namespace

TEST(Transform, IdentityReproducesCanonical) {
  const Grid g = make_grid(2, 2, 3);
  const ScalarField w = asymmetric_canonical(g);
  const auto u = transform_extremal(w, {0.0, 1.0}, {0.0, -1.0}, 1.0, -1.0);
  for (std::size_t q = 0; q < g.size(); ++q) {
    const NodeIndex idx = g.node(q);
    if (g.is_corner(idx)) continue;
    EXPECT_NEAR(u.at(g.point(idx)), w(idx), 1e-14);
  }
}

TEST(Transform, SwappedValuesNegate) {
  const Grid g = make_grid(2, 2, 3);
  const ScalarField w = asymmetric_canonical(g);
  const auto u = transform_extremal(w, {0.0, 1.0}, {0.0, -1.0}, -1.0, 1.0);
  const auto v = transform_extremal(w, {0.0, -1.0}, {0.0, 1.0}, -1.0, 1.0);
  for (double x : {-1.0, 0.0, 2.0 / 3.0}) {
    for (double y : {-2.0, -1.0 / 3.0, 1.0}) {
      EXPECT_NEAR(u.at({x, y}), -interpolate(w, {x, y}), 1e-14);
      EXPECT_NEAR(v.at({x, y}), -interpolate(w, {-x, -y}), 1e-14);
    }
  }
}

TEST(Transform, RotatedPinsHitPrescribedValues) {
  const Grid g = make_grid(2, 2, 3);
  const auto u = transform_extremal(asymmetric_canonical(g), {1.0, 0.0}, {-1.0, 0.0}, 3.0, 1.0);
  EXPECT_NEAR(u.at({1.0, 0.0}), 3.0, 1e-10);
  EXPECT_NEAR(u.at({-1.0, 0.0}), 1.0, 1e-10);
  EXPECT_FALSE(u({3.0, 3.0}).has_value());
  EXPECT_THROW(u.at({3.0, 3.0}), DomainError);
}

TEST(Transform, LineMap) {
  const Grid g = make_grid(1, 2, 4);
  const auto u = transform_extremal(sample_extremal_1d(g), {3.0, 0.0}, {1.0, 0.0}, 5.0, 1.0);
  EXPECT_NEAR(u.at({3.0, 0.0}), 5.0, 1e-14);
  EXPECT_NEAR(u.at({1.0, 0.0}), 1.0, 1e-14);
  EXPECT_NEAR(u.at({2.0, 0.0}), 3.0, 1e-14);
  EXPECT_NEAR(u.at({3.5, 0.0}), 5.0, 1e-14);
}

TEST(Transform, RejectsDegenerateInput) {
  const ScalarField w = sample_extremal_1d(make_grid(1, 2, 2));
  EXPECT_THROW(transform_extremal(w, {1.0, 0.0}, {1.0, 0.0}, 1.0, 0.0), ValidationError);
  EXPECT_THROW(transform_extremal(w, {1.0, 0.0}, {0.0, 0.0}, 1.0, 1.0), ValidationError);
}

TEST(Stability, LineExtremalHasZeroSlack) {
  const Grid g = make_grid(1, 2, 10);
  for (double p : {1.5, 4.0}) {
    const EnergyParams params{p};
    const StabilityReport r = check_stability(sample_extremal_1d(g), params, exact_line, 1.0);
    EXPECT_NEAR(r.slack, 0.0, 1e-12 * r.rhs);
    EXPECT_EQ(r.exponent, p > 2.0 ? p : p / (p - 1.0));
  }
}

TEST(Stability, LineClampPlusBump) {
  const Grid g = make_grid(1, 3, 20);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (double centre : {-2.0, -0.5, 0.3, 1.8}) {
      for (double amp : {-0.3, 0.1, 0.6}) {
        const ScalarField v = ScalarField::sample(g, [&](const Point& x) {
          const double s = (x[0] - centre) / 0.6;
          return exact_extremal_1d(x[0]) + (std::abs(s) < 1.0 ? amp * std::pow(1.0 - s * s, 3) : 0.0);
        });
        const StabilityReport r = check_stability(v, {p}, exact_line, 1.0);
        EXPECT_GE(r.slack, -1e-12 * r.rhs) << p << ' ' << centre << ' ' << amp;
      }
    }
  }
}

TEST(Stability, PlanarExtremalAndPerturbation) {
  const Grid g = make_grid(2, 3, 2);
  const ScalarField w = converged_extremal(g);
  const EnergyParams params{4.0, 0.0, Stencil::symmetric};
  const ConstraintSet c = canonical_constraints(g);
  const HolderReport h = holder_seminorm(w, params, c, {SeminormMode::exact});
  ASSERT_EQ(h.second, c.entries()[0].node);
  ASSERT_EQ(h.first, c.entries()[1].node);
  const FieldEvaluator canonical(w, true);
  const StabilityReport self = check_stability(w, params, canonical, h.c_star_estimate);
  EXPECT_NEAR(self.slack, 0.0, 1e-9 * self.rhs);

  ScalarField v = w;
  v(4, 6) += 0.05;
  v(2, 9) -= 0.03;
  const StabilityReport r = check_stability(v, params, canonical, h.c_star_estimate);
  EXPECT_GT(r.slack, 0.0);
}

TEST(Stability, Preconditions) {
  const Grid g = make_grid(2, 2, 2);
  const ScalarField w = asymmetric_canonical(g);
  const FieldEvaluator canonical(w);
  EXPECT_THROW(check_stability(w, {4.0}, canonical, 0.0), ValidationError);
  EXPECT_THROW(check_stability(ScalarField(g), {4.0}, canonical, 1.0), ValidationError);
  ScalarField spike(g);
  spike(0, 0) = 1.0;
  EXPECT_THROW(check_stability(spike, {4.0}, canonical, 1.0), DomainError);
}
