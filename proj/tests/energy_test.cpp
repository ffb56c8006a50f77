#include <gtest/gtest.h>

#include "support.hpp"

using namespace morrey;

namespace {

ScalarField reflect_x(const ScalarField& f) {
  const Grid& g = f.grid();
  const int n = g.nodes_per_axis();
  ScalarField out(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(n - 1 - i, j);
  }
  return out;
}

ScalarField reflect_y(const ScalarField& f) {
  const Grid& g = f.grid();
  const int n = g.nodes_per_axis();
  ScalarField out(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(i, n - 1 - j);
  }
  return out;
}

void expect_gradient_matches_fd(const ScalarField& f, const EnergyParams& params, bool skip_corner) {
  const GradientField grad = energy_gradient(f, params);
  double gmax = 0.0;
  for (double v : grad.values()) gmax = std::max(gmax, std::abs(v));
  const Grid& g = f.grid();
  for (std::size_t q = 0; q < g.size(); ++q) {
    if (skip_corner && g.is_corner(g.node(q))) continue;
    const double fd = fixtures::fd_component(f, params, q, 1e-6);
    const double denom = std::max(std::abs(grad.values()[q]), 1e-3 * gmax);
    EXPECT_LE(std::abs(fd - grad.values()[q]) / denom, 1e-5) << "node " << q;
  }
}

}  // namespace

TEST(Energy, ConstantFieldIsZero) {
  for (Stencil s : {Stencil::forward, Stencil::symmetric}) {
    ScalarField f(make_grid(2, 2, 3));
    f += 0.7;
    EXPECT_EQ(discrete_energy(f, {4.0, 0.0, s}), 0.0);
    EXPECT_EQ(physical_dirichlet_norm(f, {4.0, 0.0, s}), 0.0);
  }
}

TEST(Energy, SingleForwardTerm) {
  const Grid g = make_grid(2, 2, 1);
  ScalarField f(g);
  f(g.nodes_per_axis() - 1, 0) = 1.0;
  for (double p : {2.5, 3.0, 4.0, 7.0}) EXPECT_DOUBLE_EQ(discrete_energy(f, {p}), 1.0);
}

TEST(Energy, HomogeneousOfDegreeP) {
  const Grid g = make_grid(2, 2, 4);
  const ScalarField f = fixtures::random_field(g, 11);
  for (Stencil s : {Stencil::forward, Stencil::symmetric}) {
    for (double p : {2.5, 4.0, 6.0}) {
      const EnergyParams params{p, 0.0, s};
      EXPECT_NEAR(discrete_energy(2.0 * f, params), std::pow(2.0, p) * discrete_energy(f, params),
                  1e-12 * std::pow(2.0, p) * discrete_energy(f, params));
    }
  }
}

TEST(Energy, TranslationInvariant) {
  const Grid g = make_grid(2, 2, 3);
  ScalarField f = fixtures::random_field(g, 3);
  const double e = discrete_energy(f, {4.0});
  f += 5.0;
  EXPECT_NEAR(discrete_energy(f, {4.0}), e, 1e-11 * e);
}

TEST(Energy, LineClampNorm) {
  for (int k : {1, 4, 9}) {
    const Grid g = make_grid(1, 2, k);
    const ScalarField f = sample_extremal_1d(g);
    for (double p : {1.5, 2.0, 4.0}) {
      EXPECT_NEAR(physical_dirichlet_norm(f, {p}), std::pow(2.0, 1.0 / p), 1e-13) << k << ' ' << p;
    }
  }
}

TEST(Energy, RefinementChangesNormByOrderH) {
  auto smooth = [](const Point& x) { return std::exp(-(x[0] * x[0] + 2.0 * x[1] * x[1])); };
  double prev_gap = 0.0;
  double prev = 0.0;
  for (int k : {8, 16, 32}) {
    const ScalarField f = ScalarField::sample(make_grid(2, 3, k), smooth);
    const double norm = physical_dirichlet_norm(f, {4.0});
    if (k > 8) {
      const double gap = std::abs(norm - prev);
      EXPECT_LT(gap, 0.2 / k);
      if (k > 16) {
        EXPECT_LT(gap, 0.75 * prev_gap);
      }
      prev_gap = gap;
    }
    prev = norm;
  }
}

TEST(Energy, RejectsInvalidParameters) {
  const ScalarField f(make_grid(2, 2, 2));
  EXPECT_THROW(discrete_energy(f, {2.0}), ValidationError);
  EXPECT_THROW(discrete_energy(f, {4.0, -1.0}), ValidationError);
  ScalarField bad(make_grid(1, 2, 2));
  bad(0) = std::nan("");
  EXPECT_THROW(discrete_energy(bad, {4.0}), ValidationError);
}

TEST(Gradient, ConstantFieldIsZero) {
  ScalarField f(make_grid(2, 2, 3));
  f += -0.3;
  for (Stencil s : {Stencil::forward, Stencil::symmetric}) {
    for (double v : energy_gradient(f, {4.0, 0.0, s}).values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Gradient, MatchesFiniteDifferencesForward) {
  std::uint64_t seed = 100;
  for (double p : {2.5, 3.0, 4.0, 6.0}) {
    for (int k : {1, 2}) {
      const ScalarField f = fixtures::random_field(make_grid(2, 2, k), ++seed);
      expect_gradient_matches_fd(f, {p}, true);
    }
    expect_gradient_matches_fd(fixtures::random_field(make_grid(1, 3, 3), ++seed), {p}, false);
  }
}

TEST(Gradient, MatchesFiniteDifferencesSymmetric) {
  std::uint64_t seed = 200;
  for (double p : {2.5, 3.0, 4.0, 6.0}) {
    ScalarField f = fixtures::random_field(make_grid(2, 2, 2), ++seed);
    f(f.grid().corner()) = 0.4;
    expect_gradient_matches_fd(f, {p, 0.0, Stencil::symmetric}, false);
  }
}

TEST(Gradient, MatchesFiniteDifferencesSmoothed) {
  const ScalarField f = fixtures::random_field(make_grid(1, 2, 5), 9);
  expect_gradient_matches_fd(f, {1.5, 1e-3}, false);
  EXPECT_THROW(energy_gradient(f, {1.5}), ValidationError);
}

TEST(Gradient, LocalToBumpStencil) {
  const Grid g = make_grid(2, 3, 2);
  ScalarField f(g);
  f(5, 7) = 1.0;
  for (Stencil s : {Stencil::forward, Stencil::symmetric}) {
    const GradientField grad = energy_gradient(f, {4.0, 0.0, s});
    for (std::size_t q = 0; q < g.size(); ++q) {
      const NodeIndex idx = g.node(q);
      if (std::abs(idx.i - 5) > 1 || std::abs(idx.j - 7) > 1) {
        EXPECT_EQ(grad.values()[q], 0.0);
      }
    }
    EXPECT_GT(grad(5, 7), 0.0);
  }
}

TEST(Gradient, ForwardIgnoresCornerSymmetricUsesIt) {
  const Grid g = make_grid(2, 2, 2);
  ScalarField f = fixtures::random_field(g, 4);
  const double forward = discrete_energy(f, {4.0});
  f(g.corner()) = 3.0;
  EXPECT_EQ(discrete_energy(f, {4.0}), forward);
  EXPECT_EQ(energy_gradient(f, {4.0})(g.corner()), 0.0);
  EXPECT_NE(energy_gradient(f, {4.0, 0.0, Stencil::symmetric})(g.corner()), 0.0);
  EXPECT_TRUE(corner_is_free({4.0, 0.0, Stencil::symmetric}, g));
  EXPECT_FALSE(corner_is_free({4.0}, g));
}

TEST(Stencil, SymmetricIsReflectionInvariant) {
  const Grid g = make_grid(2, 2, 3);
  ScalarField f = fixtures::random_field(g, 21);
  f(g.corner()) = -0.2;
  const EnergyParams params{4.0, 0.0, Stencil::symmetric};
  const double e = discrete_energy(f, params);
  EXPECT_NEAR(discrete_energy(reflect_x(f), params), e, 1e-12 * e);
  EXPECT_NEAR(discrete_energy(reflect_y(f), params), e, 1e-12 * e);
}

TEST(Stencil, ForwardIsNotReflectionInvariant) {
  const Grid g = make_grid(2, 2, 3);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] * x[1]; });
  const double e = discrete_energy(f, {4.0});
  ScalarField r = reflect_x(f);
  r(g.corner()) = 0.0;
  EXPECT_GT(std::abs(discrete_energy(r, {4.0}) - e), 1e-6 * e);
}

TEST(Stencil, BothAgreeOnAffineFields) {
  const Grid g = make_grid(2, 2, 3);
  ScalarField f = ScalarField::sample(g, [](const Point& x) { return 0.3 * x[0] - 0.7 * x[1]; });
  f(g.corner()) = 0.3 * 2.0 - 0.7 * 2.0;
  const double a = discrete_energy(f, {3.0});
  EXPECT_NEAR(discrete_energy(f, {3.0, 0.0, Stencil::symmetric}), a, 1e-12 * a);
}

TEST(Residual, ZeroAtLineClamp) {
  const Grid g = make_grid(1, 2, 10);
  const ScalarField f = sample_extremal_1d(g);
  EXPECT_LE(p_laplacian_residual(f, {4.0}, canonical_constraints(g)), 1e-12);
}

TEST(Residual, ConstantUnconstrainedIsZero) {
  ScalarField f(make_grid(2, 2, 2));
  f += 2.0;
  EXPECT_EQ(p_laplacian_residual(f, {4.0}, ConstraintSet{}), 0.0);
}

TEST(Residual, RandomFieldIsPositive) {
  const Grid g = make_grid(2, 2, 2);
  const ScalarField f = fixtures::random_field(g, 5);
  EXPECT_GT(p_laplacian_residual(f, {4.0}, canonical_constraints(g)), 0.0);
}

TEST(Energy, Deterministic) {
  const ScalarField f = fixtures::random_field(make_grid(2, 3, 4), 8);
  for (Stencil s : {Stencil::forward, Stencil::symmetric}) {
    const EnergyParams params{4.0, 0.0, s};
    EXPECT_EQ(discrete_energy(f, params), discrete_energy(f, params));
    EXPECT_EQ(energy_gradient(f, params), energy_gradient(f, params));
  }
}
