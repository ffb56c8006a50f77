#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "morrey/chain.hpp"

using namespace morrey;

namespace {

Vec polar(double r, double angle) { return {r * std::cos(angle), r * std::sin(angle)}; }

Vec random_point(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(lo, hi);
  Vec v(n);
  double s = 0.0;
  for (double& c : v) {
    c = gauss(rng);
    s += c * c;
  }
  const double r = radius(rng) / std::sqrt(s);
  for (double& c : v) c *= r;
  return v;
}

double length(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST(Theta, ClosedForms) {
  EXPECT_NEAR(theta(1.0), std::acos(7.0 / 8.0), 1e-12);
  EXPECT_GT(theta(1.0), std::numbers::pi / 7.0);
  EXPECT_NEAR(theta(3.0), std::acos(23.0 / 32.0), 1e-12);
  EXPECT_LT(theta(1e-8), 1e-7);
  double prev = 0.0;
  for (double a : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    EXPECT_GT(theta(a), prev);
    prev = theta(a);
  }
  EXPECT_LT(theta(1e9), std::numbers::pi / 3.0 + 1e-9);
  EXPECT_THROW(theta(0.0), ValidationError);
}

TEST(ChainOnCircle, StepsOfTheta) {
  const double a = 1.5;
  const Vec x = polar(1.0 + a, 0.0);
  const Vec y = polar(1.0 + a, 1.5 * theta(a));
  const Chain c = chain_on_circle(x, y, a);
  ASSERT_EQ(c.m(), 2);
  EXPECT_NEAR(detail::distance(x, c.points[0]), a, 1e-12);
  EXPECT_NEAR(detail::distance(c.points[0], c.points[1]), a, 1e-12);
  EXPECT_LE(detail::distance(c.points[1], y), a);
  EXPECT_TRUE(verify_chain(c).ok());
  EXPECT_THROW(chain_on_circle(x, polar(1.0 + a, 0.5 * theta(a)), a), ValidationError);
}

TEST(ChainOnCircle, Antipodal) {
  const Vec x = polar(2.0, 0.3);
  const Vec y = polar(2.0, 0.3 + std::numbers::pi);
  const Chain c = chain_on_circle(x, y, 1.0);
  EXPECT_LE(c.m(), 7);
  EXPECT_LE(detail::distance(c.points.back(), y), 1.0 + 1e-12);
  for (const auto& z : c.points) EXPECT_NEAR(length(z), 2.0, 1e-12);
  EXPECT_TRUE(verify_chain(c).ok());
}

TEST(ChainOnCircle, BothOrientations) {
  for (double angle : {2.0, -2.0, 4.0}) {
    const Chain c = chain_on_circle(polar(2.0, 0.0), polar(2.0, angle), 1.0);
    EXPECT_TRUE(verify_chain(c).ok()) << angle;
    EXPECT_LE(detail::distance(c.points.back(), polar(2.0, angle)), 1.0 + 1e-12);
  }
}

TEST(ChainOnCircle, RandomInstances) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> av(1.0, 20.0), ang(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 10000; ++t) {
    const double a = av(rng);
    const Vec x = polar(1.0 + a, ang(rng));
    const Vec y = polar(1.0 + a, ang(rng));
    if (detail::distance(x, y) <= a) continue;
    const Chain c = chain_on_circle(x, y, a);
    ASSERT_TRUE(verify_chain(c).ok()) << t;
    ASSERT_LE(detail::distance(c.points.back(), y), a * (1.0 + 1e-12));
  }
}

TEST(ChainOnCircle, Preconditions) {
  EXPECT_THROW(chain_on_circle(polar(2.0, 0.0), polar(2.0, 0.1), 1.0), ValidationError);
  EXPECT_THROW(chain_on_circle(polar(2.0, 0.0), polar(3.0, 2.0), 1.0), ValidationError);
  EXPECT_THROW(chain_on_circle(polar(1.5, 0.0), polar(1.5, 2.0), 0.5), ValidationError);
}

TEST(ChainEqualNorm, ReducesToCircle) {
  const Vec x = polar(2.0, 0.0);
  const Vec y = polar(2.0, 2.5);
  const Chain a = chain_equal_norm(x, y, 1.0, 1.0);
  const Chain b = chain_on_circle(x, y, 1.0);
  ASSERT_EQ(a.m(), b.m());
  for (int j = 0; j < a.m(); ++j) EXPECT_NEAR(detail::distance(a.points[j], b.points[j]), 0.0, 1e-12);
}

TEST(ChainEqualNorm, AntipodalNormFour) {
  const Chain c = chain_equal_norm({4.0, 0.0}, {-4.0, 0.0}, 1.0, 3.0);
  for (const auto& z : c.points) EXPECT_NEAR(length(z), 4.0, 1e-12);
  const auto seq = detail::hops(c);
  for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
    EXPECT_NEAR(detail::distance(*seq[i], *seq[i + 1]), 3.0, 1e-12);
  }
  EXPECT_TRUE(verify_chain(c).ok());
  EXPECT_THROW(chain_equal_norm({4.0, 0.0}, polar(4.0, 0.5), 1.0, 3.0), ValidationError);
}

TEST(ChainGeneral2d, EqualNormsGiveZeroFinalHop) {
  const Chain c = chain_general_2d(polar(4.0, 0.0), polar(4.0, 2.0), 1.0, 3.0);
  EXPECT_NEAR(detail::distance(c.points.back(), c.y), 0.0, 1e-12);
}

TEST(ChainGeneral2d, PerpendicularDoubledNorm) {
  const Chain c = chain_general_2d({4.0, 0.0}, {0.0, 8.0}, 2.0, 2.0);
  EXPECT_TRUE(verify_chain(c).ok());
  EXPECT_NEAR(detail::distance(c.points.back(), c.y), 4.0, 1e-12);
  const Ball& last = c.balls.back();
  EXPECT_GE(length(last.center) - last.radius, 2.0 - 1e-12);
}

TEST(ChainNd, PlanarCaseIsIdentity) {
  const Vec x = polar(3.0, 0.2);
  const Vec y = polar(5.0, 2.9);
  const Chain a = chain_nd(x, y, 1.0, 2.0);
  const Chain b = chain_general_2d(x, y, 1.0, 2.0);
  ASSERT_EQ(a.m(), b.m());
  for (int j = 0; j < a.m(); ++j) EXPECT_EQ(a.points[j], b.points[j]);
}

TEST(ChainNd, StaysInSpanningPlane) {
  const Chain c = chain_nd({4.0, 0.0, 0.0}, {0.0, 8.0, 0.0}, 2.0, 2.0);
  for (const auto& z : c.points) EXPECT_NEAR(z[2], 0.0, 1e-12);
  EXPECT_TRUE(verify_chain(c).ok());
}

TEST(ChainNd, AntiparallelInputs) {
  const Chain c = chain_nd({0.0, 0.0, -3.0}, {0.0, 0.0, 6.0}, 1.0, 2.0);
  EXPECT_TRUE(verify_chain(c).ok());
}

TEST(ChainNd, FiveDimensionalRandom) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    const Vec x = random_point(rng, 5, 2.0, 20.0);
    const Vec y = random_point(rng, 5, 2.0, 20.0);
    ASSERT_TRUE(verify_chain(finite_chain(x, y, 1.0)).ok()) << t;
  }
}

TEST(FiniteChain, RadialPairIsSingleStep) {
  const Chain c = finite_chain({2.0, 1.0}, {4.0, 2.0}, 1.0);
  ASSERT_EQ(c.m(), 1);
  EXPECT_EQ(c.points[0], (Vec{2.0, 1.0}));
  EXPECT_TRUE(verify_chain(c).ok());
}

TEST(FiniteChain, AntipodalAtTwiceRadius) {
  const double R = 0.7;
  const Chain c = finite_chain({2 * R, 0.0}, {-2 * R, 0.0}, R);
  EXPECT_LE(c.m(), 8);
  EXPECT_TRUE(verify_chain(c).ok());
}

TEST(FiniteChain, KeepsOrientationWhenSwapped) {
  const Vec x{9.0, 1.0};
  const Vec y{-2.5, 0.5};
  const Chain c = finite_chain(x, y, 1.0);
  EXPECT_EQ(c.x, x);
  EXPECT_EQ(c.y, y);
  EXPECT_TRUE(verify_chain(c).ok());
  EXPECT_LT(detail::distance(c.points.back(), y), detail::distance(c.points.front(), y));
}

TEST(FiniteChain, RandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rv(0.1, 10.0);
  std::uniform_int_distribution<int> dims(2, 4);
  for (int t = 0; t < 10000; ++t) {
    const double R = rv(rng);
    const auto n = static_cast<std::size_t>(dims(rng));
    const Vec x = random_point(rng, n, 2 * R, 20 * R);
    const Vec y = random_point(rng, n, 2 * R, 20 * R);
    ASSERT_TRUE(verify_chain(finite_chain(x, y, R)).ok()) << t;
  }
}

TEST(FiniteChain, IsometryAndScaling) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (int t = 0; t < 200; ++t) {
    const Vec x = random_point(rng, 2, 2.0, 20.0);
    const Vec y = random_point(rng, 2, 2.0, 20.0);
    const Chain base = finite_chain(x, y, 1.0);
    const double phi = ang(rng);
    const double lambda = 3.5;
    auto map = [&](const Vec& v) {
      return Vec{lambda * (std::cos(phi) * v[0] - std::sin(phi) * v[1]),
                 lambda * (std::sin(phi) * v[0] + std::cos(phi) * v[1])};
    };
    const Chain moved = finite_chain(map(x), map(y), lambda);
    ASSERT_EQ(moved.m(), base.m()) << t;
    for (int j = 0; j < base.m(); ++j) {
      EXPECT_NEAR(detail::distance(moved.points[j], map(base.points[j])), 0.0, 1e-9 * lambda * 20.0);
    }
  }
}

TEST(FiniteChain, Preconditions) {
  EXPECT_THROW(finite_chain({1.0, 0.0}, {5.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(finite_chain({3.0, 0.0}, {3.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(finite_chain({3.0}, {-3.0}, 1.0), ValidationError);
  EXPECT_THROW(finite_chain({3.0, 0.0}, {-3.0, 0.0, 0.0}, 1.0), ValidationError);
  EXPECT_THROW(finite_chain({3.0, 0.0}, {-3.0, 0.0}, 0.0), ValidationError);
}

TEST(VerifyChain, DetectsLongHop) {
  Chain c;
  c.x = {3.0, 0.0};
  c.y = {0.0, 3.0};
  c.R = 1.0;
  c.points = {{3.0 + 2.0 * detail::distance(c.x, c.y), 0.0}};
  detail::fill_balls(c);
  const auto v = verify_chain(c);
  EXPECT_TRUE(v.count_ok);
  EXPECT_FALSE(v.distances_ok);
}

TEST(VerifyChain, DetectsStraddlingBall) {
  Chain c;
  c.x = {3.0, 0.0};
  c.y = {-3.0, 0.0};
  c.R = 1.0;
  c.points = {{0.0, 1.5}};
  detail::fill_balls(c);
  EXPECT_FALSE(verify_chain(c).balls_ok);
  c.points.clear();
  detail::fill_balls(c);
  EXPECT_FALSE(verify_chain(c).count_ok);
}

TEST(VerifyChain, StaleBallsAreChecked) {
  Chain c = finite_chain({3.0, 0.0}, {-3.0, 0.5}, 1.0);
  ASSERT_TRUE(verify_chain(c).ok());
  c.balls.front().center = {0.0, 0.0};
  EXPECT_FALSE(verify_chain(c).balls_ok);
}

TEST(ChainText, Record) {
  const Chain c = finite_chain({2.0, 1.0}, {4.0, 2.0}, 1.0);
  const std::string s = to_string(c);
  EXPECT_EQ(s.rfind("chain n 2 m 1 R 1\nx 2 1\nz 2 1\ny 4 2\n", 0), 0u);
  EXPECT_NE(s.find("verify count 1 distances 1 balls 1\n"), std::string::npos);
}
