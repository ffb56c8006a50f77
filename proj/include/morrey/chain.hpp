#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/text.hpp"

namespace morrey {

/// Point of R^n for any n >= 1.
using Vec = std::vector<double>;

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Points z_1..z_m linking x to y, and the balls with diameter on each hop
/// (x -> z_1, z_i -> z_{i+1}, z_m -> y). R is the radius of the ball about
/// the origin that the hop balls must avoid.
struct Chain {
  Vec x;
  Vec y;
  std::vector<Vec> points;
  std::vector<Ball> balls;
  double R = 0.0;

  int m() const { return static_cast<int>(points.size()); }
};

struct ChainVerification {
  bool count_ok = false;
  bool distances_ok = false;
  bool balls_ok = false;
  /// max over hops of (hop length - |x - y|); <= slack when distances_ok.
  double worst_distance_excess = 0.0;
  /// min over balls of (|center| - radius - R); >= -slack when balls_ok.
  double worst_clearance = 0.0;
  bool ok() const { return count_ok && distances_ok && balls_ok; }
};

inline constexpr int kMaxChainLength = 8;
inline constexpr double kChainSlack = 1e-12;

namespace detail {

inline double norm(const Vec& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline Vec scaled(const Vec& v, double c) {
  Vec out(v);
  for (double& e : out) e *= c;
  return out;
}

inline Vec midpoint(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}

// The hop sequence x, z_1, ..., z_m, y.
inline std::vector<const Vec*> hops(const Chain& c) {
  std::vector<const Vec*> seq;
  seq.push_back(&c.x);
  for (const auto& z : c.points) seq.push_back(&z);
  seq.push_back(&c.y);
  return seq;
}

inline void fill_balls(Chain& c) {
  c.balls.clear();
  const auto seq = hops(c);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    c.balls.push_back({midpoint(*seq[i], *seq[i + 1]), 0.5 * distance(*seq[i], *seq[i + 1])});
  }
}

inline bool nearly(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

inline void require_dim(const Vec& x, const Vec& y, std::size_t n) {
  require(x.size() == n && y.size() == n, "points must have dimension " + std::to_string(n));
}

// |x| y / |y|: the radial projection of y onto the sphere through x.
inline Vec radial_projection(const Vec& x, const Vec& y) {
  return scaled(y, norm(x) / norm(y));
}

}  // namespace detail

/// Apex angle of the isosceles triangle with legs 1 + a and base a:
/// arccos(1 - (a / (1 + a))^2 / 2).
inline double theta(double a) {
  detail::require(std::isfinite(a) && a > 0.0, "theta(a) needs a > 0");
  const double q = a / (1.0 + a);
  return std::acos(1.0 - 0.5 * q * q);
}

/// Points on the circle of radius 1 + a at successive angles theta(a) from x
/// towards y, after rotating x to (1 + a) e_1 and reflecting across the e_1
/// axis when y lies below it. Every hop from x has length a and the last
/// point is within a of y. Requires a >= 1, |x| = |y| = 1 + a, |y - x| > a.
inline Chain chain_on_circle(const Vec& x, const Vec& y, double a) {
  detail::require_dim(x, y, 2);
  detail::require(std::isfinite(a) && a >= 1.0, "chain_on_circle needs a >= 1");
  const double rho = 1.0 + a;
  detail::require(detail::nearly(detail::norm(x), rho) && detail::nearly(detail::norm(y), rho),
                  "chain_on_circle needs |x| = |y| = 1 + a");
  if (!(detail::distance(x, y) > a)) {
    throw ValidationError("|y - x| <= a: a single hop already links x and y");
  }

  const double th = theta(a);
  const double phi = std::atan2(x[1], x[0]);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // y in the frame where x lies on the positive e_1 axis.
  const double yr0 = c * y[0] + s * y[1];
  const double yr1 = -s * y[0] + c * y[1];
  double angle = std::atan2(yr1, yr0);
  const bool reflect = angle < 0.0;
  if (reflect) angle = -angle;

  // Smallest m with angle <= m theta; 7 theta(a) > pi bounds it by 7.
  const int m = std::max(1, static_cast<int>(std::ceil(angle / th - 1e-12)));
  Chain out;
  out.x = x;
  out.y = y;
  out.R = 1.0;
  for (int j = 1; j <= m; ++j) {
    const double zr0 = rho * std::cos(j * th);
    const double zr1 = (reflect ? -1.0 : 1.0) * rho * std::sin(j * th);
    out.points.push_back({c * zr0 - s * zr1, s * zr0 + c * zr1});
  }
  detail::fill_balls(out);
  return out;
}

/// chain_on_circle scaled to the circle of radius t + s: hops of length s.
/// Requires s >= t > 0, |x| = |y| = t + s and |y - x| > s.
inline Chain chain_equal_norm(const Vec& x, const Vec& y, double t, double s) {
  detail::require_dim(x, y, 2);
  detail::require(t > 0.0 && s >= t, "chain_equal_norm needs s >= t > 0");
  detail::require(detail::nearly(detail::norm(x), t + s) && detail::nearly(detail::norm(y), t + s),
                  "chain_equal_norm needs |x| = |y| = t + s");
  if (!(detail::distance(x, y) > s)) throw ValidationError("|y - x| <= s: no chain needed");
  Chain unit = chain_on_circle(detail::scaled(x, 1.0 / t), detail::scaled(y, 1.0 / t), s / t);
  Chain out;
  out.x = x;
  out.y = y;
  out.R = t;
  for (const auto& z : unit.points) out.points.push_back(detail::scaled(z, t));
  detail::fill_balls(out);
  return out;
}

/// Equal-norm chain from x to |x| y / |y|, followed by that point itself.
/// Requires s >= t > 0, |y| >= |x| = t + s and ||x| y / |y| - x| > s.
inline Chain chain_general_2d(const Vec& x, const Vec& y, double t, double s) {
  detail::require_dim(x, y, 2);
  detail::require(t > 0.0 && s >= t, "chain_general_2d needs s >= t > 0");
  const double nx = detail::norm(x);
  detail::require(detail::nearly(nx, t + s), "chain_general_2d needs |x| = t + s");
  detail::require(detail::norm(y) >= nx * (1.0 - 1e-12), "chain_general_2d needs |y| >= |x|");
  const Vec yhat = detail::radial_projection(x, y);
  if (!(detail::distance(yhat, x) > s)) {
    throw ValidationError("||x| y/|y| - x| <= s: no chain needed");
  }
  Chain out = chain_equal_norm(x, yhat, t, s);
  out.y = y;
  out.points.push_back(yhat);
  detail::fill_balls(out);
  return out;
}

/// chain_general_2d inside the plane spanned by x and y (n >= 2). The basis
/// starts from y, the larger vector; when x is antiparallel to y any
/// orthogonal direction completes it.
inline Chain chain_nd(const Vec& x, const Vec& y, double t, double s) {
  const std::size_t n = x.size();
  detail::require(n >= 2 && y.size() == n, "chain_nd needs two points of the same dimension >= 2");
  if (n == 2) return chain_general_2d(x, y, t, s);

  const double ny = detail::norm(y);
  detail::require(ny > 0.0, "y must be nonzero");
  const Vec e1 = detail::scaled(y, 1.0 / ny);
  Vec e2(x);
  const double along = detail::dot(x, e1);
  for (std::size_t i = 0; i < n; ++i) e2[i] -= along * e1[i];
  double len = detail::norm(e2);
  if (len <= 1e-12 * detail::norm(x)) {
    // Dependent: x = -|x| e1 here (the parallel case fails the precondition
    // below). Orthogonalize the coordinate axis least aligned with e1.
    std::size_t k = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(e1[i]) < std::abs(e1[k])) k = i;
    }
    e2.assign(n, 0.0);
    e2[k] = 1.0;
    for (std::size_t i = 0; i < n; ++i) e2[i] -= e1[k] * e1[i];
    len = detail::norm(e2);
  }
  for (double& c : e2) c /= len;

  const Vec x2{along, detail::dot(x, e2)};
  const Vec y2{ny, 0.0};
  const Chain planar = chain_general_2d(x2, y2, t, s);
  Chain out;
  out.x = x;
  out.y = y;
  out.R = t;
  for (const auto& z : planar.points) {
    Vec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = z[0] * e1[i] + z[1] * e2[i];
    out.points.push_back(std::move(p));
  }
  detail::fill_balls(out);
  return out;
}

/// Links x and y (both outside B_{2R}(0), n >= 2) by at most 8 points so that
/// no hop is longer than |x - y| and every hop's diametral ball avoids
/// B_R(0). With |x| <= |y| and S = |x| - R: one point |x| y / |y| when it is
/// within S of x, otherwise chain_nd with t = R, s = S. The returned chain
/// runs from the given x to the given y.
inline Chain finite_chain(const Vec& x, const Vec& y, double R) {
  detail::require(x.size() >= 2 && y.size() == x.size(),
                  "finite_chain needs two points of the same dimension >= 2");
  detail::require(std::isfinite(R) && R > 0.0, "R must be positive");
  if (detail::norm(x) < 2.0 * R || detail::norm(y) < 2.0 * R) {
    throw ValidationError("finite_chain needs |x|, |y| >= 2R");
  }
  if (x == y) throw ValidationError("finite_chain needs x != y");

  const bool swapped = detail::norm(y) < detail::norm(x);
  const Vec& a = swapped ? y : x;
  const Vec& b = swapped ? x : y;
  const double S = detail::norm(a) - R;
  const Vec bhat = detail::radial_projection(a, b);

  Chain out;
  if (detail::distance(bhat, a) <= S) {
    out.points.push_back(bhat);
  } else {
    out.points = chain_nd(a, b, R, S).points;
  }
  if (swapped) std::reverse(out.points.begin(), out.points.end());
  out.x = x;
  out.y = y;
  out.R = R;
  detail::fill_balls(out);
  return out;
}

/// Checks 1 <= m <= 8, every hop <= |x - y|, and every hop ball outside
/// B_R(0), each up to kChainSlack.
inline ChainVerification verify_chain(const Chain& chain) {
  ChainVerification v;
  v.count_ok = chain.m() >= 1 && chain.m() <= kMaxChainLength;
  const double span = detail::distance(chain.x, chain.y);
  const auto seq = detail::hops(chain);
  v.worst_distance_excess = -span;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    v.worst_distance_excess =
        std::max(v.worst_distance_excess, detail::distance(*seq[i], *seq[i + 1]) - span);
  }
  v.distances_ok = v.worst_distance_excess <= kChainSlack;
  v.worst_clearance = std::numeric_limits<double>::infinity();
  // Recompute the balls from the points so a stale ball list cannot pass.
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const Vec c = detail::midpoint(*seq[i], *seq[i + 1]);
    const double r = 0.5 * detail::distance(*seq[i], *seq[i + 1]);
    v.worst_clearance = std::min(v.worst_clearance, detail::norm(c) - r - chain.R);
  }
  for (const auto& b : chain.balls) {
    v.worst_clearance = std::min(v.worst_clearance, detail::norm(b.center) - b.radius - chain.R);
  }
  v.balls_ok = v.worst_clearance >= -kChainSlack;
  return v;
}

/// Text record:
///
///     chain n <n> m <m> R <R>
///     x <coords>
///     z <coords>          (m lines)
///     y <coords>
///     ball <center coords> radius <r>   (m + 1 lines)
///     verify count <0|1> distances <0|1> balls <0|1>
inline void write_chain(std::ostream& os, const Chain& chain) {
  auto coords = [&](const Vec& v) {
    for (double c : v) os << ' ' << text::format_double(c);
  };
  os << "chain n " << chain.x.size() << " m " << chain.m() << " R "
     << text::format_double(chain.R) << '\n';
  os << 'x';
  coords(chain.x);
  os << '\n';
  for (const auto& z : chain.points) {
    os << 'z';
    coords(z);
    os << '\n';
  }
  os << 'y';
  coords(chain.y);
  os << '\n';
  for (const auto& b : chain.balls) {
    os << "ball";
    coords(b.center);
    os << " radius " << text::format_double(b.radius) << '\n';
  }
  const ChainVerification v = verify_chain(chain);
  os << "verify count " << v.count_ok << " distances " << v.distances_ok << " balls "
     << v.balls_ok << '\n';
}

inline std::string to_string(const Chain& chain) {
  std::ostringstream os;
  write_chain(os, chain);
  return os.str();
}

}  // namespace morrey
