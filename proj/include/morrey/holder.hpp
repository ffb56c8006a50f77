#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

enum class SeminormMode {
  /// Every pair of distinct nodes.
  exact,
  /// Seeded random pairs plus every pair that contains a pinned node.
  sampled,
  /// exact up to N = 81 nodes per axis, sampled above.
  automatic,
};

struct HolderOptions {
  SeminormMode mode = SeminormMode::automatic;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
};

struct HolderReport {
  /// max |u(x) - u(y)| / |x - y|^{1 - n/p} over the scanned pairs.
  double seminorm = 0.0;
  /// Maximizing pair, first < second in lexicographic (i, j) order.
  NodeIndex first;
  NodeIndex second;
  /// True for a constant field: the seminorm is 0 and the pair is meaningless.
  bool degenerate = true;
  bool exact = true;
  /// Ratio for the first two pinned nodes (0 with fewer than two pins).
  double ratio_at_constraints = 0.0;
  /// seminorm / physical_dirichlet_norm (0 when degenerate).
  double c_star_estimate = 0.0;
};

namespace detail {

inline constexpr int kExactModeLimit = 81;

inline double holder_exponent(const Grid& g, double p) {
  return 1.0 - static_cast<double>(g.dim()) / p;
}

// |x - y|^{1-n/p} for nodes whose index offsets are (di, dj), di, dj >= 0.
// Pair scans divide by these entries so that any oracle evaluating
// pow(h * sqrt(di^2 + dj^2), 1 - n/p) reproduces them bit for bit.
class DistanceTable {
 public:
  DistanceTable(const Grid& g, double p)
      : n_(g.nodes_per_axis()), rows_(g.dim() == 1 ? 1 : n_), table_(std::size_t(n_) * rows_) {
    const double h = g.spacing();
    const double alpha = holder_exponent(g, p);
    for (int di = 0; di < n_; ++di) {
      for (int dj = 0; dj < rows_; ++dj) {
        const double d = h * std::sqrt(static_cast<double>(di * di + dj * dj));
        table_[std::size_t(di) * rows_ + dj] = std::pow(d, alpha);
      }
    }
  }
  double operator()(int di, int dj) const {
    return table_[std::size_t(std::abs(di)) * rows_ + std::abs(dj)];
  }

 private:
  int n_;
  int rows_;
  std::vector<double> table_;
};

// Running maximum with lexicographic tie-breaking on (a, b), a < b.
struct PairMax {
  double value = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  bool found = false;

  void offer(double r, std::size_t x, std::size_t y) {
    if (x > y) std::swap(x, y);
    if (!found || r > value || (r == value && (x < a || (x == a && y < b)))) {
      value = r;
      a = x;
      b = y;
      found = true;
    }
  }
};

inline double pair_ratio(const ScalarField& f, const DistanceTable& t, std::size_t a,
                         std::size_t b) {
  const Grid& g = f.grid();
  const NodeIndex ia = g.node(a);
  const NodeIndex ib = g.node(b);
  const auto v = f.values();
  return std::abs(v[a] - v[b]) / t(ib.i - ia.i, ib.j - ia.j);
}

inline PairMax scan_exact(const ScalarField& f, const DistanceTable& t) {
  const Grid& g = f.grid();
  const auto v = f.values();
  const std::size_t size = g.size();
  const std::size_t skip = g.dim() == 2 ? g.linear(g.corner()) : size;
  PairMax best;
  for (std::size_t a = 0; a < size; ++a) {
    if (a == skip) continue;
    const NodeIndex ia = g.node(a);
    const double va = v[a];
    double local = -1.0;
    std::size_t local_b = 0;
    for (std::size_t b = a + 1; b < size; ++b) {
      if (b == skip) continue;
      const NodeIndex ib = g.node(b);
      const double r = std::abs(va - v[b]) / t(ib.i - ia.i, ib.j - ia.j);
      if (r > local) {
        local = r;
        local_b = b;
      }
    }
    if (local >= 0.0) best.offer(local, a, local_b);
  }
  return best;
}

inline PairMax scan_sampled(const ScalarField& f, const DistanceTable& t,
                            const ConstraintSet& constraints, const HolderOptions& opt) {
  const Grid& g = f.grid();
  const std::size_t size = g.size();
  auto usable = [&](std::size_t q) { return !(g.dim() == 2 && g.is_corner(g.node(q))); };
  PairMax best;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, size - 1);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (a == b || !usable(a) || !usable(b)) continue;
    best.offer(pair_ratio(f, t, a, b), a, b);
  }
  for (const auto& c : constraints.entries()) {
    const std::size_t a = g.linear(c.node);
    for (std::size_t b = 0; b < size; ++b) {
      if (b == a || !usable(b)) continue;
      best.offer(pair_ratio(f, t, a, b), a, b);
    }
  }
  return best;
}

}  // namespace detail

/// Discrete Hölder seminorm of exponent 1 - n/p over node pairs. The corner
/// node v_{N,N} is never paired.
inline HolderReport holder_seminorm(const ScalarField& field, const EnergyParams& params,
                                    const ConstraintSet& constraints,
                                    const HolderOptions& options = {}) {
  validate(params, field.grid());
  detail::require_finite(field);
  const Grid& g = field.grid();
  const detail::DistanceTable table(g, params.p);

  bool exact = options.mode == SeminormMode::exact;
  if (options.mode == SeminormMode::automatic) exact = g.nodes_per_axis() <= detail::kExactModeLimit;
  const detail::PairMax best =
      exact ? detail::scan_exact(field, table) : detail::scan_sampled(field, table, constraints, options);

  HolderReport r;
  r.exact = exact;
  if (constraints.size() >= 2) {
    r.ratio_at_constraints = detail::pair_ratio(field, table, g.linear(constraints.entries()[0].node),
                                                g.linear(constraints.entries()[1].node));
  }
  if (!best.found || best.value == 0.0) return r;
  r.seminorm = best.value;
  r.first = g.node(best.a);
  r.second = g.node(best.b);
  r.degenerate = false;
  r.c_star_estimate = r.seminorm / physical_dirichlet_norm(field, params);
  return r;
}

inline HolderReport holder_seminorm(const ScalarField& field, const EnergyParams& params,
                                    SeminormMode mode = SeminormMode::automatic) {
  HolderOptions opt;
  opt.mode = mode;
  return holder_seminorm(field, params, ConstraintSet{}, opt);
}

/// [v] / ||Dv||_p: a witness for the sharp Morrey constant.
inline double sharp_constant_estimate(const ScalarField& field, const EnergyParams& params,
                                      const ConstraintSet& constraints = {},
                                      const HolderOptions& options = {}) {
  const double norm = physical_dirichlet_norm(field, params);
  if (!(norm > 0.0)) throw ValidationError("sharp constant estimate needs a nonconstant field");
  return holder_seminorm(field, params, constraints, options).seminorm / norm;
}

}  // namespace morrey
