#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

/// How |Dv| is sampled on each lattice cell (n = 2; both coincide for n = 1).
enum class Stencil {
  /// Forward differences at the lower-left corner of each cell; the unused
  /// corner v_{N,N} is not a degree of freedom.
  forward,
  /// Average of the four corner-anchored difference pairs of each cell.
  /// Invariant under the lattice reflections x -> -x and y -> -y, and every
  /// node including v_{N,N} is a degree of freedom.
  symmetric,
};

/// Exponent of the Dirichlet energy, the cell stencil, and the optional
/// smoothing used when 1 < p < 2 (only reachable for n = 1).
struct EnergyParams {
  double p = 4.0;
  double smoothing_eps = 0.0;
  Stencil stencil = Stencil::forward;

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

/// Partial derivatives dE/dv_{i,j}, laid out like the field. Entries at
/// pinned nodes are computed like any other (the descent ignores them); with
/// the forward stencil the n = 2 corner entry is identically 0.
using GradientField = ScalarField;

/// True when v_{N,N} is a variable of the energy.
inline bool corner_is_free(const EnergyParams& params, const Grid& grid) {
  return grid.dim() == 2 && params.stencil == Stencil::symmetric;
}

inline void validate(const EnergyParams& params, const Grid& grid) {
  detail::require(std::isfinite(params.p) && params.p > grid.dim(),
                  "exponent p must exceed the dimension n");
  detail::require(std::isfinite(params.smoothing_eps) && params.smoothing_eps >= 0.0,
                  "smoothing_eps must be nonnegative");
}

namespace detail {

// Evaluates w(s) = (s + eps^2)^(p/2 - 1), the common factor of every cell
// term and its derivative. Integer and half-integer exponents avoid std::pow.
class CellPower {
 public:
  explicit CellPower(const EnergyParams& params)
      : eps2_(params.smoothing_eps * params.smoothing_eps),
        eps_p_(params.smoothing_eps > 0.0 ? std::pow(params.smoothing_eps, params.p) : 0.0),
        exponent_(0.5 * params.p - 1.0) {
    const double twice = 2.0 * exponent_;
    if (twice >= 0.0 && twice <= 16.0 && twice == std::floor(twice)) {
      whole_ = static_cast<int>(twice) / 2;
      half_ = static_cast<int>(twice) % 2 == 1;
      fast_ = true;
    }
  }

  double weight(double s) const {
    const double t = s + eps2_;
    if (!fast_) return std::pow(t, exponent_);
    double w = half_ ? std::sqrt(t) : 1.0;
    for (int m = 0; m < whole_; ++m) w *= t;
    return w;
  }

  // (s + eps^2)^(p/2) - eps^p given the weight at s. A flat cell contributes
  // 0 even when p < 2 makes the weight infinite.
  double term(double s, double w) const {
    const double t = s + eps2_;
    return t > 0.0 ? t * w - eps_p_ : 0.0;
  }

 private:
  double eps2_;
  double eps_p_;
  double exponent_;
  int whole_ = 0;
  bool half_ = false;
  bool fast_ = false;
};

inline void require_gradient_regular(const EnergyParams& params) {
  if (params.p < 2.0 && params.smoothing_eps <= 0.0) {
    throw ValidationError(
        "energy gradient for p < 2 needs smoothing_eps > 0 (derivative is not Lipschitz at 0)");
  }
}

inline void require_finite(const ScalarField& field) {
  if (!field.all_finite()) throw ValidationError("field contains non-finite values");
}

// Four-corner averaged stencil. With grad empty only the energy is formed.
inline double symmetric_kernel(std::span<const double> v, const Grid& grid, const CellPower& pw,
                               double p, std::span<double> grad) {
  const int n = grid.nodes_per_axis();
  const std::size_t stride = static_cast<std::size_t>(n);
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * stride;
    const double* row = v.data() + base;
    const double* next = row + stride;
    for (int j = 0; j + 1 < n; ++j) {
      const double v00 = row[j];
      const double v10 = next[j];
      const double v01 = row[j + 1];
      const double v11 = next[j + 1];
      const double dx[2] = {v10 - v00, v11 - v01};  // along x at y_j, y_{j+1}
      const double dy[2] = {v01 - v00, v11 - v10};  // along y at x_i, x_{i+1}
      double cell = 0.0;
      double fx[2] = {0.0, 0.0};
      double fy[2] = {0.0, 0.0};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const double s = dx[a] * dx[a] + dy[b] * dy[b];
          const double w = pw.weight(s);
          cell += pw.term(s, w);
          if (want_grad) {
            fx[a] += w * dx[a];
            fy[b] += w * dy[b];
          }
        }
      }
      total += 0.25 * cell;
      if (want_grad) {
        const double c = 0.25 * p;
        double* g0 = grad.data() + base;
        double* g1 = g0 + stride;
        g1[j] += c * fx[0];
        g0[j] -= c * fx[0];
        g1[j + 1] += c * fx[1];
        g0[j + 1] -= c * fx[1];
        g0[j + 1] += c * fy[0];
        g0[j] -= c * fy[0];
        g1[j + 1] += c * fy[1];
        g1[j] -= c * fy[1];
      }
    }
  }
  return total;
}

// Energy without argument checks.
inline double energy_kernel(std::span<const double> v, const Grid& grid, const CellPower& pw,
                            Stencil stencil = Stencil::forward) {
  const int n = grid.nodes_per_axis();
  double total = 0.0;
  if (grid.dim() == 2 && stencil == Stencil::symmetric) {
    return symmetric_kernel(v, grid, pw, 0.0, {});
  }
  if (grid.dim() == 1) {
    for (int i = 0; i + 1 < n; ++i) {
      const double d = v[i + 1] - v[i];
      const double s = d * d;
      total += pw.term(s, pw.weight(s));
    }
    return total;
  }
  const std::size_t stride = static_cast<std::size_t>(n);
  for (int i = 0; i + 1 < n; ++i) {
    const double* row = v.data() + static_cast<std::size_t>(i) * stride;
    const double* next = row + stride;
    for (int j = 0; j + 1 < n; ++j) {
      const double c = row[j];
      const double a = next[j] - c;
      const double b = row[j + 1] - c;
      const double s = a * a + b * b;
      total += pw.term(s, pw.weight(s));
    }
  }
  return total;
}

// Energy and gradient in one sweep; `grad` is overwritten.
inline double energy_gradient_kernel(std::span<const double> v, const Grid& grid,
                                     const CellPower& pw, double p, std::span<double> grad,
                                     Stencil stencil = Stencil::forward) {
  if (grid.dim() == 2 && stencil == Stencil::symmetric) {
    return symmetric_kernel(v, grid, pw, p, grad);
  }
  const int n = grid.nodes_per_axis();
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  if (grid.dim() == 1) {
    for (int i = 0; i + 1 < n; ++i) {
      const double d = v[i + 1] - v[i];
      const double s = d * d;
      const double w = pw.weight(s);
      total += pw.term(s, w);
      const double f = p * w * d;
      grad[i + 1] += f;
      grad[i] -= f;
    }
    return total;
  }
  const std::size_t stride = static_cast<std::size_t>(n);
  for (int i = 0; i + 1 < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * stride;
    const double* row = v.data() + base;
    const double* next = row + stride;
    double* grow = grad.data() + base;
    double* gnext = grow + stride;
    for (int j = 0; j + 1 < n; ++j) {
      const double c = row[j];
      const double a = next[j] - c;
      const double b = row[j + 1] - c;
      const double s = a * a + b * b;
      const double w = pw.weight(s);
      total += pw.term(s, w);
      const double fa = p * w * a;
      const double fb = p * w * b;
      gnext[j] += fa;
      grow[j + 1] += fb;
      grow[j] -= fa + fb;
    }
  }
  return total;
}

}  // namespace detail

/// E(v): for the forward stencil, the sum over i, j <= N-1 of
/// ((v_{i+1,j} - v_{i,j})^2 + (v_{i,j+1} - v_{i,j})^2)^{p/2}; for n = 1 the sum
/// of |v_{i+1} - v_i|^p. Unscaled; see physical_dirichlet_norm.
inline double discrete_energy(const ScalarField& field, const EnergyParams& params) {
  validate(params, field.grid());
  detail::require_finite(field);
  return detail::energy_kernel(field.values(), field.grid(), detail::CellPower(params),
                               params.stencil);
}

/// (h^{n-p} E(v))^{1/p}, the grid approximation of the L^p norm of Dv.
inline double physical_dirichlet_norm(const ScalarField& field, const EnergyParams& params) {
  const double e = discrete_energy(field, params);
  const Grid& g = field.grid();
  const double scale = std::pow(g.spacing(), static_cast<double>(g.dim()) - params.p);
  return std::pow(scale * e, 1.0 / params.p);
}

/// Exact partial derivatives of discrete_energy (or of its smoothed variant
/// when smoothing_eps > 0).
inline GradientField energy_gradient(const ScalarField& field, const EnergyParams& params) {
  validate(params, field.grid());
  detail::require_gradient_regular(params);
  detail::require_finite(field);
  GradientField grad(field.grid());
  detail::energy_gradient_kernel(field.values(), field.grid(), detail::CellPower(params),
                                 params.p, grad.values(), params.stencil);
  return grad;
}

/// Largest |dE/dv| over free nodes (pinned nodes excluded, and the n = 2
/// corner unless `include_corner`).
inline double max_free_component(const GradientField& grad, std::span<const unsigned char> pinned,
                                 bool include_corner = false) {
  const Grid& g = grad.grid();
  const auto values = grad.values();
  double worst = 0.0;
  for (std::size_t q = 0; q < values.size(); ++q) {
    if (pinned[q] || (!include_corner && g.is_corner(g.node(q)))) continue;
    worst = std::max(worst, std::abs(values[q]));
  }
  return worst;
}

/// Discrete p-Laplacian residual: vanishes exactly at a constrained minimizer.
inline double p_laplacian_residual(const ScalarField& field, const EnergyParams& params,
                                   const ConstraintSet& constraints) {
  const GradientField grad = energy_gradient(field, params);
  const auto mask = constraints.mask(field.grid());
  return max_free_component(grad, mask, corner_is_free(params, field.grid()));
}

}  // namespace morrey
