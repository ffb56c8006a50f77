#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "morrey/archive.hpp"
#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"

namespace morrey {

struct DescentConfig {
  /// Fixed step size, and the anchor of the adaptive ladder tau * 2^j.
  double tau = 1e-10;
  long long max_iters = 100000000;
  /// Stop once the free-node residual is <= max(grad_tol, grad_tol_rel * initial residual).
  double grad_tol = 0.0;
  double grad_tol_rel = 1e-8;
  bool adaptive = false;
  /// Armijo sufficient-decrease constant for the adaptive ladder.
  double armijo = 1e-4;
  /// Write a FieldArchive every this many iterations (0 = never).
  long long checkpoint_every = 0;
  std::filesystem::path checkpoint_dir = ".";
  /// Record (iteration, value) history samples every this many iterations.
  long long history_every = 1;
  std::uint64_t seed = 0;
};

struct HistorySample {
  long long iteration = 0;
  double value = 0.0;
  friend bool operator==(const HistorySample&, const HistorySample&) = default;
};

struct DescentState {
  ScalarField field;
  long long iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
  /// Step used by the most recent adaptive iteration (config.tau before any).
  double tau = 0.0;
  double initial_energy = 0.0;
  double initial_residual = 0.0;
  bool converged = false;
  std::vector<HistorySample> energy_history;
  std::vector<HistorySample> grad_inf_history;
};

/// Outcome of one adaptive ladder search.
struct TauChoice {
  double tau = 0.0;
  /// E(v - tau * g) at the returned step.
  double energy = 0.0;
  bool accepted = false;
};

/// Samples w(x, y) = c ln[(x^2 + (y-1)^2 + 1e-2) / (x^2 + (y+1)^2 + 1e-2)] with c
/// fixed by w(0, 1) = 1. On the line the analogous profile in x is used.
/// Only defined for the canonical constraints.
inline ScalarField default_initial_guess(const Grid& grid, const ConstraintSet& constraints) {
  if (!is_canonical(grid, constraints)) {
    throw ValidationError("default initial guess requires the canonical constraints");
  }
  constexpr double kShift = 1e-2;
  auto profile = [&](double x, double y) {
    return std::log((x * x + (y - 1.0) * (y - 1.0) + kShift) /
                    (x * x + (y + 1.0) * (y + 1.0) + kShift));
  };
  const bool line = grid.dim() == 1;
  // Solve w(x0) = 1 for c; x0 is (0, 1) in the plane and 1 on the line.
  const double c = 1.0 / profile(0.0, 1.0);
  ScalarField out = ScalarField::sample(grid, [&](const Point& pt) {
    return line ? c * profile(0.0, pt[0]) : c * profile(pt[0], pt[1]);
  });
  constraints.apply(out);
  return out;
}

namespace detail {

// Reusable buffers for energy/gradient evaluations along a descent.
class DescentWorkspace {
 public:
  DescentWorkspace(const Grid& grid, const EnergyParams& params, const ConstraintSet& constraints)
      : grid_(grid),
        params_(params),
        power_(params),
        free_(grid.size(), 0),
        grad_(grid.size(), 0.0),
        trial_(grid.size(), 0.0) {
    const auto pinned = constraints.mask(grid);
    for (std::size_t q = 0; q < grid.size(); ++q) {
      free_[q] = !pinned[q] && (!grid.is_corner(grid.node(q)) || corner_is_free(params, grid));
    }
  }

  // Energy and gradient at `v`; the gradient is kept in the workspace.
  double evaluate(std::span<const double> v) {
    return energy_gradient_kernel(v, grid_, power_, params_.p, grad_, params_.stencil);
  }

  double energy(std::span<const double> v) const {
    return energy_kernel(v, grid_, power_, params_.stencil);
  }

  double residual() const {
    double worst = 0.0;
    for (std::size_t q = 0; q < grad_.size(); ++q) {
      if (free_[q]) worst = std::max(worst, std::abs(grad_[q]));
    }
    return worst;
  }

  double free_grad_norm2() const {
    double s = 0.0;
    for (std::size_t q = 0; q < grad_.size(); ++q) {
      if (free_[q]) s += grad_[q] * grad_[q];
    }
    return s;
  }

  // out = v - tau * g on free nodes, v elsewhere.
  void step(std::span<const double> v, double tau, std::span<double> out) const {
    for (std::size_t q = 0; q < v.size(); ++q) {
      out[q] = free_[q] ? v[q] - tau * grad_[q] : v[q];
    }
  }

  std::vector<double>& trial() { return trial_; }

  // Largest tau * 2^j (searching upward from `start_level` while accepted,
  // downward otherwise) meeting the Armijo condition at `v` with energy `e0`.
  TauChoice ladder(std::span<const double> v, double e0, double anchor, int start_level,
                   double armijo) {
    constexpr int kMaxLevel = 1100;
    constexpr int kMinLevel = -1100;
    const double g2 = free_grad_norm2();
    auto trial_energy = [&](int level) {
      const double tau = std::ldexp(anchor, level);
      step(v, tau, trial_);
      return energy(trial_);
    };
    auto accepts = [&](int level, double e) {
      const double tau = std::ldexp(anchor, level);
      return std::isfinite(e) && e <= e0 - armijo * tau * g2;
    };

    int level = start_level;
    double e = trial_energy(level);
    if (accepts(level, e)) {
      while (level < kMaxLevel && std::isfinite(std::ldexp(anchor, level + 1))) {
        const double up = trial_energy(level + 1);
        if (!accepts(level + 1, up)) break;
        ++level;
        e = up;
      }
      return {std::ldexp(anchor, level), e, true};
    }
    while (level > kMinLevel) {
      --level;
      e = trial_energy(level);
      if (accepts(level, e)) return {std::ldexp(anchor, level), e, true};
    }
    return {anchor, trial_energy(0), false};
  }

 private:
  Grid grid_;
  EnergyParams params_;
  CellPower power_;
  std::vector<unsigned char> free_;
  std::vector<double> grad_;
  std::vector<double> trial_;
};

inline int ladder_level(double tau, double anchor) {
  if (!(tau > 0.0) || !(anchor > 0.0)) return 0;
  return static_cast<int>(std::lround(std::log2(tau / anchor)));
}

inline void validate(const DescentConfig& config) {
  require(std::isfinite(config.tau) && config.tau > 0.0, "tau must be positive");
  require(config.max_iters >= 1, "max_iters must be at least 1");
  require(config.grad_tol >= 0.0 && config.grad_tol_rel >= 0.0, "tolerances must be nonnegative");
  require(config.checkpoint_every >= 0, "checkpoint_every must be nonnegative");
  require(config.history_every >= 1, "history_every must be at least 1");
  require(config.armijo > 0.0 && config.armijo < 1.0, "armijo constant must lie in (0,1)");
}

inline void check_constraints_hold(const ScalarField& field, const ConstraintSet& constraints) {
  for (const auto& c : constraints.entries()) {
    require(field(c.node) == c.value, "initial field violates a pinned value");
  }
}

inline std::filesystem::path checkpoint_path(const std::filesystem::path& dir, long long iteration) {
  char name[64];
  std::snprintf(name, sizeof(name), "checkpoint_%012lld.field", iteration);
  return dir / name;
}

}  // namespace detail

/// Builds a state (energy, residual, histories at iteration 0) for `field`.
inline DescentState make_descent_state(ScalarField field, const EnergyParams& params,
                                       const DescentConfig& config,
                                       const ConstraintSet& constraints) {
  validate(params, field.grid());
  detail::require_gradient_regular(params);
  detail::require_finite(field);
  detail::check_constraints_hold(field, constraints);
  detail::DescentWorkspace ws(field.grid(), params, constraints);
  DescentState s;
  s.energy = ws.evaluate(field.values());
  s.residual = ws.residual();
  s.field = std::move(field);
  s.tau = config.tau;
  s.initial_energy = s.energy;
  s.initial_residual = s.residual;
  s.energy_history.push_back({0, s.energy});
  s.grad_inf_history.push_back({0, s.residual});
  return s;
}

/// One update v^m = v^{m-1} - tau * dE/dv(v^{m-1}) with tau = config.tau,
/// applied simultaneously at every free node. Pinned nodes and the corner
/// keep their values.
inline DescentState descent_step(const DescentState& state, const EnergyParams& params,
                                 const DescentConfig& config, const ConstraintSet& constraints) {
  validate(params, state.field.grid());
  detail::require_gradient_regular(params);
  detail::require(std::isfinite(config.tau) && config.tau >= 0.0, "tau must be nonnegative");
  detail::DescentWorkspace ws(state.field.grid(), params, constraints);
  ws.evaluate(state.field.values());
  DescentState next = state;
  ws.step(state.field.values(), config.tau, next.field.values());
  next.energy = ws.evaluate(next.field.values());
  next.residual = ws.residual();
  if (!std::isfinite(next.energy) || !std::isfinite(next.residual)) {
    throw DivergenceError("non-finite energy or gradient after a descent step; reduce tau");
  }
  next.iteration = state.iteration + 1;
  next.tau = config.tau;
  return next;
}

/// Ladder search for the step at the current state. Starts from the level of
/// state.tau relative to config.tau and returns the largest accepted rung
/// reachable from there; falls back to config.tau if nothing is accepted.
inline TauChoice adaptive_tau(const DescentState& state, const EnergyParams& params,
                              const DescentConfig& config, const ConstraintSet& constraints) {
  validate(params, state.field.grid());
  detail::require_gradient_regular(params);
  detail::DescentWorkspace ws(state.field.grid(), params, constraints);
  const double e0 = ws.evaluate(state.field.values());
  return ws.ladder(state.field.values(), e0, config.tau,
                   detail::ladder_level(state.tau, config.tau), config.armijo);
}

/// Iterates from `state` until config.max_iters or the residual tolerance.
/// Throws DivergenceError on non-finite values or when E exceeds ten times
/// its initial value.
inline DescentState continue_descent(DescentState state, const EnergyParams& params,
                                     const DescentConfig& config,
                                     const ConstraintSet& constraints,
                                     const std::function<void(const DescentState&)>& observer = {}) {
  detail::validate(config);
  validate(params, state.field.grid());
  detail::require_gradient_regular(params);
  detail::check_constraints_hold(state.field, constraints);

  const Grid grid = state.field.grid();
  detail::DescentWorkspace ws(grid, params, constraints);
  state.energy = ws.evaluate(state.field.values());
  state.residual = ws.residual();
  if (state.initial_residual == 0.0 && state.iteration == 0) {
    state.initial_residual = state.residual;
    state.initial_energy = state.energy;
  }
  if (state.tau <= 0.0) state.tau = config.tau;
  const double tol = std::max(config.grad_tol, config.grad_tol_rel * state.initial_residual);
  const double blowup = 10.0 * state.initial_energy;

  auto record = [&] {
    state.energy_history.push_back({state.iteration, state.energy});
    state.grad_inf_history.push_back({state.iteration, state.residual});
  };
  auto checkpoint = [&] {
    ArchiveHeader h;
    h.p = params.p;
    h.iteration = state.iteration;
    h.energy = state.energy;
    h.tau = state.tau;
    h.initial_residual = state.initial_residual;
    h.initial_energy = state.initial_energy;
    save_field(state.field, detail::checkpoint_path(config.checkpoint_dir, state.iteration), h);
  };

  if (state.residual <= tol) {
    state.converged = true;
    return state;
  }

  std::vector<double> next(grid.size());
  int level = detail::ladder_level(state.tau, config.tau);
  while (state.iteration < config.max_iters) {
    auto v = state.field.values();
    if (config.adaptive) {
      // Try one rung above the last accepted step first so tau can grow.
      const TauChoice choice = ws.ladder(v, state.energy, config.tau, level + 1, config.armijo);
      state.tau = choice.tau;
      level = detail::ladder_level(choice.tau, config.tau);
      ws.step(v, state.tau, next);
    } else {
      state.tau = config.tau;
      ws.step(v, config.tau, next);
    }
    std::copy(next.begin(), next.end(), v.begin());
    ++state.iteration;
    state.energy = ws.evaluate(v);
    state.residual = ws.residual();

    if (!std::isfinite(state.energy) || !std::isfinite(state.residual)) {
      throw DivergenceError("non-finite energy or gradient at iteration " +
                            std::to_string(state.iteration) + "; reduce tau");
    }
    if (state.energy > blowup) {
      throw DivergenceError("energy " + text::format_short(state.energy) +
                            " exceeds ten times its initial value at iteration " +
                            std::to_string(state.iteration) + "; reduce tau");
    }
    const bool done = state.residual <= tol || state.iteration >= config.max_iters;
    if (done || state.iteration % config.history_every == 0) record();
    if (config.checkpoint_every > 0 && state.iteration % config.checkpoint_every == 0) checkpoint();
    if (observer) observer(state);
    if (state.residual <= tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

/// Gradient descent from `initial` with the pinned values held fixed.
inline DescentState run_descent(const ScalarField& initial, const EnergyParams& params,
                                const DescentConfig& config, const ConstraintSet& constraints,
                                const std::function<void(const DescentState&)>& observer = {}) {
  detail::validate(config);
  DescentState s = make_descent_state(initial, params, config, constraints);
  return continue_descent(std::move(s), params, config, constraints, observer);
}

/// Rebuilds a descent state from a checkpoint written by continue_descent.
inline DescentState resume_state(const FieldArchive& archive, const EnergyParams& params,
                                 const DescentConfig& config, const ConstraintSet& constraints) {
  DescentState s = make_descent_state(archive.field, params, config, constraints);
  s.iteration = archive.header.iteration;
  s.tau = archive.header.tau > 0.0 ? archive.header.tau : config.tau;
  if (archive.header.initial_residual > 0.0) s.initial_residual = archive.header.initial_residual;
  if (archive.header.initial_energy > 0.0) s.initial_energy = archive.header.initial_energy;
  s.energy_history = {{s.iteration, s.energy}};
  s.grad_inf_history = {{s.iteration, s.residual}};
  return s;
}

}  // namespace morrey
