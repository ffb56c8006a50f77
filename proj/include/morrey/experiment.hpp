#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "morrey/archive.hpp"
#include "morrey/config.hpp"
#include "morrey/contour.hpp"
#include "morrey/descent.hpp"
#include "morrey/holder.hpp"
#include "morrey/oned.hpp"
#include "morrey/properties.hpp"
#include "morrey/quasiconcavity.hpp"
#include "morrey/report.hpp"
#include "morrey/singular.hpp"

namespace morrey {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitDivergence = 2,
  kExitIo = 3,
};

/// Tolerances applied to the report checks.
struct CheckTolerances {
  /// Symmetry residuals relative to the Hölder seminorm.
  double symmetry = 1e-3;
  double bounds = 1e-6;
  double quasiconcavity = 1e-3;
  /// Relative error of the fitted singular exponent.
  double singular = 0.15;
  /// |C* estimate - 1| for the sampled clamp on the line.
  double sharp_constant_1d = 1e-10;
  /// Max node error of a line extremal against the clamp, in units of h.
  double clamp_error_in_h = 2.0;
};

struct ExperimentResult {
  int status = kExitOk;
  std::string message;
  std::filesystem::path field_path;
  std::filesystem::path contour_path;
  std::filesystem::path report_path;
  std::filesystem::path manifest_path;
  /// Report text as written to report_path.
  std::string report;
  DescentState state;
};

namespace detail {

inline std::string node_text(NodeIndex idx, int n) {
  return n == 1 ? std::to_string(idx.i) : std::to_string(idx.i) + "," + std::to_string(idx.j);
}

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline bool wants(const ExperimentConfig& c, const std::string& name) {
  return std::find(c.analysis.begin(), c.analysis.end(), name) != c.analysis.end();
}

inline ScalarField initial_field(const Grid& grid, const ConstraintSet& constraints) {
  if (is_canonical(grid, constraints)) return default_initial_guess(grid, constraints);
  ScalarField f(grid);
  constraints.apply(f);
  return f;
}

inline void write_manifest(const std::filesystem::path& path, const ExperimentConfig& config,
                           const DescentState& s, const std::string& started,
                           const std::string& finished) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << "morrey-manifest 1\n";
  os << "started = " << started << '\n';
  os << "finished = " << finished << '\n';
  for (const auto& [k, v] : config_entries(config)) os << "config." << k << " = " << v << '\n';
  os << "iterations = " << s.iteration << '\n';
  os << "converged = " << (s.converged ? "true" : "false") << '\n';
  os << "energy = " << text::format_double(s.energy) << '\n';
  os << "residual = " << text::format_double(s.residual) << '\n';
  for (const auto& h : s.energy_history) {
    os << "history.energy " << h.iteration << ' ' << text::format_double(h.value) << '\n';
  }
  for (const auto& h : s.grad_inf_history) {
    os << "history.residual " << h.iteration << ' ' << text::format_double(h.value) << '\n';
  }
  if (!os.flush()) throw IoError("write to '" + path.string() + "' failed");
}

inline std::size_t energy_increases(const DescentState& s) {
  std::size_t up = 0;
  for (std::size_t a = 1; a < s.energy_history.size(); ++a) {
    if (s.energy_history[a].value > s.energy_history[a - 1].value) ++up;
  }
  return up;
}

}  // namespace detail

/// Runs every enabled analysis on a converged field.
inline std::vector<Report> analyse_field(const ScalarField& field, const ExperimentConfig& config,
                                         const CheckTolerances& tol = {}) {
  const Grid& g = field.grid();
  const EnergyParams params = energy_params(config);
  const ConstraintSet constraints = make_constraints(config, g);
  const bool canonical = is_canonical(g, constraints);
  const bool planar = g.dim() == 2;
  std::vector<Report> out;
  std::vector<std::string> skipped;
  auto skip = [&](const std::string& name, const char* why) { skipped.push_back(name + ":" + why); };

  HolderOptions hopt;
  hopt.mode = config.seminorm;
  hopt.samples = static_cast<std::size_t>(config.seminorm_samples);
  hopt.seed = config.seed;
  const bool need_holder = detail::wants(config, "holder") || detail::wants(config, "symmetry") ||
                           detail::wants(config, "singular");
  HolderReport holder;
  if (need_holder) holder = holder_seminorm(field, params, constraints, hopt);

  if (detail::wants(config, "holder")) {
    Report r;
    r.set("holder.seminorm", holder.seminorm);
    r.set("holder.exact", holder.exact);
    r.set("holder.degenerate", holder.degenerate);
    r.set("holder.ratio_at_constraints", holder.ratio_at_constraints);
    r.set("holder.c_star_estimate", holder.c_star_estimate);
    r.set("holder.dirichlet_norm", physical_dirichlet_norm(field, params));
    if (!holder.degenerate) {
      r.set("holder.argmax", detail::node_text(holder.first, g.dim()) + ";" +
                                 detail::node_text(holder.second, g.dim()));
      const NodeIndex a = constraints.entries()[0].node;
      const NodeIndex b = constraints.entries()[1].node;
      const bool at_pins = (holder.first == a && holder.second == b) ||
                           (holder.first == b && holder.second == a);
      r.add(PropertyCheck{"holder_argmax_at_pins", at_pins ? 0.0 : 1.0, 0.0, at_pins});
    }
    if (g.dim() == 1 && canonical) {
      // The pipeline on the sampled clamp, then the computed field against it.
      const ScalarField clamp = sample_extremal_1d(g);
      const double c_clamp = sharp_constant_estimate(clamp, params, constraints);
      r.set("holder.c_star_clamp", c_clamp);
      double err = 0.0;
      for (int i = 0; i < g.nodes_per_axis(); ++i) err = std::max(err, std::abs(field(i) - clamp(i)));
      PropertyReport pr;
      pr.add_at_most("sharp_constant_1d", std::abs(c_clamp - exact_sharp_constant_1d()),
                     tol.sharp_constant_1d);
      pr.add_at_most("clamp_max_error", err, tol.clamp_error_in_h * g.spacing());
      r.add(pr);
    }
    out.push_back(std::move(r));
  }

  if (detail::wants(config, "symmetry")) {
    if (!canonical) {
      skip("symmetry", "needs canonical pins");
    } else {
      Report r;
      PropertyReport pr;
      const double scale = tol.symmetry * holder.seminorm;
      pr.add_at_most("antisymmetry", check_reflection_antisymmetry(field), scale);
      if (planar) pr.add_at_most("mirror_symmetry", check_cylindrical_symmetry(field), scale);
      r.add(pr);
      out.push_back(std::move(r));
    }
  }

  if (detail::wants(config, "bounds")) {
    if (constraints.size() != 2) {
      skip("bounds", "needs two pins");
    } else {
      const BoundsReport b = check_pointwise_bounds(field, constraints);
      Report r;
      PropertyReport pr;
      pr.add_at_most("bounds_global", b.global_violation, tol.bounds);
      pr.add_at_most("bounds_upper", b.upper_violation, tol.bounds);
      pr.add_at_most("bounds_lower", b.lower_violation, tol.bounds);
      r.add(pr);
      out.push_back(std::move(r));
    }
  }

  if (detail::wants(config, "quasiconcavity")) {
    if (!planar || !canonical) {
      skip("quasiconcavity", "needs the planar canonical problem");
    } else if (!config.levels.empty()) {
      const QuasiconcavityReport q = check_quasiconcavity(field, config.levels);
      Report r;
      for (const auto& l : q.levels) {
        const std::string key = "quasiconcavity.level_" + text::format_double(l.level);
        r.set(key + ".upper_deficit", l.upper);
        r.set(key + ".lower_deficit", l.lower);
      }
      PropertyReport pr;
      pr.add_at_most("quasiconcavity", q.worst(), tol.quasiconcavity);
      r.add(pr);
      out.push_back(std::move(r));
    }
  }

  if (detail::wants(config, "midplane")) {
    if (!canonical) {
      skip("midplane", "needs canonical pins");
    } else {
      const MidplaneReport m = check_midplane_gradient_sign(field);
      Report r;
      r.set("midplane.nodes", static_cast<long long>(m.nodes));
      r.set("midplane.min_derivative", m.min_derivative);
      r.set("midplane.worst_violation", m.worst_violation);
      PropertyReport pr;
      pr.add_at_most("midplane_sign_violations", static_cast<double>(m.violations), 0.0);
      r.add(pr);
      out.push_back(std::move(r));
    }
  }

  if (detail::wants(config, "gradient")) {
    const GradientFloorReport f = check_nonvanishing_gradient(field, constraints, config.gradient_threshold);
    Report r;
    r.set("gradient.nodes", static_cast<long long>(f.nodes));
    r.set("gradient.argmin", detail::node_text(f.where, g.dim()));
    r.add(PropertyCheck{"gradient_floor", f.min_magnitude, f.threshold, f.pass});
    out.push_back(std::move(r));
  }

  if (detail::wants(config, "singular")) {
    if (!planar) {
      skip("singular", "needs n=2");
    } else {
      Report r;
      PropertyReport pr;
      const double expected = singular_exponent(config.p, g.dim());
      r.set("singular.expected_exponent", expected);
      for (std::size_t w = 0; w < constraints.size(); ++w) {
        const std::string key = "singular.pin" + std::to_string(w);
        auto failed = [&](const char* what) {
          r.set(key + ".error", what);
          pr.checks.push_back({"singular_exponent_pin" + std::to_string(w),
                               std::numeric_limits<double>::infinity(), tol.singular, false});
        };
        try {
          const SingularFit fit = fit_singular_exponent(field, constraints, w, params);
          r.set(key + ".exponent", fit.exponent);
          r.set(key + ".gamma", fit.gamma);
          r.set(key + ".residual", fit.residual);
          r.set(key + ".radius_min", fit.radii.back());
          r.set(key + ".radius_max", fit.radii.front());
          r.set(key + ".point_mass_from_gamma", dirac_weight_from_gamma(fit.gamma, config.p, g.dim()));
          pr.add_at_most("singular_exponent_pin" + std::to_string(w),
                         std::abs(fit.exponent - expected) / expected, tol.singular);
        } catch (const DomainError& e) {
          failed(e.what());
        } catch (const ValidationError& e) {
          failed(e.what());
        }
      }
      if (constraints.size() == 2 && holder.c_star_estimate > 0.0) {
        const auto& e = constraints.entries();
        const Point a = g.point(e[0].node);
        const Point b = g.point(e[1].node);
        r.set("singular.point_mass_from_constant",
              dirac_weight_from_constant(holder.c_star_estimate, e[0].value, e[1].value,
                                         std::hypot(a[0] - b[0], a[1] - b[1]), config.p, g.dim()));
      }
      r.add(pr);
      out.push_back(std::move(r));
    }
  }

  if (detail::wants(config, "gap")) {
    const EnergyGapReport e = morrey_estimate_gap(field, params);
    Report r;
    r.set("gap.total", e.total);
    r.set("gap.outside_unit_ball", e.outside);
    PropertyReport pr;
    pr.add_above("energy_outside_unit_ball", e.fraction, 0.0);
    r.add(pr);
    out.push_back(std::move(r));
  }

  if (!skipped.empty()) {
    Report r;
    std::string s;
    for (std::size_t a = 0; a < skipped.size(); ++a) s += (a ? "," : "") + skipped[a];
    r.set("skipped", s);
    out.push_back(std::move(r));
  }
  return out;
}

/// Descent (fresh or resumed), analyses, and artifacts under config.out:
/// field.txt, contours.txt (planar runs), report.txt and manifest.txt.
/// Errors are mapped to exit codes rather than thrown.
inline ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr,
                                       const CheckTolerances& tol = {}) {
  ExperimentResult res;
  try {
    validate(config);
    const std::string started = detail::utc_now();
    const Grid grid = make_grid(config.n, config.ell, config.k);
    const EnergyParams params = energy_params(config);
    const DescentConfig dc = descent_config(config);
    const ConstraintSet constraints = make_constraints(config, grid);

    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw IoError("cannot create '" + config.out.string() + "': " + ec.message());

    if (config.resume.empty()) {
      res.state = run_descent(detail::initial_field(grid, constraints), params, dc, constraints);
    } else {
      const FieldArchive archive = load_archive(config.resume);
      if (!(archive.field.grid() == grid) || archive.header.p != config.p) {
        throw ValidationError("resume archive does not match the configured problem");
      }
      res.state = continue_descent(resume_state(archive, params, dc, constraints), params, dc,
                                   constraints);
    }
    const DescentState& s = res.state;
    if (log) {
      *log << "descent: " << s.iteration << " iterations, energy " << text::format_short(s.energy)
           << ", residual " << text::format_short(s.residual)
           << (s.converged ? " (converged)" : " (iteration limit)") << '\n';
    }

    ArchiveHeader h;
    h.p = config.p;
    h.iteration = s.iteration;
    h.energy = s.energy;
    h.tau = s.tau;
    h.initial_residual = s.initial_residual;
    h.initial_energy = s.initial_energy;
    res.field_path = config.out / "field.txt";
    save_field(s.field, res.field_path, h);

    if (grid.dim() == 2) {
      ContourOptions copt;
      copt.use_corner_cell = corner_is_free(params, grid);
      res.contour_path = config.out / "contours.txt";
      emit_contours(s.field, config.contour_levels, res.contour_path, copt);
    }

    Report run;
    run.set("run.iterations", s.iteration);
    run.set("run.energy", s.energy);
    run.set("run.residual", s.residual);
    run.set("run.initial_residual", s.initial_residual);
    run.set("run.converged", s.converged);
    std::vector<Report> reports{run};
    for (auto& r : analyse_field(s.field, config, tol)) reports.push_back(std::move(r));
    if (!config.analysis.empty() && config.adaptive) {
      Report mono;
      PropertyReport pr;
      pr.add_at_most("energy_nonincreasing", static_cast<double>(detail::energy_increases(s)), 0.0);
      mono.add(pr);
      reports.push_back(std::move(mono));
    }
    std::map<std::string, std::string> echo;
    for (const auto& [k, v] : config_entries(config)) echo[k] = v;
    res.report = config.analysis.empty() ? emit_report(echo) : emit_report(echo, reports);

    res.report_path = config.out / "report.txt";
    {
      std::ofstream os(res.report_path, std::ios::trunc);
      if (!os) throw IoError("cannot open '" + res.report_path.string() + "' for writing");
      os << res.report;
      if (!os.flush()) throw IoError("write to '" + res.report_path.string() + "' failed");
    }
    res.manifest_path = config.out / "manifest.txt";
    detail::write_manifest(res.manifest_path, config, s, started, detail::utc_now());
  } catch (const ValidationError& e) {
    res.status = kExitValidation;
    res.message = e.what();
  } catch (const DivergenceError& e) {
    res.status = kExitDivergence;
    res.message = e.what();
  } catch (const IoError& e) {
    res.status = kExitIo;
    res.message = e.what();
  } catch (const FormatError& e) {
    res.status = kExitIo;
    res.message = e.what();
  }
  return res;
}

}  // namespace morrey
