// Acceptance run: one PASS/FAIL line per criterion, indented detail lines in
// between. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/morrey.hpp"

using namespace morrey;

namespace {

constexpr double kResidualTol = 1e-6;

int failures = 0;

void criterion(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "criterion " << id << " " << (pass ? "PASS" : "FAIL") << ": " << name << " (" << detail
            << ")" << std::endl;
  if (!pass) ++failures;
}

void info(const std::string& line) { std::cout << "  " << line << std::endl; }

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Solved {
  Grid grid;
  EnergyParams params;
  ConstraintSet constraints;
  DescentState state;
};

// Canonical planar extremal by adaptive descent to residual <= kResidualTol * r0.
Solved solve_planar(int ell, int k, double p, Stencil stencil, long long history_every = 1000) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = make_grid(2, ell, k);
  const ConstraintSet c = canonical_constraints(g);
  const EnergyParams params{p, 0.0, stencil};
  DescentConfig cfg;
  cfg.tau = 1e-6;
  cfg.adaptive = true;
  cfg.max_iters = 20000000;
  cfg.grad_tol_rel = kResidualTol;
  cfg.history_every = history_every;
  ScalarField start = default_initial_guess(g, c);
  if (corner_is_free(params, g)) start(g.corner()) = start(0, g.nodes_per_axis() - 1);
  DescentState s = run_descent(start, params, cfg, c);
  info("descent p=" + num(p) + " ell=" + std::to_string(ell) + " k=" + std::to_string(k) + " " +
       (stencil == Stencil::symmetric ? "symmetric" : "forward") + ": " +
       std::to_string(s.iteration) + " iterations, residual/r0 " +
       num(s.residual / s.initial_residual) + ", " + num(seconds_since(t0)) + " s");
  return {g, params, c, std::move(s)};
}

ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return ScalarField::sample(g, [&](const Point&) { return dist(rng); });
}

struct GridChoice {
  int n;
  int ell;
  int k;
};

// Every grid with N = 2 ell k + 1 <= 21.
std::vector<GridChoice> small_grids() {
  std::vector<GridChoice> out;
  for (int n : {1, 2}) {
    for (int ell = 2; ell <= 10; ++ell) {
      for (int k = 1; 2 * ell * k + 1 <= 21; ++k) out.push_back({n, ell, k});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion_1() {
  bool pass = true;
  double worst_c = 0.0;
  double worst_err_h = 0.0;
  for (int k : {5, 10, 20}) {
    const Grid g = make_grid(1, 2, k);
    const ConstraintSet c = canonical_constraints(g);
    const double c_clamp = sharp_constant_estimate(sample_extremal_1d(g), {4.0}, c);
    DescentConfig cfg;
    cfg.tau = 1e-6;
    cfg.adaptive = true;
    cfg.max_iters = 10000000;
    cfg.grad_tol_rel = kResidualTol;
    const DescentState s = run_descent(default_initial_guess(g, c), {4.0}, cfg, c);
    double err = 0.0;
    for (int i = 0; i < g.nodes_per_axis(); ++i) {
      err = std::max(err, std::abs(s.field(i) - exact_extremal_1d(g.coordinate(i))));
    }
    const double c_field = sharp_constant_estimate(s.field, {4.0}, c);
    info("k=" + std::to_string(k) + ": C* of sampled clamp " + text::format_double(c_clamp) +
         ", descent " + std::to_string(s.iteration) + " iterations (converged " +
         (s.converged ? "yes" : "no") + "), max error " + num(err) + " = " + num(err / g.spacing()) +
         "h, C* of computed field " + num(c_field));
    worst_c = std::max(worst_c, std::abs(c_clamp - exact_sharp_constant_1d()));
    worst_err_h = std::max(worst_err_h, err / g.spacing());
    pass = pass && s.converged && std::abs(c_clamp - 1.0) <= 1e-10 && err <= 2.0 * g.spacing();
  }
  criterion(1, "1D sharp constant and clamp extremal", pass,
            "|C*-1| " + num(worst_c) + " <= 1e-10, max error " + num(worst_err_h) + "h <= 2h");
}

void criterion_2() {
  std::mt19937_64 rng(20240601);
  const auto grids = small_grids();
  const double ps[] = {2.5, 3.0, 4.0, 6.0};
  double worst = 0.0;
  std::size_t components = 0;
  for (int t = 0; t < 100; ++t) {
    const GridChoice gc = grids[rng() % grids.size()];
    const Grid g = make_grid(gc.n, gc.ell, gc.k);
    const EnergyParams params{ps[t % 4], 0.0, t % 2 == 0 ? Stencil::forward : Stencil::symmetric};
    ScalarField f = random_field(g, rng);
    const GradientField grad = energy_gradient(f, params);
    double gmax = 0.0;
    for (double v : grad.values()) gmax = std::max(gmax, std::abs(v));
    for (std::size_t q = 0; q < g.size(); ++q) {
      const double v = f.values()[q];
      const double step = 1e-6;
      f.values()[q] = v + step;
      const double plus = discrete_energy(f, params);
      f.values()[q] = v - step;
      const double minus = discrete_energy(f, params);
      f.values()[q] = v;
      const double fd = (plus - minus) / (2.0 * step);
      const double g_q = grad.values()[q];
      const double rel = std::abs(g_q - fd) / std::max(std::abs(g_q), 1e-3 * gmax);
      worst = std::max(worst, rel);
      ++components;
    }
  }
  info(std::to_string(components) + " gradient components on 100 random fields");
  criterion(2, "analytic gradient against central differences", worst <= 1e-5,
            "worst relative error " + num(worst) + " <= 1e-5");
}

void criterion_3(const Solved& s, const Solved& forward) {
  const ScalarField& u = s.state.field;
  std::size_t increases = 0;
  const auto& hist = s.state.energy_history;
  for (std::size_t a = 1; a < hist.size(); ++a) {
    if (hist[a].value > hist[a - 1].value) ++increases;
  }
  const HolderReport h = holder_seminorm(u, s.params, s.constraints, {SeminormMode::exact});
  const double anti = check_reflection_antisymmetry(u);
  const double mirror = check_cylindrical_symmetry(u);
  const BoundsReport bounds = check_pointwise_bounds(u, s.constraints);
  const MidplaneReport mid = check_midplane_gradient_sign(u);
  const NodeIndex a = s.constraints.entries()[0].node;
  const NodeIndex b = s.constraints.entries()[1].node;
  const bool at_pins = (h.first == a && h.second == b) || (h.first == b && h.second == a);
  const bool converged = s.state.residual <= kResidualTol * s.state.initial_residual;

  info("energy history: " + std::to_string(hist.size()) + " samples, " + std::to_string(increases) +
       " increases");
  info("seminorm " + text::format_double(h.seminorm) + ", antisymmetry " + num(anti) + ", mirror " +
       num(mirror) + " (limit " + num(1e-3 * h.seminorm) + ")");
  info("bounds: global " + num(bounds.global_violation) + ", upper half " +
       num(bounds.upper_violation) + ", lower half " + num(bounds.lower_violation));
  info("midplane: " + std::to_string(mid.violations) + " of " + std::to_string(mid.nodes) +
       " nodes with du/dy <= 0, min du/dy " + num(mid.min_derivative));
  info("argmax " + std::to_string(h.first.i) + "," + std::to_string(h.first.j) + " / " +
       std::to_string(h.second.i) + "," + std::to_string(h.second.j));
  info("forward stencil, same grid: antisymmetry " + num(check_reflection_antisymmetry(forward.state.field)) +
       ", mirror " + num(check_cylindrical_symmetry(forward.state.field)) + " (informational)");

  const bool pass = converged && increases == 0 && anti <= 1e-3 * h.seminorm &&
                    mirror <= 1e-3 * h.seminorm && bounds.worst() <= 1e-6 && at_pins &&
                    mid.violations == 0;
  criterion(3, "desk-scale planar extremal (p=4, ell=4, k=8)", pass,
            std::string("converged ") + (converged ? "yes" : "no") + ", symmetry " +
                num(std::max(anti, mirror) / h.seminorm) + " x seminorm, bounds " +
                num(bounds.worst()) + ", argmax at pins " + (at_pins ? "yes" : "no") +
                ", midplane violations " + std::to_string(mid.violations));
}

void criterion_4(const std::vector<const Solved*>& runs) {
  bool pass = true;
  std::string detail;
  for (const Solved* s : runs) {
    const double p = s->params.p;
    const double e = singular_exponent(p, 2);
    const SingularFit fit = fit_singular_exponent(s->state.field, s->constraints, 0, s->params);
    const double rel = (fit.exponent - e) / e;

    const ScalarField synthetic = ScalarField::sample(s->grid, [&](const Point& x) {
      return 1.0 - std::pow(std::hypot(x[0], x[1] - 1.0), e);
    });
    const SingularFit cal = fit_singular_exponent(synthetic, s->constraints, 0, s->params);
    const double cal_err = std::abs(cal.exponent - e);

    info("p=" + num(p) + " (ell=" + std::to_string(s->grid.ell()) + ", k=" +
         std::to_string(s->grid.k()) + "): slope " + num(fit.exponent) + " vs " + num(e) +
         " (relative " + num(rel) + "), radii " + num(fit.radii.back()) + ".." +
         num(fit.radii.front()) + ", calibration slope error " + num(cal_err));

    const double c_star = sharp_constant_estimate(s->state.field, s->params, s->constraints);
    const double from_gamma = dirac_weight_from_gamma(fit.gamma, p, 2);
    const double from_c = dirac_weight_from_constant(c_star, 1.0, -1.0, 2.0, p, 2);
    info("  point mass: from gamma " + num(from_gamma) + ", from C* " + num(from_c) + ", ratio " +
         num(from_gamma / from_c) + " (informational)");

    pass = pass && std::abs(rel) <= 0.15 && cal_err <= 1e-3;
    if (!detail.empty()) detail += "; ";
    detail += "p=" + num(p) + " " + num(100.0 * rel) + "%, cal " + num(cal_err);
  }
  criterion(4, "singular exponent (p-n)/(p-1) within 15%, calibration within 1e-3", pass, detail);
}

void criterion_5(const Solved& s) {
  const std::vector<double> levels{0.2, 0.4, 0.6, 0.8};
  const QuasiconcavityReport r = check_quasiconcavity(s.state.field, levels);
  for (const auto& l : r.levels) {
    info("level " + num(l.level) + ": upper deficit " + num(l.upper) + " (" +
         std::to_string(l.upper_nodes) + " nodes), lower deficit " + num(l.lower) + " (" +
         std::to_string(l.lower_nodes) + " nodes)");
  }
  auto bump = [](double x, double y) { return std::exp(-2.0 * (x * x + y * y)); };
  const Grid g = make_grid(2, 3, 8);
  const ScalarField two = ScalarField::sample(g, [&](const Point& x) {
    return bump(x[0] - 1.2, x[1] - 1.0) + bump(x[0] + 1.2, x[1] - 1.0) -
           bump(x[0] - 1.2, x[1] + 1.0) - bump(x[0] + 1.2, x[1] + 1.0);
  });
  const double control = check_quasiconcavity(two, {0.5}).worst();
  info("two-bump control deficit at level 0.5: " + num(control));
  criterion(5, "quasiconcave level sets", r.worst() <= 1e-3 && control > 0.0,
            "worst deficit " + num(r.worst()) + " <= 1e-3, control " + num(control) + " > 0");
}

void criterion_6() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> radius(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  auto point = [&](std::size_t n, double R) {
    Vec v(n);
    double s = 0.0;
    for (double& c : v) {
      c = gauss(rng);
      s += c * c;
    }
    const double r = R * (2.0 + 18.0 * unit(rng)) / std::sqrt(s);
    for (double& c : v) c *= r;
    return v;
  };
  constexpr int kInstances = 100000;
  int ok = 0;
  int longest = 0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_clearance = std::numeric_limits<double>::infinity();
  for (int t = 0; t < kInstances; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t % 3);
    const double R = radius(rng);
    const Vec x = point(n, R);
    const Vec y = point(n, R);
    const Chain c = finite_chain(x, y, R);
    const ChainVerification v = verify_chain(c);
    if (v.ok()) ++ok;
    longest = std::max(longest, c.m());
    worst_excess = std::max(worst_excess, v.worst_distance_excess / detail::distance(x, y));
    worst_clearance = std::min(worst_clearance, v.worst_clearance / R);
  }
  const double th = theta(1.0);
  const double th_err = std::abs(th - std::acos(7.0 / 8.0));
  info(std::to_string(ok) + " of " + std::to_string(kInstances) + " chains verified, longest m = " +
       std::to_string(longest) + ", worst hop excess " + num(worst_excess) +
       " |x-y|, worst clearance " + num(worst_clearance) + " R");
  info("theta(1) = " + text::format_double(th) + ", pi/7 = " + text::format_double(std::numbers::pi / 7));
  criterion(6, "finite chain lemma", ok == kInstances && th_err <= 1e-12 && th > std::numbers::pi / 7,
            std::to_string(ok) + "/" + std::to_string(kInstances) + " verified, |theta(1)-acos(7/8)| " +
                num(th_err));
}

void criterion_7(const Solved& s, const std::vector<const Solved*>& ladder) {
  const ScalarField& w = s.state.field;
  const double c_star = sharp_constant_estimate(w, s.params, s.constraints);
  const FieldEvaluator canonical(w, corner_is_free(s.params, s.grid));
  const Grid& g = s.grid;
  const Point pins[2] = {g.point(s.constraints.entries()[0].node),
                         g.point(s.constraints.entries()[1].node)};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> where(-g.ell() + 0.5, g.ell() - 0.5);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 5; ++t) {
    Point centre{};
    do {
      centre = {where(rng), where(rng)};
    } while (std::hypot(centre[0] - pins[0][0], centre[1] - pins[0][1]) < 0.75 ||
             std::hypot(centre[0] - pins[1][0], centre[1] - pins[1][1]) < 0.75);
    const double a = amp(rng);
    ScalarField v = w;
    for (std::size_t q = 0; q < g.size(); ++q) {
      const Point x = g.point(g.node(q));
      const double r2 = (std::pow(x[0] - centre[0], 2) + std::pow(x[1] - centre[1], 2)) / 0.25;
      if (r2 < 1.0) v.values()[q] += a * std::pow(1.0 - r2, 3);
    }
    const StabilityReport r = check_stability(v, s.params, canonical, c_star);
    info("perturbation " + std::to_string(t) + " at (" + num(centre[0]) + ", " + num(centre[1]) +
         "), amplitude " + num(a) + ": slack/RHS " + num(r.relative_slack));
    worst = std::min(worst, r.relative_slack);
  }

  const Grid line = make_grid(1, 3, 20);
  const auto clamp = [](const Point& x) -> std::optional<double> { return exact_extremal_1d(x[0]); };
  double worst_line = std::numeric_limits<double>::infinity();
  int family = 0;
  for (double p : {1.5, 2.0, 4.0}) {
    for (double centre : {-2.0, -0.5, 0.3, 1.8}) {
      for (double a : {-0.3, 0.1, 0.6}) {
        const ScalarField v = ScalarField::sample(line, [&](const Point& x) {
          const double z = (x[0] - centre) / 0.6;
          return exact_extremal_1d(x[0]) + (std::abs(z) < 1.0 ? a * std::pow(1.0 - z * z, 3) : 0.0);
        });
        const StabilityReport r = check_stability(v, {p}, clamp, exact_sharp_constant_1d());
        worst_line = std::min(worst_line, r.relative_slack);
        ++family;
      }
    }
  }
  info("1D clamp-plus-bump family: " + std::to_string(family) + " fields, worst slack/RHS " +
       num(worst_line));

  // Sharp-constant witness over (ell, k): refine k at fixed ell and widen ell at fixed k.
  std::vector<double> cs;
  for (const Solved* r : ladder) {
    cs.push_back(sharp_constant_estimate(r->state.field, r->params, r->constraints));
    info("C* estimate ell=" + std::to_string(r->grid.ell()) + " k=" + std::to_string(r->grid.k()) +
         ": " + text::format_double(cs.back()));
  }
  // ladder order: (3,4), (3,8), (4,4), (4,8)
  const std::pair<int, int> steps[] = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  double worst_change = 0.0;
  for (auto [i, j] : steps) worst_change = std::max(worst_change, std::abs(cs[j] - cs[i]) / std::abs(cs[i]));

  const bool pass = worst >= -1e-3 && worst_line >= -1e-3 && worst_change < 0.05;
  criterion(7, "stability inequality and C* stabilization", pass,
            "worst slack/RHS " + num(std::min(worst, worst_line)) + " >= -1e-3, largest C* change " +
                num(100.0 * worst_change) + "% < 5%");
}

void criterion_8() {
  std::mt19937_64 rng(424242);
  const auto grids = small_grids();
  const double ps[] = {2.5, 3.0, 4.0, 6.0};
  int equal = 0;
  for (int t = 0; t < 20; ++t) {
    const GridChoice gc = grids[rng() % grids.size()];
    const Grid g = make_grid(gc.n, gc.ell, gc.k);
    const double p = ps[t % 4];
    const ScalarField f = random_field(g, rng);
    const HolderReport h = holder_seminorm(f, {p}, ConstraintSet{}, {SeminormMode::exact});

    const double hs = g.spacing();
    const double e = 1.0 - static_cast<double>(g.dim()) / p;
    double brute = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const NodeIndex ia = g.node(a);
      if (g.is_corner(ia)) continue;
      for (std::size_t b = 0; b < g.size(); ++b) {
        const NodeIndex ib = g.node(b);
        if (a == b || g.is_corner(ib)) continue;
        const double di = std::abs(ia.i - ib.i);
        const double dj = std::abs(ia.j - ib.j);
        brute = std::max(brute, std::abs(f.values()[a] - f.values()[b]) /
                                    std::pow(hs * std::sqrt(di * di + dj * dj), e));
      }
    }
    if (h.seminorm == brute) ++equal;
  }
  criterion(8, "exact seminorm equals brute-force scan", equal == 20,
            std::to_string(equal) + "/20 identical");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criterion_1();
    criterion_2();

    const Solved s48 = solve_planar(4, 8, 4.0, Stencil::symmetric, 1);
    const Solved f48 = solve_planar(4, 8, 4.0, Stencil::forward);
    criterion_3(s48, f48);

    const Solved p3 = solve_planar(3, 16, 3.0, Stencil::symmetric);
    const Solved p6 = solve_planar(3, 8, 6.0, Stencil::symmetric);
    criterion_4({&p3, &s48, &p6});
    criterion_5(s48);
    criterion_6();

    const Solved s34 = solve_planar(3, 4, 4.0, Stencil::symmetric);
    const Solved s38 = solve_planar(3, 8, 4.0, Stencil::symmetric);
    const Solved s44 = solve_planar(4, 4, 4.0, Stencil::symmetric);
    criterion_7(s48, {&s34, &s38, &s44, &s48});
    criterion_8();
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << std::endl;
    return 2;
  }
  std::cout << "acceptance " << (failures == 0 ? "PASS" : "FAIL") << ": " << failures
            << " criteria failed, " << num(seconds_since(t0)) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
