#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/descent.hpp"
#include "morrey/energy.hpp"
#include "morrey/error.hpp"
#include "morrey/field.hpp"
#include "morrey/holder.hpp"
#include "morrey/quasiconcavity.hpp"
#include "morrey/text.hpp"

namespace morrey {

/// Analyses run after descent, in report order.
inline const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names{"holder",   "symmetry", "bounds",
                                              "quasiconcavity", "midplane", "gradient",
                                              "singular", "gap"};
  return names;
}

/// A pinned value at a grid point given in coordinates.
struct PinSpec {
  Point x{};
  double value = 0.0;
  friend bool operator==(const PinSpec&, const PinSpec&) = default;
};

struct ExperimentConfig {
  int n = 2;
  int ell = 6;
  int k = 10;
  double p = 4.0;
  double smoothing_eps = 0.0;
  Stencil stencil = Stencil::forward;
  /// Empty means the canonical pins.
  std::vector<PinSpec> pins;

  double tau = 1e-10;
  long long max_iters = 100000000;
  double grad_tol = 0.0;
  double grad_tol_rel = 1e-8;
  bool adaptive = false;
  long long checkpoint_every = 0;
  long long history_every = 1000;

  std::vector<std::string> analysis = analysis_names();
  std::vector<double> levels{0.2, 0.4, 0.6, 0.8};
  std::vector<double> contour_levels{-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8};
  SeminormMode seminorm = SeminormMode::automatic;
  long long seminorm_samples = 1000000;
  double gradient_threshold = 0.0;

  std::filesystem::path out = "out";
  /// Field archive to resume from; empty starts from the initial guess.
  std::filesystem::path resume;
  std::uint64_t seed = 0;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline const char* stencil_name(Stencil s) { return s == Stencil::forward ? "forward" : "symmetric"; }

inline const char* mode_name(SeminormMode m) {
  switch (m) {
    case SeminormMode::exact: return "exact";
    case SeminormMode::sampled: return "sampled";
    default: return "automatic";
  }
}

inline std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    if (a) s += ',';
    s += text::format_double(xs[a]);
  }
  return s;
}

inline std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    if (a) s += ',';
    s += xs[a];
  }
  return s;
}

inline std::string pins_text(const std::vector<PinSpec>& pins, int n) {
  if (pins.empty()) return "canonical";
  std::string s;
  for (std::size_t a = 0; a < pins.size(); ++a) {
    if (a) s += ';';
    s += text::format_double(pins[a].x[0]);
    if (n == 2) s += ',' + text::format_double(pins[a].x[1]);
    s += ':' + text::format_double(pins[a].value);
  }
  return s;
}

[[noreturn]] inline void bad_value(const std::string& key, const std::string& value) {
  throw ValidationError("invalid value '" + value + "' for '" + key + "'");
}

inline double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!text::parse_double(value, out) || !std::isfinite(out)) bad_value(key, value);
  return out;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& value) {
  Int out{};
  if (!text::parse_int(value, out)) bad_value(key, value);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  bad_value(key, value);
}

inline std::vector<double> parse_reals(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (text::trim(value).empty()) return out;
  for (const auto& part : text::split(value, ',')) out.push_back(parse_real(key, part));
  return out;
}

inline std::vector<std::string> parse_analysis(const std::string& value) {
  const std::string v(text::trim(value));
  if (v == "all") return analysis_names();
  if (v.empty() || v == "none") return {};
  std::set<std::string> wanted;
  for (const auto& part : text::split(v, ',')) {
    const auto& names = analysis_names();
    if (std::find(names.begin(), names.end(), part) == names.end()) {
      throw ValidationError("unknown analysis '" + part + "'");
    }
    wanted.insert(part);
  }
  std::vector<std::string> out;
  for (const auto& name : analysis_names()) {
    if (wanted.count(name)) out.push_back(name);
  }
  return out;
}

inline std::vector<PinSpec> parse_pins(const std::string& value) {
  const std::string v(text::trim(value));
  if (v == "canonical") return {};
  std::vector<PinSpec> pins;
  for (const auto& entry : text::split(v, ';')) {
    const auto colon = entry.find(':');
    if (colon == std::string::npos) bad_value("constraints", entry);
    const auto coords = text::split(std::string_view(entry).substr(0, colon), ',');
    if (coords.empty() || coords.size() > 2) bad_value("constraints", entry);
    PinSpec pin;
    for (std::size_t a = 0; a < coords.size(); ++a) pin.x[a] = parse_real("constraints", coords[a]);
    pin.value = parse_real("constraints", std::string(text::trim(entry.substr(colon + 1))));
    pins.push_back(pin);
  }
  return pins;
}

inline void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "n") c.n = parse_integer<int>(key, value);
  else if (key == "ell") c.ell = parse_integer<int>(key, value);
  else if (key == "k") c.k = parse_integer<int>(key, value);
  else if (key == "p") c.p = parse_real(key, value);
  else if (key == "smoothing_eps") c.smoothing_eps = parse_real(key, value);
  else if (key == "stencil") {
    if (value == "forward") c.stencil = Stencil::forward;
    else if (value == "symmetric") c.stencil = Stencil::symmetric;
    else bad_value(key, value);
  }
  else if (key == "constraints") c.pins = parse_pins(value);
  else if (key == "tau") c.tau = parse_real(key, value);
  else if (key == "max_iters") c.max_iters = parse_integer<long long>(key, value);
  else if (key == "grad_tol") c.grad_tol = parse_real(key, value);
  else if (key == "grad_tol_rel") c.grad_tol_rel = parse_real(key, value);
  else if (key == "adaptive") c.adaptive = parse_bool(key, value);
  else if (key == "checkpoint_every") c.checkpoint_every = parse_integer<long long>(key, value);
  else if (key == "history_every") c.history_every = parse_integer<long long>(key, value);
  else if (key == "analysis") c.analysis = parse_analysis(value);
  else if (key == "levels") c.levels = parse_reals(key, value);
  else if (key == "contour_levels") c.contour_levels = parse_reals(key, value);
  else if (key == "seminorm") {
    if (value == "exact") c.seminorm = SeminormMode::exact;
    else if (value == "sampled") c.seminorm = SeminormMode::sampled;
    else if (value == "automatic") c.seminorm = SeminormMode::automatic;
    else bad_value(key, value);
  }
  else if (key == "seminorm_samples") c.seminorm_samples = parse_integer<long long>(key, value);
  else if (key == "gradient_threshold") c.gradient_threshold = parse_real(key, value);
  else if (key == "out") c.out = value;
  else if (key == "resume") c.resume = value;
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
  else throw ValidationError("unknown config key '" + key + "'");
}

}  // namespace detail

/// Every key with its serialized value, in a fixed order.
inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  return {
      {"n", std::to_string(c.n)},
      {"ell", std::to_string(c.ell)},
      {"k", std::to_string(c.k)},
      {"p", text::format_double(c.p)},
      {"smoothing_eps", text::format_double(c.smoothing_eps)},
      {"stencil", detail::stencil_name(c.stencil)},
      {"constraints", detail::pins_text(c.pins, c.n)},
      {"tau", text::format_double(c.tau)},
      {"max_iters", std::to_string(c.max_iters)},
      {"grad_tol", text::format_double(c.grad_tol)},
      {"grad_tol_rel", text::format_double(c.grad_tol_rel)},
      {"adaptive", c.adaptive ? "true" : "false"},
      {"checkpoint_every", std::to_string(c.checkpoint_every)},
      {"history_every", std::to_string(c.history_every)},
      {"analysis", c.analysis.empty() ? "none" : detail::join(c.analysis)},
      {"levels", detail::join(c.levels)},
      {"contour_levels", detail::join(c.contour_levels)},
      {"seminorm", detail::mode_name(c.seminorm)},
      {"seminorm_samples", std::to_string(c.seminorm_samples)},
      {"gradient_threshold", text::format_double(c.gradient_threshold)},
      {"out", c.out.string()},
      {"resume", c.resume.string()},
      {"seed", std::to_string(c.seed)},
  };
}

/// Flat `key = value` lines.
inline std::string serialize_config(const ExperimentConfig& c) {
  std::string s;
  for (const auto& [k, v] : config_entries(c)) s += k + " = " + v + '\n';
  return s;
}

/// Applies `key = value` lines on top of `base`. Blank lines and lines starting
/// with '#' are ignored; unknown or repeated keys are rejected.
inline ExperimentConfig parse_config(std::string_view textual, ExperimentConfig base = {}) {
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& raw : text::split(textual, '\n')) {
    ++line_no;
    const std::string line(text::trim(raw));
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(text::trim(std::string_view(line).substr(0, eq)));
    const std::string value(text::trim(std::string_view(line).substr(eq + 1)));
    if (!seen.insert(key).second) throw ValidationError("config key '" + key + "' repeated");
    detail::apply_key(base, key, value);
  }
  return base;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

inline EnergyParams energy_params(const ExperimentConfig& c) {
  return {c.p, c.smoothing_eps, c.stencil};
}

inline DescentConfig descent_config(const ExperimentConfig& c) {
  DescentConfig d;
  d.tau = c.tau;
  d.max_iters = c.max_iters;
  d.grad_tol = c.grad_tol;
  d.grad_tol_rel = c.grad_tol_rel;
  d.adaptive = c.adaptive;
  d.checkpoint_every = c.checkpoint_every;
  d.checkpoint_dir = c.out;
  d.history_every = c.history_every;
  d.seed = c.seed;
  return d;
}

/// Pins of `c` as grid nodes. Each pin must sit on a node.
inline ConstraintSet make_constraints(const ExperimentConfig& c, const Grid& grid) {
  if (c.pins.empty()) return canonical_constraints(grid);
  std::vector<Constraint> entries;
  const double h = grid.spacing();
  for (const auto& pin : c.pins) {
    detail::require(grid.inside(pin.x), "pin outside the grid domain");
    NodeIndex idx{};
    for (int a = 0; a < grid.dim(); ++a) {
      const double s = (pin.x[a] + grid.ell()) / h;
      const double r = std::round(s);
      detail::require(std::abs(s - r) <= 1e-9 * std::max(1.0, std::abs(s)),
                      "pin " + text::format_short(pin.x[a]) + " is not on a grid node");
      (a == 0 ? idx.i : idx.j) = static_cast<int>(r);
    }
    entries.push_back({idx, pin.value});
  }
  return ConstraintSet(grid, std::move(entries));
}

/// Throws ValidationError when any parameter is out of range.
inline void validate(const ExperimentConfig& c) {
  const Grid grid = make_grid(c.n, c.ell, c.k);
  validate(energy_params(c), grid);
  detail::require_gradient_regular(energy_params(c));
  detail::validate(descent_config(c));
  const ConstraintSet cs = make_constraints(c, grid);
  detail::require(cs.size() >= 2, "at least two pins are required");
  for (double t : c.levels) {
    detail::require(t >= kMinQuasiconcavityLevel && t <= kMaxQuasiconcavityLevel,
                    "quasiconcavity levels must lie in [0.1, 0.9]");
  }
  for (double t : c.contour_levels) detail::require(std::isfinite(t), "contour levels must be finite");
  detail::require(c.seminorm_samples > 0, "seminorm_samples must be positive");
  detail::require(c.gradient_threshold >= 0.0, "gradient_threshold must be nonnegative");
  detail::require(!c.out.empty(), "output directory must be set");
}

}  // namespace morrey
