#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "morrey/morrey.hpp"

namespace morrey::fixtures {

/// Uniform values in [lo, hi] at every node (the n = 2 corner stays 0).
inline ScalarField random_field(const Grid& g, std::uint64_t seed, double lo = -1.0,
                                double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  return ScalarField::sample(g, [&](const Point&) { return dist(rng); });
}

/// Central difference of discrete_energy in node q.
inline double fd_component(ScalarField f, const EnergyParams& params, std::size_t q, double step) {
  const double v = f.values()[q];
  f.values()[q] = v + step;
  const double plus = discrete_energy(f, params);
  f.values()[q] = v - step;
  const double minus = discrete_energy(f, params);
  return (plus - minus) / (2.0 * step);
}

/// Brute-force Hölder seminorm over every pair of distinct nodes (corner
/// excluded), evaluated as |u(a) - u(b)| / pow(h sqrt(di^2 + dj^2), 1 - n/p).
inline double brute_force_seminorm(const ScalarField& f, double p) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  const double e = 1.0 - static_cast<double>(g.dim()) / p;
  double best = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const NodeIndex ia = g.node(a);
    if (g.is_corner(ia)) continue;
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (a == b) continue;
      const NodeIndex ib = g.node(b);
      if (g.is_corner(ib)) continue;
      const double di = std::abs(ia.i - ib.i);
      const double dj = std::abs(ia.j - ib.j);
      const double r = std::abs(f.values()[a] - f.values()[b]) / std::pow(h * std::sqrt(di * di + dj * dj), e);
      best = std::max(best, r);
    }
  }
  return best;
}

/// Fresh empty directory under the system temp directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("morrey_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace morrey::fixtures
