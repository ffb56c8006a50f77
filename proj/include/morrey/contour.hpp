#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/field.hpp"
#include "morrey/text.hpp"

namespace morrey {

struct Polyline {
  std::vector<Point> points;
  bool closed = false;
};

struct ContourLevel {
  double level = 0.0;
  std::vector<Polyline> lines;
};

struct ContourOptions {
  /// Include the top-right cell, whose corner node is unused by the forward
  /// stencil. Enable for fields where every node carries a value.
  bool use_corner_cell = false;
};

namespace detail {

// Edge key: horizontal edges (i,j)-(i+1,j) and vertical edges (i,j)-(i,j+1).
inline std::int64_t edge_key(int i, int j, bool vertical, int n) {
  return (static_cast<std::int64_t>(i) * n + j) * 2 + (vertical ? 1 : 0);
}

struct Segment {
  std::int64_t a;
  std::int64_t b;
};

inline Point edge_point(const ScalarField& f, std::int64_t key, double t) {
  const Grid& g = f.grid();
  const int n = g.nodes_per_axis();
  const bool vertical = key % 2 == 1;
  const std::int64_t node = key / 2;
  const int i = static_cast<int>(node / n);
  const int j = static_cast<int>(node % n);
  const int i2 = vertical ? i : i + 1;
  const int j2 = vertical ? j + 1 : j;
  const double v1 = f(i, j);
  const double v2 = f(i2, j2);
  const double s = v1 == v2 ? 0.5 : (t - v1) / (v2 - v1);
  const Point p1 = g.point({i, j});
  const Point p2 = g.point({i2, j2});
  return {p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1])};
}

// Marching-squares segments of one cell, with the centre average resolving
// saddles.
inline void cell_segments(const ScalarField& f, int i, int j, double t, int n,
                          std::vector<Segment>& out) {
  const double v[4] = {f(i, j), f(i + 1, j), f(i + 1, j + 1), f(i, j + 1)};
  int mask = 0;
  for (int c = 0; c < 4; ++c) {
    if (v[c] >= t) mask |= 1 << c;
  }
  if (mask == 0 || mask == 15) return;
  // Edges: 0 bottom (i,j)-(i+1,j), 1 right (i+1,j)-(i+1,j+1),
  //        2 top (i,j+1)-(i+1,j+1), 3 left (i,j)-(i,j+1).
  const std::int64_t e[4] = {edge_key(i, j, false, n), edge_key(i + 1, j, true, n),
                             edge_key(i, j + 1, false, n), edge_key(i, j, true, n)};
  auto seg = [&](int a, int b) { out.push_back({e[a], e[b]}); };
  const bool centre_high = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= t;
  switch (mask) {
    case 1: case 14: seg(3, 0); break;
    case 2: case 13: seg(0, 1); break;
    case 3: case 12: seg(3, 1); break;
    case 4: case 11: seg(1, 2); break;
    case 6: case 9: seg(0, 2); break;
    case 7: case 8: seg(3, 2); break;
    case 5:
      if (centre_high) { seg(3, 2); seg(0, 1); } else { seg(3, 0); seg(1, 2); }
      break;
    case 10:
      if (centre_high) { seg(3, 0); seg(1, 2); } else { seg(3, 2); seg(0, 1); }
      break;
    default: break;
  }
}

// Joins segments sharing an edge key into maximal polylines.
inline std::vector<std::vector<std::int64_t>> chain_segments(const std::vector<Segment>& segs,
                                                             std::vector<bool>& closed) {
  std::map<std::int64_t, std::vector<std::size_t>> at;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    at[segs[s].a].push_back(s);
    at[segs[s].b].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_from = [&](std::int64_t key) -> std::ptrdiff_t {
    for (std::size_t s : at[key]) {
      if (!used[s]) return static_cast<std::ptrdiff_t>(s);
    }
    return -1;
  };
  auto extend = [&](std::vector<std::int64_t>& line) {
    while (true) {
      const auto s = next_from(line.back());
      if (s < 0) return;
      used[s] = true;
      line.push_back(segs[s].a == line.back() ? segs[s].b : segs[s].a);
    }
  };
  std::vector<std::vector<std::int64_t>> lines;
  // Open lines first: start at keys touched by a single segment.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t s0 = 0; s0 < segs.size(); ++s0) {
      if (used[s0]) continue;
      std::int64_t start = segs[s0].a;
      std::int64_t other = segs[s0].b;
      if (pass == 0) {
        if (at[start].size() != 1) std::swap(start, other);
        if (at[start].size() != 1) continue;
      }
      used[s0] = true;
      std::vector<std::int64_t> line{start, other};
      extend(line);
      const bool loop = line.size() > 2 && line.front() == line.back();
      if (loop) line.pop_back();
      closed.push_back(loop);
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

}  // namespace detail

/// Marching-squares polylines of `field` at each level, in level order.
/// A level outside the field's range yields an empty entry.
inline std::vector<ContourLevel> extract_contours(const ScalarField& field,
                                                  const std::vector<double>& levels,
                                                  const ContourOptions& options = {}) {
  const Grid& g = field.grid();
  if (g.dim() != 2) throw ValidationError("contours need a planar field");
  const int n = g.nodes_per_axis();
  std::vector<ContourLevel> out;
  for (double t : levels) {
    detail::require(std::isfinite(t), "contour levels must be finite");
    std::vector<detail::Segment> segs;
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        if (!options.use_corner_cell && i + 2 == n && j + 2 == n) continue;
        detail::cell_segments(field, i, j, t, n, segs);
      }
    }
    std::vector<bool> closed;
    const auto keyed = detail::chain_segments(segs, closed);
    ContourLevel lvl;
    lvl.level = t;
    for (std::size_t l = 0; l < keyed.size(); ++l) {
      Polyline pl;
      pl.closed = closed[l];
      for (auto key : keyed[l]) pl.points.push_back(detail::edge_point(field, key, t));
      lvl.lines.push_back(std::move(pl));
    }
    out.push_back(std::move(lvl));
  }
  return out;
}

/// Text layout:
///
///     contours <level count>
///     level <t> polylines <k>
///     polyline <points> open|closed
///     <x> <y>            (one line per point)
inline void write_contours(std::ostream& os, const std::vector<ContourLevel>& contours) {
  os << "contours " << contours.size() << '\n';
  for (const auto& lvl : contours) {
    os << "level " << text::format_double(lvl.level) << " polylines " << lvl.lines.size() << '\n';
    for (const auto& pl : lvl.lines) {
      os << "polyline " << pl.points.size() << (pl.closed ? " closed" : " open") << '\n';
      for (const auto& p : pl.points) {
        os << text::format_double(p[0]) << ' ' << text::format_double(p[1]) << '\n';
      }
    }
  }
}

/// extract_contours written to `path`.
inline std::vector<ContourLevel> emit_contours(const ScalarField& field,
                                               const std::vector<double>& levels,
                                               const std::filesystem::path& path,
                                               const ContourOptions& options = {}) {
  auto contours = extract_contours(field, levels, options);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_contours(os, contours);
  if (!os.flush()) throw IoError("write to '" + path.string() + "' failed");
  return contours;
}

}  // namespace morrey
