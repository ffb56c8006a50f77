#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "morrey/error.hpp"
#include "morrey/field.hpp"
#include "morrey/text.hpp"

namespace morrey {

/// On-disk layout (text, UTF-8):
///
///     morrey-field <version>
///     n <int>
///     ell <int>
///     k <int>
///     p <real>
///     iteration <int>
///     energy <real>
///     tau <real>                 (optional run state)
///     initial_residual <real>    (optional run state)
///     initial_energy <real>      (optional run state)
///     values <count>
///     <one value per line, row-major, 17 significant digits>
///
/// The n = 2 corner is written like any other value.
inline constexpr int kArchiveVersion = 1;
inline constexpr const char* kArchiveMagic = "morrey-field";

struct ArchiveHeader {
  int n = 2;
  int ell = 2;
  int k = 1;
  double p = 4.0;
  long long iteration = 0;
  double energy = 0.0;
  // Descent state needed to resume a run exactly; 0 when not recorded.
  double tau = 0.0;
  double initial_residual = 0.0;
  double initial_energy = 0.0;

  friend bool operator==(const ArchiveHeader&, const ArchiveHeader&) = default;
};

struct FieldArchive {
  int version = kArchiveVersion;
  ArchiveHeader header;
  ScalarField field;
};

inline void write_archive(std::ostream& os, const ArchiveHeader& h, const ScalarField& field) {
  const Grid& g = field.grid();
  detail::require(h.n == g.dim() && h.ell == g.ell() && h.k == g.k(),
                  "archive header does not describe the field's grid");
  os << kArchiveMagic << ' ' << kArchiveVersion << '\n';
  os << "n " << h.n << '\n' << "ell " << h.ell << '\n' << "k " << h.k << '\n';
  os << "p " << text::format_double(h.p) << '\n';
  os << "iteration " << h.iteration << '\n';
  os << "energy " << text::format_double(h.energy) << '\n';
  if (h.tau != 0.0) os << "tau " << text::format_double(h.tau) << '\n';
  if (h.initial_residual != 0.0)
    os << "initial_residual " << text::format_double(h.initial_residual) << '\n';
  if (h.initial_energy != 0.0)
    os << "initial_energy " << text::format_double(h.initial_energy) << '\n';
  os << "values " << field.size() << '\n';
  for (double v : field.values()) os << text::format_double(v) << '\n';
}

inline FieldArchive read_archive(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty field archive");
  {
    const auto parts = text::split(text::trim(line), ' ');
    int version = 0;
    if (parts.size() != 2 || parts[0] != kArchiveMagic)
      throw FormatError("not a field archive (bad magic line)");
    if (!text::parse_int(parts[1], version) || version != kArchiveVersion)
      throw FormatError("unsupported field archive version '" + parts[1] + "'");
  }

  FieldArchive out;
  ArchiveHeader& h = out.header;
  std::map<std::string, bool> seen;
  long long count = -1;
  while (std::getline(is, line)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    const auto sp = t.find(' ');
    if (sp == std::string_view::npos) throw FormatError("malformed header line: " + line);
    const std::string key(t.substr(0, sp));
    const auto val = text::trim(t.substr(sp + 1));
    bool ok = true;
    if (key == "n") ok = text::parse_int(val, h.n);
    else if (key == "ell") ok = text::parse_int(val, h.ell);
    else if (key == "k") ok = text::parse_int(val, h.k);
    else if (key == "p") ok = text::parse_double(val, h.p);
    else if (key == "iteration") ok = text::parse_int(val, h.iteration);
    else if (key == "energy") ok = text::parse_double(val, h.energy);
    else if (key == "tau") ok = text::parse_double(val, h.tau);
    else if (key == "initial_residual") ok = text::parse_double(val, h.initial_residual);
    else if (key == "initial_energy") ok = text::parse_double(val, h.initial_energy);
    else if (key == "values") ok = text::parse_int(val, count);
    else throw FormatError("unknown header key '" + key + "'");
    if (!ok) throw FormatError("unparseable value for header key '" + key + "'");
    seen[key] = true;
    if (key == "values") break;
  }
  for (const char* req : {"n", "ell", "k", "p", "iteration", "energy", "values"}) {
    if (!seen.count(req)) throw FormatError(std::string("missing header key '") + req + "'");
  }

  Grid grid;
  try {
    grid = make_grid(h.n, h.ell, h.k);
  } catch (const ValidationError& e) {
    throw FormatError(std::string("shape mismatch: invalid grid parameters in header: ") + e.what());
  }
  if (count != static_cast<long long>(grid.size())) {
    throw FormatError("shape mismatch: header describes " + std::to_string(grid.size()) +
                      " values but archive declares " + std::to_string(count));
  }
  std::vector<double> values;
  values.reserve(grid.size());
  while (values.size() < grid.size() && std::getline(is, line)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    double v = 0.0;
    if (!text::parse_double(t, v)) throw FormatError("unparseable field value: " + line);
    values.push_back(v);
  }
  if (values.size() != grid.size()) {
    throw FormatError("shape mismatch: archive ended after " + std::to_string(values.size()) +
                      " of " + std::to_string(grid.size()) + " values");
  }
  while (std::getline(is, line)) {
    if (!text::trim(line).empty()) throw FormatError("shape mismatch: trailing data after values");
  }
  out.field = ScalarField(grid, std::move(values));
  return out;
}

/// Writes `field` with header `h` to `path`.
inline FieldArchive save_field(const ScalarField& field, const std::filesystem::path& path,
                               ArchiveHeader h) {
  h.n = field.grid().dim();
  h.ell = field.grid().ell();
  h.k = field.grid().k();
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_archive(os, h, field);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
  return FieldArchive{kArchiveVersion, h, field};
}

inline FieldArchive load_archive(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_archive(is);
}

inline ScalarField load_field(const std::filesystem::path& path) {
  return load_archive(path).field;
}

}  // namespace morrey
