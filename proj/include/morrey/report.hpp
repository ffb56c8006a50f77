#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "morrey/error.hpp"
#include "morrey/properties.hpp"
#include "morrey/text.hpp"

namespace morrey {

/// Named measurements and checks from one analysis.
class Report {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void set(const std::string& key, const char* value) { values_[key] = value; }
  void set(const std::string& key, double value) { values_[key] = text::format_double(value); }
  void set(const std::string& key, long long value) { values_[key] = std::to_string(value); }
  void set(const std::string& key, int value) { values_[key] = std::to_string(value); }
  void set(const std::string& key, bool value) { values_[key] = value ? "true" : "false"; }

  void add(const PropertyCheck& check) { checks_.push_back(check); }
  void add(const PropertyReport& report) {
    checks_.insert(checks_.end(), report.checks.begin(), report.checks.end());
  }

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::vector<PropertyCheck>& checks() const { return checks_; }
  bool empty() const { return values_.empty() && checks_.empty(); }

 private:
  std::map<std::string, std::string> values_;
  std::vector<PropertyCheck> checks_;
};

/// Consolidated key-value text:
///
///     config.<key> = <value>
///     value.<key> = <value>
///     check.<name> = <value> tol=<tolerance> pass|fail
///     summary.checks = <count>
///     summary.failed = <count>
///     summary.verdict = pass|fail
///
/// Keys are sorted within each block. With no reports only the config block is
/// written. Duplicate keys across reports are rejected.
inline std::string emit_report(const std::map<std::string, std::string>& config,
                               const std::vector<Report>& reports = {}) {
  std::ostringstream os;
  for (const auto& [k, v] : config) os << "config." << k << " = " << v << '\n';
  std::map<std::string, std::string> values;
  std::map<std::string, PropertyCheck> checks;
  for (const auto& r : reports) {
    for (const auto& [k, v] : r.values()) {
      if (!values.emplace(k, v).second) throw ValidationError("duplicate report key '" + k + "'");
    }
    for (const auto& c : r.checks()) {
      if (!checks.emplace(c.name, c).second) {
        throw ValidationError("duplicate check '" + c.name + "'");
      }
    }
  }
  if (values.empty() && checks.empty()) return os.str();
  for (const auto& [k, v] : values) os << "value." << k << " = " << v << '\n';
  std::size_t failed = 0;
  for (const auto& [name, c] : checks) {
    os << "check." << name << " = " << text::format_double(c.value)
       << " tol=" << text::format_double(c.tolerance) << (c.pass ? " pass" : " fail") << '\n';
    if (!c.pass) ++failed;
  }
  os << "summary.checks = " << checks.size() << '\n';
  os << "summary.failed = " << failed << '\n';
  os << "summary.verdict = " << (failed == 0 ? "pass" : "fail") << '\n';
  return os.str();
}

}  // namespace morrey
