#pragma once

// Report records shared by validators and audits, with JSON-lines and table
// renderings. All numbers are printed with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "acsm/expression.hpp"

namespace acsm {

/// Identity records must pass for a run to succeed. Condition records carry
/// a truth value that is legitimately true or false (e.g. "K_phi = 0").
/// Value records carry a computed quantity in `value`.
enum class Role { Identity, Condition, Value };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Identity: return "identity";
    case Role::Condition: return "condition";
    case Role::Value: return "value";
  }
  return "identity";
}

struct Record {
  std::string check;
  Point point;
  double residual = 0.0;
  bool pass = true;
  std::optional<double> value;
  Role role = Role::Identity;
  std::string detail;
};

class Report {
 public:
  void add(Record r) { records_.push_back(std::move(r)); }

  /// Identity record that passes iff residual <= tol.
  void identity(std::string check, const Point& p, double residual, double tol, std::string detail = {}) {
    add({std::move(check), p, residual, residual <= tol, std::nullopt, Role::Identity, std::move(detail)});
  }
  void condition(std::string check, const Point& p, double residual, bool holds, std::string detail = {}) {
    add({std::move(check), p, residual, holds, std::nullopt, Role::Condition, std::move(detail)});
  }
  void value(std::string check, const Point& p, double v, double residual = 0.0, bool pass = true,
             std::string detail = {}) {
    add({std::move(check), p, residual, pass, v, Role::Value, std::move(detail)});
  }

  void append(const Report& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  }

  const std::vector<Record>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  /// True when every identity and value record passed.
  bool ok() const {
    return std::all_of(records_.begin(), records_.end(),
                       [](const Record& r) { return r.role == Role::Condition || r.pass; });
  }

  std::vector<const Record*> find(const std::string& check) const {
    std::vector<const Record*> out;
    for (const auto& r : records_)
      if (r.check == check) out.push_back(&r);
    return out;
  }

  /// Largest residual per check name, with the conjunction of pass flags.
  std::map<std::string, std::pair<double, bool>> worst_by_check() const {
    std::map<std::string, std::pair<double, bool>> out;
    for (const auto& r : records_) {
      auto [it, inserted] = out.try_emplace(r.check, r.residual, r.pass);
      if (!inserted) {
        it->second.first = std::max(it->second.first, r.residual);
        it->second.second = it->second.second && r.pass;
      }
    }
    return out;
  }

 private:
  std::vector<Record> records_;
};

namespace detail {

inline std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace detail

/// One JSON object per line: {check, point, residual, pass, value, role, detail}.
inline void write_json_lines(std::ostream& os, const Report& report) {
  for (const auto& r : report.records()) {
    os << "{\"check\":" << detail::json_string(r.check) << ",\"point\":[";
    for (std::size_t i = 0; i < r.point.size(); ++i) {
      if (i) os << ',';
      os << detail::json_number(r.point[i]);
    }
    os << "],\"residual\":" << detail::json_number(r.residual) << ",\"pass\":" << (r.pass ? "true" : "false")
       << ",\"value\":" << (r.value ? detail::json_number(*r.value) : std::string("null"))
       << ",\"role\":\"" << role_name(r.role) << "\",\"detail\":" << detail::json_string(r.detail) << "}\n";
  }
}

/// Human-readable table built from the same records.
inline void write_table(std::ostream& os, const Report& report) {
  std::size_t width = 5;
  for (const auto& r : report.records()) width = std::max(width, r.check.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  os << pad("check", width) << "  " << pad("role", 9) << "  " << pad("pass", 5) << "  "
     << pad("residual", 24) << "  " << pad("value", 24) << "  point\n";
  for (const auto& r : report.records()) {
    std::string pt = "(";
    for (std::size_t i = 0; i < r.point.size(); ++i) {
      if (i) pt += ", ";
      pt += detail::json_number(r.point[i]);
    }
    pt += ")";
    os << pad(r.check, width) << "  " << pad(role_name(r.role), 9) << "  " << pad(r.pass ? "yes" : "NO", 5)
       << "  " << pad(detail::json_number(r.residual), 24) << "  "
       << pad(r.value ? detail::json_number(*r.value) : std::string("-"), 24) << "  " << pt;
    if (!r.detail.empty()) os << "  " << r.detail;
    os << '\n';
  }
}

}  // namespace acsm
