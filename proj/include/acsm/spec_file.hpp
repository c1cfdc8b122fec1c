#pragma once

// Textual manifold descriptions: every field is an expression string over the
// coordinate names. Zoo entries are built from these, and they round-trip
// through a JSON spec file.
//
//   {
//     "name": "example",
//     "dimension": 3,
//     "coordinates": ["x", "y", "z"],
//     "box": {"lo": [-1, -1, -1], "hi": [1, 1, 1], "grid": [3, 3, 3]},
//     "metric": [["1"], ["0", "1"], ["0", "0", "1"]],        lower triangle
//     "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
//     "xi": ["0", "0", "1"],
//     "eta": ["0", "0", "1"],                                 optional
//     "difference_tensor": [{"upper": "z", "lower": ["z", "z"], "expr": "1"}],
//     "tolerance": 1e-9                                       optional
//   }
//
// "connection" may replace "difference_tensor"; exactly one must be present.
// Sparse entries mirror to the swapped lower pair unless that pair is listed.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "acsm/statistical.hpp"

namespace acsm {

struct TensorEntry {
  std::size_t upper = 0;
  std::size_t lower_a = 0;
  std::size_t lower_b = 0;
  std::string expr;
};

struct ManifoldDescription {
  enum class Kind { DifferenceTensor, Connection };

  std::string name;
  std::vector<std::string> coordinates;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> grid;
  std::vector<std::vector<std::string>> metric;  // lower triangle, row i has i+1 entries
  std::vector<std::vector<std::string>> phi;     // φ^i_j at [i][j]
  std::vector<std::string> xi;
  std::optional<std::vector<std::string>> eta;
  Kind kind = Kind::DifferenceTensor;
  std::vector<TensorEntry> entries;
  std::optional<double> tolerance;

  std::size_t dim() const noexcept { return coordinates.size(); }
};

namespace detail {

inline std::vector<ScalarField> parse_list(const std::vector<std::string>& exprs,
                                           const std::vector<std::string>& names, const std::string& where) {
  std::vector<ScalarField> out;
  out.reserve(exprs.size());
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    try {
      out.push_back(parse_expression(exprs[i], names));
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.position(), e.expected() + " in " + where + "[" + std::to_string(i) + "] '" + exprs[i] + "'");
    }
  }
  return out;
}

inline Array3Field build_array3(const ManifoldDescription& d) {
  const std::size_t n = d.dim();
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::string> explicit_entries;
  for (const TensorEntry& e : d.entries) {
    if (e.upper >= n || e.lower_a >= n || e.lower_b >= n) throw SpecError("tensor entry index out of range");
    if (!explicit_entries.emplace(std::tuple{e.upper, e.lower_a, e.lower_b}, e.expr).second) {
      throw SpecError("tensor entry listed twice");
    }
  }
  std::vector<std::string> flat(n * n * n, "0");
  for (const auto& [idx, expr] : explicit_entries) {
    const auto [i, a, b] = idx;
    flat[(i * n + a) * n + b] = expr;
    if (!explicit_entries.count({i, b, a})) flat[(i * n + b) * n + a] = expr;
  }
  return Array3Field(n, parse_list(flat, d.coordinates, "tensor"));
}

}  // namespace detail

/// Parses every expression and assembles the chart. Throws SpecError on shape
/// problems, SyntaxError / UnknownIdentifier on bad expressions, and
/// TorsionPresent for an asymmetric connection table.
inline ChartManifold build_manifold(const ManifoldDescription& d) {
  const std::size_t n = d.dim();
  if (n < 3 || n % 2 == 0) throw SpecError("dimension must be odd and >= 3, got " + std::to_string(n));
  check_coordinate_names(d.coordinates);
  if (d.lo.size() != n || d.hi.size() != n) throw SpecError("box needs lo and hi for every coordinate");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d.lo[i] <= d.hi[i])) throw SpecError("box lo exceeds hi for coordinate " + d.coordinates[i]);
  }
  if (!d.grid.empty() && d.grid.size() != n) throw SpecError("box grid needs one count per coordinate");
  if (d.metric.size() != n) throw SpecError("metric needs one row per coordinate");
  if (d.phi.size() != n) throw SpecError("phi needs one row per coordinate");
  if (d.xi.size() != n) throw SpecError("xi needs one entry per coordinate");
  if (d.eta && d.eta->size() != n) throw SpecError("eta needs one entry per coordinate");
  if (d.tolerance && !(*d.tolerance > 0.0)) throw SpecError("tolerance must be positive");

  ChartManifold m;
  m.name = d.name;
  m.coords = d.coordinates;
  m.box = {d.lo, d.hi, d.grid.empty() ? std::vector<std::size_t>(n, 3) : d.grid};
  std::vector<std::vector<ScalarField>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.metric[i].size() != i + 1) {
      throw SpecError("metric row " + std::to_string(i) + " must hold " + std::to_string(i + 1) + " entries");
    }
    rows.push_back(detail::parse_list(d.metric[i], d.coordinates, "metric row " + std::to_string(i)));
  }
  m.metric = MetricField::from_lower_triangle(rows);
  std::vector<ScalarField> phi;
  for (std::size_t i = 0; i < n; ++i) {
    if (d.phi[i].size() != n) throw SpecError("phi row " + std::to_string(i) + " must hold dim entries");
    auto row = detail::parse_list(d.phi[i], d.coordinates, "phi row " + std::to_string(i));
    phi.insert(phi.end(), row.begin(), row.end());
  }
  m.phi = MatrixField(n, std::move(phi));
  m.xi = VectorField(detail::parse_list(d.xi, d.coordinates, "xi"));
  if (d.eta) m.eta = VectorField(detail::parse_list(*d.eta, d.coordinates, "eta"));
  Array3Field table = detail::build_array3(d);
  if (d.kind == ManifoldDescription::Kind::Connection) {
    const auto points = grid_points(m.box);
    m.k = difference_from_connection(table, m.metric, points);
  } else {
    m.k = DifferenceTensorField::from_components(std::move(table));
  }
  if (d.tolerance) m.tolerance = *d.tolerance;
  return m;
}

namespace detail {

inline std::size_t coordinate_index(const nlohmann::json& j, const std::vector<std::string>& names) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == s) return i;
    throw UnknownIdentifier(s);
  }
  throw SpecError("tensor index must be a coordinate name or non-negative integer");
}

inline std::string expr_string(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return format_number(j.get<double>());
  throw SpecError("expression fields must be strings or numbers");
}

template <typename Fn>
auto json_context(const std::string& what, Fn fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(what + ": " + e.what());
  }
}

}  // namespace detail

inline ManifoldDescription description_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec file must hold a JSON object");
  ManifoldDescription d;
  d.name = j.value("name", std::string("unnamed"));
  d.coordinates = detail::json_context("coordinates", [&] { return j.at("coordinates").get<std::vector<std::string>>(); });
  const std::size_t n = d.coordinates.size();
  if (j.contains("dimension") && j.at("dimension") != n) {
    throw SpecError("dimension does not match the number of coordinates");
  }
  detail::json_context("box", [&] {
    const auto& box = j.at("box");
    d.lo = box.at("lo").get<std::vector<double>>();
    d.hi = box.at("hi").get<std::vector<double>>();
    if (box.contains("grid")) {
      if (box.at("grid").is_array()) {
        d.grid = box.at("grid").get<std::vector<std::size_t>>();
      } else {
        d.grid.assign(n, box.at("grid").get<std::size_t>());
      }
    }
    return 0;
  });
  auto strings = [](const nlohmann::json& arr) {
    if (!arr.is_array()) throw SpecError("expected an array of expressions");
    std::vector<std::string> out;
    for (const auto& e : arr) out.push_back(detail::expr_string(e));
    return out;
  };
  auto rows = [&](const char* key) {
    return detail::json_context(key, [&] {
      std::vector<std::vector<std::string>> out;
      const auto& arr = j.at(key);
      if (!arr.is_array()) throw SpecError(std::string(key) + " must be an array of rows");
      for (const auto& row : arr) out.push_back(strings(row));
      return out;
    });
  };
  d.metric = rows("metric");
  d.phi = rows("phi");
  d.xi = detail::json_context("xi", [&] { return strings(j.at("xi")); });
  if (j.contains("eta") && !j.at("eta").is_null()) d.eta = strings(j.at("eta"));

  const bool has_k = j.contains("difference_tensor");
  const bool has_conn = j.contains("connection");
  if (has_k == has_conn) throw SpecError("exactly one of difference_tensor and connection must be present");
  d.kind = has_k ? ManifoldDescription::Kind::DifferenceTensor : ManifoldDescription::Kind::Connection;
  const char* key = has_k ? "difference_tensor" : "connection";
  detail::json_context(key, [&] {
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw SpecError(std::string(key) + " must be an array of entries");
    for (const auto& e : arr) {
      const auto& lower = e.at("lower");
      if (!lower.is_array() || lower.size() != 2) throw SpecError("lower must list two indices");
      d.entries.push_back({detail::coordinate_index(e.at("upper"), d.coordinates),
                           detail::coordinate_index(lower[0], d.coordinates),
                           detail::coordinate_index(lower[1], d.coordinates), detail::expr_string(e.at("expr"))});
    }
    return 0;
  });
  if (j.contains("tolerance")) {
    d.tolerance = detail::json_context("tolerance", [&] { return j.at("tolerance").get<double>(); });
  }
  return d;
}

inline nlohmann::json description_to_json(const ManifoldDescription& d) {
  nlohmann::json j;
  j["name"] = d.name;
  j["dimension"] = d.dim();
  j["coordinates"] = d.coordinates;
  j["box"] = {{"lo", d.lo}, {"hi", d.hi}, {"grid", d.grid}};
  j["metric"] = d.metric;
  j["phi"] = d.phi;
  j["xi"] = d.xi;
  if (d.eta) j["eta"] = *d.eta;
  nlohmann::json entries = nlohmann::json::array();
  for (const TensorEntry& e : d.entries) {
    entries.push_back({{"upper", d.coordinates.at(e.upper)},
                       {"lower", {d.coordinates.at(e.lower_a), d.coordinates.at(e.lower_b)}},
                       {"expr", e.expr}});
  }
  j[d.kind == ManifoldDescription::Kind::DifferenceTensor ? "difference_tensor" : "connection"] = entries;
  if (d.tolerance) j["tolerance"] = *d.tolerance;
  return j;
}

inline ManifoldDescription parse_spec_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  return description_from_json(j);
}

inline ManifoldDescription read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

inline std::string write_spec_text(const ManifoldDescription& d) { return description_to_json(d).dump(2) + "\n"; }

}  // namespace acsm
