#pragma once

// Built-in structures with known outcomes, and seeded generators of
// admissible almost contact statistical structures for property tests.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "acsm/spec_file.hpp"

namespace acsm {

/// What the audits are expected to report for an entry. Unset fields carry
/// no expectation.
struct ExpectedOutcomes {
  std::optional<double> lambda;
  std::optional<double> kphi;  // constant value over every φ-section
  std::optional<bool> kphi_constant;
  std::optional<bool> cosymplectic;
  std::optional<bool> phi_compatible;
  std::optional<bool> vanishing;  // branch taken by the nine equivalent conditions
  std::optional<std::pair<double, double>> geodesic;  // (‖∇°_ξ ξ‖, ‖∇_ξ ξ‖)
};

struct ZooEntry {
  std::string name;
  ManifoldDescription description;
  ChartManifold manifold;
  ExpectedOutcomes expected;
};

enum class GeneratorFamily { TrivialLambda, PlanarBlock, Mixed };

inline const char* family_name(GeneratorFamily f) {
  switch (f) {
    case GeneratorFamily::TrivialLambda: return "trivial-lambda";
    case GeneratorFamily::PlanarBlock: return "planar-block";
    case GeneratorFamily::Mixed: return "mixed";
  }
  return "";
}

inline GeneratorFamily parse_family(const std::string& s) {
  if (s == "trivial-lambda") return GeneratorFamily::TrivialLambda;
  if (s == "planar-block") return GeneratorFamily::PlanarBlock;
  if (s == "mixed") return GeneratorFamily::Mixed;
  throw SpecError("unknown generator family '" + s + "'");
}

namespace detail {

/// Shortest decimal string that reads back to the same double.
inline std::string exact_number(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), ptr);
}

inline std::string paren(double x) { return x < 0 ? "(" + exact_number(x) + ")" : exact_number(x); }

/// Uniform in [lo, hi), computed from raw engine output so the sequence is
/// identical across standard libraries.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

/// Rounded to three decimals, so generated expressions stay readable.
inline double coefficient(std::mt19937_64& rng, double lo, double hi) {
  return std::round(uniform(rng, lo, hi) * 1000.0) / 1000.0;
}

inline std::size_t index_below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

/// Coordinates x1, y1, ..., xn, yn, z.
inline std::vector<std::string> contact_coordinates(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) {
    out.push_back("x" + std::to_string(i));
    out.push_back("y" + std::to_string(i));
  }
  out.push_back("z");
  return out;
}

/// Flat metric, φ∂x_i = ∂y_i, φ∂y_i = -∂x_i, ξ = ∂z over the box [-1, 1].
inline ManifoldDescription flat_contact_description(std::string name, std::vector<std::string> coords) {
  const std::size_t dim = coords.size();
  ManifoldDescription d;
  d.name = std::move(name);
  d.coordinates = std::move(coords);
  d.lo.assign(dim, -1.0);
  d.hi.assign(dim, 1.0);
  d.grid.assign(dim, 3);
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<std::string> row(i + 1, "0");
    row[i] = "1";
    d.metric.push_back(row);
  }
  d.phi.assign(dim, std::vector<std::string>(dim, "0"));
  for (std::size_t b = 0; 2 * b + 1 < dim; ++b) {
    d.phi[2 * b + 1][2 * b] = "1";
    d.phi[2 * b][2 * b + 1] = "-1";
  }
  d.xi.assign(dim, "0");
  d.xi[dim - 1] = "1";
  return d;
}

inline ZooEntry finish(std::string name, ManifoldDescription d, ExpectedOutcomes e) {
  ChartManifold m = build_manifold(d);
  return {std::move(name), std::move(d), std::move(m), e};
}

/// K on the plane (∂x_b, ∂y_b) given by K(X, Y) = c·conj(X)·conj(Y) with
/// X, Y read as complex numbers x + iy.
inline void add_planar_block(std::vector<TensorEntry>& entries, std::size_t b, double re, double im) {
  const std::size_t ex = 2 * b;
  const std::size_t ey = 2 * b + 1;
  const std::string r = exact_number(re);
  const std::string i = exact_number(im);
  const std::string nr = exact_number(-re);
  const std::string ni = exact_number(-im);
  entries.push_back({ex, ex, ex, r});
  entries.push_back({ey, ex, ex, i});
  entries.push_back({ex, ex, ey, i});
  entries.push_back({ey, ex, ey, nr});
  entries.push_back({ex, ey, ey, nr});
  entries.push_back({ey, ey, ey, ni});
}

}  // namespace detail

/// ℝ^{2n+1} with the flat structure and ∇_ξ ξ = ξ as the only nonzero
/// connection value.
inline ZooEntry example_flat_acs(std::size_t n = 1) {
  if (n < 1) throw UnsupportedDimension("example_flat_acs needs n >= 1");
  const std::string name = "example_flat_acs:" + std::to_string(n);
  ManifoldDescription d = detail::flat_contact_description(name, detail::contact_coordinates(n));
  const std::size_t z = d.dim() - 1;
  d.kind = ManifoldDescription::Kind::Connection;
  d.entries.push_back({z, z, z, "1"});
  d.tolerance = kExactTolerance;
  ExpectedOutcomes e;
  e.lambda = 1.0;
  e.kphi = 0.0;
  e.kphi_constant = true;
  e.cosymplectic = true;
  e.phi_compatible = true;
  e.vanishing = true;
  e.geodesic = std::pair{0.0, 1.0};
  return detail::finish(name, std::move(d), e);
}

/// ℝ³ with the flat cosymplectic structure and a connection whose
/// φ-sectional K-curvature is -1 everywhere.
inline ZooEntry example_r3_negative() {
  ManifoldDescription d = detail::flat_contact_description("example_r3_negative", {"x", "y", "z"});
  d.kind = ManifoldDescription::Kind::Connection;
  d.entries = {{0, 0, 0, "-0.5"}, {1, 0, 0, "0.5"}, {0, 0, 1, "0.5"},
               {1, 0, 1, "0.5"},  {0, 1, 1, "0.5"}, {1, 1, 1, "-0.5"}};
  d.tolerance = kExactTolerance;
  ExpectedOutcomes e;
  e.lambda = 0.0;
  e.kphi = -1.0;
  e.kphi_constant = true;
  e.cosymplectic = true;
  e.phi_compatible = false;
  e.vanishing = false;
  e.geodesic = std::pair{0.0, 0.0};
  return detail::finish("example_r3_negative", std::move(d), e);
}

/// The flat structure of example_flat_acs with ∇ = ∇°.
inline ZooEntry levi_civita_flat(std::size_t n = 1) {
  if (n < 1) throw UnsupportedDimension("levi_civita_flat needs n >= 1");
  const std::string name = "levi_civita_flat:" + std::to_string(n);
  ManifoldDescription d = detail::flat_contact_description(name, detail::contact_coordinates(n));
  d.tolerance = kExactTolerance;
  ExpectedOutcomes e;
  e.lambda = 0.0;
  e.kphi = 0.0;
  e.kphi_constant = true;
  e.cosymplectic = true;
  e.phi_compatible = true;
  e.vanishing = true;
  e.geodesic = std::pair{0.0, 0.0};
  return detail::finish(name, std::move(d), e);
}

/// S² × ℝ in coordinates (th, ph, z) with the rotation complex structure on
/// the sphere factor and K = 0. Cosymplectic, with Riemannian φ-sectional
/// curvature 1.
inline ZooEntry sphere_line() {
  ManifoldDescription d;
  d.name = "sphere_line";
  d.coordinates = {"th", "ph", "z"};
  d.lo = {0.5, 0.0, -1.0};
  d.hi = {2.5, 3.0, 1.0};
  d.grid = {3, 3, 3};
  d.metric = {{"1"}, {"0", "sin(th)^2"}, {"0", "0", "1"}};
  d.phi = {{"0", "-sin(th)", "0"}, {"1/sin(th)", "0", "0"}, {"0", "0", "0"}};
  d.xi = {"0", "0", "1"};
  d.tolerance = kExactTolerance;
  ExpectedOutcomes e;
  e.lambda = 0.0;
  e.kphi = 0.0;
  e.kphi_constant = true;
  e.cosymplectic = true;
  e.phi_compatible = true;
  e.vanishing = true;
  e.geodesic = std::pair{0.0, 0.0};
  return detail::finish("sphere_line", std::move(d), e);
}

/// Flat ℝ³ with ξ = cos z ∂x + sin z ∂y turning along z and K = 0. The
/// structure is not cosymplectic.
inline ZooEntry twisted_contact() {
  ManifoldDescription d;
  d.name = "twisted_contact";
  d.coordinates = {"x", "y", "z"};
  d.lo = {-1.0, -1.0, -1.0};
  d.hi = {1.0, 1.0, 1.0};
  d.grid = {3, 3, 3};
  d.metric = {{"1"}, {"0", "1"}, {"0", "0", "1"}};
  d.phi = {{"0", "0", "sin(z)"}, {"0", "0", "-cos(z)"}, {"-sin(z)", "cos(z)", "0"}};
  d.xi = {"cos(z)", "sin(z)", "0"};
  d.eta = std::vector<std::string>{"cos(z)", "sin(z)", "0"};
  d.tolerance = kExactTolerance;
  ExpectedOutcomes e;
  e.lambda = 0.0;
  e.kphi = 0.0;
  e.kphi_constant = true;
  e.cosymplectic = false;
  e.phi_compatible = false;
  e.vanishing = true;
  e.geodesic = std::pair{0.0, 0.0};
  return detail::finish("twisted_contact", std::move(d), e);
}

/// Seeded admissible structure on flat ℝ^dim (dim = 2n+1).
///
/// trivial-lambda: K = λ(x) η⊗η⊗ξ with a random polynomial λ.
/// planar-block:   K(X,Y) = c·conj(X)·conj(Y) on one (∂x_b, ∂y_b) plane, with
///                 |c| = a/√2 and a in [0.5, 2], so K_φ = -a² on that plane;
///                 plus a constant λ term for odd seeds.
/// mixed:          one block per plane with distinct magnitudes, plus the
///                 same optional λ term.
inline ZooEntry generate_random_acs(std::size_t dim, std::uint64_t seed, GeneratorFamily family) {
  if (dim < 3 || dim % 2 == 0) throw UnsupportedDimension("generator needs odd dimension >= 3");
  const std::size_t n = (dim - 1) / 2;
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(family) + 1)) ^ (dim << 32));
  const std::string name =
      std::string("random:") + family_name(family) + ":" + std::to_string(dim) + ":" + std::to_string(seed);
  ManifoldDescription d = detail::flat_contact_description(name, detail::contact_coordinates(n));
  d.tolerance = kPolynomialTolerance;
  const std::size_t z = dim - 1;
  ExpectedOutcomes e;
  e.cosymplectic = true;
  e.geodesic.reset();

  if (family == GeneratorFamily::TrivialLambda) {
    std::string lambda = detail::exact_number(detail::coefficient(rng, -1.0, 1.0));
    const std::size_t terms = 1 + detail::index_below(rng, 3);
    for (std::size_t t = 0; t < terms; ++t) {
      const double c = detail::coefficient(rng, -1.0, 1.0);
      lambda += " + " + detail::paren(c) + "*" + d.coordinates[detail::index_below(rng, dim)];
      if (detail::index_below(rng, 2) == 0) lambda += "*" + d.coordinates[detail::index_below(rng, dim)];
    }
    d.entries.push_back({z, z, z, lambda});
    e.kphi = 0.0;
    e.kphi_constant = true;
    e.phi_compatible = true;
    e.vanishing = true;
    return detail::finish(name, std::move(d), e);
  }

  std::vector<double> magnitudes;
  if (family == GeneratorFamily::PlanarBlock) {
    magnitudes.assign(n, 0.0);
    magnitudes[detail::index_below(rng, n)] = detail::coefficient(rng, 0.5, 2.0);
  } else {
    // Distinct magnitudes spaced at least 0.25 apart.
    const double step = 1.5 / static_cast<double>(n);
    for (std::size_t b = 0; b < n; ++b) {
      magnitudes.push_back(0.5 + step * static_cast<double>(b) + detail::coefficient(rng, 0.0, std::max(0.0, step - 0.25)));
    }
    for (std::size_t b = n; b > 1; --b) std::swap(magnitudes[b - 1], magnitudes[detail::index_below(rng, b)]);
  }
  double kphi = 0.0;
  for (std::size_t b = 0; b < n; ++b) {
    if (magnitudes[b] == 0.0) continue;
    const double a = magnitudes[b];
    const double theta = detail::coefficient(rng, 0.0, 2.0 * std::numbers::pi);
    const double modulus = a / std::numbers::sqrt2;
    detail::add_planar_block(d.entries, b, modulus * std::cos(theta), modulus * std::sin(theta));
    kphi = -a * a;
  }
  if (seed % 2 == 1) d.entries.push_back({z, z, z, detail::exact_number(detail::coefficient(rng, -1.0, 1.0))});
  if (n == 1) {
    e.kphi = kphi;
    e.kphi_constant = true;
  } else {
    e.kphi_constant = false;
  }
  e.phi_compatible = false;
  e.vanishing = false;
  return detail::finish(name, std::move(d), e);
}

/// Metric-only test family g = I + 0.1·S(x) with each S entry a random
/// polynomial whose coefficients have absolute sum ≤ 1, positive definite on
/// [-1, 1]^dim for dim ≤ 9. φ and ξ are the flat ones and K = 0; the almost
/// contact axioms do not hold, so only metric and curvature checks apply.
inline ManifoldDescription random_polynomial_metric(std::size_t dim, std::uint64_t seed) {
  if (dim < 3 || dim % 2 == 0 || dim > 9) throw UnsupportedDimension("curved metric family needs odd dim in [3, 9]");
  std::mt19937_64 rng(seed * 0x2545F4914F6CDD1DULL + dim);
  ManifoldDescription d =
      detail::flat_contact_description("curved_metric:" + std::to_string(dim) + ":" + std::to_string(seed),
                                       detail::contact_coordinates((dim - 1) / 2));
  d.tolerance = kPolynomialTolerance;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c0 = detail::coefficient(rng, -1.0 / 3.0, 1.0 / 3.0);
      const double c1 = detail::coefficient(rng, -1.0 / 3.0, 1.0 / 3.0);
      const double c2 = detail::coefficient(rng, -1.0 / 3.0, 1.0 / 3.0);
      const std::string& a = d.coordinates[detail::index_below(rng, dim)];
      const std::string& b = d.coordinates[detail::index_below(rng, dim)];
      const std::string& c = d.coordinates[detail::index_below(rng, dim)];
      std::string s = detail::paren(c0) + " + " + detail::paren(c1) + "*" + a + " + " + detail::paren(c2) + "*" + b +
                      "*" + c;
      d.metric[i][j] = (i == j ? "1 + " : "") + std::string("0.1*(") + s + ")";
    }
  return d;
}

/// Names accepted by zoo_entry(), with their parameter syntax.
inline std::vector<std::string> zoo_names() {
  return {"example_flat_acs[:n]",
          "example_r3_negative",
          "levi_civita_flat[:n]",
          "sphere_line",
          "twisted_contact",
          "random:<trivial-lambda|planar-block|mixed>:<dim>:<seed>"};
}

namespace detail {

inline std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw SpecError("invalid " + what + " '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace detail

/// Looks up an entry by name, e.g. "example_flat_acs:2" or
/// "random:mixed:5:1". Throws SpecError for unknown names.
inline ZooEntry zoo_entry(const std::string& name) {
  const auto parts = detail::split(name, ':');
  const std::string& head = parts[0];
  auto count_arg = [&](std::size_t fallback) {
    if (parts.size() > 2) throw SpecError("too many parameters in zoo name '" + name + "'");
    return parts.size() == 2 ? detail::parse_count(parts[1], "n") : fallback;
  };
  if (head == "example_flat_acs") return example_flat_acs(count_arg(1));
  if (head == "levi_civita_flat") return levi_civita_flat(count_arg(1));
  if (parts.size() == 1) {
    if (head == "example_r3_negative") return example_r3_negative();
    if (head == "sphere_line") return sphere_line();
    if (head == "twisted_contact") return twisted_contact();
  }
  if (head == "random" && parts.size() == 4) {
    return generate_random_acs(detail::parse_count(parts[2], "dimension"), detail::parse_count(parts[3], "seed"),
                               parse_family(parts[1]));
  }
  throw SpecError("unknown zoo entry '" + name + "'");
}

}  // namespace acsm
