#pragma once

// A chart carrying an almost contact metric structure (φ, ξ, η, g) and a
// difference tensor K, plus the per-point evaluation every check consumes.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acsm/metric.hpp"

namespace acsm {

/// The (1,2) field K = ∇ - ∇°, given either by its components or by a full
/// torsion-free connection table Γ^i_jk (then K = Γ - Γ°(g) at evaluation).
class DifferenceTensorField {
 public:
  enum class Source { Components, ConnectionTable };

  DifferenceTensorField() = default;

  static DifferenceTensorField from_components(Array3Field k) {
    return DifferenceTensorField(std::move(k), Source::Components);
  }
  static DifferenceTensorField from_connection(Array3Field table) {
    return DifferenceTensorField(std::move(table), Source::ConnectionTable);
  }
  static DifferenceTensorField zero(std::size_t dim) { return from_components(Array3Field::zero(dim)); }

  Source source() const noexcept { return source_; }
  /// Components of K, or the connection table when source() is ConnectionTable.
  const Array3Field& fields() const noexcept { return fields_; }
  std::size_t dim() const noexcept { return fields_.dim(); }

  template <typename T>
  IndexedArray<T, 3> evaluate(const MetricField& g, std::span<const T> p) const {
    IndexedArray<T, 3> out = fields_.evaluate<T>(p);
    if (source_ == Source::ConnectionTable) {
      IndexedArray<T, 3> lc = christoffel<T>(g, p);
      auto d = out.data();
      auto l = lc.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] - l[i];
    }
    return out;
  }

 private:
  DifferenceTensorField(Array3Field f, Source s) : fields_(std::move(f)), source_(s) {}

  Array3Field fields_;
  Source source_ = Source::Components;
};

struct SamplingBox {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::size_t> counts;  // grid points per coordinate
};

inline constexpr double kExactTolerance = 1e-9;
inline constexpr double kPolynomialTolerance = 1e-6;

struct ChartManifold {
  std::string name;
  std::vector<std::string> coords;
  SamplingBox box;
  MetricField metric;
  MatrixField phi;                 // φ^i_j, entry (i, j)
  VectorField xi;                  // ξ^i
  std::optional<VectorField> eta;  // η_i; derived as g_ij ξ^j when absent
  DifferenceTensorField k;
  double tolerance = kExactTolerance;

  std::size_t dim() const noexcept { return coords.size(); }
};

/// Regular grid over the sampling box. `per_coordinate` overrides the box's
/// counts; otherwise the box counts apply, shrunk uniformly until the total is
/// at most `cap` points.
inline std::vector<Point> grid_points(const SamplingBox& box, std::optional<std::size_t> per_coordinate = {},
                                      std::size_t cap = 243) {
  const std::size_t n = box.lo.size();
  std::vector<std::size_t> counts(n, 3);
  if (per_coordinate) {
    counts.assign(n, std::max<std::size_t>(1, *per_coordinate));
  } else {
    for (std::size_t i = 0; i < n; ++i) counts[i] = i < box.counts.size() ? std::max<std::size_t>(1, box.counts[i]) : 3;
    auto total = [&] {
      std::size_t t = 1;
      for (auto c : counts) t *= c;
      return t;
    };
    while (total() > cap) {
      auto it = std::max_element(counts.begin(), counts.end());
      if (*it <= 1) break;
      --*it;
    }
  }
  std::vector<Point> out;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = counts[i] == 1 ? 0.5 * (box.lo[i] + box.hi[i])
                            : box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(idx[i]) /
                                              static_cast<double>(counts[i] - 1);
    }
    out.push_back(std::move(p));
    std::size_t d = n;
    while (d > 0) {
      --d;
      if (++idx[d] < counts[d]) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (n == 0) return out;
  }
}

inline std::vector<Point> grid_points(const ChartManifold& m, std::optional<std::size_t> per_coordinate = {}) {
  return grid_points(m.box, per_coordinate);
}

/// Everything a pointwise check needs, evaluated once at a point.
struct PointFrame {
  Point point;
  Matrix g;
  Matrix g_inv;
  std::vector<Matrix> dg;  // dg[j] = ∂_j g
  Matrix phi;
  std::vector<Matrix> dphi;
  Vector xi;
  std::vector<Vector> dxi;
  Vector eta;
  Array3 lc;  // Γ° (Levi-Civita)
  Array3 k;   // K^i_jk
  double tolerance = kExactTolerance;

  std::size_t dim() const noexcept { return point.size(); }
  double inner(const Vector& x, const Vector& y) const { return x.dot(g * y); }
  double norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }
  double eta_of(const Vector& x) const { return eta.dot(x); }
  Vector K(const Vector& x, const Vector& y) const { return contract(k, x, y); }
  /// Γ of ∇ = ∇° + K.
  Array3 nabla() const { return axpy(lc, 1.0, k); }
  /// Γ of the conjugate connection ∇̄ = ∇° - K.
  Array3 nabla_bar() const { return axpy(lc, -1.0, k); }
  /// Component of `x` orthogonal to ξ.
  Vector horizontal(const Vector& x) const { return x - eta_of(x) * xi; }
};

inline Vector eta_at(const ChartManifold& m, const Point& p) {
  if (m.eta) return m.eta->value(p);
  return m.metric.value(p) * m.xi.value(p);
}

inline PointFrame evaluate_frame(const ChartManifold& m, const Point& p) {
  check_point(p, m.dim());
  PointFrame f;
  f.point = p;
  f.tolerance = m.tolerance;
  f.g = m.metric.value(p);
  f.dg = m.metric.derivatives(p);
  f.g_inv = f.g.inverse();
  f.phi = m.phi.value(p);
  f.dphi = m.phi.derivatives(p);
  f.xi = m.xi.value(p);
  f.dxi = m.xi.derivatives(p);
  f.eta = m.eta ? m.eta->value(p) : Vector(f.g * f.xi);
  f.lc = christoffel(m.metric, p);
  f.k = m.k.evaluate<double>(m.metric, std::span<const double>(p));
  return f;
}

/// Curvatures of ∇°, ∇ = ∇° + K and ∇̄ = ∇° - K at a point.
struct CurvatureSet {
  CurvatureAtPoint r0;
  CurvatureAtPoint r;
  CurvatureAtPoint r_bar;
};

/// Curvature of Γ° + sign·K, differentiated through both Γ° and K.
inline CurvatureAtPoint shifted_curvature(const ChartManifold& m, const Point& p, double sign) {
  return curvature_of(
      [&m, sign](auto q) {
        using T = std::remove_const_t<typename decltype(q)::element_type>;
        IndexedArray<T, 3> gamma = christoffel<T>(m.metric, q);
        if (sign != 0.0) {
          IndexedArray<T, 3> kk = m.k.evaluate<T>(m.metric, q);
          auto d = gamma.data();
          auto e = kk.data();
          for (std::size_t i = 0; i < d.size(); ++i) d[i] = d[i] + sign * e[i];
        }
        return gamma;
      },
      p);
}

inline CurvatureSet curvatures(const ChartManifold& m, const Point& p) {
  check_point(p, m.dim());
  return {riemann(m.metric, p), shifted_curvature(m, p, 1.0), shifted_curvature(m, p, -1.0)};
}

}  // namespace acsm
