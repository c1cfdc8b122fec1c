#pragma once

// Riemannian machinery on a chart: metric fields, Christoffel symbols,
// curvature of an arbitrary torsion-free connection field, covariant
// derivatives and sectional curvature.
//
// Index conventions:
//   gamma(i, j, k) = Γ^i_jk with ∇_{∂j} ∂k = Γ^i_jk ∂i
//   r(i, j, k, l)  = R^i_jkl with R(∂k, ∂l)∂j = R^i_jkl ∂i and
//   R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_[X,Y]

#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

#include "acsm/fields.hpp"

namespace acsm {

using ConnectionCoefficients = Array3;
using CurvatureAtPoint = Array4;
using NablaGAtPoint = Array3;

inline constexpr double kSingularDeterminant = 1e-12;
inline constexpr double kMinorThreshold = 1e-10;

class MetricField {
 public:
  MetricField() = default;

  /// Full row-major component list; symmetry is checked at `points`
  /// (exact when mirrored entries share an expression, else within 1e-12).
  MetricField(MatrixField components, std::span<const Point> points = {})
      : components_(std::move(components)) {
    const std::size_t n = components_.dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const ScalarField& a = components_(i, j);
        const ScalarField& b = components_(j, i);
        if (a.source() == b.source()) continue;
        for (const Point& p : points) {
          if (std::abs(a(p) - b(p)) > 1e-12) throw SpecError("metric components are not symmetric");
        }
      }
  }

  /// Builds g from its lower triangle, rows i = 0..dim-1 holding g_i0..g_ii.
  /// The upper triangle shares the same expressions, so symmetry is exact.
  static MetricField from_lower_triangle(const std::vector<std::vector<ScalarField>>& rows) {
    const std::size_t n = rows.size();
    std::vector<ScalarField> full(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != i + 1) throw SpecError("metric row " + std::to_string(i) + " must have " +
                                                   std::to_string(i + 1) + " entries");
      for (std::size_t j = 0; j <= i; ++j) {
        full[i * n + j] = rows[i][j];
        full[j * n + i] = rows[i][j];
      }
    }
    return MetricField(MatrixField(n, std::move(full)));
  }

  static MetricField identity(std::size_t dim) {
    std::vector<ScalarField> full(dim * dim, ScalarField::constant(0.0, dim));
    for (std::size_t i = 0; i < dim; ++i) full[i * dim + i] = ScalarField::constant(1.0, dim);
    return MetricField(MatrixField(dim, std::move(full)));
  }

  std::size_t dim() const noexcept { return components_.dim(); }
  const MatrixField& components() const noexcept { return components_; }
  const ScalarField& operator()(std::size_t i, std::size_t j) const { return components_(i, j); }

  template <typename T>
  IndexedArray<T, 2> evaluate(std::span<const T> p) const {
    return components_.evaluate<T>(p);
  }
  Matrix value(std::span<const double> p) const { return components_.value(p); }
  std::vector<Matrix> derivatives(std::span<const double> p) const { return components_.derivatives(p); }

 private:
  MatrixField components_;
};

/// True when every leading principal minor exceeds 1e-10.
inline bool is_positive_definite(const Matrix& g) {
  for (Eigen::Index k = 1; k <= g.rows(); ++k) {
    if (!(g.topLeftCorner(k, k).determinant() > kMinorThreshold)) return false;
  }
  return true;
}

/// Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_jl - ∂_l g_jk), over any dual level T.
template <typename T>
IndexedArray<T, 3> christoffel(const MetricField& g, std::span<const T> p) {
  const std::size_t n = g.dim();
  IndexedArray<T, 2> gv(n);
  std::vector<IndexedArray<T, 2>> dg(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto q = seed_point<T>(p, j);
    auto a = g.evaluate<Dual<T>>(std::span<const Dual<T>>(q));
    dg[j] = IndexedArray<T, 2>(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        dg[j](r, c) = a(r, c).deriv;
        if (j == 0) gv(r, c) = a(r, c).value;
      }
  }
  double det = 0.0;
  IndexedArray<T, 2> ginv;
  try {
    ginv = invert(gv, &det);
  } catch (const SingularMetric&) {
    throw SingularMetric("metric is singular at point");
  }
  if (std::abs(det) < kSingularDeterminant) throw SingularMetric("metric determinant below 1e-12");

  IndexedArray<T, 3> lowered(n);  // Γ_ljk
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        T v = 0.5 * (dg[j](l, k) + dg[k](j, l) - dg[l](j, k));
        lowered(l, j, k) = v;
        lowered(l, k, j) = v;
      }
  IndexedArray<T, 3> gamma(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        T s{};
        for (std::size_t l = 0; l < n; ++l) s += ginv(i, l) * lowered(l, j, k);
        gamma(i, j, k) = s;
        gamma(i, k, j) = s;
      }
  return gamma;
}

/// Levi-Civita connection coefficients at a point.
inline ConnectionCoefficients christoffel(const MetricField& g, const Point& p) {
  check_point(p, g.dim());
  return christoffel<double>(g, std::span<const double>(p));
}

/// Largest |Γ^i_jk - Γ^i_kj|.
inline double torsion_residual(const ConnectionCoefficients& gamma) {
  double worst = 0.0;
  const std::size_t n = gamma.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(gamma(i, j, k) - gamma(i, k, j)));
  return worst;
}

/// Curvature of a connection field. `connection` is a generic callable taking
/// std::span<const T> and returning IndexedArray<T, 3>; its derivatives come
/// from calling it on points seeded with Dual<double>.
///   R^i_jkl = ∂_k Γ^i_lj - ∂_l Γ^i_kj + Γ^i_km Γ^m_lj - Γ^i_lm Γ^m_kj
template <typename ConnectionFn>
CurvatureAtPoint curvature_of(const ConnectionFn& connection, const Point& p) {
  const std::size_t n = p.size();
  Array3 gamma(n);
  std::vector<Array3> dgamma(n, Array3(n));
  for (std::size_t k = 0; k < n; ++k) {
    auto q = seed_point<double>(p, k);
    IndexedArray<DualScalar, 3> a = connection(std::span<const DualScalar>(q));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          dgamma[k](i, j, l) = a(i, j, l).deriv;
          if (k == 0) gamma(i, j, l) = a(i, j, l).value;
        }
  }
  CurvatureAtPoint r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double v = dgamma[k](i, l, j) - dgamma[l](i, k, j);
          for (std::size_t m = 0; m < n; ++m) {
            v += gamma(i, k, m) * gamma(m, l, j) - gamma(i, l, m) * gamma(m, k, j);
          }
          r(i, j, k, l) = v;
        }
  return r;
}

/// Riemann curvature R° of the Levi-Civita connection, with ∂Γ obtained by
/// nested dual seeding of the Christoffel computation.
inline CurvatureAtPoint riemann(const MetricField& g, const Point& p) {
  check_point(p, g.dim());
  return curvature_of(
      [&g](auto q) {
        using T = std::remove_const_t<typename decltype(q)::element_type>;
        return christoffel<T>(g, q);
      },
      p);
}

/// Q(X, Y) = g(X, X) g(Y, Y) - g(X, Y)^2.
inline double plane_area_squared(const Matrix& g, const Vector& x, const Vector& y) {
  double xy = x.dot(g * y);
  return x.dot(g * x) * y.dot(g * y) - xy * xy;
}

/// g(R(X, Y)Y, X) / Q(X, Y) for any curvature-type array R.
inline double sectional_curvature(const Matrix& g, const CurvatureAtPoint& r, const Vector& x,
                                  const Vector& y) {
  double q = plane_area_squared(g, x, y);
  if (!(q > 1e-12)) throw DegeneratePlane("vectors do not span a plane (Q <= 1e-12)");
  return apply_curvature(r, x, y, y).dot(g * x) / q;
}

inline double sectional_curvature(const MetricField& g, const CurvatureAtPoint& r, const Vector& x,
                                  const Vector& y, const Point& p) {
  return sectional_curvature(g.value(p), r, x, y);
}

/// (∇g)_ijk = ∂_i g_jk - Γ^m_ij g_mk - Γ^m_ik g_jm, from evaluated g and ∂g.
inline NablaGAtPoint nabla_g(const ConnectionCoefficients& gamma, const Matrix& g,
                             const std::vector<Matrix>& dg) {
  const std::size_t n = gamma.dim();
  NablaGAtPoint t(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double v = dg[i](j, k);
        for (std::size_t m = 0; m < n; ++m) v -= gamma(m, i, j) * g(m, k) + gamma(m, i, k) * g(j, m);
        t(i, j, k) = v;
      }
  return t;
}

inline NablaGAtPoint nabla_g(const ConnectionCoefficients& gamma, const MetricField& g, const Point& p) {
  return nabla_g(gamma, g.value(p), g.derivatives(p));
}

/// (∇_i φ)^j_k = ∂_i φ^j_k + Γ^j_im φ^m_k - Γ^m_ik φ^j_m.
inline Matrix covariant_derivative_11(const ConnectionCoefficients& gamma, const Matrix& phi,
                                      const Matrix& dphi_i, std::size_t i) {
  const std::size_t n = gamma.dim();
  Matrix out = dphi_i;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      double v = 0.0;
      for (std::size_t m = 0; m < n; ++m) v += gamma(j, i, m) * phi(m, k) - gamma(m, i, k) * phi(j, m);
      out(j, k) += v;
    }
  return out;
}

inline Matrix covariant_derivative_11(const ConnectionCoefficients& gamma, const MatrixField& phi,
                                      const Point& p, std::size_t i) {
  return covariant_derivative_11(gamma, phi.value(p), phi.derivatives(p).at(i), i);
}

/// (∇_i V)^j = ∂_i V^j + Γ^j_im V^m.
inline Vector covariant_derivative_vector(const ConnectionCoefficients& gamma, const Vector& v,
                                          const Vector& dv_i, std::size_t i) {
  const std::size_t n = gamma.dim();
  Vector out = dv_i;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) out[j] += gamma(j, i, m) * v[m];
  return out;
}

}  // namespace acsm
