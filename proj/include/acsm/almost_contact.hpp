#pragma once

// Almost contact metric structure (φ, ξ, η, g): axiom validation, φ-bases and
// the cosymplectic test ∇°φ = 0.

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "acsm/manifold.hpp"
#include "acsm/report.hpp"

namespace acsm {

namespace detail {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Residuals of the almost contact metric axioms and their standard
/// consequences at one point. Never throws on a failing structure.
inline Report validate_structure(const PointFrame& f) {
  const auto n = static_cast<Eigen::Index>(f.dim());
  const double tol = f.tolerance;
  const Matrix id = Matrix::Identity(n, n);
  const Point& p = f.point;
  Report rep;

  rep.identity("structure.metric_positive_definite", p, is_positive_definite(f.g) ? 0.0 : 1.0, 0.0,
               "leading principal minors > 1e-10");
  rep.identity("structure.phi_squared", p, detail::max_abs(f.phi * f.phi - (-id + f.xi * f.eta.transpose())), tol,
               "phi^2 = -I + eta (x) xi");
  rep.identity("structure.eta_xi", p, std::abs(f.eta.dot(f.xi) - 1.0), tol, "eta(xi) = 1");
  rep.identity("structure.phi_xi", p, detail::max_abs(Vector(f.phi * f.xi)), tol, "phi(xi) = 0");
  rep.identity("structure.eta_phi", p, detail::max_abs(Vector(f.phi.transpose() * f.eta)), tol, "eta o phi = 0");

  Eigen::JacobiSVD<Matrix> svd(f.phi);
  const Vector sv = svd.singularValues();  // descending
  const double smallest = sv[n - 1];
  const double second = n >= 2 ? sv[n - 2] : 0.0;
  rep.add({"structure.rank", p, smallest, smallest <= tol && second > 1e-6, std::nullopt, Role::Identity,
           "rank(phi) = 2n; second-smallest singular value " + detail::json_number(second)});

  rep.identity("structure.metric_compatible", p,
               detail::max_abs(Matrix(f.phi.transpose() * f.g * f.phi - f.g + f.eta * f.eta.transpose())), tol,
               "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)");
  rep.identity("structure.xi_unit", p, std::abs(f.inner(f.xi, f.xi) - 1.0), tol, "g(xi, xi) = 1");
  rep.identity("structure.eta_metric_dual", p, detail::max_abs(Vector(f.eta - f.g * f.xi)), tol,
               "eta(X) = g(X, xi)");
  rep.identity("structure.phi_skew", p, detail::max_abs(Matrix(f.g * f.phi + f.phi.transpose() * f.g)), tol,
               "g(phi X, Y) + g(X, phi Y) = 0");
  rep.identity("structure.phi_squared_metric", p,
               detail::max_abs(Matrix((f.phi * f.phi).transpose() * f.g + f.phi.transpose() * f.g * f.phi)), tol,
               "g(phi^2 X, Y) = -g(phi X, phi Y)");
  return rep;
}

inline Report validate_structure(const ChartManifold& m, const Point& p) {
  return validate_structure(evaluate_frame(m, p));
}

/// Orthonormal frame (e_1..e_n, φe_1..φe_n, ξ) at a point.
struct PhiBasis {
  std::size_t n = 0;
  std::vector<Vector> frame;

  const Vector& e(std::size_t i) const { return frame[i]; }
  const Vector& phi_e(std::size_t i) const { return frame[n + i]; }
  const Vector& xi() const { return frame[2 * n]; }
};

/// Builds a φ-basis whose first vector is the normalized horizontal part of
/// `seed`. Later e_k are taken from the coordinate vectors, orthogonalized
/// against the frame built so far.
inline PhiBasis phi_basis(const PointFrame& f, const Vector& seed) {
  const std::size_t dim = f.dim();
  if (dim < 3 || dim % 2 == 0) throw UnsupportedDimension("phi-basis needs odd dimension >= 3");
  PhiBasis out;
  out.n = (dim - 1) / 2;

  std::vector<Vector> es;
  std::vector<Vector> phis;
  auto project_out = [&](Vector v) {
    for (int pass = 0; pass < 2; ++pass) {
      v -= (f.inner(v, f.xi) / f.inner(f.xi, f.xi)) * f.xi;
      for (std::size_t i = 0; i < es.size(); ++i) {
        v -= f.inner(v, es[i]) * es[i];
        v -= f.inner(v, phis[i]) * phis[i];
      }
    }
    return v;
  };

  Vector h = project_out(seed);
  double nh = f.norm(h);
  if (!(nh >= 1e-10)) throw DegenerateSeed("seed has no component orthogonal to xi");
  es.push_back(h / nh);
  phis.push_back(f.phi * es.back());

  while (es.size() < out.n) {
    Vector best;
    double best_norm = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      Vector v = project_out(basis_vector(dim, c));
      double nv = f.norm(v);
      if (nv > best_norm) {
        best_norm = nv;
        best = v;
      }
    }
    if (!(best_norm >= 1e-10)) throw ExhaustedCandidates("cannot complete the phi-basis");
    es.push_back(best / best_norm);
    phis.push_back(f.phi * es.back());
  }

  out.frame = es;
  out.frame.insert(out.frame.end(), phis.begin(), phis.end());
  out.frame.push_back(f.xi);
  return out;
}

inline PhiBasis phi_basis(const ChartManifold& m, const Point& p, const Vector& seed) {
  return phi_basis(evaluate_frame(m, p), seed);
}

/// `vectors` followed by all pairwise sums and differences. This is the finite
/// test set on which "for all X" statements of bilinear identities are checked.
inline std::vector<Vector> with_pairwise_combinations(const std::vector<Vector>& vectors) {
  std::vector<Vector> out = vectors;
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      out.push_back(vectors[i] + vectors[j]);
      out.push_back(vectors[i] - vectors[j]);
    }
  return out;
}

/// Coordinate frame ∂_0..∂_{dim-1} plus pairwise sums and differences.
inline std::vector<Vector> coordinate_test_vectors(std::size_t dim) {
  std::vector<Vector> base;
  for (std::size_t i = 0; i < dim; ++i) base.push_back(basis_vector(dim, i));
  return with_pairwise_combinations(base);
}

/// Horizontal vectors e_i, φe_i of a φ-basis plus pairwise sums and differences.
inline std::vector<Vector> horizontal_test_vectors(const PhiBasis& b) {
  std::vector<Vector> base(b.frame.begin(), b.frame.begin() + static_cast<std::ptrdiff_t>(2 * b.n));
  return with_pairwise_combinations(base);
}

/// Largest deviation of the Gram matrix of `b` from the identity.
inline double gram_residual(const PointFrame& f, const PhiBasis& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.frame.size(); ++i)
    for (std::size_t j = 0; j < b.frame.size(); ++j) {
      worst = std::max(worst, std::abs(f.inner(b.frame[i], b.frame[j]) - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

/// Default φ-basis seed: the first coordinate vector with a nonzero
/// horizontal part.
inline Vector default_seed(const PointFrame& f) {
  for (std::size_t c = 0; c < f.dim(); ++c) {
    Vector v = basis_vector(f.dim(), c);
    if (f.norm(f.horizontal(v)) >= 1e-6) return v;
  }
  return basis_vector(f.dim(), 0);
}

/// Max over i of |(∇°_i φ)| entries at one point.
inline double levi_civita_phi_residual(const PointFrame& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.dim(); ++i) {
    worst = std::max(worst, detail::max_abs(covariant_derivative_11(f.lc, f.phi, f.dphi[i], i)));
  }
  return worst;
}

struct CosymplecticResult {
  bool cosymplectic = false;
  double residual = 0.0;
};

inline CosymplecticResult is_cosymplectic(const ChartManifold& m, std::span<const Point> points, double tol) {
  CosymplecticResult r;
  for (const Point& p : points) r.residual = std::max(r.residual, levi_civita_phi_residual(evaluate_frame(m, p)));
  r.cosymplectic = r.residual <= tol;
  return r;
}

}  // namespace acsm
