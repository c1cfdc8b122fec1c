#pragma once

// Statistical structures (g, ∇ = ∇° + K) on an almost contact metric chart:
// validation of the statistical and almost-contact-statistical conditions,
// λ = g(K(ξ,ξ), ξ), the conjugate connection ∇̄ = ∇° - K, and conversion of
// a connection table to K.

#include <span>
#include <string>
#include <vector>

#include "acsm/almost_contact.hpp"

namespace acsm {

namespace detail {

/// C(a, b, c) = g(e_a, K(e_b, e_c)).
inline Array3 cubic_form(const PointFrame& f) {
  const std::size_t n = f.dim();
  Array3 c(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t d = 0; d < n; ++d) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += f.g(a, i) * f.k(i, b, d);
        c(a, b, d) = s;
      }
  return c;
}

/// Largest deviation from total symmetry of a rank-3 array.
inline double total_symmetry_residual(const Array3& t) {
  const std::size_t n = t.dim();
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        worst = std::max(worst, std::abs(t(a, b, c) - t(b, a, c)));
        worst = std::max(worst, std::abs(t(a, b, c) - t(a, c, b)));
      }
  return worst;
}

inline double lower_symmetry_residual(const Array3& t) {
  const std::size_t n = t.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) worst = std::max(worst, std::abs(t(i, j, k) - t(i, k, j)));
  return worst;
}

}  // namespace detail

/// Residuals of the statistical-structure conditions at one point:
/// K^i_jk = K^i_kj, C totally symmetric, ∇g and ∇̄g totally symmetric, and
/// (∇_X g)(Y, Z) = -2 g(X, K(Y, Z)).
inline Report validate_statistical(const PointFrame& f) {
  const double tol = f.tolerance;
  const Point& p = f.point;
  Report rep;
  rep.identity("statistical.lower_symmetry", p, detail::lower_symmetry_residual(f.k), tol, "K(X,Y) = K(Y,X)");
  const Array3 c = detail::cubic_form(f);
  rep.identity("statistical.cubic_symmetry", p, detail::total_symmetry_residual(c), tol,
               "C(X,Y,Z) = g(X,K(Y,Z)) totally symmetric");
  const Array3 ng = nabla_g(f.nabla(), f.g, f.dg);
  rep.identity("statistical.nabla_g_symmetry", p, detail::total_symmetry_residual(ng), tol,
               "nabla g totally symmetric");
  rep.identity("statistical.conjugate_nabla_g_symmetry", p,
               detail::total_symmetry_residual(nabla_g(f.nabla_bar(), f.g, f.dg)), tol,
               "conjugate nabla g totally symmetric");
  rep.identity("statistical.nabla_g_cubic_form", p, max_abs(axpy(ng, 2.0, c)), tol,
               "(nabla_X g)(Y,Z) = -2 g(X,K(Y,Z))");
  return rep;
}

inline Report validate_statistical(const ChartManifold& m, const Point& p) {
  return validate_statistical(evaluate_frame(m, p));
}

/// Residuals of K(X, φY) + φK(X, Y) = 0 and the equivalent K(X, φY) = K(φX, Y)
/// over coordinate basis pairs.
inline Report validate_acs(const PointFrame& f) {
  const std::size_t n = f.dim();
  double anticommute = 0.0;
  double swap = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Vector x = basis_vector(n, a);
      const Vector y = basis_vector(n, b);
      const Vector k_x_phiy = f.K(x, f.phi * y);
      anticommute = std::max(anticommute, detail::max_abs(Vector(k_x_phiy + f.phi * f.K(x, y))));
      swap = std::max(swap, detail::max_abs(Vector(k_x_phiy - f.K(f.phi * x, y))));
    }
  Report rep;
  rep.identity("acs.phi_anticommute", f.point, anticommute, f.tolerance, "K(X, phi Y) + phi K(X,Y) = 0");
  rep.identity("acs.phi_swap", f.point, swap, f.tolerance, "K(X, phi Y) = K(phi X, Y)");
  return rep;
}

inline Report validate_acs(const ChartManifold& m, const Point& p) { return validate_acs(evaluate_frame(m, p)); }

struct LambdaValue {
  double lambda = 0.0;
  /// max of ‖K(ξ,ξ) - λξ‖ and ‖K(e_a, ξ) - λ η_a ξ‖ over coordinate vectors.
  double residual = 0.0;
};

/// λ and its residual without the tolerance check.
inline LambdaValue lambda_unchecked(const PointFrame& f) {
  LambdaValue out;
  const Vector kxx = f.K(f.xi, f.xi);
  out.lambda = f.inner(kxx, f.xi);
  out.residual = f.norm(kxx - out.lambda * f.xi);
  for (std::size_t a = 0; a < f.dim(); ++a) {
    const Vector x = basis_vector(f.dim(), a);
    out.residual = std::max(out.residual, f.norm(f.K(x, f.xi) - out.lambda * f.eta_of(x) * f.xi));
  }
  return out;
}

/// λ = g(K(ξ,ξ), ξ), together with the check K(X, ξ) = λ η(X) ξ.
/// Throws AcsViolated when that identity fails beyond the frame tolerance.
inline LambdaValue lambda_of(const PointFrame& f) {
  const LambdaValue out = lambda_unchecked(f);
  if (out.residual > f.tolerance) {
    throw AcsViolated("K(X, xi) = lambda eta(X) xi fails by " + detail::json_number(out.residual));
  }
  return out;
}

inline LambdaValue lambda_of(const ChartManifold& m, const Point& p) { return lambda_of(evaluate_frame(m, p)); }

struct ConjugateConnection {
  ConnectionCoefficients gamma;
  /// Largest |g(∇_i ∂j, ∂k) + g(∂j, ∇̄_i ∂k) - ∂_i g_jk|.
  double duality_residual = 0.0;
};

inline ConjugateConnection conjugate_connection(const PointFrame& f) {
  const std::size_t n = f.dim();
  ConjugateConnection out{f.nabla_bar(), 0.0};
  const Array3 nab = f.nabla();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double v = -f.dg[i](j, k);
        for (std::size_t m = 0; m < n; ++m) v += nab(m, i, j) * f.g(m, k) + f.g(j, m) * out.gamma(m, i, k);
        out.duality_residual = std::max(out.duality_residual, std::abs(v));
      }
  return out;
}

/// K = Γ_user - Γ°(g) for a user-supplied connection table. Torsion is checked
/// at `points` (exactly for mirrored entries sharing an expression).
inline DifferenceTensorField difference_from_connection(const Array3Field& table, const MetricField& g,
                                                        std::span<const Point> points) {
  if (table.dim() != g.dim()) throw SpecError("connection table dimension does not match the metric");
  double torsion = table.lower_symmetry_residual(points);
  if (torsion > 1e-12) {
    throw TorsionPresent("connection table is not symmetric in its lower indices (residual " +
                         detail::json_number(torsion) + ")");
  }
  return DifferenceTensorField::from_connection(table);
}

/// Pointwise consequences of the almost-contact-statistical condition,
/// checked on coordinate vectors and their pairwise sums and differences.
inline Report acs_identities(const PointFrame& f) {
  const double tol = f.tolerance;
  const Point& p = f.point;
  const auto vectors = coordinate_test_vectors(f.dim());
  const Matrix phi2 = f.phi * f.phi;
  auto is_zero = [&](const Vector& v) { return f.norm(v) <= tol; };
  auto off_xi = [&](const Vector& v) { return f.norm(f.horizontal(v)); };

  double g_phix_xi = 0.0;
  double g_x_phix = 0.0;
  double k_phix_xi = 0.0;
  double k_phi2 = 0.0;
  double iff_kphi_phik = 0.0;
  double iff_phik_parallel = 0.0;
  double iff_phix_parallel = 0.0;
  bool all_kxx_zero = true;
  bool all_kxy_zero = true;
  bool all_k_x_phix_zero = true;
  bool all_k_x_phiy_zero = true;
  bool all_phik_xx_zero = true;
  bool all_phik_xy_zero = true;
  bool all_kxx_parallel = true;
  bool all_kxy_parallel = true;

  for (const Vector& x : vectors) {
    const Vector phix = f.phi * x;
    g_phix_xi = std::max(g_phix_xi, std::abs(f.inner(phix, f.xi)));
    g_x_phix = std::max(g_x_phix, std::abs(f.inner(x, phix)));
    k_phix_xi = std::max(k_phix_xi, f.norm(f.K(phix, f.xi)));
    // φX = 0 ⟺ X ∥ ξ
    bool phix_zero = f.norm(phix) <= tol;
    bool parallel = off_xi(x) <= tol;
    if (phix_zero != parallel) iff_phix_parallel = std::max(iff_phix_parallel, std::abs(f.norm(phix) - off_xi(x)));

    const Vector kxx = f.K(x, x);
    all_kxx_zero = all_kxx_zero && is_zero(kxx);
    all_k_x_phix_zero = all_k_x_phix_zero && is_zero(f.K(x, phix));
    all_phik_xx_zero = all_phik_xx_zero && is_zero(f.phi * kxx);
    all_kxx_parallel = all_kxx_parallel && off_xi(kxx) <= tol;

    for (const Vector& y : vectors) {
      const Vector kxy = f.K(x, y);
      const Vector ref = phi2 * kxy;
      k_phi2 = std::max({k_phi2, f.norm(f.K(phi2 * x, y) - ref), f.norm(f.K(x, phi2 * y) - ref),
                         f.norm(f.K(phix, f.phi * y) - ref)});
      const Vector k_x_phiy = f.K(x, f.phi * y);
      const Vector phik = f.phi * kxy;
      if (is_zero(k_x_phiy) != is_zero(phik)) {
        iff_kphi_phik = std::max(iff_kphi_phik, std::abs(f.norm(k_x_phiy) - f.norm(phik)) + tol);
      }
      if (is_zero(phik) != (off_xi(kxy) <= tol)) {
        iff_phik_parallel = std::max(iff_phik_parallel, std::abs(f.norm(phik) - off_xi(kxy)) + tol);
      }
      all_kxy_zero = all_kxy_zero && is_zero(kxy);
      all_k_x_phiy_zero = all_k_x_phiy_zero && is_zero(k_x_phiy);
      all_phik_xy_zero = all_phik_xy_zero && is_zero(phik);
      all_kxy_parallel = all_kxy_parallel && off_xi(kxy) <= tol;
    }
  }

  Report rep;
  rep.identity("acs_identity.g_phix_xi", p, g_phix_xi, tol, "g(phi X, xi) = 0");
  rep.identity("acs_identity.g_x_phix", p, g_x_phix, tol, "g(X, phi X) = 0");
  rep.identity("acs_identity.k_phix_xi", p, k_phix_xi, tol, "K(phi X, xi) = 0");
  rep.identity("acs_identity.k_phi_squared", p, k_phi2, tol,
               "K(phi^2 X,Y) = K(X,phi^2 Y) = K(phi X,phi Y) = phi^2 K(X,Y)");
  rep.identity("acs_identity.phix_zero_iff_parallel", p, iff_phix_parallel, tol, "phi X = 0 <=> X || xi");
  rep.identity("acs_identity.k_x_phiy_iff_phik", p, iff_kphi_phik, tol, "K(X,phi Y) = 0 <=> phi K(X,Y) = 0");
  rep.identity("acs_identity.phik_iff_parallel", p, iff_phik_parallel, tol, "phi K(X,Y) = 0 <=> K(X,Y) || xi");
  auto agree = [&](const char* name, bool a, bool b, const char* what) {
    rep.identity(name, p, a == b ? 0.0 : 1.0, 0.0, what);
  };
  agree("acs_identity.polarization_k", all_kxy_zero, all_kxx_zero, "K(X,Y) = 0 for all X,Y <=> K(X,X) = 0 for all X");
  agree("acs_identity.polarization_k_phi", all_k_x_phiy_zero, all_k_x_phix_zero,
        "K(X,phi Y) = 0 for all X,Y <=> K(X,phi X) = 0 for all X");
  agree("acs_identity.polarization_phik", all_phik_xy_zero, all_phik_xx_zero,
        "phi K(X,Y) = 0 for all X,Y <=> phi K(X,X) = 0 for all X");
  agree("acs_identity.polarization_parallel", all_kxy_parallel, all_kxx_parallel,
        "K(X,Y) || xi for all X,Y <=> K(X,X) || xi for all X");
  return rep;
}

}  // namespace acsm
