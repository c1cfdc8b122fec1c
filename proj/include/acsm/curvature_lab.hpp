#pragma once

// The [K,K] bracket, φ-sectional K-curvature, the statistical curvature
// tensor S = ½(R + R̄), and the pointwise audits built on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "acsm/statistical.hpp"

namespace acsm {

using KKBracketAtPoint = Array4;
using StatisticalCurvatureAtPoint = Array4;

/// [K,K](X,Y)Z = K(X, K(Y,Z)) - K(Y, K(X,Z)).
inline Vector kk_bracket(const Array3& k, const Vector& x, const Vector& y, const Vector& z) {
  return contract(k, x, contract(k, y, z)) - contract(k, y, contract(k, x, z));
}

/// Components t(i, j, k, l) with [K,K](∂k, ∂l)∂j = t(i, j, k, l) ∂i.
inline KKBracketAtPoint kk_bracket_tensor(const Array3& k) {
  const std::size_t n = k.dim();
  KKBracketAtPoint t(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          double v = 0.0;
          for (std::size_t m = 0; m < n; ++m) v += k(i, a, m) * k(m, b, j) - k(i, b, m) * k(m, a, j);
          t(i, j, a, b) = v;
        }
  return t;
}

/// Residuals of the four curvature-like identities of a (1,3) array.
struct CurvatureLikeResiduals {
  double bianchi = 0.0;         // T(X,Y)Z + T(Y,Z)X + T(Z,X)Y = 0
  double antisym_first = 0.0;   // g(T(X,Y)Z,W) = -g(T(Y,X)Z,W)
  double antisym_second = 0.0;  // g(T(X,Y)Z,W) = -g(T(X,Y)W,Z)
  double pair_exchange = 0.0;   // g(T(X,Y)Z,W) = g(T(Z,W)X,Y)

  double max() const { return std::max({bianchi, antisym_first, antisym_second, pair_exchange}); }
};

inline CurvatureLikeResiduals curvature_like_residuals(const Array4& t, const Matrix& g) {
  const std::size_t n = t.dim();
  const Array4 low = lower_curvature(t, g);
  CurvatureLikeResiduals r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          r.bianchi = std::max(r.bianchi, std::abs(t(i, c, a, b) + t(i, a, b, c) + t(i, b, c, a)));
          const double v = low(i, a, b, c);
          r.antisym_first = std::max(r.antisym_first, std::abs(v + low(a, i, b, c)));
          r.antisym_second = std::max(r.antisym_second, std::abs(v + low(i, a, c, b)));
          r.pair_exchange = std::max(r.pair_exchange, std::abs(v - low(b, c, i, a)));
        }
  return r;
}

struct PhiSectionalValue {
  double value = 0.0;        // g([K,K](X,φX)φX, X) / Q(X,φX)
  double closed_form = 0.0;  // -2‖K(X,X)‖² / ‖X‖⁴
  Vector x;
  Vector phi_x;
  Point point;

  double agreement_residual() const { return std::abs(value - closed_form); }
};

namespace detail {

inline void check_section(const PointFrame& f, const Vector& x, double* q_out) {
  if (std::abs(f.eta_of(x)) > f.tolerance) {
    throw NotHorizontal("eta(X) = " + json_number(f.eta_of(x)) + " exceeds tolerance");
  }
  if (!(f.norm(x) > 1e-10)) throw DegenerateSection("X is zero");
  const double q = plane_area_squared(f.g, x, f.phi * x);
  if (!(q > 1e-12)) throw DegenerateSection("Q(X, phi X) <= 1e-12");
  *q_out = q;
}

}  // namespace detail

/// φ-sectional K-curvature of the section spanned by {X, φX}; X must be
/// orthogonal to ξ.
inline PhiSectionalValue phi_sectional_k_curvature(const PointFrame& f, const Vector& x) {
  double q = 0.0;
  detail::check_section(f, x, &q);
  PhiSectionalValue out;
  out.x = x;
  out.phi_x = f.phi * x;
  out.point = f.point;
  out.value = f.inner(kk_bracket(f.k, x, out.phi_x, out.phi_x), x) / q;
  const double kxx = f.inner(f.K(x, x), f.K(x, x));
  const double xx = f.inner(x, x);
  out.closed_form = -2.0 * kxx / (xx * xx);
  return out;
}

/// S = ½(R + R̄) together with R° and [K,K] at one point.
struct StatisticalCurvature {
  StatisticalCurvatureAtPoint s;
  CurvatureAtPoint r0;
  KKBracketAtPoint kk;
  /// ‖S - R° - [K,K]‖_max
  double decomposition_residual = 0.0;
};

inline StatisticalCurvature statistical_curvature(const PointFrame& f, const CurvatureSet& c) {
  StatisticalCurvature out;
  out.s = axpy(c.r, 1.0, c.r_bar);
  for (double& v : out.s.data()) v *= 0.5;
  out.r0 = c.r0;
  out.kk = kk_bracket_tensor(f.k);
  out.decomposition_residual = max_abs_diff(out.s, axpy(c.r0, 1.0, out.kk));
  return out;
}

inline StatisticalCurvature statistical_curvature(const ChartManifold& m, const Point& p) {
  return statistical_curvature(evaluate_frame(m, p), curvatures(m, p));
}

struct PhiSectionalTriple {
  double statistical = 0.0;  // from S
  double riemannian = 0.0;   // from R°
  double k_curvature = 0.0;  // from [K,K]
  double additivity_residual() const { return std::abs(statistical - riemannian - k_curvature); }
};

inline PhiSectionalTriple phi_sectional_triple(const PointFrame& f, const StatisticalCurvature& sc, const Vector& x) {
  double q = 0.0;
  detail::check_section(f, x, &q);
  const Vector phix = f.phi * x;
  return {sectional_curvature(f.g, sc.s, x, phix), sectional_curvature(f.g, sc.r0, x, phix),
          sectional_curvature(f.g, sc.kk, x, phix)};
}

/// Max over i, k of |(∇°_i φ)∂k - (∇_i φ)∂k - 2φK(∂i, ∂k)|.
inline double phi_derivative_split_residual(const PointFrame& f) {
  const std::size_t n = f.dim();
  const Array3 nab = f.nabla();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix lhs = covariant_derivative_11(f.lc, f.phi, f.dphi[i], i);
    const Matrix rhs = covariant_derivative_11(nab, f.phi, f.dphi[i], i);
    for (std::size_t k = 0; k < n; ++k) {
      Vector kik(n);
      for (std::size_t m = 0; m < n; ++m) kik[m] = f.k(m, i, k);
      const Vector diff = lhs.col(k) - rhs.col(k) - 2.0 * (f.phi * kik);
      worst = std::max(worst, detail::max_abs(diff));
    }
  }
  return worst;
}

struct GeodesicXi {
  double levi_civita = 0.0;  // ‖∇°_ξ ξ‖
  double statistical = 0.0;  // ‖∇_ξ ξ‖
};

inline Vector covariant_along(const PointFrame& f, const Array3& gamma, const Vector& x) {
  Vector out = Vector::Zero(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i) {
    if (x[i] == 0.0) continue;
    out += x[i] * covariant_derivative_vector(gamma, f.xi, f.dxi[i], i);
  }
  return out;
}

inline GeodesicXi geodesic_xi_check(const PointFrame& f) {
  return {f.norm(covariant_along(f, f.lc, f.xi)), f.norm(covariant_along(f, f.nabla(), f.xi))};
}

/// The three equivalent forms of φ-compatibility, each as a max residual.
struct PhiCompatibility {
  double nabla_phi = 0.0;    // ∇φ = 0
  double commute = 0.0;      // ∇_X φY = φ∇_X Y
  double lc_split = 0.0;     // (∇°_X φ)Y = 2φK(X,Y)
  bool nabla_phi_holds = false;
  bool commute_holds = false;
  bool lc_split_holds = false;

  bool agree() const { return nabla_phi_holds == commute_holds && commute_holds == lc_split_holds; }
  bool compatible() const { return nabla_phi_holds && commute_holds && lc_split_holds; }
};

inline PhiCompatibility phi_compatibility(const PointFrame& f) {
  const std::size_t n = f.dim();
  const Array3 nab = f.nabla();
  PhiCompatibility out;
  for (std::size_t i = 0; i < n; ++i) {
    out.nabla_phi = std::max(out.nabla_phi, detail::max_abs(covariant_derivative_11(nab, f.phi, f.dphi[i], i)));
    const Matrix lc_dphi = covariant_derivative_11(f.lc, f.phi, f.dphi[i], i);
    for (std::size_t k = 0; k < n; ++k) {
      // ∇_{∂i}(φ∂k): the field φ∂k has components φ(·, k).
      Vector d_phi_y = f.dphi[i].col(k);
      Vector nabla_y(n);
      for (std::size_t j = 0; j < n; ++j) {
        nabla_y[j] = nab(j, i, k);
        for (std::size_t m = 0; m < n; ++m) d_phi_y[j] += nab(j, i, m) * f.phi(m, k);
      }
      out.commute = std::max(out.commute, detail::max_abs(Vector(d_phi_y - f.phi * nabla_y)));
      Vector kik(n);
      for (std::size_t m = 0; m < n; ++m) kik[m] = f.k(m, i, k);
      out.lc_split = std::max(out.lc_split, detail::max_abs(Vector(lc_dphi.col(k) - 2.0 * (f.phi * kik))));
    }
  }
  out.nabla_phi_holds = out.nabla_phi <= f.tolerance;
  out.commute_holds = out.commute <= f.tolerance;
  out.lc_split_holds = out.lc_split <= f.tolerance;
  return out;
}

/// Ψ_X(Y, Z) = (∇_X g)(Y, φZ).
inline double psi(const PointFrame& f, const Array3& nabla_g_arr, const Vector& x, const Vector& y, const Vector& z) {
  const Vector phiz = f.phi * z;
  const std::size_t n = f.dim();
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) s += nabla_g_arr(a, b, c) * x[a] * y[b] * phiz[c];
  return s;
}

/// Largest |K_φ(X)| over the horizontal test vectors of `basis`.
inline double max_abs_phi_sectional(const PointFrame& f, const PhiBasis& basis) {
  double worst = 0.0;
  for (const Vector& x : horizontal_test_vectors(basis)) {
    worst = std::max(worst, std::abs(phi_sectional_k_curvature(f, x).value));
  }
  return worst;
}

/// Ψ-form identities for a φ-compatible structure. Throws PreconditionNotMet
/// when the connection is not φ-compatible at the point.
inline Report psi_check(const PointFrame& f, const PhiBasis& basis) {
  if (!phi_compatibility(f).compatible()) {
    throw PreconditionNotMet("psi identities require a phi-compatible statistical connection");
  }
  const std::size_t n = f.dim();
  const Array3 ng = nabla_g(f.nabla(), f.g, f.dg);
  double antisym = 0.0;
  double via_k = 0.0;
  double slots = 0.0;
  double phi_slots = 0.0;
  double magnitude = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const Vector x = basis_vector(n, a);
        const Vector y = basis_vector(n, b);
        const Vector z = basis_vector(n, c);
        const double v = psi(f, ng, x, y, z);
        magnitude = std::max(magnitude, std::abs(v));
        antisym = std::max(antisym, std::abs(v + psi(f, ng, x, z, y)));
        via_k = std::max(via_k, std::abs(v - 2.0 * f.inner(f.phi * f.K(y, z), x)));
        slots = std::max({slots, std::abs(v - psi(f, ng, y, x, z)), std::abs(v - psi(f, ng, z, y, x))});
        phi_slots = std::max({phi_slots, std::abs(psi(f, ng, x, f.phi * y, z) + psi(f, ng, x, y, f.phi * z)),
                              std::abs(psi(f, ng, x, f.phi * y, f.phi * z) - v)});
      }
  const double tol = f.tolerance;
  const Point& p = f.point;
  Report rep;
  rep.identity("psi.antisymmetric", p, antisym, tol, "Psi_X(Y,Z) = -Psi_X(Z,Y)");
  rep.identity("psi.via_k", p, via_k, tol, "Psi_X(Y,Z) = 2 g(phi K(Y,Z), X)");
  rep.identity("psi.slot_symmetry", p, slots, tol, "Psi_X(Y,Z) = Psi_Y(X,Z) = Psi_Z(Y,X)");
  rep.identity("psi.phi_slots", p, phi_slots, tol,
               "Psi_X(phi Y,Z) = -Psi_X(Y,phi Z), Psi_X(phi Y,phi Z) = Psi_X(Y,Z)");
  const double kphi = max_abs_phi_sectional(f, basis);
  rep.identity("psi.vanishes", p, magnitude, tol, "Psi = 0");
  rep.identity("psi.vanishes_iff_kphi_zero", p, (magnitude <= tol) == (kphi <= tol) ? 0.0 : 1.0, 0.0,
               "Psi = 0 <=> K_phi = 0");
  return rep;
}

/// The nine equivalent characterizations of K_φ = 0, each evaluated on its
/// own code path.
struct VanishingConditions {
  static constexpr std::array<const char*, 9> kNames = {
      "vanishing.kphi_zero",          "vanishing.statistical_equals_riemannian",
      "vanishing.k_is_lambda_eta_eta_xi", "vanishing.kk_zero",
      "vanishing.s_equals_r0",        "vanishing.k_xx_zero_horizontal",
      "vanishing.k_x_phix_zero",      "vanishing.phi_k_xx_zero",
      "vanishing.k_xx_parallel_xi"};
  std::array<double, 9> residual{};
  std::array<bool, 9> holds{};

  bool unanimous() const {
    return std::all_of(holds.begin(), holds.end(), [&](bool h) { return h == holds[0]; });
  }
};

inline VanishingConditions vanishing_conditions(const PointFrame& f, const StatisticalCurvature& sc,
                                                const PhiBasis& basis) {
  VanishingConditions out;
  const std::size_t n = f.dim();
  const auto horizontal = horizontal_test_vectors(basis);
  const auto all = coordinate_test_vectors(n);
  auto& r = out.residual;

  for (const Vector& x : horizontal) {
    r[0] = std::max(r[0], std::abs(phi_sectional_k_curvature(f, x).value));
    const Vector phix = f.phi * x;
    r[1] = std::max(r[1], std::abs(sectional_curvature(f.g, sc.s, x, phix) - sectional_curvature(f.g, sc.r0, x, phix)));
    r[5] = std::max(r[5], f.norm(f.K(x, x)));
  }
  const double lambda = f.inner(f.K(f.xi, f.xi), f.xi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        r[2] = std::max(r[2], std::abs(f.k(i, j, k) - lambda * f.eta[j] * f.eta[k] * f.xi[i]));
      }
  r[3] = max_abs(sc.kk);
  r[4] = max_abs_diff(sc.s, sc.r0);
  for (const Vector& x : all) {
    const Vector kxx = f.K(x, x);
    r[6] = std::max(r[6], f.norm(f.K(x, f.phi * x)));
    r[7] = std::max(r[7], f.norm(f.phi * kxx));
    r[8] = std::max(r[8], f.norm(f.horizontal(kxx)));
  }
  for (std::size_t c = 0; c < 9; ++c) out.holds[c] = r[c] <= f.tolerance;
  return out;
}

/// Check groups understood by audit().
inline const std::vector<std::string>& audit_groups() {
  static const std::vector<std::string> groups = {
      "lambda",       "kphi",      "vanishing", "decomposition", "duality",   "symmetries",
      "phi_derivative", "geodesic", "phi_compat", "psi",          "acs_identities", "conjugate"};
  return groups;
}

struct AuditOptions {
  std::set<std::string> groups;  // empty selects every group
  std::optional<Vector> seed;    // φ-basis seed; default_seed() when absent
  std::optional<double> tolerance;

  bool wants(const std::string& g) const { return groups.empty() || groups.count(g) != 0; }
};

/// Tolerance for identities that pass through second derivatives of g and
/// first derivatives of K.
inline constexpr double kCurvatureTolerance = 1e-6;

/// Full pointwise audit at one point.
inline Report audit_point(const ChartManifold& m, const Point& p, const AuditOptions& opt = {}) {
  PointFrame f = evaluate_frame(m, p);
  if (opt.tolerance) f.tolerance = *opt.tolerance;
  const double tol = f.tolerance;
  const double ctol = std::max(tol, kCurvatureTolerance);
  const PhiBasis basis = phi_basis(f, opt.seed ? *opt.seed : default_seed(f));
  const auto sections = horizontal_test_vectors(basis);
  const CurvatureSet curv = curvatures(m, p);
  const StatisticalCurvature sc = statistical_curvature(f, curv);
  Report rep;

  double lambda = f.inner(f.K(f.xi, f.xi), f.xi);
  if (opt.wants("lambda")) {
    const LambdaValue lv = lambda_unchecked(f);
    lambda = lv.lambda;
    const double res = lv.residual;
    rep.value("lambda", p, lambda, res, res <= tol, "lambda = g(K(xi,xi),xi); K(X,xi) = lambda eta(X) xi");
  }

  double kphi_max = -INFINITY;
  double kphi_abs = 0.0;
  if (opt.wants("kphi")) {
    double closed = 0.0;
    double additivity = 0.0;
    double ordering = 0.0;
    for (const Vector& x : sections) {
      const PhiSectionalValue v = phi_sectional_k_curvature(f, x);
      const PhiSectionalTriple t = phi_sectional_triple(f, sc, x);
      kphi_max = std::max(kphi_max, v.value);
      kphi_abs = std::max(kphi_abs, std::abs(v.value));
      closed = std::max(closed, v.agreement_residual() / std::max(1.0, std::abs(v.closed_form)));
      additivity = std::max(additivity, t.additivity_residual());
      ordering = std::max(ordering, t.statistical - t.riemannian);
      rep.value("kphi", p, v.value, v.agreement_residual(), v.value <= tol);
      rep.value("kphi.riemannian", p, t.riemannian);
      rep.value("kphi.statistical", p, t.statistical, t.additivity_residual(), t.additivity_residual() <= ctol);
    }
    rep.identity("kphi.nonpositive", p, std::max(0.0, kphi_max), tol, "K_phi(X) <= 0");
    rep.identity("kphi.closed_form", p, closed, tol, "K_phi(X) = -2|K(X,X)|^2/|X|^4");
    rep.identity("kphi.additivity", p, additivity, ctol, "K^S_phi = K^o_phi + K_phi");
    rep.identity("kphi.statistical_below_riemannian", p, std::max(0.0, ordering), ctol, "K^S_phi <= K^o_phi");
  }

  if (opt.wants("vanishing")) {
    const VanishingConditions vc = vanishing_conditions(f, sc, basis);
    for (std::size_t c = 0; c < 9; ++c) {
      rep.condition(VanishingConditions::kNames[c], p, vc.residual[c], vc.holds[c]);
    }
    rep.identity("vanishing.unanimous", p, vc.unanimous() ? 0.0 : 1.0, 0.0,
                 vc.unanimous() ? (vc.holds[0] ? "all nine hold" : "all nine fail") : "EquivalenceViolation");
    if (vc.unanimous() && vc.holds[0] && std::abs(lambda) <= tol) {
      rep.identity("vanishing.k_zero_when_lambda_zero", p, max_abs(f.k), tol, "K_phi = 0 and K(xi,xi) = 0 => K = 0");
    }
  }

  if (opt.wants("decomposition")) {
    rep.identity("decomposition.s_equals_r0_plus_kk", p, sc.decomposition_residual, ctol, "S = R° + [K,K]");
  }

  if (opt.wants("duality")) {
    const Array4 lr = lower_curvature(curv.r, f.g);
    const Array4 lrb = lower_curvature(curv.r_bar, f.g);
    double worst = 0.0;
    const std::size_t n = f.dim();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) worst = std::max(worst, std::abs(lr(a, b, c, d) + lrb(a, b, d, c)));
    rep.identity("duality.conjugate_curvature", p, worst, ctol, "g(R(X,Y)Z,W) = -g(Rbar(X,Y)W,Z)");
  }

  if (opt.wants("symmetries")) {
    const auto kk = curvature_like_residuals(sc.kk, f.g);
    const auto s = curvature_like_residuals(sc.s, f.g);
    rep.identity("symmetries.kk_bianchi", p, kk.bianchi, tol);
    rep.identity("symmetries.kk_antisym_xy", p, kk.antisym_first, tol);
    rep.identity("symmetries.kk_antisym_zw", p, kk.antisym_second, tol);
    rep.identity("symmetries.kk_pair_exchange", p, kk.pair_exchange, tol);
    rep.identity("symmetries.s_bianchi", p, s.bianchi, ctol);
    rep.identity("symmetries.s_antisym_xy", p, s.antisym_first, ctol);
    rep.identity("symmetries.s_antisym_zw", p, s.antisym_second, ctol);
    rep.identity("symmetries.s_pair_exchange", p, s.pair_exchange, ctol);
  }

  if (opt.wants("phi_derivative")) {
    rep.identity("phi_derivative.split", p, phi_derivative_split_residual(f), ctol,
                 "(nabla°_X phi)Y = (nabla_X phi)Y + 2 phi K(X,Y)");
  }

  const double cosym = levi_civita_phi_residual(f);
  if (opt.wants("geodesic")) {
    const GeodesicXi gx = geodesic_xi_check(f);
    rep.value("geodesic.levi_civita", p, gx.levi_civita);
    rep.value("geodesic.statistical", p, gx.statistical);
    if (cosym <= tol) {
      rep.identity("geodesic.xi_levi_civita_geodesic", p, gx.levi_civita, tol, "cosymplectic => nabla°_xi xi = 0");
      const double kphi = kphi_abs > 0.0 ? kphi_abs : max_abs_phi_sectional(f, basis);
      if (kphi <= tol) {
        const bool geodesic = gx.statistical <= tol;
        const bool k_zero = max_abs(f.k) <= tol;
        rep.identity("geodesic.xi_geodesic_iff_k_zero", p, geodesic == k_zero ? 0.0 : 1.0, 0.0,
                     "cosymplectic, K_phi = 0: nabla_xi xi = 0 <=> K = 0");
      }
    }
  }

  std::optional<bool> compatible;
  if (opt.wants("phi_compat") || opt.wants("psi")) {
    const PhiCompatibility pc = phi_compatibility(f);
    compatible = pc.compatible();
    if (opt.wants("phi_compat")) {
      rep.condition("phi_compat.nabla_phi_zero", p, pc.nabla_phi, pc.nabla_phi_holds);
      rep.condition("phi_compat.commutes", p, pc.commute, pc.commute_holds);
      rep.condition("phi_compat.lc_split", p, pc.lc_split, pc.lc_split_holds);
      rep.identity("phi_compat.equivalent", p, pc.agree() ? 0.0 : 1.0, 0.0, "the three forms agree");
      if (pc.compatible()) {
        rep.identity("phi_compat.cosymplectic", p, cosym, tol, "phi-compatible => nabla° phi = 0");
        rep.identity("phi_compat.kphi_zero", p, max_abs_phi_sectional(f, basis), tol, "phi-compatible => K_phi = 0");
        double par = 0.0;
        double par_lc = 0.0;
        const Array3 nab = f.nabla();
        for (std::size_t i = 0; i < f.dim(); ++i) {
          par = std::max(par, f.norm(f.horizontal(covariant_derivative_vector(nab, f.xi, f.dxi[i], i))));
          par_lc = std::max(par_lc, f.norm(f.horizontal(covariant_derivative_vector(f.lc, f.xi, f.dxi[i], i))));
        }
        rep.identity("phi_compat.nabla_xi_parallel", p, par, tol, "nabla_X xi || xi");
        rep.identity("phi_compat.lc_xi_parallel", p, par_lc, tol, "nabla°_X xi || xi");
      }
    }
  }

  if (opt.wants("psi") && compatible.value_or(false)) {
    rep.append(psi_check(f, basis));
  }

  if (opt.wants("acs_identities")) rep.append(acs_identities(f));

  if (opt.wants("conjugate")) {
    rep.identity("conjugate.duality", p, conjugate_connection(f).duality_residual, tol,
                 "g(nabla_X Y,Z) + g(Y,nablabar_X Z) = X g(Y,Z)");
  }
  rep.condition("cosymplectic", p, cosym, cosym <= tol, "nabla° phi = 0");
  return rep;
}

/// Runs `fn(point)` over `points` on worker threads; results keep point order.
template <typename Fn>
std::vector<Report> map_points(std::span<const Point> points, Fn fn) {
  std::vector<Report> out(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(points.size(), std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = fn(points[i]);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < points.size(); i += workers) {
          try {
            out[i] = fn(points[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Audit over a point set, with a closing constancy summary of K_φ.
inline Report audit(const ChartManifold& m, std::span<const Point> points, const AuditOptions& opt = {}) {
  Report rep;
  for (const Report& r : map_points(points, [&](const Point& p) { return audit_point(m, p, opt); })) rep.append(r);
  const auto values = rep.find("kphi");
  if (!values.empty()) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const Record* r : values) {
      lo = std::min(lo, *r->value);
      hi = std::max(hi, *r->value);
    }
    rep.condition("kphi.constancy", {}, hi - lo, hi - lo <= kCurvatureTolerance, "max - min over grid and sections");
  }
  return rep;
}

}  // namespace acsm
