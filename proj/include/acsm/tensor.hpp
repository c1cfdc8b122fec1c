#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "acsm/dual.hpp"
#include "acsm/errors.hpp"

namespace acsm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense cube-shaped array of rank `Rank`, every index running over [0, dim).
/// Index order follows the tensor's component notation, e.g. gamma(i, j, k)
/// holds Γ^i_jk and r(i, j, k, l) holds R^i_jkl.
template <typename T, std::size_t Rank>
class IndexedArray {
 public:
  IndexedArray() = default;
  explicit IndexedArray(std::size_t dim, T fill = T{}) : dim_(dim), data_(size_for(dim), fill) {}

  std::size_t dim() const noexcept { return dim_; }
  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  template <typename... I>
    requires(sizeof...(I) == Rank)
  T& operator()(I... idx) {
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }
  template <typename... I>
    requires(sizeof...(I) == Rank)
  const T& operator()(I... idx) const {
    return data_[offset(static_cast<std::size_t>(idx)...)];
  }

 private:
  std::size_t dim_ = 0;
  std::vector<T> data_;

  static std::size_t size_for(std::size_t dim) {
    std::size_t n = 1;
    for (std::size_t r = 0; r < Rank; ++r) n *= dim;
    return n;
  }
  template <typename... I>
  std::size_t offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * dim_ + idx), ...);
    return off;
  }
};

using Array2 = IndexedArray<double, 2>;
using Array3 = IndexedArray<double, 3>;
using Array4 = IndexedArray<double, 4>;

template <std::size_t Rank>
double max_abs(const IndexedArray<double, Rank>& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t Rank>
double max_abs_diff(const IndexedArray<double, Rank>& a, const IndexedArray<double, Rank>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

/// Entrywise a + s * b.
template <std::size_t Rank>
IndexedArray<double, Rank> axpy(const IndexedArray<double, Rank>& a, double s,
                                const IndexedArray<double, Rank>& b) {
  IndexedArray<double, Rank> out(a.dim());
  auto da = a.data();
  auto db = b.data();
  auto dout = out.data();
  for (std::size_t i = 0; i < da.size(); ++i) dout[i] = da[i] + s * db[i];
  return out;
}

/// Inverse of a small square matrix by Gauss-Jordan elimination with partial
/// pivoting (pivot choice uses primal values, so duals differentiate through it).
/// `det_out` receives the primal determinant.
template <typename T>
IndexedArray<T, 2> invert(const IndexedArray<T, 2>& m, double* det_out = nullptr) {
  const std::size_t n = m.dim();
  IndexedArray<T, 2> a = m;
  IndexedArray<T, 2> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = T(1.0);
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(primal(a(r, col))) > std::abs(primal(a(piv, col)))) piv = r;
    }
    if (primal(a(piv, col)) == 0.0) {
      if (det_out) *det_out = 0.0;
      throw SingularMetric("matrix is singular");
    }
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
      det = -det;
    }
    T p = a(col, col);
    det *= primal(p);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / p;
      inv(col, c) = inv(col, c) / p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) = a(r, c) - f * a(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

inline Matrix to_matrix(const Array2& a) {
  Matrix m(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(i, j);
  return m;
}

/// Vector-valued bilinear map (X, Y) -> B(X, Y)^i = b(i, j, k) X^j Y^k.
inline Vector contract(const Array3& b, const Vector& x, const Vector& y) {
  const std::size_t n = b.dim();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j] == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) out[i] += b(i, j, k) * x[j] * y[k];
    }
  return out;
}

/// Applies a (1,3) curvature-type array with the convention
/// T(X, Y)Z = t(i, j, k, l) X^k Y^l Z^j e_i.
inline Vector apply_curvature(const Array4& t, const Vector& x, const Vector& y, const Vector& z) {
  const std::size_t n = t.dim();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out[i] += t(i, j, k, l) * x[k] * y[l] * z[j];
  return out;
}

/// Lowered form L(a, b, c, d) = g(T(e_a, e_b)e_c, e_d).
inline Array4 lower_curvature(const Array4& t, const Matrix& g) {
  const std::size_t n = t.dim();
  Array4 out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          double s = 0.0;
          for (std::size_t i = 0; i < n; ++i) s += g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) * t(i, c, a, b);
          out(a, b, c, d) = s;
        }
  return out;
}

inline Vector basis_vector(std::size_t dim, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(i)] = 1.0;
  return v;
}

}  // namespace acsm
