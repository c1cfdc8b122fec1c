#pragma once

// Indexed collections of scalar fields: vectors ξ^i, covectors η_i, (1,1)
// tensors φ^i_j, metric components g_ij and (1,2) arrays K^i_jk / Γ^i_jk.

#include <span>
#include <string>
#include <vector>

#include "acsm/expression.hpp"
#include "acsm/tensor.hpp"

namespace acsm {

namespace detail {

template <typename T>
T eval_entry(const ScalarField& f, std::span<const T> p) {
  if (f.is_zero()) return T{};
  return f.evaluate<T>(p);
}

}  // namespace detail

class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<ScalarField> entries) : entries_(std::move(entries)) {}

  static VectorField zero(std::size_t dim) {
    return VectorField(std::vector<ScalarField>(dim, ScalarField::constant(0.0, dim)));
  }

  std::size_t dim() const noexcept { return entries_.size(); }
  const ScalarField& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<ScalarField>& entries() const noexcept { return entries_; }

  template <typename T>
  std::vector<T> evaluate(std::span<const T> p) const {
    std::vector<T> out(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = detail::eval_entry(entries_[i], p);
    return out;
  }

  Vector value(std::span<const double> p) const {
    check_point(p, dim());
    Vector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) out[i] = detail::eval_entry(entries_[i], p);
    return out;
  }

  /// out[j] = ∂_j of the component vector.
  std::vector<Vector> derivatives(std::span<const double> p) const {
    check_point(p, dim());
    std::vector<Vector> out(dim(), Vector::Zero(dim()));
    for (std::size_t j = 0; j < dim(); ++j) {
      auto q = seed_point<double>(p, j);
      for (std::size_t i = 0; i < dim(); ++i) {
        out[j][i] = detail::eval_entry(entries_[i], std::span<const DualScalar>(q)).deriv;
      }
    }
    return out;
  }

 private:
  std::vector<ScalarField> entries_;
};

/// dim x dim array of fields, row-major: entry (i, j).
class MatrixField {
 public:
  MatrixField() = default;
  MatrixField(std::size_t dim, std::vector<ScalarField> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) throw SpecError("matrix field needs dim*dim entries");
  }

  static MatrixField zero(std::size_t dim) {
    return MatrixField(dim, std::vector<ScalarField>(dim * dim, ScalarField::constant(0.0, dim)));
  }

  std::size_t dim() const noexcept { return dim_; }
  const ScalarField& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }
  const std::vector<ScalarField>& entries() const noexcept { return entries_; }

  template <typename T>
  IndexedArray<T, 2> evaluate(std::span<const T> p) const {
    IndexedArray<T, 2> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) = detail::eval_entry((*this)(i, j), p);
    return out;
  }

  Matrix value(std::span<const double> p) const {
    check_point(p, dim_);
    return to_matrix(evaluate<double>(p));
  }

  std::vector<Matrix> derivatives(std::span<const double> p) const {
    check_point(p, dim_);
    std::vector<Matrix> out;
    out.reserve(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      auto q = seed_point<double>(p, j);
      auto a = evaluate<DualScalar>(std::span<const DualScalar>(q));
      Matrix d(dim_, dim_);
      for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) d(r, c) = a(r, c).deriv;
      out.push_back(std::move(d));
    }
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<ScalarField> entries_;
};

/// dim^3 array of fields; entry (i, j, k) stands for the component ^i_jk.
class Array3Field {
 public:
  Array3Field() = default;
  Array3Field(std::size_t dim, std::vector<ScalarField> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_ * dim_) throw SpecError("rank-3 field needs dim^3 entries");
  }

  static Array3Field zero(std::size_t dim) {
    return Array3Field(dim, std::vector<ScalarField>(dim * dim * dim, ScalarField::constant(0.0, dim)));
  }

  std::size_t dim() const noexcept { return dim_; }
  const ScalarField& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return entries_[(i * dim_ + j) * dim_ + k];
  }
  const std::vector<ScalarField>& entries() const noexcept { return entries_; }

  template <typename T>
  IndexedArray<T, 3> evaluate(std::span<const T> p) const {
    IndexedArray<T, 3> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) out(i, j, k) = detail::eval_entry((*this)(i, j, k), p);
    return out;
  }

  /// Largest |f^i_jk - f^i_kj| over the given points; zero without evaluation
  /// when mirrored entries share an expression.
  double lower_symmetry_residual(std::span<const Point> points) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = j + 1; k < dim_; ++k) {
          const ScalarField& a = (*this)(i, j, k);
          const ScalarField& b = (*this)(i, k, j);
          if (&a.root() == &b.root() || a.source() == b.source()) continue;
          for (const Point& p : points) {
            worst = std::max(worst, std::abs(a(p) - b(p)));
          }
        }
    return worst;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<ScalarField> entries_;
};

}  // namespace acsm
