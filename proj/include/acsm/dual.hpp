#pragma once

// Forward-mode dual numbers. Dual<Dual<double>> carries a mixed second
// derivative, which is how the curvature code differentiates Christoffel
// symbols that themselves contain metric derivatives.

#include <cmath>
#include <cstddef>
#include <iterator>
#include <type_traits>
#include <vector>

namespace acsm {

template <typename T>
struct Dual {
  T value{};
  T deriv{};

  constexpr Dual() = default;
  constexpr Dual(T v) : value(v), deriv(T{}) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T v, T d) : value(v), deriv(d) {}

  template <typename U>
    requires(std::is_arithmetic_v<U> && !std::is_same_v<U, T>)
  constexpr Dual(U v) : value(T(static_cast<double>(v))), deriv(T{}) {}  // NOLINT

  constexpr Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_dual_v = is_dual<T>::value;

template <typename T>
constexpr Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <typename T>
constexpr Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <typename T>
constexpr Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <typename T>
constexpr Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) { return {-a.value, -a.deriv}; }

template <typename T>
constexpr Dual<T> operator*(double s, const Dual<T>& a) { return {s * a.value, s * a.deriv}; }
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, double s) { return {a.value * s, a.deriv * s}; }
template <typename T>
constexpr Dual<T> operator+(double s, const Dual<T>& a) { return {s + a.value, a.deriv}; }
template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a, double s) { return {a.value + s, a.deriv}; }
template <typename T>
constexpr Dual<T> operator-(double s, const Dual<T>& a) { return {s - a.value, -a.deriv}; }
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a, double s) { return {a.value - s, a.deriv}; }
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, double s) { return {a.value / s, a.deriv / s}; }
template <typename T>
constexpr Dual<T> operator/(double s, const Dual<T>& a) { return Dual<T>(T(s)) / a; }

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.value), a.deriv * cos(a.value)};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.value), -(a.deriv * sin(a.value))};
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.value);
  return {e, a.deriv * e};
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.value), a.deriv / a.value};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.value);
  return {r, a.deriv / (2.0 * r)};
}

/// Innermost real value of a (possibly nested) dual number.
template <typename T>
constexpr double primal(const T& x) {
  if constexpr (is_dual_v<T>) {
    return primal(x.value);
  } else {
    return static_cast<double>(x);
  }
}

/// True when every component of a nested dual is finite.
template <typename T>
bool all_finite(const T& x) {
  if constexpr (is_dual_v<T>) {
    return all_finite(x.value) && all_finite(x.deriv);
  } else {
    return std::isfinite(static_cast<double>(x));
  }
}

/// Integer power by repeated squaring; exact under the dual product rule.
template <typename T>
T ipow(T base, long long n) {
  if (n < 0) return T(1.0) / ipow(base, -n);
  T result(1.0);
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

/// Seeds coordinate `j` of a point, lifting the scalar type one dual level.
template <typename T, typename Range>
auto seed_point(const Range& p, std::size_t j) {
  std::vector<Dual<T>> out;
  out.reserve(std::size(p));
  std::size_t i = 0;
  for (const auto& x : p) {
    out.emplace_back(T(x), i == j ? T(1.0) : T{});
    ++i;
  }
  return out;
}

}  // namespace acsm
