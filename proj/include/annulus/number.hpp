#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace annulus {

using Rational = mpq_class;

// a + b*sqrt(3) with rational a, b. Exact field arithmetic for rotations of
// order 3 and 6.
struct QSqrt3 {
  Rational a, b;
  QSqrt3() = default;
  QSqrt3(const Rational& x) : a(x), b(0) {}  // NOLINT: implicit from rationals
  QSqrt3(const Rational& x, const Rational& y) : a(x), b(y) {}

  friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt3 operator-(const QSqrt3& x, const QSqrt3& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt3 operator-(const QSqrt3& x) { return {-x.a, -x.b}; }
  friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) {
    return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend QSqrt3 operator/(const QSqrt3& x, const QSqrt3& y) {
    Rational n = y.a * y.a - 3 * y.b * y.b;
    QSqrt3 conj{y.a / n, -y.b / n};
    return x * conj;
  }
};

inline int sgn(const Rational& x) { return mpq_sgn(x.get_mpq_t()); }

inline int sgn(const QSqrt3& x) {
  int sa = mpq_sgn(x.a.get_mpq_t()), sb = mpq_sgn(x.b.get_mpq_t());
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: compare a^2 with 3 b^2.
  int c = cmp(Rational(x.a * x.a), Rational(3 * x.b * x.b));
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

// Floating point with a fixed tolerance; values within tau of zero are zero.
struct Approx {
  static constexpr double tau = 1e-9;
  double v = 0;
  Approx() = default;
  Approx(double x) : v(x) {}  // NOLINT
  Approx(const Rational& x) : v(x.get_d()) {}  // NOLINT
  friend Approx operator+(Approx x, Approx y) { return {x.v + y.v}; }
  friend Approx operator-(Approx x, Approx y) { return {x.v - y.v}; }
  friend Approx operator-(Approx x) { return {-x.v}; }
  friend Approx operator*(Approx x, Approx y) { return {x.v * y.v}; }
  friend Approx operator/(Approx x, Approx y) { return {x.v / y.v}; }
};

inline int sgn(const Approx& x) { return x.v > Approx::tau ? 1 : (x.v < -Approx::tau ? -1 : 0); }

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(const QSqrt3& x) { return x.a.get_d() + x.b.get_d() * std::sqrt(3.0); }
inline double to_double(const Approx& x) { return x.v; }

template <class S>
S from_rational(const Rational& r) {
  return S(r);
}

}  // namespace annulus
