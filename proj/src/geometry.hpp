#pragma once

// Exact plane geometry shared by the realizers. Internal to the library.

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "annulus/contact.hpp"
#include "annulus/error.hpp"
#include "annulus/number.hpp"

namespace annulus::geo {

template <class S>
using Pt = Point<S>;
template <class S>
using Line = std::array<Point<S>, 2>;

template <class S>
S num(long p, long q = 1) {
  return S(Rational(p) / Rational(q));
}

template <class S>
Pt<S> operator+(const Pt<S>& a, const Pt<S>& b) {
  return {S(a.x + b.x), S(a.y + b.y)};
}
template <class S>
Pt<S> operator-(const Pt<S>& a, const Pt<S>& b) {
  return {S(a.x - b.x), S(a.y - b.y)};
}
template <class S>
Pt<S> scale(const S& k, const Pt<S>& a) {
  return {S(k * a.x), S(k * a.y)};
}
template <class S>
S cross(const Pt<S>& a, const Pt<S>& b) {
  return S(a.x * b.y - a.y * b.x);
}
template <class S>
S dot(const Pt<S>& a, const Pt<S>& b) {
  return S(a.x * b.x + a.y * b.y);
}
template <class S>
Pt<S> rot90(const Pt<S>& a) {
  return {S(-a.y), a.x};
}
// Sign of v / sqrt(n2). Exact systems ignore the scale; floats compare the
// normalized value (a distance or a sine) against the tolerance.
template <class S>
int sgn_rel(const S& v, const S&) {
  return sgn(v);
}
inline int sgn_rel(const Approx& v, const Approx& n2) {
  const double d = std::sqrt(n2.v);
  return sgn(Approx(d > 0 ? v.v / d : v.v));
}

template <class S>
int orient(const Pt<S>& a, const Pt<S>& b, const Pt<S>& c) {
  return sgn_rel(cross(b - a, c - a), dot(b - a, b - a));
}
template <class S>
bool same(const Pt<S>& a, const Pt<S>& b) {
  return sgn(S(a.x - b.x)) == 0 && sgn(S(a.y - b.y)) == 0;
}
template <class S>
bool strictly_inside(const Pt<S>& e, const Pt<S>& a, const Pt<S>& b) {
  if (orient(a, b, e) != 0) return false;
  const S l2 = dot(b - a, b - a);
  return sgn_rel(dot(e - a, b - a), l2) > 0 && sgn_rel(dot(e - b, a - b), l2) > 0;
}
template <class S>
bool on_closed(const Pt<S>& e, const Pt<S>& a, const Pt<S>& b) {
  if (orient(a, b, e) != 0) return false;
  const S l2 = dot(b - a, b - a);
  return sgn_rel(dot(e - a, b - a), l2) >= 0 && sgn_rel(dot(e - b, a - b), l2) >= 0;
}
template <class S>
std::optional<Pt<S>> meet(const Line<S>& l1, const Line<S>& l2) {
  Pt<S> d1 = l1[1] - l1[0], d2 = l2[1] - l2[0];
  S den = cross(d1, d2);
  if (sgn_rel(den, S(dot(d1, d1) * dot(d2, d2))) == 0) return std::nullopt;
  S s = S(cross(l2[0] - l1[0], d2) / den);
  return l1[0] + scale(s, d1);
}

// cos and sin of 2π/k in each number system.
template <class S>
std::pair<S, S> cos_sin(int k);

template <>
inline std::pair<Rational, Rational> cos_sin<Rational>(int k) {
  switch (k) {
    case 1: return {Rational(1), Rational(0)};
    case 2: return {Rational(-1), Rational(0)};
    case 4: return {Rational(0), Rational(1)};
  }
  fail("Internal", "no rational rotation of order " + std::to_string(k));
}

template <>
inline std::pair<QSqrt3, QSqrt3> cos_sin<QSqrt3>(int k) {
  Rational half = Rational(1) / Rational(2);
  switch (k) {
    case 3: return {QSqrt3(-half), QSqrt3(Rational(0), half)};
    case 6: return {QSqrt3(half), QSqrt3(Rational(0), half)};
  }
  auto [c, s] = cos_sin<Rational>(k);
  return {QSqrt3(c), QSqrt3(s)};
}

template <>
inline std::pair<Approx, Approx> cos_sin<Approx>(int k) {
  const double a = 2 * std::acos(-1.0) / k;
  return {Approx(std::cos(a)), Approx(std::sin(a))};
}

template <class S>
struct Action {
  bool rotation = false;
  int k = 1;
  Pt<S> tau, center;
  std::vector<std::array<S, 4>> mats;  // row-major powers of the generator

  explicit Action(const SymmetryGroup& g) {
    rotation = g.kind == SymmetryGroup::Kind::Rotation;
    tau = {S(g.vector[0]), S(g.vector[1])};
    center = {S(g.center[0]), S(g.center[1])};
    if (!rotation) return;
    k = g.order;
    auto [c, s] = cos_sin<S>(k);
    std::array<S, 4> cur{num<S>(1), num<S>(0), num<S>(0), num<S>(1)};
    for (int j = 0; j < k; ++j) {
      mats.push_back(cur);
      cur = {S(c * cur[0] - s * cur[2]), S(c * cur[1] - s * cur[3]), S(s * cur[0] + c * cur[2]),
             S(s * cur[1] + c * cur[3])};
    }
  }
  int norm(int p) const { return rotation ? ((p % k) + k) % k : p; }
  Pt<S> apply(const Pt<S>& p, int power) const {
    if (!rotation) return p + scale(S(Rational(power)), tau);
    const auto& m = mats[norm(power)];
    Pt<S> d = p - center;
    return center + Pt<S>{S(m[0] * d.x + m[1] * d.y), S(m[2] * d.x + m[3] * d.y)};
  }
  Line<S> apply(const Line<S>& l, int power) const { return {apply(l[0], power), apply(l[1], power)}; }
};

// Largest power of two not above x (x > 0).
inline Rational pow2_below(double x) {
  int e = static_cast<int>(std::floor(std::log2(x)));
  Rational r(1);
  if (e >= 0) {
    mpz_class p = mpz_class(1) << e;
    r = Rational(p);
  } else {
    mpz_class p = mpz_class(1) << (-e);
    r = Rational(mpz_class(1), p);
  }
  r.canonicalize();
  return r;
}

// A short dyadic rational strictly between a and b.
template <class S>
Rational dyadic_between(const S& a, const S& b) {
  // Stay in the middle half: a coarse dyadic can sit a hair from either end.
  const double mid = (to_double(a) + to_double(b)) / 2;
  const S quarter = S(S(b - a) * num<S>(1, 4));
  const S lo = S(a + quarter), hi = S(b - quarter);
  for (int e = 1; e < 400; ++e) {
    mpz_class den = mpz_class(1) << e;
    mpz_class n(std::floor(std::ldexp(mid, e)));
    for (int off = 0; off < 2; ++off) {
      Rational c(mpz_class(n + off), den);
      c.canonicalize();
      if (sgn(S(S(c) - lo)) >= 0 && sgn(S(hi - S(c))) >= 0 && sgn(S(S(c) - a)) > 0 && sgn(S(b - S(c))) > 0)
        return c;
    }
  }
  fail("Internal", "no dyadic rational in a gap");
}

// Rounds onto the grid 2^-e. Exact systems only; floats are left alone.
inline Rational snap(const Rational& v, int e) {
  mpz_class den = mpz_class(1) << e;
  mpz_class scaled = v.get_num() * den;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), v.get_den().get_mpz_t());
  Rational r(q, den);
  r.canonicalize();
  return r;
}
inline QSqrt3 snap(const QSqrt3& v, int e) { return {snap(v.a, e), snap(v.b, e)}; }
inline Approx snap(const Approx& v, int) { return v; }
template <class S>
Pt<S> snap(const Pt<S>& p, int e) {
  return {snap(p.x, e), snap(p.y, e)};
}

}  // namespace annulus::geo
