#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "conewalk/errors.hpp"

namespace conewalk {

using BigFloat = boost::multiprecision::mpfr_float; // variable precision

namespace bigfloat_detail {

inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(bits * 0.3010299956639812) + 4;
}

struct PrecisionScope {
  unsigned saved;
  explicit PrecisionScope(unsigned bits) : saved(BigFloat::default_precision()) {
    BigFloat::default_precision(digits10_for_bits(bits));
  }
  ~PrecisionScope() { BigFloat::default_precision(saved); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;
};

} // namespace bigfloat_detail

/// Dense univariate polynomial with extended-precision coefficients,
/// ascending degree order.
struct Polynomial {
  std::vector<BigFloat> c;

  static Polynomial constant(const BigFloat& v) { return {{v}}; }
  static Polynomial variable() { return {{BigFloat(0), BigFloat(1)}}; }

  std::size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

  void trim() {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
  }

  BigFloat eval(const BigFloat& x) const {
    BigFloat acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }

  Polynomial derivative() const {
    Polynomial d;
    if (c.size() <= 1) {
      d.c.assign(1, BigFloat(0));
      return d;
    }
    d.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * static_cast<int>(i);
    return d;
  }
};

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.c.resize(std::max(a.c.size(), b.c.size()), BigFloat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.c.resize(std::max(a.c.size(), b.c.size()), BigFloat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.c.assign(a.c.size() + b.c.size() - 1, BigFloat(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

inline Polynomial operator*(const Polynomial& a, const BigFloat& s) {
  Polynomial r = a;
  for (auto& x : r.c) x *= s;
  r.trim();
  return r;
}

/// Rational function num/den; reduced only by content normalization, no gcd.
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  static RationalFunction constant(const BigFloat& v) {
    return {Polynomial::constant(v), Polynomial::constant(BigFloat(1))};
  }
  static RationalFunction variable() {
    return {Polynomial::variable(), Polynomial::constant(BigFloat(1))};
  }
};

inline RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}
inline RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}
inline RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.num, a.den * b.den};
}
inline RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  return {a.num * b.den, a.den * b.num};
}
inline RationalFunction operator*(const RationalFunction& a, const BigFloat& s) {
  return {a.num * s, a.den};
}

namespace bigfloat_detail {

/// Safeguarded Newton inside a sign-change bracket.  sign_lo is the sign of p
/// at lo; the root stays bracketed throughout, so the final interval is a
/// sign-change certificate of width ~2^-bits.
inline BigFloat refine_root(const Polynomial& p, BigFloat lo, BigFloat hi, int sign_lo,
                            unsigned bits) {
  const Polynomial dp = p.derivative();
  BigFloat x = (lo + hi) / 2;
  const BigFloat tol = boost::multiprecision::ldexp(BigFloat(1), -static_cast<int>(bits) + 2);
  for (unsigned it = 0; it < bits + 64; ++it) {
    const BigFloat span = abs(hi) > 1 ? BigFloat(abs(hi)) : BigFloat(1);
    if (hi - lo <= tol * span) break;
    const BigFloat fx = p.eval(x);
    if (fx == 0) return x;
    if ((fx < 0 ? -1 : 1) == sign_lo)
      lo = x;
    else
      hi = x;
    const BigFloat dfx = dp.eval(x);
    bool newton_ok = false;
    BigFloat xn;
    if (dfx != 0) {
      xn = x - fx / dfx;
      newton_ok = (xn > lo && xn < hi);
    }
    x = newton_ok ? xn : BigFloat((lo + hi) / 2);
  }
  return (lo + hi) / 2;
}

} // namespace bigfloat_detail

/// Largest real root of ((d x)^(m-1) - 1)(x - 1) + 2(d x - 1) with m = d = 4g,
/// found by a downward sign scan from x = 1 followed by bracketed Newton.
inline BigFloat zeta_root(std::int64_t g, unsigned precision_bits) {
  if (g < 2) throw InvalidGenus(g);
  if (precision_bits < 128) throw ConfigError("precision_bits must be >= 128");
  bigfloat_detail::PrecisionScope scope(precision_bits);

  const int d = static_cast<int>(4 * g);
  const int m = d;
  Polynomial dx_pow = Polynomial::constant(BigFloat(1));
  const Polynomial dx = Polynomial::variable() * BigFloat(d);
  for (int i = 0; i < m - 1; ++i) dx_pow = dx_pow * dx;
  const Polynomial p = (dx_pow - Polynomial::constant(BigFloat(1))) *
                           (Polynomial::variable() - Polynomial::constant(BigFloat(1))) +
                       (dx - Polynomial::constant(BigFloat(1))) * BigFloat(2);

  // P(1) = 2(d-1) > 0; the largest root sits just below 1
  BigFloat hi = 1;
  for (unsigned j = 1; j <= precision_bits + 40; ++j) {
    const BigFloat x = BigFloat(1) - boost::multiprecision::ldexp(BigFloat(1), -static_cast<int>(j));
    const BigFloat fx = p.eval(x);
    if (fx == 0) return x;
    if (fx < 0) return bigfloat_detail::refine_root(p, x, hi, -1, precision_bits);
    hi = x;
  }
  throw RootNotBracketed("no sign change of the singularity polynomial below x = 1");
}

struct BartholdiResult {
  BigFloat zeta;
  BigFloat bound;
  unsigned precision_bits = 0;
};

/// Lower bound on the spectral radius from the cactus-tree generating
/// function: substitute the singularity root into the composed rational
/// function, take the numerator of g2^2 - 1/(4(d-1)), locate its smallest
/// positive root alpha, and close with rho = alpha/(1+(d-1)alpha^2) and
/// bound = 1/(d rho).
inline BartholdiResult bartholdi_lower(std::int64_t g, unsigned precision_bits = 256) {
  if (g < 2) throw InvalidGenus(g);
  if (precision_bits < 128) throw ConfigError("precision_bits must be >= 128");
  bigfloat_detail::PrecisionScope scope(precision_bits);

  const int d = static_cast<int>(4 * g);
  const int m = d;
  const BigFloat zeta = zeta_root(g, precision_bits);

  const RationalFunction t = RationalFunction::variable();
  Polynomial fpoly;
  fpoly.c.assign(static_cast<std::size_t>(m) + 1, BigFloat(0));
  fpoly.c.back() = BigFloat(2 * d);
  const RationalFunction f = {fpoly, Polynomial::constant(BigFloat(1))};

  const RationalFunction cd = RationalFunction::constant(BigFloat(d));
  const RationalFunction one = RationalFunction::constant(BigFloat(1));
  // substitutions of the singular generating function H(t,u) = t/(1+(1-u)(d-1+u)t^2)
  const RationalFunction t2 = t * (cd - f) / (cd - f * BigFloat(d - 1));
  const RationalFunction u2 = f * BigFloat(d - 2) / (cd - f);
  const RationalFunction tz = t2 * zeta;
  const RationalFunction g2 =
      tz / (one + (one - u2) * (RationalFunction::constant(BigFloat(d - 1)) + u2) * tz * tz);
  const RationalFunction a_expr =
      g2 * g2 - RationalFunction::constant(BigFloat(1) / (4 * (d - 1)));

  Polynomial num = a_expr.num;
  num.trim();
  // scale to unit content; roots are unchanged
  BigFloat scale = 0;
  for (const auto& c : num.c)
    if (abs(c) > scale) scale = abs(c);
  if (scale == 0) throw NoPositiveRoot("numerator vanished; raise the working precision");
  num = num * (BigFloat(1) / scale);

  // The numerator is negative near 0 and its smallest positive root is the
  // left edge of a narrow dip where g2 grazes the level 1/(2 sqrt(d-1)); the
  // dip width shrinks with 1 - zeta (far below any fixed grid for g >= 3), so
  // a plain sign scan cannot see it.  g2 increases up to its first maximum
  // t*, hence the dip is bracketed by [small, t*] with t* located from the
  // sign change of g2' = (num' den - num den') / den^2.
  const Polynomial slope =
      g2.num.derivative() * g2.den - g2.num * g2.den.derivative();
  constexpr int kGrid = 4096;
  BigFloat t_star = -1;
  BigFloat prev_x = BigFloat(1) / kGrid;
  BigFloat prev_w = slope.eval(prev_x);
  for (int k = 2; 5 * k <= 3 * kGrid; ++k) { // scan (0, 0.6]; the dip sits near 1/sqrt(d-1)
    const BigFloat x = BigFloat(k) / kGrid;
    const BigFloat w = slope.eval(x);
    if (w == 0) {
      t_star = x;
      break;
    }
    if ((prev_w < 0) != (w < 0)) {
      t_star = bigfloat_detail::refine_root(slope, prev_x, x, prev_w < 0 ? -1 : 1, precision_bits);
      break;
    }
    prev_x = x;
    prev_w = w;
  }
  if (t_star < 0) throw NoPositiveRoot("no interior maximum of g2 on (0, 0.6]");
  if (num.eval(t_star) <= 0)
    throw NoPositiveRoot("dip does not cross zero; raise the working precision");

  BigFloat lo = t_star / 2;
  int steps = 0;
  while (num.eval(lo) >= 0) {
    lo /= 2;
    if (++steps > 64) throw NoPositiveRoot("no negative value of the numerator below the dip");
  }
  const BigFloat alpha = bigfloat_detail::refine_root(num, lo, t_star, -1, precision_bits);

  const BigFloat rho = alpha / (1 + (d - 1) * alpha * alpha);
  BartholdiResult result;
  result.zeta = zeta;
  result.bound = 1 / (d * rho);
  result.precision_bits = precision_bits;
  return result;
}

} // namespace conewalk
