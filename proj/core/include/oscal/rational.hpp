#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace oscal {

using Rational = mpq_class;

// Accepts "p" or "p/q" with optional leading '-'; result is canonical.
Rational parse_rational(std::string_view text);

// Canonical form: "p" when the denominator is 1, else "p/q" with q > 0.
std::string to_string(const Rational& q);

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }

std::optional<Rational> exact_sqrt(const Rational& q);

struct Complex {
  Rational re;
  Rational im;

  Complex() = default;
  Complex(Rational r) : re(std::move(r)) {}
  Complex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_real() const { return im == 0; }
  Rational norm_squared() const { return re * re + im * im; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

std::string to_string(const Complex& z);

// Closed rational interval; a point interval is an exact value.
struct Interval {
  Rational lo;
  Rational hi;

  static Interval point(const Rational& q) { return {q, q}; }
  bool exact() const { return lo == hi; }

  friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  Interval scaled(const Rational& nonneg) const { return {lo * nonneg, hi * nonneg}; }
};

constexpr unsigned kDefaultModulusBits = 64;

// |z| exactly when it is rational, otherwise a bracket of width 2^-bits.
Interval modulus(const Complex& z, unsigned bits = kDefaultModulusBits);

// |z| as a rational; throws InexactModulus when it is irrational.
Rational exact_modulus(const Complex& z);

enum class Verdict { Holds, Fails, Undecided };

// Three-valued "value < bound".
Verdict less_than(const Interval& value, const Rational& bound);
// Three-valued "value > bound".
Verdict greater_than(const Interval& value, const Rational& bound);

Verdict operator&&(Verdict a, Verdict b);
const char* to_string(Verdict v);

}  // namespace oscal
