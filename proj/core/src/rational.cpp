#include "oscal/rational.hpp"

#include <cctype>

#include "oscal/error.hpp"

namespace oscal {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::optional<mpz_class> exact_isqrt(const mpz_class& n) {
  if (n < 0) return std::nullopt;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  if (r * r != n) return std::nullopt;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw InputError("not a rational: \"" + std::string(text) + "\"");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw InputError("zero denominator: \"" + std::string(text) + "\"");
  Rational q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  auto n = exact_isqrt(q.get_num());
  auto d = exact_isqrt(q.get_den());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

std::string to_string(const Complex& z) { return to_string(z.re) + (z.im < 0 ? "" : "+") + to_string(z.im) + "i"; }

Interval modulus(const Complex& z, unsigned bits) {
  Rational sq = z.norm_squared();
  if (auto r = exact_sqrt(sq)) return Interval::point(*r);
  // floor(sqrt(sq) * 2^bits) = isqrt(floor(sq * 4^bits))
  mpz_class scale = mpz_class(1) << bits;
  mpz_class scaled = (sq.get_num() * scale * scale) / sq.get_den();
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  Rational lo(root, scale);
  Rational hi(root + 1, scale);
  lo.canonicalize();
  hi.canonicalize();
  return {lo, hi};
}

Rational exact_modulus(const Complex& z) {
  if (z.im == 0) return abs_value(z.re);
  if (auto r = exact_sqrt(z.norm_squared())) return *r;
  throw InexactModulus("modulus of " + to_string(z) + " is irrational");
}

Verdict less_than(const Interval& value, const Rational& bound) {
  if (value.hi < bound) return Verdict::Holds;
  if (value.lo >= bound) return Verdict::Fails;
  return Verdict::Undecided;
}

Verdict greater_than(const Interval& value, const Rational& bound) {
  if (value.lo > bound) return Verdict::Holds;
  if (value.hi <= bound) return Verdict::Fails;
  return Verdict::Undecided;
}

Verdict operator&&(Verdict a, Verdict b) {
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  if (a == Verdict::Undecided || b == Verdict::Undecided) return Verdict::Undecided;
  return Verdict::Holds;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

}  // namespace oscal
