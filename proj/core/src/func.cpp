#include "oscal/func.hpp"

#include <string>

#include "oscal/error.hpp"

namespace oscal {

namespace {

void require_real(const QFunction& f, const char* op) {
  if (!f.is_real()) throw PreconditionError(std::string(op) + " requires a real function");
}

void require_same(const QFunction& f, const QFunction& g) {
  if (!same_space(f, g)) throw InputError("functions live on different spaces");
}

template <class Op>
QFunction zip(const QFunction& f, const QFunction& g, Op op) {
  require_same(f, g);
  const std::size_t n = f.size();
  std::vector<Rational> re(n);
  if (f.is_real() && g.is_real()) {
    for (std::size_t i = 0; i < n; ++i) re[i] = op(f.values()[i], g.values()[i]);
    return QFunction(f.space_ptr(), std::move(re));
  }
  std::vector<Rational> im(n);
  for (NodeId i = 0; i < n; ++i) {
    Complex a = f.at(i), b = g.at(i);
    re[i] = op(a.re, b.re);
    im[i] = op(a.im, b.im);
  }
  return QFunction(f.space_ptr(), std::move(re), std::move(im));
}

}  // namespace

QFunction::QFunction(SpacePtr space, std::vector<Rational> values) : space_(std::move(space)), re_(std::move(values)) {
  if (!space_) throw InputError("function without a space");
  if (re_.size() != space_->size()) {
    throw InputError("function has " + std::to_string(re_.size()) + " values for " +
                     std::to_string(space_->size()) + " nodes");
  }
}

QFunction::QFunction(SpacePtr space, std::vector<Rational> re, std::vector<Rational> im)
    : QFunction(std::move(space), std::move(re)) {
  if (im.size() != re_.size()) throw InputError("imaginary parts do not match node count");
  im_ = std::move(im);
}

QFunction QFunction::constant(SpacePtr space, const Rational& c) {
  std::size_t n = space->size();
  return QFunction(std::move(space), std::vector<Rational>(n, c));
}

const Rational& QFunction::operator[](NodeId id) const {
  if (!is_real()) throw PreconditionError("real value requested from a complex function");
  if (id >= re_.size()) throw InputError("unknown node id " + std::to_string(id));
  return re_[id];
}

Complex QFunction::at(NodeId id) const {
  if (id >= re_.size()) throw InputError("unknown node id " + std::to_string(id));
  return im_.empty() ? Complex(re_[id]) : Complex(re_[id], im_[id]);
}

bool operator==(const QFunction& a, const QFunction& b) {
  if (!same_space(a, b)) return false;
  if (a.re_ != b.re_) return false;
  if (a.is_real() && b.is_real()) return true;
  for (NodeId i = 0; i < a.size(); ++i) {
    if (a.at(i).im != b.at(i).im) return false;
  }
  return true;
}

bool same_space(const QFunction& f, const QFunction& g) {
  return f.space_ptr() == g.space_ptr() || f.space() == g.space();
}

Complex eval(const QFunction& f, const PointRef& p) { return f.at(resolve(f.space(), p)); }

QFunction add(const QFunction& f, const QFunction& g) {
  return zip(f, g, [](const Rational& a, const Rational& b) { return Rational(a + b); });
}

QFunction sub(const QFunction& f, const QFunction& g) {
  return zip(f, g, [](const Rational& a, const Rational& b) { return Rational(a - b); });
}

QFunction scale(const Rational& t, const QFunction& f) {
  std::vector<Rational> re(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) re[i] = t * f.values()[i];
  if (f.is_real()) return QFunction(f.space_ptr(), std::move(re));
  std::vector<Rational> im(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) im[i] = t * f.imag()[i];
  return QFunction(f.space_ptr(), std::move(re), std::move(im));
}

QFunction negate(const QFunction& f) { return scale(-1, f); }

QFunction abs(const QFunction& f) {
  std::vector<Rational> out(f.size());
  for (NodeId i = 0; i < f.size(); ++i) out[i] = exact_modulus(f.at(i));
  return QFunction(f.space_ptr(), std::move(out));
}

QFunction re(const QFunction& f) { return QFunction(f.space_ptr(), f.values()); }

QFunction im(const QFunction& f) {
  if (f.is_real()) return QFunction::zero(f.space_ptr());
  return QFunction(f.space_ptr(), f.imag());
}

QFunction pointwise_max(const QFunction& f, const QFunction& g) {
  require_real(f, "pointwise max");
  require_real(g, "pointwise max");
  return zip(f, g, [](const Rational& a, const Rational& b) { return max_of(a, b); });
}

QFunction pointwise_min(const QFunction& f, const QFunction& g) {
  require_real(f, "pointwise min");
  require_real(g, "pointwise min");
  return zip(f, g, [](const Rational& a, const Rational& b) { return min_of(a, b); });
}

QFunction plus_constant(const QFunction& f, const Rational& c) {
  return add(f, QFunction::constant(f.space_ptr(), c));
}

bool pointwise_leq(const QFunction& f, const QFunction& g) {
  require_real(f, "comparison");
  require_real(g, "comparison");
  require_same(f, g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values()[i] > g.values()[i]) return false;
  }
  return true;
}

Rational max_value(const QFunction& f) {
  require_real(f, "max_value");
  Rational m = f.values()[0];
  for (const Rational& v : f.values()) m = max_of(m, v);
  return m;
}

Rational min_value(const QFunction& f) {
  require_real(f, "min_value");
  Rational m = f.values()[0];
  for (const Rational& v : f.values()) m = min_of(m, v);
  return m;
}

QFunction lift(const QFunction& f, const Unrolled& unrolled) {
  const std::size_t n = unrolled.space->size();
  std::vector<Rational> re(n);
  for (NodeId i = 0; i < n; ++i) re[i] = f.values()[unrolled.source[i]];
  if (f.is_real()) return QFunction(unrolled.space, std::move(re));
  std::vector<Rational> im(n);
  for (NodeId i = 0; i < n; ++i) im[i] = f.imag()[unrolled.source[i]];
  return QFunction(unrolled.space, std::move(re), std::move(im));
}

QFunction usc_envelope(const QFunction& f) {
  require_real(f, "usc_envelope");
  const TreeSpace& s = f.space();
  std::vector<Rational> out(f.values());
  for (NodeId p = 0; p < s.size(); ++p) {
    for (NodeId y : s.acc(p)) {
      if (f.values()[y] > out[p]) out[p] = f.values()[y];
    }
  }
  return QFunction(f.space_ptr(), std::move(out));
}

QFunction lsc_envelope(const QFunction& f) {
  require_real(f, "lsc_envelope");
  const TreeSpace& s = f.space();
  std::vector<Rational> out(f.values());
  for (NodeId p = 0; p < s.size(); ++p) {
    for (NodeId y : s.acc(p)) {
      if (f.values()[y] < out[p]) out[p] = f.values()[y];
    }
  }
  return QFunction(f.space_ptr(), std::move(out));
}

QFunction underline_osc(const QFunction& f) {
  const TreeSpace& s = f.space();
  std::vector<Rational> out(s.size());
  for (NodeId p = 0; p < s.size(); ++p) {
    if (f.is_real()) {
      for (NodeId y : s.acc(p)) {
        Rational d = abs_value(f.values()[y] - f.values()[p]);
        if (d > out[p]) out[p] = d;
      }
    } else {
      // compare squared moduli; only the winner needs a square root
      Rational best;
      Complex fp = f.at(p);
      for (NodeId y : s.acc(p)) {
        Rational d = (f.at(y) - fp).norm_squared();
        if (d > best) best = d;
      }
      auto r = exact_sqrt(best);
      if (!r) throw InexactModulus("oscillation at node " + std::to_string(p) + " is irrational");
      out[p] = *r;
    }
  }
  return QFunction(f.space_ptr(), std::move(out));
}

QFunction osc(const QFunction& f) { return usc_envelope(underline_osc(f)); }

bool is_usc(const QFunction& f) { return usc_envelope(f) == f; }

bool is_lsc(const QFunction& f) { return lsc_envelope(f) == f; }

bool is_continuous(const QFunction& f) {
  const TreeSpace& s = f.space();
  for (NodeId p = 0; p < s.size(); ++p) {
    Complex fp = f.at(p);
    for (NodeId y : s.acc(p)) {
      if (!(f.at(y) == fp)) return false;
    }
  }
  return true;
}

}  // namespace oscal
