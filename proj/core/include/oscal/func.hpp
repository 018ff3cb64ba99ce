#pragma once

#include <vector>

#include "oscal/rational.hpp"
#include "oscal/space.hpp"

namespace oscal {

enum class ScalarKind { Real, Complex };

// One exact value per node; constant across recurring copies.
class QFunction {
 public:
  QFunction(SpacePtr space, std::vector<Rational> values);
  QFunction(SpacePtr space, std::vector<Rational> re, std::vector<Rational> im);

  static QFunction constant(SpacePtr space, const Rational& c);
  static QFunction zero(SpacePtr space) { return constant(std::move(space), 0); }

  const TreeSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  ScalarKind kind() const { return im_.empty() ? ScalarKind::Real : ScalarKind::Complex; }
  bool is_real() const { return im_.empty(); }
  std::size_t size() const { return re_.size(); }

  // Real value at a node; throws PreconditionError on complex functions.
  const Rational& operator[](NodeId id) const;
  Complex at(NodeId id) const;
  const std::vector<Rational>& values() const { return re_; }
  const std::vector<Rational>& imag() const { return im_; }

  friend bool operator==(const QFunction& a, const QFunction& b);

 private:
  SpacePtr space_;
  std::vector<Rational> re_;
  std::vector<Rational> im_;  // empty for real functions
};

bool same_space(const QFunction& f, const QFunction& g);

Complex eval(const QFunction& f, const PointRef& p);

QFunction add(const QFunction& f, const QFunction& g);
QFunction sub(const QFunction& f, const QFunction& g);
QFunction scale(const Rational& t, const QFunction& f);
QFunction negate(const QFunction& f);
// Pointwise modulus; complex values need rational moduli (InexactModulus otherwise).
QFunction abs(const QFunction& f);
QFunction re(const QFunction& f);
QFunction im(const QFunction& f);
QFunction pointwise_max(const QFunction& f, const QFunction& g);
QFunction pointwise_min(const QFunction& f, const QFunction& g);
QFunction plus_constant(const QFunction& f, const Rational& c);

bool pointwise_leq(const QFunction& f, const QFunction& g);
Rational max_value(const QFunction& f);
Rational min_value(const QFunction& f);

// f pulled back along an unrolling's node map.
QFunction lift(const QFunction& f, const Unrolled& unrolled);

QFunction usc_envelope(const QFunction& f);
QFunction lsc_envelope(const QFunction& f);
QFunction underline_osc(const QFunction& f);
QFunction osc(const QFunction& f);

bool is_usc(const QFunction& f);
bool is_lsc(const QFunction& f);
bool is_continuous(const QFunction& f);

}  // namespace oscal
