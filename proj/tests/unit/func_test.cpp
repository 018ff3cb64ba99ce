#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/func.hpp"

namespace oscal {
namespace {

using testing::f1;
using testing::f2;
using testing::k1_space;

QFunction g1() { return QFunction(k1_space(), {0, 1}); }

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_EQ(to_string(parse_rational("-2/1")), "-2");
  EXPECT_EQ(to_string(parse_rational("0/5")), "0");
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("0.5"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

TEST(Rational, Modulus) {
  EXPECT_EQ(exact_modulus(Complex(3, 4)), 5);
  EXPECT_THROW(exact_modulus(Complex(1, 1)), InexactModulus);
  Interval r2 = modulus(Complex(1, 1));
  EXPECT_LT(r2.lo * r2.lo, 2);
  EXPECT_GT(r2.hi * r2.hi, 2);
  EXPECT_EQ(less_than(r2, 2), Verdict::Holds);
  EXPECT_EQ(less_than(r2, 1), Verdict::Fails);
  EXPECT_EQ(less_than(Interval{0, 2}, 1), Verdict::Undecided);
}

TEST(Eval, Examples) {
  auto k1 = k1_space();
  EXPECT_EQ(eval(QFunction::constant(k1, 3), PointRef{{Step::recurring(0, 2)}}), Complex(3));
  EXPECT_EQ(eval(f1(), PointRef{{Step::recurring(0, 7)}}), Complex(0));
  EXPECT_EQ(eval(f2(), PointRef{}), Complex(0));
}

TEST(Algebra, Examples) {
  EXPECT_EQ(add(f1(), negate(f1())), QFunction::zero(k1_space()));
  EXPECT_EQ(scale(-1, f1()), QFunction(k1_space(), {-1, 0}));
  QFunction z(k1_space(), {3, 0}, {4, 0});
  EXPECT_EQ(re(z)[0], 3);
  EXPECT_EQ(im(z)[0], 4);
  EXPECT_EQ(abs(z)[0], 5);
  EXPECT_THROW(z[0], PreconditionError);
  EXPECT_THROW(add(f1(), f2()), InputError);
}

TEST(Envelope, Examples) {
  EXPECT_EQ(usc_envelope(f1()), f1());
  EXPECT_EQ(usc_envelope(g1()), QFunction(k1_space(), {1, 1}));
  EXPECT_EQ(lsc_envelope(f1()), QFunction::zero(k1_space()));
  EXPECT_EQ(lsc_envelope(g1()), g1());
  auto c = QFunction::constant(testing::k2_space(), Rational(5, 3));
  EXPECT_EQ(usc_envelope(c), c);
  EXPECT_EQ(lsc_envelope(c), c);
}

TEST(Oscillation, Examples) {
  EXPECT_EQ(underline_osc(f1()), QFunction(k1_space(), {1, 0}));
  EXPECT_EQ(underline_osc(f2()), QFunction(testing::k2_space(), {1, 1, 0}));
  EXPECT_EQ(osc(f1()), QFunction(k1_space(), {1, 0}));
  auto c = QFunction::constant(testing::k2_space(), 7);
  EXPECT_EQ(underline_osc(c), QFunction::zero(c.space_ptr()));
  EXPECT_EQ(osc(c), QFunction::zero(c.space_ptr()));
}

TEST(Semicontinuity, Examples) {
  EXPECT_TRUE(is_usc(f1()));
  EXPECT_FALSE(is_lsc(f1()));
  EXPECT_TRUE(is_lsc(g1()));
  EXPECT_FALSE(is_usc(g1()));
  auto c = QFunction::constant(k1_space(), 2);
  EXPECT_TRUE(is_usc(c) && is_lsc(c) && is_continuous(c));
}

TEST(Envelope, RandomLaws) {
  testing::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    QFunction f = testing::random_function(rng, testing::random_space(rng));
    QFunction u = usc_envelope(f);
    EXPECT_EQ(usc_envelope(u), u);
    EXPECT_TRUE(is_usc(u));
    EXPECT_TRUE(pointwise_leq(f, u));
    EXPECT_EQ(lsc_envelope(f), negate(usc_envelope(negate(f))));
    EXPECT_EQ(underline_osc(f), pointwise_max(sub(u, f), sub(f, lsc_envelope(f))));
  }
}

TEST(Envelope, ComplexModulusOscillation) {
  // |(3+4i) - 0| = 5 at the root over its accumulation point
  QFunction z(k1_space(), {3, 0}, {4, 0});
  EXPECT_EQ(underline_osc(z)[0], 5);
}

TEST(Lift, AgreesWithEvaluation) {
  testing::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    QFunction f = testing::random_function(rng, testing::random_space(rng));
    Unrolled u = unroll(f.space(), 2);
    QFunction g = lift(f, u);
    auto reps = representative_points(u, 2);
    for (NodeId id = 0; id < g.size(); ++id) EXPECT_EQ(Complex(g[id]), eval(f, reps[id]));
  }
}

}  // namespace
}  // namespace oscal
