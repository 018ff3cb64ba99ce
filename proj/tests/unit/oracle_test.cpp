#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/lp.hpp"
#include "oscal/oracle.hpp"
#include "oscal/transfinite.hpp"

namespace oscal {
namespace {

using lp::Direction;
using lp::LinearProgram;
using lp::Sense;
using lp::Status;

Rational dual_objective(const LinearProgram& p, const lp::Result& r) {
  Rational total;
  for (std::size_t i = 0; i < p.constraints().size(); ++i) total += r.duals[i] * p.constraints()[i].rhs;
  return total;
}

TEST(Simplex, SingleBound) {
  LinearProgram p;
  auto t = p.add_variable("t");
  p.add_constraint({{t, 1}}, Sense::GreaterEq, 3);
  p.set_objective(Direction::Minimize, {{t, 1}});
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_EQ(r.objective, 3);
  EXPECT_EQ(dual_objective(p, r), 3);
}

TEST(Simplex, FreeVariable) {
  LinearProgram p;
  auto t = p.add_variable("t", std::nullopt);
  auto x = p.add_variable("x", std::nullopt);
  p.add_constraint({{t, 1}, {x, -1}}, Sense::GreaterEq, 0);
  p.add_constraint({{t, 1}, {x, 1}}, Sense::GreaterEq, 0);
  p.add_constraint({{x, 1}}, Sense::Equal, Rational(5, 2));
  p.set_objective(Direction::Minimize, {{t, 1}});
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_EQ(r.objective, Rational(5, 2));
  EXPECT_EQ(r.values[x], Rational(5, 2));
}

// Beale's example cycles under the textbook largest-coefficient rule.
TEST(Simplex, DegenerateCyclingInstance) {
  LinearProgram p;
  auto x4 = p.add_variable("x4");
  auto x5 = p.add_variable("x5");
  auto x6 = p.add_variable("x6");
  auto x7 = p.add_variable("x7");
  p.add_constraint({{x4, Rational(1, 4)}, {x5, -8}, {x6, -1}, {x7, 9}}, Sense::LessEq, 0);
  p.add_constraint({{x4, Rational(1, 2)}, {x5, -12}, {x6, Rational(-1, 2)}, {x7, 3}}, Sense::LessEq, 0);
  p.add_constraint({{x6, 1}}, Sense::LessEq, 1);
  p.set_objective(Direction::Minimize, {{x4, Rational(-3, 4)}, {x5, 20}, {x6, Rational(-1, 2)}, {x7, 6}});
  auto r = lp::solve(p);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_EQ(r.objective, Rational(-5, 4));
  EXPECT_EQ(dual_objective(p, r), Rational(-5, 4));
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram a;
  auto x = a.add_variable("x");
  a.add_constraint({{x, 1}}, Sense::LessEq, -1);
  a.set_objective(Direction::Minimize, {{x, 1}});
  EXPECT_EQ(lp::solve(a).status, Status::Infeasible);

  LinearProgram b;
  auto y = b.add_variable("y");
  b.set_objective(Direction::Maximize, {{y, 1}});
  EXPECT_EQ(lp::solve(b).status, Status::Unbounded);
}

TEST(Simplex, PivotCap) {
  LinearProgram p;
  auto x = p.add_variable("x");
  auto y = p.add_variable("y");
  p.add_constraint({{x, 1}, {y, 1}}, Sense::GreaterEq, 1);
  p.add_constraint({{x, 1}, {y, -1}}, Sense::LessEq, 3);
  p.set_objective(Direction::Minimize, {{x, 2}, {y, 1}});
  EXPECT_THROW(lp::solve(p, 0), ResourceCapError);
}

TEST(Oracle, Examples) {
  EXPECT_EQ(oracle_dnorm(testing::f1()).optimum, 2);
  EXPECT_EQ(oracle_dnorm(testing::f2()).optimum, 2);
  EXPECT_EQ(oracle_dnorm(testing::phi3()).optimum, *d_norm(testing::phi3()));
  auto c = QFunction::constant(testing::k2_space(), Rational(-7, 3));
  EXPECT_EQ(oracle_dnorm(c).optimum, Rational(7, 3));
}

TEST(Oracle, OptimalPairIsFeasible) {
  OracleResult r = oracle_dnorm(testing::f2());
  EXPECT_EQ(oracle_objective(testing::f2(), r.u, r.v), r.optimum);
  // u = v = 0 does not reproduce f2
  auto z = QFunction::zero(testing::k2_space());
  EXPECT_EQ(oracle_objective(testing::f2(), z, z), std::nullopt);
}

TEST(Oracle, RejectsComplex) {
  QFunction z(testing::k1_space(), {1, 0}, {1, 0});
  EXPECT_THROW(oracle_dnorm(z), PreconditionError);
}

TEST(Symmetry, Examples) {
  EXPECT_TRUE(symmetry_check(testing::f1(), 1));
  EXPECT_TRUE(symmetry_check(testing::f2(), 2));
  EXPECT_TRUE(symmetry_check(QFunction::constant(testing::k2_space(), 4), 3));
  SymmetryResult r = symmetry_compare(testing::f1(), 2);
  EXPECT_EQ(r.unrolled_nodes, 4u);
  EXPECT_EQ(r.unrolled, 2);
}

TEST(Oracle, MatchesFormulaOnSample) {
  auto corpus = testing::function_corpus(40, 99);
  for (const auto& f : corpus) {
    OracleResult r = oracle_dnorm(f);
    EXPECT_EQ(r.optimum, *d_norm(f));
    EXPECT_EQ(oracle_objective(f, r.u, r.v), r.optimum);
  }
}

}  // namespace
}  // namespace oscal
