#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/sequence.hpp"

namespace oscal {
namespace {

using testing::k1_space;
using testing::k1_sequence;

PointRef leaf_copy(std::uint64_t k) { return PointRef{{Step::recurring(0, k)}}; }
Complex c(int v) { return Complex(Rational(v)); }

CIFunction bump() {
  CopyTable leaf;
  leaf.upto = {{2, c(0)}};
  leaf.tail = c(-1);
  return CIFunction(k1_space(), {CopyTable{{}, c(-1)}, leaf});
}

TEST(CopyTable, StepLookup) {
  CopyTable t;
  t.upto = {{2, c(5)}, {4, c(6)}};
  t.tail = c(7);
  EXPECT_EQ(t.at(1), c(5));
  EXPECT_EQ(t.at(2), c(5));
  EXPECT_EQ(t.at(3), c(6));
  EXPECT_EQ(t.at(9), c(7));
  EXPECT_EQ(t.at(std::nullopt), c(7));
  EXPECT_EQ(t.threshold(), 4u);
}

TEST(CIFunction, EvalAndContinuity) {
  CIFunction h = bump();
  EXPECT_EQ(h.eval(leaf_copy(1)), c(0));
  EXPECT_EQ(h.eval(leaf_copy(3)), c(-1));
  EXPECT_EQ(h.eval(PointRef{}), c(-1));
  EXPECT_TRUE(h.is_continuous());

  CopyTable root{{}, c(5)};
  CIFunction jump(k1_space(), {root, h.tables()[1]});
  EXPECT_FALSE(jump.is_continuous());
  EXPECT_FALSE(CIFunction::from(testing::f1()).is_continuous());
  EXPECT_TRUE(CIFunction::from(QFunction::constant(k1_space(), 2)).is_continuous());
}

TEST(CIFunction, RejectsBadTables) {
  CopyTable bad;
  bad.upto = {{3, c(0)}, {2, c(1)}};
  EXPECT_THROW(CIFunction(k1_space(), {CopyTable{}, bad}), InputError);
  EXPECT_THROW(CIFunction(k1_space(), {CopyTable{}}), InputError);
}

TEST(MovingStep, K1Examples) {
  FunctionSeq g = k1_sequence();
  EXPECT_EQ(g.eval(3, leaf_copy(5)), c(-1));
  EXPECT_EQ(g.eval(6, leaf_copy(5)), c(0));
  EXPECT_EQ(g.eval(3, PointRef{}), c(-1));
  Interval zero = g.tail_bound(leaf_copy(5), 7);
  EXPECT_TRUE(zero.exact());
  EXPECT_EQ(zero.hi, 0);
  EXPECT_EQ(g.tail_bound(leaf_copy(5), 1).hi, 5);
  EXPECT_EQ(g.tail_bound(leaf_copy(5), 4).hi, 2);
  EXPECT_EQ(g.uniform_bound().hi, 1);
}

TEST(MovingStep, TailBoundIsSumOfDeviations) {
  for (const FunctionSeq& seq : {testing::k1_sequence(), testing::k2_sequence(), testing::k3_sequence()}) {
    PointRef x{descend(seq.space(), seq.space().root(), static_cast<NodeId>(seq.space().size() - 1), 3)};
    for (std::uint64_t m = 1; m <= 5; ++m) {
      Rational sum;
      for (std::uint64_t j = m; j <= 12; ++j) sum += exact_modulus(seq.eval(j, x) - seq.limit_value(x));
      EXPECT_EQ(seq.tail_bound(x, m).hi, sum);
    }
  }
}

TEST(MovingStep, ContinuousTerms) {
  for (const FunctionSeq& seq : {testing::k1_sequence(), testing::k2_sequence(), testing::k3_sequence()}) {
    for (std::uint64_t j = 1; j <= 5; ++j) EXPECT_TRUE(seq.is_continuous(j));
  }
}

TEST(MovingStep, RejectsBadDesignations) {
  auto limit = QFunction(testing::k2_space(), {0, -1, 0});
  EXPECT_THROW(FunctionSeq(limit, MovingStep{{Designation{2, 0, {}}}}), InputError);  // leaf
  EXPECT_THROW(FunctionSeq(limit, MovingStep{{Designation{1, 3, {}}}}), InputError);  // no pattern 3
  EXPECT_THROW(FunctionSeq(limit, MovingStep{{Designation{1, 0, {{0, c(1)}}}}}), InputError);
  EXPECT_THROW(FunctionSeq(limit, MovingStep{{Designation{0, 0, {}}, Designation{0, 0, {}}}}), InputError);
}

TEST(MovingStep, NeighborhoodDeviation) {
  FunctionSeq g = k1_sequence();
  EXPECT_EQ(g.neighborhood_deviation(3, PointRef{}, 3), 0);
  EXPECT_GE(g.neighborhood_deviation(3, PointRef{}, 1), 1);
}

TEST(EventuallyLimit, EmptyPrefixIsConstant) {
  FunctionSeq s(testing::f1(), EventuallyLimit{});
  for (std::uint64_t j = 1; j <= 3; ++j) EXPECT_EQ(s.eval(j, leaf_copy(j)), c(0));
  EXPECT_EQ(s.tail_bound(PointRef{}, 1).hi, 0);
}

TEST(EventuallyLimit, PrefixThenLimit) {
  FunctionSeq s(QFunction::constant(k1_space(), -1), EventuallyLimit{{bump()}});
  EXPECT_EQ(s.eval(1, leaf_copy(1)), c(0));
  EXPECT_EQ(s.eval(2, leaf_copy(1)), c(-1));
  EXPECT_EQ(s.tail_bound(leaf_copy(2), 1).hi, 1);
  EXPECT_EQ(s.tail_bound(leaf_copy(3), 1).hi, 0);
  EXPECT_TRUE(s.is_continuous(1));
}

TEST(Materialize, K1ThirdTerm) {
  auto [unrolled, f] = k1_sequence().materialize(3);
  ASSERT_EQ(f.size(), 4u);
  for (NodeId id = 0; id < f.size(); ++id) {
    const UnrollEdge& e = unrolled.edge[id];
    Rational expected = e.kind == UnrollEdge::Kind::ExplicitCopy ? Rational(0) : Rational(-1);
    EXPECT_EQ(f[id], expected);
  }
  EXPECT_TRUE(is_continuous(f));
}

}  // namespace
}  // namespace oscal
