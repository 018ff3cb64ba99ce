#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/space.hpp"

namespace oscal {
namespace {

using testing::k1_space;
using testing::k2_space;

TEST(Validate, SingleLeafIsClean) { EXPECT_TRUE(validate({0, {{}}}).empty()); }

TEST(Validate, PrefixWithoutRecurringIsFlagged) {
  auto v = validate({0, {{{1}, {}}, {}}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].node, NodeId{0});
  EXPECT_EQ(v[0].rule, "limit node lacks recurring pattern");
}

TEST(Validate, BrokenShapes) {
  EXPECT_FALSE(validate({0, {}}).empty());
  EXPECT_FALSE(validate({3, {{}}}).empty());
  EXPECT_FALSE(validate({0, {{{}, {0}}}}).empty());              // self loop
  EXPECT_FALSE(validate({0, {{{}, {1}}, {{}, {}}, {}}}).empty());  // detached node 2
  EXPECT_FALSE(validate({0, {{{}, {1, 1}}, {}}}).empty());       // two parents
  EXPECT_THROW(TreeSpace({0, {{{}, {5}}}}), InputError);
}

TEST(Validate, K2IsClean) { EXPECT_TRUE(validate(k2_space()->layout()).empty()); }

TEST(Rank, CanonicalSpaces) {
  auto k1 = k1_space();
  auto k2 = k2_space();
  EXPECT_EQ(k1->rank(1), 0u);
  EXPECT_EQ(k1->rank(0), 1u);
  EXPECT_EQ(k2->rank(0), 2u);
  EXPECT_EQ(k2->rank(1), 1u);
  EXPECT_EQ(k2->max_rank(), 2u);
  EXPECT_EQ(testing::k3_space()->max_rank(), 3u);
}

TEST(Acc, CanonicalSpaces) {
  auto k1 = k1_space();
  auto k2 = k2_space();
  EXPECT_EQ(acc_set(*k1, 0), (std::vector<NodeId>{1}));
  EXPECT_EQ(acc_set(*k2, 0), (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(acc_set(*k2, 1), (std::vector<NodeId>{2}));
  EXPECT_THROW(acc_set(*k2, 2), PreconditionError);
}

TEST(Acc, ExcludesPrefixChildren) {
  // root: prefix 1, recurring 2; node 1 is a leaf
  auto s = make_space({0, {{{1}, {2}}, {}, {}}});
  EXPECT_EQ(acc_set(*s, 0), (std::vector<NodeId>{2}));
  EXPECT_EQ(s->rank(0), 1u);
}

TEST(Unroll, K1OneCopy) {
  Unrolled u = unroll(*k1_space(), 1);
  EXPECT_EQ(u.space->size(), 3u);
  const SpaceNode& root = u.space->node(u.space->root());
  EXPECT_EQ(root.prefix.size(), 1u);
  EXPECT_EQ(root.recurring.size(), 1u);
  EXPECT_TRUE(u.space->is_leaf(root.recurring[0]));
}

TEST(Unroll, LeafUnchanged) {
  Unrolled u = unroll(*make_space({0, {{}}}), 5);
  EXPECT_EQ(u.space->size(), 1u);
}

TEST(Unroll, K2TwoCopies) {
  // root, 2 copied q's with 2 prefix leaves and a tail leaf each, tail q with the same
  Unrolled u = unroll(*k2_space(), 2);
  EXPECT_EQ(u.space->size(), 1u + 3u * 4u);
  const SpaceNode& root = u.space->node(u.space->root());
  ASSERT_EQ(root.prefix.size(), 2u);
  for (NodeId q : root.prefix) {
    EXPECT_EQ(u.source[q], NodeId{1});
    EXPECT_EQ(u.space->node(q).prefix.size(), 2u);
  }
  EXPECT_EQ(u.space->max_rank(), 2u);
}

TEST(Unroll, NodeCap) { EXPECT_THROW(unroll(*testing::k3_space(), 20, 50), ResourceCapError); }

TEST(Points, ResolveAndDescend) {
  auto k2 = k2_space();
  PointRef p{{Step::recurring(0, 4), Step::recurring(0, 9)}};
  EXPECT_EQ(resolve(*k2, p), NodeId{2});
  EXPECT_EQ(descend(*k2, 0, 2, 3), (std::vector<Step>{Step::recurring(0, 3), Step::recurring(0, 3)}));
  EXPECT_EQ(resolve(*k2, canonical_point(*k2, 1)), NodeId{1});
  EXPECT_THROW(resolve(*k2, PointRef{{Step::prefix(0)}}), InputError);
  EXPECT_THROW(resolve(*k2, PointRef{{Step::recurring(0, 0)}}), InputError);
}

TEST(Points, RepresentativesResolveToSources) {
  testing::Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    auto s = testing::random_space(rng);
    Unrolled u = unroll(*s, 2);
    auto reps = representative_points(u, 2);
    ASSERT_EQ(reps.size(), u.space->size());
    for (NodeId id = 0; id < u.space->size(); ++id) EXPECT_EQ(resolve(*s, reps[id]), u.source[id]);
  }
}

TEST(Corpus, RespectsLimits) {
  testing::Rng rng(testing::kCorpusSeed);
  for (int i = 0; i < 200; ++i) {
    auto s = testing::random_space(rng);
    EXPECT_LE(s->size(), testing::kMaxNodes);
    EXPECT_LE(s->max_rank(), testing::kMaxRank);
  }
}

}  // namespace
}  // namespace oscal
