#include <gtest/gtest.h>

#include <algorithm>
#include <memory>

#include "corpus.hpp"
#include "oscal/error.hpp"
#include "oscal/extraction.hpp"
#include "oscal/seqlab.hpp"

namespace oscal {
namespace {

using testing::k1_sequence;

PointRef leaf_copy(std::uint64_t k) { return PointRef{{Step::recurring(0, k)}}; }

std::vector<std::uint64_t> iota(std::uint64_t n) {
  std::vector<std::uint64_t> v(n);
  for (std::uint64_t i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

ApproachSpec k1_spec() { return ApproachSpec{PointRef{}, {1}, 1, Rational(1, 2)}; }

TEST(IndexView, Compositions) {
  IndexView id = IndexView::identity();
  IndexView odd = IndexView::composed(id, [](std::uint64_t q) { return 2 * q - 1; });
  IndexView tail = IndexView::after(odd, 2);
  EXPECT_EQ(odd.at(3), 5u);
  EXPECT_EQ(tail.at(1), 5u);
  EXPECT_EQ(odd.position_of(7), 4u);
  EXPECT_EQ(odd.position_of(6), std::nullopt);
}

TEST(Approach, K1Run) {
  FunctionSeq g = k1_sequence();
  ApproachRun run(g, IndexView::identity(), k1_spec());
  EXPECT_EQ(run.target(), NodeId{1});
  EXPECT_EQ(run.position(1), 1u);
  EXPECT_EQ(run.position(2), 2u);
  EXPECT_EQ(run.position(3), 3u);
  const PointRef& x2 = run.witness(4);
  EXPECT_EQ(resolve(g.space(), x2), NodeId{1});
  EXPECT_GE(x2.path.back().copy, 3u);
  std::vector<std::uint64_t> idx{run.index(1), run.index(2), run.index(3), run.index(4), run.index(5)};
  EXPECT_TRUE(check_approach(g, idx, PointRef{}, x2, 4, 1, Rational(1, 2)).holds());
}

TEST(Approach, CorruptedWitnesses) {
  FunctionSeq g = k1_sequence();
  auto idx = iota(6);
  CheckReport early = check_approach(g, idx, PointRef{}, leaf_copy(1), 4, 1, Rational(1, 2));
  EXPECT_FALSE(early.holds());
  EXPECT_EQ(early.failed(), (std::vector<std::string>{"before"}));
  CheckReport overstated = check_approach(g, idx, PointRef{}, leaf_copy(3), 4, 2, Rational(1, 2));
  EXPECT_EQ(overstated.failed(), (std::vector<std::string>{"rise"}));
}

TEST(Approach, Preconditions) {
  FunctionSeq g = k1_sequence();
  ApproachSpec s = k1_spec();
  s.eta = 1;
  EXPECT_THROW(ApproachRun(g, IndexView::identity(), s), PreconditionError);
  s = k1_spec();
  s.delta = 2;
  EXPECT_THROW(ApproachRun(g, IndexView::identity(), s), PreconditionError);
  s = k1_spec();
  s.x1 = leaf_copy(1);
  EXPECT_THROW(ApproachRun(g, IndexView::identity(), s), PreconditionError);
  // constant continuous sequence: no rise anywhere
  FunctionSeq flat(QFunction::constant(testing::k1_space(), 1), EventuallyLimit{});
  ApproachSpec f{PointRef{}, {0, 1}, 0, Rational(1, 2)};
  EXPECT_THROW(ApproachRun(flat, IndexView::identity(), f), PreconditionError);
}

TEST(Approach, CopyCap) {
  FunctionSeq g = k1_sequence();
  ApproachSpec s = k1_spec();
  s.copy_cap = 2;
  ApproachRun run(g, IndexView::identity(), s);
  EXPECT_THROW(run.witness(4), SearchExhausted);
}

TEST(Difference, K1HandWitness) {
  FunctionSeq g = k1_sequence();
  DifferenceWitness w{iota(3), {1, 3}, 1, leaf_copy(2), 1, Rational(1, 2)};
  EXPECT_TRUE(check_difference(g, w).holds());
  DifferenceWitness misaligned = w;
  misaligned.t = leaf_copy(9);
  EXPECT_FALSE(check_difference(g, misaligned).holds());
  DifferenceWitness heavy = w;
  heavy.lambda = 3;
  EXPECT_EQ(check_difference(g, heavy).failed(), (std::vector<std::string>{"sum"}));
}

TEST(Chain, K1OneStep) {
  FunctionSeq g = k1_sequence();
  RunResult r = chain_run(g, 1, 0, Rational(1, 2), default_m(2));
  EXPECT_EQ(r.alpha_used, 1u);
  EXPECT_FALSE(r.fell_back);
  EXPECT_EQ(r.bundle.k, 1u);
  EXPECT_EQ(r.bundle.deltas, (std::vector<Rational>{1}));
  EXPECT_TRUE(check_chain(g, r.bundle).holds());

  WitnessBundle wide = r.bundle;
  wide.lambda = 4;
  EXPECT_EQ(check_chain(g, wide).failed(), (std::vector<std::string>{"window"}));
}

TEST(Chain, NonPositiveDelta) {
  FunctionSeq g = k1_sequence();
  WitnessBundle b = chain_run(g, 1, 0, Rational(1, 2), default_m(2)).bundle;
  b.deltas[0] = 0;
  auto failed = check_chain(g, b).failed();
  EXPECT_NE(std::find(failed.begin(), failed.end(), "positive_delta"), failed.end());
}

TEST(Chain, K3TwoSteps) {
  FunctionSeq g = testing::k3_sequence();
  RunResult r = chain_run(g, 2, 0, Rational(1, 4), default_m(4));
  EXPECT_EQ(r.alpha_used, 2u);
  EXPECT_EQ(r.bundle.k, 2u);
  EXPECT_EQ(r.bundle.deltas, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(r.bundle.lambda, 2);
  EXPECT_TRUE(check_chain(g, r.bundle).holds());
}

TEST(Chain, EqualStagesNeedFallback) {
  FunctionSeq g = testing::k2_sequence();
  EXPECT_THROW(chain_run(g, 2, 0, Rational(1, 4), default_m(4)), PreconditionError);
  RunResult r = chain_run(g, 2, 0, Rational(1, 4), default_m(4), RunOptions{kDefaultCopyCap, true});
  EXPECT_TRUE(r.fell_back);
  EXPECT_EQ(r.alpha_used, 1u);
  EXPECT_TRUE(check_chain(g, r.bundle).holds());
}

TEST(Chain, RejectsBadArguments) {
  FunctionSeq g = k1_sequence();
  EXPECT_THROW(chain_run(g, 3, 0, Rational(1, 2), default_m(6)), PreconditionError);
  EXPECT_THROW(chain_run(g, 1, 0, Rational(1, 2), {2, 3}), PreconditionError);
  EXPECT_THROW(chain_run(g, 1, 0, Rational(3, 2), default_m(2)), PreconditionError);
}

TEST(Reduction, DifferenceDataChecks) {
  for (const FunctionSeq& g : {testing::k1_sequence(), testing::k3_sequence()}) {
    std::size_t alpha = g.space().size() == 2 ? 1 : 2;
    ReductionResult r = difference_run(g, alpha, 0, Rational(1, 2), {1, 3, 5, 7});
    EXPECT_TRUE(check_chain(g, r.chain.bundle).holds());
    EXPECT_TRUE(check_difference(g, r.difference).holds());
  }
}

TEST(Restrict, SubsequenceKeepsWitness) {
  FunctionSeq g = testing::k3_sequence();
  WitnessBundle b = chain_run(g, 2, 0, Rational(1, 4), {1, 2, 3, 4}).bundle;
  std::vector<std::uint64_t> keep;
  for (std::uint64_t i = 1; i <= b.indices.size(); ++i) keep.push_back(i);
  WitnessBundle same = restrict(b, keep);
  EXPECT_EQ(same, b);
  EXPECT_TRUE(check_chain(g, restrict(b, keep)).holds());
}

// The extracted terms, sampled at the leaf copies, span a finite model whose
// differences behave like the summing basis: eps-cc reaches 2, above every eps < 1.
TEST(Reduction, EpsCcTieIn) {
  FunctionSeq g = k1_sequence();
  ReductionResult r = difference_run(g, 1, 0, Rational(1, 2), {1, 3});
  const auto& idx = r.difference.indices;
  std::size_t n = std::min<std::size_t>(idx.size(), 5);
  ASSERT_GE(n, 3u);
  std::size_t dim = idx[n - 1];
  std::vector<Vec> vectors;
  for (std::size_t j = 0; j < n; ++j) {
    Vec v(dim);
    for (std::size_t k = 1; k <= dim; ++k) v[k - 1] = g.eval(idx[j], leaf_copy(k)).re;
    vectors.push_back(std::move(v));
  }
  PolyBasis model({dim, NormKind::Sup}, vectors);
  EXPECT_EQ(eps_cc_value(model, {}, n), 2);
}

}  // namespace
}  // namespace oscal
