#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oscal/sequence.hpp"
#include "oscal/transfinite.hpp"

namespace oscal {

constexpr std::uint64_t kDefaultCopyCap = 1000000;

// Strictly increasing sequence of positive integers, 1-based, evaluated lazily.
class IndexView {
 public:
  static IndexView identity();
  // base without its first `drop` entries
  static IndexView after(IndexView base, std::uint64_t drop);
  // q -> base.at(pick(q))
  static IndexView composed(IndexView base, std::function<std::uint64_t(std::uint64_t)> pick);

  std::uint64_t at(std::uint64_t q) const { return at_(q); }
  // Position of `value`, or nullopt when the view skips it.
  std::optional<std::uint64_t> position_of(std::uint64_t value) const;

 private:
  explicit IndexView(std::function<std::uint64_t(std::uint64_t)> at) : at_(std::move(at)) {}
  std::function<std::uint64_t(std::uint64_t)> at_;
};

struct ApproachSpec {
  PointRef x1;
  std::vector<NodeId> level_set;  // L, any order
  Rational delta;                 // must equal max over Acc(x1) & L of phi(y) - phi(x1)
  Rational eta;
  std::uint64_t min_copy = 1;     // witnesses only use copies >= min_copy right below x1
  std::uint64_t copy_cap = kDefaultCopyCap;
};

// Builds b_q = f_{domain(n_q)} so that for every m > 1 some x2 in L near x1 rises by
// more than (1-eta)delta over x1 while the b_i with i < m stay within eta*delta of
// f(x1) and those with i >= m within eta*delta of f(x2). Work is done on demand.
class ApproachRun {
 public:
  // Throws PreconditionError when delta is not the attained value or not positive,
  // or eta is outside (0, 1).
  ApproachRun(const FunctionSeq& seq, IndexView domain, ApproachSpec spec);

  const ApproachSpec& spec() const { return spec_; }
  NodeId target() const { return target_; }
  const IndexView& domain() const { return domain_; }

  // n_q as a domain position
  std::uint64_t position(std::uint64_t q) const;
  // f-index of b_q
  std::uint64_t index(std::uint64_t q) const { return domain_.at(position(q)); }
  // Least domain position of M_s; M_s is every position from there on.
  std::uint64_t tail_start(std::uint64_t s) const;
  // x2 for a given m >= 2. Throws SearchExhausted past the copy cap.
  const PointRef& witness(std::uint64_t m) const;
  // b as a view of f-indices
  IndexView subsequence(const std::shared_ptr<const ApproachRun>& self) const;

 private:
  void grow(std::uint64_t stages) const;
  PointRef candidate(std::uint64_t k) const;

  const FunctionSeq* seq_;
  IndexView domain_;
  ApproachSpec spec_;
  NodeId target_ = 0;
  std::size_t pattern_ = 0;
  Rational budget_;  // eta * delta

  mutable std::vector<std::uint64_t> n_;         // n_1, n_2, ...
  mutable std::vector<std::uint64_t> tail_;      // tail_[s] = min M_s
  mutable std::vector<PointRef> points_;         // points_[s-1] = x2 of stage s
};

struct WitnessBundle {
  std::vector<std::uint64_t> indices;  // f-indices of b_1..b_S
  std::vector<std::uint64_t> m;        // m_1..m_{2k}
  std::size_t k = 0;
  std::vector<PointRef> points;        // x_1..x_{2k}; the last is t
  std::vector<Rational> deltas;        // delta_1..delta_k
  Rational lambda;
  Rational eta;

  const PointRef& t() const { return points.back(); }
  friend bool operator==(const WitnessBundle&, const WitnessBundle&) = default;
};

// Data for the difference-sequence conclusion: e_1 = b_1, e_i = b_i - b_{i-1}.
struct DifferenceWitness {
  std::vector<std::uint64_t> indices;  // f-indices of b_1..b_S
  std::vector<std::uint64_t> m;        // known prefix m_1..m_{2k}
  std::size_t k = 0;
  PointRef t;
  Rational lambda;
  Rational eta;
  friend bool operator==(const DifferenceWitness&, const DifferenceWitness&) = default;
};

struct CheckItem {
  std::string condition;  // e.g. "rise", "window", "block_sum", "tail"
  std::string detail;
  Verdict verdict;
};

struct CheckReport {
  std::vector<CheckItem> items;

  Verdict overall() const;
  bool holds() const { return overall() == Verdict::Holds; }
  // Conditions with at least one failing item, first-seen order.
  std::vector<std::string> failed() const;
};

// Approach form: rise, sum before m against f(x1), sum from m on against f(x2).
CheckReport check_approach(const FunctionSeq& seq, const std::vector<std::uint64_t>& indices, const PointRef& x1,
                           const PointRef& x2, std::uint64_t m, const Rational& delta, const Rational& eta);

// Chain form: rises, two-sided window on the delta sum, block sums and the tail.
CheckReport check_chain(const FunctionSeq& seq, const WitnessBundle& bundle);

// Difference form: sum and positivity of Re e_{m_2j}(t), small mass off the m's.
CheckReport check_difference(const FunctionSeq& seq, const DifferenceWitness& witness);

struct RunOptions {
  std::uint64_t copy_cap = kDefaultCopyCap;
  // For alpha = 2 with v_1 = v_2 at x, run the alpha = 1 construction instead of failing.
  bool allow_fallback = false;
};

struct RunResult {
  WitnessBundle bundle;
  std::size_t alpha_used = 0;
  bool fell_back = false;
};

// Default m-sequence: m_j = j.
std::vector<std::uint64_t> default_m(std::size_t count);

// Chain witness for alpha in {1, 2} at node x, re-checked before return.
// `m` must start with 1 and be strictly increasing, with at least 2*alpha entries.
RunResult chain_run(const FunctionSeq& seq, std::size_t alpha, NodeId x, const Rational& eta,
                    const std::vector<std::uint64_t>& m, const RunOptions& options = {});

// Chain run at eta/5 followed by the reduction to difference data, re-checked.
struct ReductionResult {
  RunResult chain;
  DifferenceWitness difference;
};
ReductionResult difference_run(const FunctionSeq& seq, std::size_t alpha, NodeId x, const Rational& eta,
                               const std::vector<std::uint64_t>& m, const RunOptions& options = {});

// Difference data read off a chain bundle: t, k, lambda, and the given eta.
DifferenceWitness reduce(const WitnessBundle& bundle, const Rational& eta);

// Restricts a bundle to the b_i with i in `keep` (1-based, increasing, containing 1,
// every m_j and the last index); m is re-based.
WitnessBundle restrict(const WitnessBundle& bundle, const std::vector<std::uint64_t>& keep);

}  // namespace oscal
