#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "oscal/func.hpp"

namespace oscal {

// Value as a step function of a copy index: entry (k, v) covers the copies
// above the previous key up to k; copies past the last key take `tail`.
struct CopyTable {
  std::vector<std::pair<std::uint64_t, Complex>> upto;
  Complex tail;

  Complex at(std::optional<std::uint64_t> copy) const;
  std::uint64_t threshold() const { return upto.empty() ? 0 : upto.back().first; }
  friend bool operator==(const CopyTable&, const CopyTable&) = default;
};

// Function whose node values may depend on the copy index of the last recurring
// step on a point's path (the tail value applies when there is none).
class CIFunction {
 public:
  CIFunction(SpacePtr space, std::vector<CopyTable> tables);
  static CIFunction from(const QFunction& f);

  const TreeSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<CopyTable>& tables() const { return tables_; }
  std::uint64_t threshold() const;
  bool is_real() const;

  Complex eval(const PointRef& p) const;
  // Values on unroll(space, threshold()); continuity there is continuity here.
  QFunction materialize(const Unrolled& unrolled, std::size_t k) const;
  bool is_continuous() const;

  friend bool operator==(const CIFunction& a, const CIFunction& b);

 private:
  SpacePtr space_;
  std::vector<CopyTable> tables_;
};

// f_j = prefix[j-1] for j <= prefix.size(), then f_j = f.
struct EventuallyLimit {
  std::vector<CIFunction> prefix;
};

// Recurring steps out of `node` into pattern `pattern` are designated. At a point
// whose first designated step with copy >= j is this one, f_j takes `alt` (missing
// entries fall back to the limit value); elsewhere f_j agrees with the limit.
struct Designation {
  NodeId node = 0;
  std::size_t pattern = 0;
  std::map<NodeId, Complex> alt;
};

struct MovingStep {
  std::vector<Designation> designations;
};

using Generator = std::variant<EventuallyLimit, MovingStep>;

class FunctionSeq {
 public:
  // Throws InputError on malformed generators.
  FunctionSeq(QFunction limit, Generator generator);

  const QFunction& limit() const { return limit_; }
  const Generator& generator() const { return generator_; }
  const TreeSpace& space() const { return limit_.space(); }

  Complex eval(std::uint64_t j, const PointRef& x) const;
  Complex limit_value(const PointRef& x) const;
  // Upper bound (exact when moduli are rational) for sum over j >= m of |f_j(x) - f(x)|.
  Interval tail_bound(const PointRef& x, std::uint64_t m) const;
  // Upper bound on |f_j(y) - f_j(z)| over y = z and every point extending z whose
  // first extra step is a recurring copy >= min_copy.
  Rational neighborhood_deviation(std::uint64_t j, const PointRef& z, std::uint64_t min_copy) const;

  // f_j as a quotient function on unroll(space, k) with k past every copy it distinguishes.
  std::pair<Unrolled, QFunction> materialize(std::uint64_t j) const;
  bool is_continuous(std::uint64_t j) const;
  // max |value| over the limit and every generator value
  Interval uniform_bound() const;

 private:
  const Designation* designation(NodeId node, std::size_t pattern) const;

  QFunction limit_;
  Generator generator_;
};

}  // namespace oscal
