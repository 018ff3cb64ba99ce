#pragma once

#include <cstddef>
#include <optional>

#include "oscal/func.hpp"
#include "oscal/lp.hpp"

namespace oscal {

struct OracleResult {
  Rational optimum;
  QFunction u;
  QFunction v;
  lp::Stats stats;
};

// min t subject to u - v = f, u, v >= 0, u + v <= t, and u(p) <= u(y), v(p) <= v(y)
// for every y in Acc(p).
OracleResult oracle_dnorm(const QFunction& f);

// Whether (u, v) satisfies every oracle constraint; returns max(u + v) if so.
std::optional<Rational> oracle_objective(const QFunction& f, const QFunction& u, const QFunction& v);

struct SymmetryResult {
  Rational quotient;
  Rational unrolled;
  std::size_t unrolled_nodes;
  bool agree() const { return quotient == unrolled; }
};

// Oracle on unroll(space, k) with f lifted, against the oracle on the quotient.
SymmetryResult symmetry_compare(const QFunction& f, std::size_t k, std::size_t node_cap = kDefaultNodeCap);
bool symmetry_check(const QFunction& f, std::size_t k);

}  // namespace oscal
