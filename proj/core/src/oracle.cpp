#include "oscal/oracle.hpp"

#include <string>

#include "oscal/error.hpp"

namespace oscal {

OracleResult oracle_dnorm(const QFunction& f) {
  if (!f.is_real()) throw PreconditionError("the oracle handles real functions only");
  const TreeSpace& s = f.space();
  const std::size_t n = s.size();
  lp::LinearProgram prog;
  std::vector<std::size_t> u(n), v(n);
  for (NodeId p = 0; p < n; ++p) {
    u[p] = prog.add_variable("u" + std::to_string(p));
    v[p] = prog.add_variable("v" + std::to_string(p));
  }
  std::size_t t = prog.add_variable("t");
  for (NodeId p = 0; p < n; ++p) {
    prog.add_constraint({{u[p], 1}, {v[p], -1}}, lp::Sense::Equal, f[p]);
    prog.add_constraint({{u[p], 1}, {v[p], 1}, {t, -1}}, lp::Sense::LessEq, 0);
    for (NodeId y : s.acc(p)) {
      prog.add_constraint({{u[p], 1}, {u[y], -1}}, lp::Sense::LessEq, 0);
      prog.add_constraint({{v[p], 1}, {v[y], -1}}, lp::Sense::LessEq, 0);
    }
  }
  prog.set_objective(lp::Direction::Minimize, {{t, 1}});
  lp::Result r = lp::solve(prog);
  if (r.status != lp::Status::Optimal) {
    throw InternalError(std::string("oracle LP is ") + lp::to_string(r.status));
  }
  std::vector<Rational> uv(n), vv(n);
  for (NodeId p = 0; p < n; ++p) {
    uv[p] = r.values[u[p]];
    vv[p] = r.values[v[p]];
  }
  return {r.objective, QFunction(f.space_ptr(), std::move(uv)), QFunction(f.space_ptr(), std::move(vv)), r.stats};
}

std::optional<Rational> oracle_objective(const QFunction& f, const QFunction& u, const QFunction& v) {
  const TreeSpace& s = f.space();
  if (!same_space(f, u) || !same_space(f, v)) throw InputError("functions live on different spaces");
  if (sub(u, v) != f) return std::nullopt;
  for (NodeId p = 0; p < s.size(); ++p) {
    if (u[p] < 0 || v[p] < 0) return std::nullopt;
    for (NodeId y : s.acc(p)) {
      if (u[p] > u[y] || v[p] > v[y]) return std::nullopt;
    }
  }
  return max_value(add(u, v));
}

SymmetryResult symmetry_compare(const QFunction& f, std::size_t k, std::size_t node_cap) {
  Unrolled un = unroll(f.space(), k, node_cap);
  QFunction lifted = lift(f, un);
  return {oracle_dnorm(f).optimum, oracle_dnorm(lifted).optimum, un.space->size()};
}

bool symmetry_check(const QFunction& f, std::size_t k) {
  if (k < 1 || k > 3) throw PreconditionError("symmetry check takes k in {1, 2, 3}");
  return symmetry_compare(f, k).agree();
}

}  // namespace oscal
