#include "oscal/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

#include "oscal/error.hpp"

namespace oscal::lp {

std::size_t LinearProgram::add_variable(std::string name, std::optional<Rational> lower,
                                        std::optional<Rational> upper) {
  if (lower && upper && *lower > *upper) throw InputError("variable " + name + " has empty bounds");
  vars_.push_back({std::move(name), std::move(lower), std::move(upper)});
  return vars_.size() - 1;
}

std::size_t LinearProgram::add_constraint(std::vector<Term> terms, Sense sense, Rational rhs) {
  for (const Term& t : terms) {
    if (t.var >= vars_.size()) throw InputError("constraint uses unknown variable");
  }
  rows_.push_back({std::move(terms), sense, std::move(rhs)});
  return rows_.size() - 1;
}

void LinearProgram::set_objective(Direction dir, std::vector<Term> terms) {
  for (const Term& t : terms) {
    if (t.var >= vars_.size()) throw InputError("objective uses unknown variable");
  }
  dir_ = dir;
  obj_ = std::move(terms);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

using Col = std::uint32_t;
using Entry = std::pair<Col, Rational>;
using Row = std::vector<Entry>;  // sorted by column, no zeros

const Rational* find(const Row& row, Col c) {
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, Col k) { return e.first < k; });
  return (it != row.end() && it->first == c) ? &it->second : nullptr;
}

// a -= f * b
void axpy(Row& a, const Rational& f, const Row& b) {
  Row out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(std::move(*ia++));
    } else if (ia == a.end() || ib->first < ia->first) {
      out.emplace_back(ib->first, -f * ib->second);
      ++ib;
    } else {
      Rational v = ia->second - f * ib->second;
      if (v != 0) out.emplace_back(ia->first, std::move(v));
      ++ia;
      ++ib;
    }
  }
  a = std::move(out);
}

// How a user variable maps onto nonnegative columns: x = offset + sum sign * col.
struct VarMap {
  Rational offset;
  std::vector<std::pair<Col, int>> cols;
};

class Tableau {
 public:
  std::vector<Row> rows;
  std::vector<Rational> rhs;
  std::vector<Col> basis;
  std::vector<bool> artificial;
  std::vector<Rational> cost;  // reduced costs
  Rational neg_z;
  std::size_t pivots = 0;
  std::size_t pivot_cap = 0;

  std::size_t columns() const { return artificial.size(); }

  void pivot(std::size_t r, Col e) {
    if (++pivots > pivot_cap) throw ResourceCapError("simplex pivot cap exceeded");
    Rational inv = 1 / *find(rows[r], e);
    for (Entry& x : rows[r]) x.second *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const Rational* a = find(rows[i], e);
      if (!a) continue;
      Rational f = *a;
      axpy(rows[i], f, rows[r]);
      rhs[i] -= f * rhs[r];
    }
    if (cost[e] != 0) {
      Rational f = cost[e];
      for (const Entry& x : rows[r]) cost[x.first] -= f * x.second;
      neg_z -= f * rhs[r];
    }
    basis[r] = e;
  }

  // Returns false when unbounded.
  bool run(bool allow_artificial) {
    for (;;) {
      Col e = 0;
      bool found = false;
      for (Col j = 0; j < columns(); ++j) {
        if (!allow_artificial && artificial[j]) continue;
        if (cost[j] < 0) {
          e = j;
          found = true;
          break;
        }
      }
      if (!found) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Rational* a = find(rows[i], e);
        if (!a || *a <= 0) continue;
        Rational ratio = rhs[i] / *a;
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, e);
    }
  }
};

}  // namespace

Result solve(const LinearProgram& program, std::size_t pivot_cap) {
  const auto& vars = program.variables();
  const auto& cons = program.constraints();

  std::vector<VarMap> vmap(vars.size());
  Col ncols = 0;
  struct Extra {
    Col col;
    Rational bound;
  };
  std::vector<Extra> upper_rows;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const Variable& v = vars[j];
    if (v.lower) {
      vmap[j].offset = *v.lower;
      vmap[j].cols.push_back({ncols, 1});
      if (v.upper) upper_rows.push_back({ncols, *v.upper - *v.lower});
      ++ncols;
    } else if (v.upper) {
      vmap[j].offset = *v.upper;
      vmap[j].cols.push_back({ncols++, -1});
    } else {
      vmap[j].cols.push_back({ncols++, 1});
      vmap[j].cols.push_back({ncols++, -1});
    }
  }
  const Col structural = ncols;

  struct StdRow {
    Row row;
    Sense sense;
    Rational rhs;
    bool flipped = false;
  };
  std::vector<StdRow> std_rows;
  for (const Constraint& c : cons) {
    StdRow r{{}, c.sense, c.rhs};
    for (const Term& t : c.terms) {
      r.rhs -= t.coef * vmap[t.var].offset;
      for (auto [col, sign] : vmap[t.var].cols) r.row.emplace_back(col, sign * t.coef);
    }
    std::sort(r.row.begin(), r.row.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Row merged;
    for (Entry& e : r.row) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(std::move(e));
      }
    }
    std::erase_if(merged, [](const Entry& e) { return e.second == 0; });
    r.row = std::move(merged);
    std_rows.push_back(std::move(r));
  }
  for (const Extra& u : upper_rows) std_rows.push_back({{{u.col, Rational(1)}}, Sense::LessEq, u.bound});

  Tableau t;
  t.pivot_cap = pivot_cap;
  std::vector<Col> identity_col(std_rows.size());
  std::vector<bool> artificial(structural, false);
  for (StdRow& r : std_rows) {
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      for (Entry& e : r.row) e.second = -e.second;
      if (r.sense == Sense::LessEq) {
        r.sense = Sense::GreaterEq;
      } else if (r.sense == Sense::GreaterEq) {
        r.sense = Sense::LessEq;
      }
      r.flipped = true;
    }
  }
  for (std::size_t i = 0; i < std_rows.size(); ++i) {
    StdRow& r = std_rows[i];
    if (r.sense == Sense::LessEq) {
      identity_col[i] = ncols++;
      artificial.push_back(false);
      r.row.emplace_back(identity_col[i], 1);
    } else {
      if (r.sense == Sense::GreaterEq) {
        r.row.emplace_back(ncols++, -1);
        artificial.push_back(false);
      }
      identity_col[i] = ncols++;
      artificial.push_back(true);
      r.row.emplace_back(identity_col[i], 1);
    }
    t.rows.push_back(std::move(r.row));
    t.rhs.push_back(r.rhs);
    t.basis.push_back(identity_col[i]);
  }
  t.artificial = std::move(artificial);

  Result result;
  result.stats.rows = t.rows.size();
  result.stats.columns = t.columns();

  // Phase 1: minimize the sum of artificials.
  t.cost.assign(t.columns(), Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (!t.artificial[t.basis[i]]) continue;
    for (const Entry& e : t.rows[i]) {
      if (!t.artificial[e.first]) t.cost[e.first] -= e.second;
    }
    t.neg_z -= t.rhs[i];
  }
  t.run(true);
  if (t.neg_z != 0) {
    result.status = Status::Infeasible;
    result.stats.pivots = t.pivots;
    return result;
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (!t.artificial[t.basis[i]]) continue;
    for (const Entry& e : t.rows[i]) {
      if (!t.artificial[e.first]) {
        t.pivot(i, e.first);
        break;
      }
    }
  }

  // Phase 2.
  const bool maximize = program.direction() == Direction::Maximize;
  std::vector<Rational> c(t.columns(), Rational(0));
  Rational constant = 0;
  for (const Term& term : program.objective()) {
    Rational coef = maximize ? Rational(-term.coef) : term.coef;
    constant += coef * vmap[term.var].offset;
    for (auto [col, sign] : vmap[term.var].cols) c[col] += sign * coef;
  }
  t.cost = c;
  t.neg_z = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Rational& cb = c[t.basis[i]];
    if (cb == 0) continue;
    for (const Entry& e : t.rows[i]) t.cost[e.first] -= cb * e.second;
    t.neg_z -= cb * t.rhs[i];
  }
  bool bounded = t.run(false);
  result.stats.pivots = t.pivots;
  if (!bounded) {
    result.status = Status::Unbounded;
    return result;
  }

  std::vector<Rational> x(t.columns(), Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) x[t.basis[i]] = t.rhs[i];
  result.status = Status::Optimal;
  Rational z = constant - t.neg_z;
  result.objective = maximize ? Rational(-z) : z;
  result.values.resize(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    Rational v = vmap[j].offset;
    for (auto [col, sign] : vmap[j].cols) v += sign * x[col];
    result.values[j] = v;
  }
  result.duals.resize(cons.size());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    Rational y = -t.cost[identity_col[i]];
    if (std_rows[i].flipped) y = -y;
    if (maximize) y = -y;
    result.duals[i] = y;
  }
  return result;
}

}  // namespace oscal::lp
