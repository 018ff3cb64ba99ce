#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oscal/rational.hpp"

namespace oscal::lp {

enum class Sense { LessEq, Equal, GreaterEq };
enum class Direction { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded };

struct Term {
  std::size_t var;
  Rational coef;
};

struct Variable {
  std::string name;
  std::optional<Rational> lower;  // nullopt = unbounded below
  std::optional<Rational> upper;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense;
  Rational rhs;
};

class LinearProgram {
 public:
  std::size_t add_variable(std::string name, std::optional<Rational> lower = Rational(0),
                           std::optional<Rational> upper = std::nullopt);
  std::size_t add_constraint(std::vector<Term> terms, Sense sense, Rational rhs);
  void set_objective(Direction dir, std::vector<Term> terms);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  Direction direction() const { return dir_; }
  const std::vector<Term>& objective() const { return obj_; }

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  Direction dir_ = Direction::Minimize;
  std::vector<Term> obj_;
};

struct Stats {
  std::size_t rows = 0;
  std::size_t columns = 0;
  std::size_t pivots = 0;
};

struct Result {
  Status status = Status::Infeasible;
  Rational objective;
  std::vector<Rational> values;  // per variable
  // Per constraint; at an optimum with all variables bounded below by zero,
  // the objective equals the sum of dual * rhs.
  std::vector<Rational> duals;
  Stats stats;
};

constexpr std::size_t kDefaultPivotCap = 2'000'000;

// Two-phase primal simplex with Bland's rule over exact rationals.
// Throws InputError on a malformed program and ResourceCapError past the pivot cap.
Result solve(const LinearProgram& program, std::size_t pivot_cap = kDefaultPivotCap);

const char* to_string(Status s);

}  // namespace oscal::lp
