#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oscal/func.hpp"

namespace oscal {

constexpr std::size_t kDefaultCap = 64;

enum class OscKind { Osc, Positive };

// Pre-envelope stage: max(w(p), max over Acc(p) of |f(y) - f(p)| + w(y)).
QFunction osc_tilde(const QFunction& f, const QFunction& w);
QFunction osc_step(const QFunction& f, const QFunction& w);
// As osc_tilde with the signed difference f(y) - f(p); f must be real.
QFunction v_tilde(const QFunction& f, const QFunction& w);
QFunction v_step(const QFunction& f, const QFunction& w);

struct OscTrace {
  QFunction base;
  OscKind kind;
  std::vector<QFunction> stages;  // stages[0] is zero
  std::optional<std::size_t> stabilized_at;
  std::size_t cap;

  // stages[n], or the fixed point when n is past a stabilized trace.
  const QFunction& stage(std::size_t n) const;
};

// Steps from zero until two consecutive stages agree or `cap` steps were taken.
OscTrace iterate(const QFunction& f, OscKind kind, std::size_t cap = kDefaultCap);

// Stage n computed directly, without stabilization detection.
QFunction stage(const QFunction& f, OscKind kind, std::size_t n);

// Least n with osc_n f = osc_{n+1} f; nullopt when the cap is exceeded.
std::optional<std::size_t> d_index(const QFunction& f, std::size_t cap = kDefaultCap);
std::optional<Rational> d_norm(const QFunction& f, std::size_t cap = kDefaultCap);

struct Decomposition {
  QFunction u;
  QFunction v;
  Rational lambda;
  std::size_t tau;
  bool nonnegative;
  bool lower_semicontinuous;
  bool difference_exact;
  bool norm_attained;
};

// u = (lambda - osc_tau f + f)/2, v = (lambda - osc_tau f - f)/2; every check
// must pass or InternalError is thrown.
std::optional<Decomposition> decompose(const QFunction& f, std::size_t cap = kDefaultCap);

// Whether osc_alpha f + f and osc_alpha f - f are both USC.
bool fixpoint_criterion(const OscTrace& trace, std::size_t alpha);

struct LevelSetWitness {
  Rational lambda_under;
  Rational delta;
  NodeId x1 = 0;
  std::vector<NodeId> level_set;  // L = {y : lambda_under <= v_alpha(y) < (1+eta)beta - delta}
  Rational eta;                   // possibly shrunk from the requested value
  Rational eta_requested;
  std::size_t alpha = 0;
  NodeId x = 0;
  Rational beta;
};

struct LevelSetChecks {
  bool window;     // (1-eta)beta < lambda_under + delta < (1+eta)beta
  bool closure;    // x1 in L or Acc(x1) meets L
  bool attained;   // max over Acc(x1) & L of phi(y) - phi(x1) equals delta
  bool all() const { return window && closure && attained; }
};

LevelSetChecks check_level_set_witness(const QFunction& phi, const LevelSetWitness& w);

// Requires 0 < v_alpha(phi)(x) < v_{alpha+1}(phi)(x) and 0 < eta < 1.
LevelSetWitness level_set_witness(const QFunction& phi, std::size_t alpha, NodeId x, const Rational& eta);

}  // namespace oscal
