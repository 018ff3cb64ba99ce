#include "oscal/transfinite.hpp"

#include <algorithm>
#include <string>

#include "oscal/error.hpp"

namespace oscal {

namespace {

void require_compatible(const QFunction& f, const QFunction& w) {
  if (!same_space(f, w)) throw InputError("stage lives on a different space");
  if (!w.is_real()) throw InputError("stage must be real");
}

template <class Diff>
QFunction tilde(const QFunction& f, const QFunction& w, Diff diff) {
  require_compatible(f, w);
  const TreeSpace& s = f.space();
  std::vector<Rational> out(w.values());
  for (NodeId p = 0; p < s.size(); ++p) {
    for (NodeId y : s.acc(p)) {
      Rational t = diff(y, p) + w.values()[y];
      if (t > out[p]) out[p] = t;
    }
  }
  return QFunction(f.space_ptr(), std::move(out));
}

QFunction step(const QFunction& f, OscKind kind, const QFunction& w) {
  return kind == OscKind::Osc ? osc_step(f, w) : v_step(f, w);
}

}  // namespace

QFunction osc_tilde(const QFunction& f, const QFunction& w) {
  if (f.is_real()) {
    return tilde(f, w, [&](NodeId y, NodeId p) { return abs_value(f.values()[y] - f.values()[p]); });
  }
  return tilde(f, w, [&](NodeId y, NodeId p) { return exact_modulus(f.at(y) - f.at(p)); });
}

QFunction osc_step(const QFunction& f, const QFunction& w) { return usc_envelope(osc_tilde(f, w)); }

QFunction v_tilde(const QFunction& f, const QFunction& w) {
  if (!f.is_real()) throw PreconditionError("positive oscillation requires a real function");
  return tilde(f, w, [&](NodeId y, NodeId p) { return Rational(f.values()[y] - f.values()[p]); });
}

QFunction v_step(const QFunction& f, const QFunction& w) { return usc_envelope(v_tilde(f, w)); }

const QFunction& OscTrace::stage(std::size_t n) const {
  if (n < stages.size()) return stages[n];
  if (stabilized_at) return stages.back();
  throw PreconditionError("stage " + std::to_string(n) + " was not computed");
}

OscTrace iterate(const QFunction& f, OscKind kind, std::size_t cap) {
  if (cap < 1) throw PreconditionError("cap must be at least 1");
  OscTrace trace{f, kind, {QFunction::zero(f.space_ptr())}, std::nullopt, cap};
  for (std::size_t n = 0; n < cap; ++n) {
    QFunction next = step(f, kind, trace.stages[n]);
    bool same = next == trace.stages[n];
    trace.stages.push_back(std::move(next));
    if (same) {
      trace.stabilized_at = n;
      break;
    }
  }
  return trace;
}

QFunction stage(const QFunction& f, OscKind kind, std::size_t n) {
  QFunction w = QFunction::zero(f.space_ptr());
  for (std::size_t i = 0; i < n; ++i) w = step(f, kind, w);
  return w;
}

std::optional<std::size_t> d_index(const QFunction& f, std::size_t cap) {
  return iterate(f, OscKind::Osc, cap).stabilized_at;
}

namespace {

struct Stabilized {
  QFunction osc_tau;
  std::size_t tau;
  Rational lambda;
};

std::optional<Stabilized> stabilize(const QFunction& f, std::size_t cap) {
  if (!f.is_real()) throw PreconditionError("D-norm requires a real function");
  OscTrace trace = iterate(f, OscKind::Osc, cap);
  if (!trace.stabilized_at) return std::nullopt;
  std::size_t tau = *trace.stabilized_at;
  const QFunction& w = trace.stages[tau];
  Rational lambda = 0;
  for (NodeId p = 0; p < f.size(); ++p) {
    lambda = max_of(lambda, abs_value(f.values()[p]) + w.values()[p]);
  }
  return Stabilized{w, tau, lambda};
}

}  // namespace

std::optional<Rational> d_norm(const QFunction& f, std::size_t cap) {
  auto s = stabilize(f, cap);
  if (!s) return std::nullopt;
  return s->lambda;
}

std::optional<Decomposition> decompose(const QFunction& f, std::size_t cap) {
  auto s = stabilize(f, cap);
  if (!s) return std::nullopt;
  QFunction base = plus_constant(negate(s->osc_tau), s->lambda);
  QFunction u = scale(Rational(1, 2), add(base, f));
  QFunction v = scale(Rational(1, 2), sub(base, f));
  QFunction zero = QFunction::zero(f.space_ptr());
  Decomposition d{u, v, s->lambda, s->tau, false, false, false, false};
  d.nonnegative = pointwise_leq(zero, u) && pointwise_leq(zero, v);
  d.lower_semicontinuous = is_lsc(u) && is_lsc(v);
  d.difference_exact = sub(u, v) == f;
  d.norm_attained = max_value(add(u, v)) == s->lambda;
  if (!(d.nonnegative && d.lower_semicontinuous && d.difference_exact && d.norm_attained)) {
    throw InternalError("attained decomposition failed verification");
  }
  return d;
}

bool fixpoint_criterion(const OscTrace& trace, std::size_t alpha) {
  if (alpha >= trace.stages.size()) {
    throw PreconditionError("stage " + std::to_string(alpha) + " is outside the computed trace");
  }
  const QFunction& w = trace.stages[alpha];
  return is_usc(add(w, trace.base)) && is_usc(sub(w, trace.base));
}

LevelSetChecks check_level_set_witness(const QFunction& phi, const LevelSetWitness& w) {
  const TreeSpace& s = phi.space();
  LevelSetChecks c{false, false, false};
  Rational sum = w.lambda_under + w.delta;
  c.window = (1 - w.eta) * w.beta < sum && sum < (1 + w.eta) * w.beta;

  std::vector<bool> in_l(s.size(), false);
  for (NodeId y : w.level_set) {
    if (y >= s.size()) return c;
    in_l[y] = true;
  }
  if (w.x1 >= s.size()) return c;
  c.closure = in_l[w.x1];
  std::optional<Rational> best;
  for (NodeId y : s.acc(w.x1)) {
    if (!in_l[y]) continue;
    c.closure = true;
    Rational d = phi[y] - phi[w.x1];
    if (!best || d > *best) best = d;
  }
  c.attained = best && *best == w.delta;
  return c;
}

LevelSetWitness level_set_witness(const QFunction& phi, std::size_t alpha, NodeId x, const Rational& eta) {
  if (!phi.is_real()) throw PreconditionError("level-set witness requires a real function");
  if (!(eta > 0 && eta < 1)) throw PreconditionError("eta must lie in (0, 1)");
  const TreeSpace& s = phi.space();
  if (x >= s.size()) throw InputError("unknown node id " + std::to_string(x));

  QFunction w = stage(phi, OscKind::Positive, alpha);
  QFunction next_tilde = v_tilde(phi, w);
  QFunction next = usc_envelope(next_tilde);
  const Rational& va = w.values()[x];
  const Rational beta = next.values()[x];
  if (!(va > 0)) {
    throw PreconditionError("v_" + std::to_string(alpha) + " vanishes at node " + std::to_string(x));
  }
  if (!(va < beta)) {
    throw PreconditionError("v_" + std::to_string(alpha) + " and v_" + std::to_string(alpha + 1) +
                            " agree at node " + std::to_string(x));
  }

  LevelSetWitness out;
  out.eta_requested = eta;
  out.eta = eta;
  while (!(va < (1 - out.eta) * beta)) out.eta /= 2;
  out.alpha = alpha;
  out.x = x;
  out.beta = beta;

  // {x} and Acc(x) form the neighborhood; USC keeps both stages below the bounds there.
  std::vector<NodeId> nbhd{x};
  for (NodeId y : s.acc(x)) nbhd.push_back(y);
  std::sort(nbhd.begin(), nbhd.end());
  std::optional<NodeId> x1;
  for (NodeId v : nbhd) {
    if (next_tilde.values()[v] > (1 - out.eta) * beta) {
      x1 = v;
      break;
    }
  }
  if (!x1) throw InternalError("no node attains the next positive oscillation");
  out.x1 = *x1;

  // The stage value at x1 is attained by some y in Acc(x1), never by x1 itself.
  std::optional<NodeId> y_best;
  for (NodeId y : s.acc(out.x1)) {
    Rational t = phi[y] - phi[out.x1] + w.values()[y];
    if (t == next_tilde.values()[out.x1]) {
      y_best = y;
      break;
    }
  }
  if (!y_best) throw InternalError("next positive oscillation is not attained on Acc(x1)");
  out.lambda_under = w.values()[*y_best];

  std::optional<Rational> delta;
  for (NodeId y : s.acc(out.x1)) {
    if (w.values()[y] < out.lambda_under) continue;
    Rational d = phi[y] - phi[out.x1];
    if (!delta || d > *delta) delta = d;
  }
  out.delta = *delta;

  Rational upper = (1 + out.eta) * beta - out.delta;
  for (NodeId y = 0; y < s.size(); ++y) {
    if (out.lambda_under <= w.values()[y] && w.values()[y] < upper) out.level_set.push_back(y);
  }

  if (!(out.lambda_under > 0 && out.delta > 0) || !check_level_set_witness(phi, out).all()) {
    throw InternalError("level-set witness failed verification");
  }
  return out;
}

}  // namespace oscal
