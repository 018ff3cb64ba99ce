#include "oscal/extraction.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "oscal/error.hpp"

namespace oscal {

namespace {

std::string str(std::uint64_t v) { return std::to_string(v); }

Rational phi_at(const FunctionSeq& seq, NodeId y) { return seq.limit().at(y).re; }

std::size_t pattern_of(const TreeSpace& s, NodeId parent, NodeId y) {
  const auto& rec = s.node(parent).recurring;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (s.in_subtree(rec[i], y)) return i;
  }
  throw InternalError("node " + str(y) + " is not below a pattern of node " + str(parent));
}

// x followed by copy k of the pattern holding y, then down to y with copy k throughout.
PointRef below(const TreeSpace& s, const PointRef& x, NodeId xnode, NodeId y, std::uint64_t k) {
  std::size_t i = pattern_of(s, xnode, y);
  PointRef p = x.extended(Step::recurring(i, k));
  for (const Step& step : descend(s, s.node(xnode).recurring[i], y, k)) p.path.push_back(step);
  return p;
}

bool increasing(const std::vector<std::uint64_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || (i > 0 && v[i] <= v[i - 1])) return false;
  }
  return true;
}

Interval deviation(const Complex& a, const Complex& b) { return modulus(a - b); }

}  // namespace

IndexView IndexView::identity() {
  return IndexView([](std::uint64_t q) { return q; });
}

IndexView IndexView::after(IndexView base, std::uint64_t drop) {
  return IndexView([base = std::move(base), drop](std::uint64_t q) { return base.at(q + drop); });
}

IndexView IndexView::composed(IndexView base, std::function<std::uint64_t(std::uint64_t)> pick) {
  return IndexView([base = std::move(base), pick = std::move(pick)](std::uint64_t q) { return base.at(pick(q)); });
}

std::optional<std::uint64_t> IndexView::position_of(std::uint64_t value) const {
  for (std::uint64_t q = 1;; ++q) {
    std::uint64_t v = at(q);
    if (v == value) return q;
    if (v > value) return std::nullopt;
  }
}

ApproachRun::ApproachRun(const FunctionSeq& seq, IndexView domain, ApproachSpec spec)
    : seq_(&seq), domain_(std::move(domain)), spec_(std::move(spec)) {
  if (!(spec_.eta > 0 && spec_.eta < 1)) throw PreconditionError("eta must lie strictly between 0 and 1");
  const TreeSpace& s = seq.space();
  NodeId x1 = resolve(s, spec_.x1);
  if (s.is_leaf(x1)) throw PreconditionError("x1 is an isolated point");
  std::vector<bool> in_l(s.size(), false);
  for (NodeId y : spec_.level_set) {
    if (y >= s.size()) throw InputError("level set names unknown node " + str(y));
    in_l[y] = true;
  }
  std::optional<Rational> best;
  for (NodeId y : s.acc(x1)) {
    if (!in_l[y]) continue;
    Rational rise = phi_at(seq, y) - phi_at(seq, x1);
    if (!best || rise > *best) {
      best = rise;
      target_ = y;
    }
  }
  if (!best) throw PreconditionError("x1 is not in the closure of L");
  if (*best <= 0) throw PreconditionError("no rise towards L at x1: delta is " + to_string(*best));
  if (*best != spec_.delta) {
    throw PreconditionError("delta " + to_string(spec_.delta) + " differs from the attained value " + to_string(*best));
  }
  pattern_ = pattern_of(s, x1, target_);
  budget_ = spec_.eta * spec_.delta;

  // M_0: a tail of the domain where f_j(x1) is summably close to f(x1)
  std::uint64_t q = 1;
  for (std::uint64_t tries = 0; !(seq.tail_bound(spec_.x1, domain_.at(q)).hi < budget_); ++q) {
    if (++tries > spec_.copy_cap) throw SearchExhausted("no tail of the sequence is close to f at x1");
  }
  n_.push_back(q);
  tail_.push_back(q);
}

PointRef ApproachRun::candidate(std::uint64_t k) const {
  const TreeSpace& s = seq_->space();
  return below(s, spec_.x1, resolve(s, spec_.x1), target_, k);
}

void ApproachRun::grow(std::uint64_t stages) const {
  Complex f1 = seq_->limit_value(spec_.x1);
  while (points_.size() < stages) {
    std::vector<std::uint64_t> js;
    for (std::uint64_t pos : n_) js.push_back(domain_.at(pos));

    std::optional<PointRef> x2;
    for (std::uint64_t k = spec_.min_copy; k <= spec_.copy_cap; ++k) {
      PointRef p = candidate(k);
      Interval sum = Interval::point(0);
      for (std::uint64_t j : js) sum = sum + deviation(seq_->eval(j, p), f1);
      if (sum.hi < budget_) {
        x2 = std::move(p);
        break;
      }
    }
    if (!x2) throw SearchExhausted("copy cap " + str(spec_.copy_cap) + " reached at stage " + str(n_.size()));

    std::uint64_t a = n_.back() + 1;
    for (std::uint64_t tries = 0; !(seq_->tail_bound(*x2, domain_.at(a)).hi < budget_); ++a) {
      if (++tries > spec_.copy_cap) throw SearchExhausted("no tail of the sequence is close to f at the witness");
    }
    points_.push_back(std::move(*x2));
    tail_.push_back(a);
    n_.push_back(a);
  }
}

std::uint64_t ApproachRun::position(std::uint64_t q) const {
  if (q < 1) throw PreconditionError("subsequence positions start at 1");
  grow(q - 1);
  return n_[q - 1];
}

std::uint64_t ApproachRun::tail_start(std::uint64_t s) const {
  grow(s);
  return tail_[s];
}

const PointRef& ApproachRun::witness(std::uint64_t m) const {
  if (m < 2) throw PreconditionError("witnesses exist for m > 1");
  grow(m - 1);
  return points_[m - 2];
}

IndexView ApproachRun::subsequence(const std::shared_ptr<const ApproachRun>& self) const {
  return IndexView::composed(domain_, [self](std::uint64_t q) { return self->position(q); });
}

Verdict CheckReport::overall() const {
  Verdict v = Verdict::Holds;
  for (const CheckItem& item : items) v = v && item.verdict;
  return v;
}

std::vector<std::string> CheckReport::failed() const {
  std::vector<std::string> out;
  for (const CheckItem& item : items) {
    if (item.verdict == Verdict::Fails && std::find(out.begin(), out.end(), item.condition) == out.end()) {
      out.push_back(item.condition);
    }
  }
  return out;
}

namespace {

Verdict verdict_of(bool b) { return b ? Verdict::Holds : Verdict::Fails; }

// |b_i(t) - ref| summed over b-positions lo..hi (1-based, inclusive).
Interval block(const FunctionSeq& seq, const std::vector<std::uint64_t>& indices, std::uint64_t lo, std::uint64_t hi,
               const PointRef& t, const Complex& ref) {
  Interval sum = Interval::point(0);
  for (std::uint64_t i = lo; i <= hi; ++i) sum = sum + deviation(seq.eval(indices[i - 1], t), ref);
  return sum;
}

// Sum over i >= from of |b_i(t) - f(t)|: explicit up to S, the tail bound after.
Interval tail_mass(const FunctionSeq& seq, const std::vector<std::uint64_t>& indices, std::uint64_t from,
                   const PointRef& t) {
  Interval sum = block(seq, indices, from, indices.size(), t, seq.limit_value(t));
  return sum + seq.tail_bound(t, indices.back() + 1);
}

}  // namespace

CheckReport check_approach(const FunctionSeq& seq, const std::vector<std::uint64_t>& indices, const PointRef& x1,
                           const PointRef& x2, std::uint64_t m, const Rational& delta, const Rational& eta) {
  CheckReport r;
  bool shape = m >= 2 && increasing(indices) && indices.size() + 1 >= m && eta > 0 && eta < 1;
  r.items.push_back({"shape", "m > 1, increasing indices covering b_1..b_{m-1}, 0 < eta < 1", verdict_of(shape)});
  if (!shape) return r;
  r.items.push_back({"positive_delta", "", verdict_of(delta > 0)});
  const TreeSpace& s = seq.space();
  Rational rise = phi_at(seq, resolve(s, x2)) - phi_at(seq, resolve(s, x1));
  Rational budget = eta * delta;
  r.items.push_back({"rise", "", greater_than(Interval::point(rise), (1 - eta) * delta)});
  r.items.push_back({"before", "i < " + str(m), less_than(block(seq, indices, 1, m - 1, x2, seq.limit_value(x1)), budget)});
  r.items.push_back({"after", "i >= " + str(m), less_than(tail_mass(seq, indices, m, x2), budget)});
  return r;
}

CheckReport check_chain(const FunctionSeq& seq, const WitnessBundle& b) {
  CheckReport r;
  std::size_t k = b.k;
  bool shape = k >= 1 && b.points.size() == 2 * k && b.deltas.size() == k && b.m.size() >= 2 * k && b.m[0] == 1 &&
               increasing(b.m) && increasing(b.indices) && !b.indices.empty() && b.indices.size() + 1 >= b.m[2 * k - 1] &&
               b.eta > 0 && b.eta < 1;
  r.items.push_back({"shape", "k, points, deltas, m_1 = 1, increasing m and indices, S >= m_2k - 1, 0 < eta < 1",
                     verdict_of(shape)});
  if (!shape) return r;
  const TreeSpace& s = seq.space();
  const Rational& eta = b.eta;
  for (std::size_t j = 1; j <= k; ++j) {
    r.items.push_back({"positive_delta", "j=" + str(j), verdict_of(b.deltas[j - 1] > 0)});
  }
  for (std::size_t j = 1; j <= k; ++j) {
    Rational rise = phi_at(seq, resolve(s, b.points[2 * j - 1])) - phi_at(seq, resolve(s, b.points[2 * j - 2]));
    r.items.push_back({"rise", "j=" + str(j), greater_than(Interval::point(rise), (1 - eta) * b.deltas[j - 1])});
  }
  Rational total = 0;
  for (const Rational& d : b.deltas) total += d;
  r.items.push_back({"window", "", verdict_of((1 + eta) * b.lambda > total && total > (1 - eta) * b.lambda)});
  for (std::size_t j = 1; j + 1 <= 2 * k; ++j) {
    Interval sum = block(seq, b.indices, b.m[j - 1], b.m[j] - 1, b.t(), seq.limit_value(b.points[j - 1]));
    r.items.push_back({"block_sum", "j=" + str(j), less_than(sum, eta * b.deltas[(j + 1) / 2 - 1])});
  }
  r.items.push_back({"tail", "i >= " + str(b.m[2 * k - 1]), less_than(tail_mass(seq, b.indices, b.m[2 * k - 1], b.t()),
                                                                      eta * b.deltas[k - 1])});
  return r;
}

CheckReport check_difference(const FunctionSeq& seq, const DifferenceWitness& w) {
  CheckReport r;
  std::size_t k = w.k;
  bool shape = k >= 1 && w.m.size() >= 2 * k && w.m[0] == 1 && increasing(w.m) && increasing(w.indices) &&
               w.indices.size() >= w.m[2 * k - 1] && w.eta > 0 && w.eta < 1;
  r.items.push_back({"shape", "k, m_1 = 1, increasing m and indices, S >= m_2k, 0 < eta < 1", verdict_of(shape)});
  if (!shape) return r;
  std::size_t last = w.indices.size();
  std::vector<Complex> b(last + 1);
  for (std::size_t i = 1; i <= last; ++i) b[i] = seq.eval(w.indices[i - 1], w.t);
  auto e = [&](std::size_t i) { return i == 1 ? b[1] : b[i] - b[i - 1]; };

  Rational sum = 0;
  for (std::size_t j = 1; j <= k; ++j) {
    Rational v = e(w.m[2 * j - 1]).re;
    sum += v;
    r.items.push_back({"positive", "j=" + str(j), verdict_of(v > 0)});
  }
  r.items.push_back({"sum", "", verdict_of(sum > (1 - w.eta) * w.lambda)});

  std::vector<bool> on_m(last + 1, false);
  for (std::size_t j = 0; j < 2 * k; ++j) on_m[w.m[j]] = true;
  Interval off = Interval::point(0);
  for (std::size_t i = 1; i <= last; ++i) {
    if (!on_m[i]) off = off + modulus(e(i));
  }
  // past S: |e_i| <= |b_i - f| + |b_{i-1} - f|
  Interval after = deviation(b[last], seq.limit_value(w.t)) + seq.tail_bound(w.t, w.indices.back() + 1).scaled(2);
  r.items.push_back({"off_m", "i not in m", less_than(off + after, w.eta * w.lambda)});
  return r;
}

std::vector<std::uint64_t> default_m(std::size_t count) {
  std::vector<std::uint64_t> m(count);
  for (std::size_t j = 0; j < count; ++j) m[j] = j + 1;
  return m;
}

namespace {

struct AlphaOne {
  Rational lambda;
  PointRef x1;
  Rational delta;
  std::shared_ptr<const ApproachRun> run;
};

// Picks x1 at or below x whose one-step rise is within eta of v_1(phi)(x), then approaches it.
AlphaOne alpha_one(const FunctionSeq& seq, IndexView domain, const PointRef& x, const Rational& eta,
                   std::uint64_t min_copy, std::uint64_t cap) {
  const TreeSpace& s = seq.space();
  QFunction phi = re(seq.limit());
  NodeId xn = resolve(s, x);
  Rational lambda = stage(phi, OscKind::Positive, 1)[xn];
  if (lambda <= 0) throw PreconditionError("v_1 vanishes at node " + str(xn));
  QFunction rise = v_tilde(phi, QFunction::zero(seq.limit().space_ptr()));

  std::vector<NodeId> candidates{xn};
  if (s.is_limit(xn)) candidates.insert(candidates.end(), s.acc(xn).begin(), s.acc(xn).end());
  std::sort(candidates.begin(), candidates.end());
  std::optional<NodeId> z;
  for (NodeId c : candidates) {
    if ((1 - eta) * lambda < rise[c] && rise[c] < (1 + eta) * lambda) {
      z = c;
      break;
    }
  }
  if (!z) throw InternalError("no point near node " + str(xn) + " carries its one-step oscillation");

  AlphaOne out;
  out.lambda = lambda;
  out.x1 = *z == xn ? x : below(s, x, xn, *z, min_copy);
  out.delta = rise[*z];
  std::vector<NodeId> all(s.size());
  for (NodeId y = 0; y < s.size(); ++y) all[y] = y;
  out.run = std::make_shared<const ApproachRun>(
      seq, std::move(domain), ApproachSpec{out.x1, std::move(all), out.delta, eta, min_copy, cap});
  return out;
}

WitnessBundle one_step_bundle(const AlphaOne& a, const std::vector<std::uint64_t>& m, const Rational& eta) {
  WitnessBundle b;
  b.k = 1;
  b.m = {m[0], m[1]};
  for (std::uint64_t i = 1; i <= m[1]; ++i) b.indices.push_back(a.run->index(i));
  b.points = {a.x1, a.run->witness(m[1])};
  b.deltas = {a.delta};
  b.lambda = a.lambda;
  b.eta = eta;
  return b;
}

// Two-level construction: approach the level set, then nest one-step runs at
// each x2 inside neighborhoods where the earlier subsequence terms are pinned.
class StackedRun {
 public:
  StackedRun(const FunctionSeq& seq, const PointRef& x, NodeId xn, const Rational& beta, const Rational& eta_outer,
             std::uint64_t cap)
      : seq_(&seq), beta_(beta), eta_outer_(eta_outer), cap_(cap), g_(IndexView::identity()) {
    const TreeSpace& s = seq.space();
    QFunction phi = re(seq.limit());
    // (1 - eta)^2 >= 1 - eta_outer and (1 + eta)^2 <= 1 + eta_outer
    level_ = level_set_witness(phi, 1, xn, eta_outer / 3);
    eta_ = level_.eta;
    x1_ = level_.x1 == xn ? x : below(s, x, xn, level_.x1, 1);
    e1_ = std::make_shared<const ApproachRun>(
        seq, IndexView::identity(), ApproachSpec{x1_, level_.level_set, level_.delta, eta_, 1, cap});
    g_ = e1_->subsequence(e1_);
    np_ = {1, 2};
    m_sets_.push_back(IndexView::after(IndexView::identity(), 1));  // M_1
  }

  WitnessBundle bundle(const std::vector<std::uint64_t>& m) {
    std::uint64_t r = m[1], l1 = m[2], l2 = m[3];
    std::uint64_t s = l1 - 1;
    grow(l2 - 1);
    const Piece& piece = stages_[s - 2][r - 2];
    std::uint64_t m2 = np_[l2 - 1];
    auto p = piece.d.position_of(m2);
    if (!p) throw InternalError("m_2 is missing from the nested subsequence");
    WitnessBundle b;
    b.k = 2;
    b.m = {m[0], m[1], m[2], m[3]};
    for (std::uint64_t i = 1; i <= l2; ++i) b.indices.push_back(g_.at(np_[i - 1]));
    b.points = {x1_, piece.x2, piece.inner.x1, piece.inner.run->witness(*p)};
    b.deltas = {level_.delta, piece.inner.delta};
    b.lambda = beta_;
    b.eta = eta_outer_;
    return b;
  }

 private:
  struct Piece {
    PointRef x2;
    std::uint64_t k_v;
    AlphaOne inner;
    IndexView d;  // positions in g
  };

  // Stages up to S, so that n'_1..n'_{S+1} are known.
  void grow(std::uint64_t S) {
    for (std::uint64_t st = stages_.size() + 2; st <= S; ++st) {
      IndexView d = IndexView::after(m_sets_.back(), 1);
      std::vector<Piece> pieces;
      for (std::uint64_t r = 2; r <= st; ++r) {
        PointRef x2 = e1_->witness(np_[r - 1]);
        std::uint64_t k_v = pinning_copy(x2, r, st);
        IndexView domain = IndexView::composed(g_, [d](std::uint64_t q) { return d.at(q); });
        AlphaOne inner = alpha_one(*seq_, std::move(domain), x2, eta_, k_v, cap_);
        auto run = inner.run;
        IndexView next = IndexView::composed(d, [run](std::uint64_t q) { return run->position(q); });
        pieces.push_back({std::move(x2), k_v, std::move(inner), next});
        d = next;
      }
      stages_.push_back(std::move(pieces));
      m_sets_.push_back(d);
      np_.push_back(d.at(1));
    }
  }

  // Least K such that, on x2 and its copies >= K, b_i stays within eta*delta of f(x1)
  // summed over i < r and of f(x2) summed over r <= i <= S.
  std::uint64_t pinning_copy(const PointRef& x2, std::uint64_t r, std::uint64_t S) const {
    Complex f1 = seq_->limit_value(x1_), f2 = seq_->limit_value(x2);
    Rational budget = eta_ * level_.delta;
    std::vector<std::uint64_t> js;
    Rational near = 0, far = 0;
    for (std::uint64_t i = 1; i <= S; ++i) {
      std::uint64_t j = g_.at(np_[i - 1]);
      js.push_back(j);
      (i < r ? near : far) += deviation(seq_->eval(j, x2), i < r ? f1 : f2).hi;
    }
    std::uint64_t limit = *std::max_element(js.begin(), js.end()) + 1;
    if (const auto* ev = std::get_if<EventuallyLimit>(&seq_->generator())) {
      for (const CIFunction& h : ev->prefix) limit = std::max(limit, h.threshold() + 1);
    }
    limit = std::min(limit, cap_);
    for (std::uint64_t K = 1; K <= limit; ++K) {
      Rational a = near, b = far;
      for (std::uint64_t i = 1; i <= S; ++i) (i < r ? a : b) += seq_->neighborhood_deviation(js[i - 1], x2, K);
      if (a < budget && b < budget) return K;
    }
    throw SearchExhausted("no neighborhood of the level-set witness pins the first " + str(S) + " terms");
  }

  const FunctionSeq* seq_;
  Rational beta_, eta_outer_, eta_;
  std::uint64_t cap_;
  LevelSetWitness level_;
  PointRef x1_;
  std::shared_ptr<const ApproachRun> e1_;
  IndexView g_;
  std::vector<std::uint64_t> np_;              // n'_1, n'_2, ... as positions in g
  std::vector<IndexView> m_sets_;              // M_1, M_2, ...
  std::vector<std::vector<Piece>> stages_;     // stages_[S-2][r-2]
};

void require_m(const std::vector<std::uint64_t>& m, std::size_t alpha) {
  if (m.size() < 2 * alpha || m[0] != 1 || !increasing(m)) {
    throw PreconditionError("m must start at 1, increase strictly and have at least " + str(2 * alpha) + " entries");
  }
}

void verify(const FunctionSeq& seq, const WitnessBundle& b) {
  CheckReport rep = check_chain(seq, b);
  if (!rep.holds()) {
    std::string names;
    for (const std::string& n : rep.failed()) names += (names.empty() ? "" : ", ") + n;
    throw InternalError("constructed bundle fails its own check: " + (names.empty() ? "undecided" : names));
  }
}

}  // namespace

RunResult chain_run(const FunctionSeq& seq, std::size_t alpha, NodeId x, const Rational& eta,
                    const std::vector<std::uint64_t>& m, const RunOptions& options) {
  if (alpha != 1 && alpha != 2) throw PreconditionError("alpha must be 1 or 2");
  if (!(eta > 0 && eta < 1)) throw PreconditionError("eta must lie strictly between 0 and 1");
  const TreeSpace& s = seq.space();
  if (x >= s.size()) throw InputError("unknown node " + str(x));
  QFunction phi = re(seq.limit());
  PointRef xp = canonical_point(s, x);

  RunResult out;
  out.alpha_used = alpha;
  if (alpha == 2) {
    Rational v1 = stage(phi, OscKind::Positive, 1)[x];
    Rational v2 = stage(phi, OscKind::Positive, 2)[x];
    if (v2 <= 0) throw PreconditionError("v_2 vanishes at node " + str(x));
    if (v1 == v2) {
      if (!options.allow_fallback) throw PreconditionError("v_1 = v_2 at node " + str(x));
      out.alpha_used = 1;
      out.fell_back = true;
    }
  }
  require_m(m, out.alpha_used);
  if (out.alpha_used == 1) {
    AlphaOne a = alpha_one(seq, IndexView::identity(), xp, eta, 1, options.copy_cap);
    out.bundle = one_step_bundle(a, m, eta);
  } else {
    Rational beta = stage(phi, OscKind::Positive, 2)[x];
    StackedRun run(seq, xp, x, beta, eta, options.copy_cap);
    out.bundle = run.bundle(m);
  }
  verify(seq, out.bundle);
  return out;
}

DifferenceWitness reduce(const WitnessBundle& bundle, const Rational& eta) {
  DifferenceWitness w;
  w.indices = bundle.indices;
  w.m = bundle.m;
  w.k = bundle.k;
  w.t = bundle.t();
  w.lambda = bundle.lambda;
  w.eta = eta;
  return w;
}

ReductionResult difference_run(const FunctionSeq& seq, std::size_t alpha, NodeId x, const Rational& eta,
                               const std::vector<std::uint64_t>& m, const RunOptions& options) {
  if (!(eta > 0 && eta < 1)) throw PreconditionError("eta must lie strictly between 0 and 1");
  // eta/5 gives (1 - 3e)(1 - e) >= 1 - eta and 4e(1 + e) <= eta
  ReductionResult out{chain_run(seq, alpha, x, eta / 5, m, options), {}};
  out.difference = reduce(out.chain.bundle, eta);
  CheckReport rep = check_difference(seq, out.difference);
  if (!rep.holds()) throw InternalError("reduced witness fails the difference check");
  return out;
}

WitnessBundle restrict(const WitnessBundle& bundle, const std::vector<std::uint64_t>& keep) {
  if (!increasing(keep) || keep.empty() || keep.front() != 1 || keep.back() != bundle.indices.size()) {
    throw PreconditionError("kept positions must increase from 1 to the last index");
  }
  WitnessBundle out = bundle;
  out.indices.clear();
  for (std::uint64_t i : keep) out.indices.push_back(bundle.indices[i - 1]);
  for (std::uint64_t& mj : out.m) {
    auto it = std::lower_bound(keep.begin(), keep.end(), mj);
    if (it == keep.end() || *it != mj) throw PreconditionError("kept positions must contain every m_j");
    mj = static_cast<std::uint64_t>(it - keep.begin()) + 1;
  }
  return out;
}

}  // namespace oscal
