#include "oscal/sequence.hpp"

#include <algorithm>
#include <string>

#include "oscal/error.hpp"

namespace oscal {

namespace {

void validate_table(const CopyTable& t, NodeId id) {
  std::uint64_t prev = 0;
  for (const auto& [k, v] : t.upto) {
    if (k <= prev) {
      throw InputError("copy table of node " + std::to_string(id) + " needs strictly increasing keys >= 1");
    }
    prev = k;
  }
}

Interval max_of(const Interval& a, const Interval& b) { return {oscal::max_of(a.lo, b.lo), oscal::max_of(a.hi, b.hi)}; }

QFunction from_values(const SpacePtr& space, const std::vector<Complex>& values) {
  std::vector<Rational> re(values.size()), im(values.size());
  bool real = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].re;
    im[i] = values[i].im;
    real = real && values[i].is_real();
  }
  if (real) return QFunction(space, std::move(re));
  return QFunction(space, std::move(re), std::move(im));
}

// Whether y is reached from the pattern root below `top` by prefix steps only.
bool prefix_only_below(const TreeSpace& s, NodeId top, NodeId y) {
  NodeId cur = y;
  for (;;) {
    auto p = s.parent(cur);
    if (!p) return false;
    if (*p == top) return true;
    const auto& rec = s.node(*p).recurring;
    if (std::find(rec.begin(), rec.end(), cur) != rec.end()) return false;
    cur = *p;
  }
}

}  // namespace

Complex CopyTable::at(std::optional<std::uint64_t> copy) const {
  if (copy) {
    for (const auto& [k, v] : upto) {
      if (*copy <= k) return v;
    }
  }
  return tail;
}

CIFunction::CIFunction(SpacePtr space, std::vector<CopyTable> tables) : space_(std::move(space)), tables_(std::move(tables)) {
  if (!space_) throw InputError("function without a space");
  if (tables_.size() != space_->size()) {
    throw InputError("copy-indexed function has " + std::to_string(tables_.size()) + " tables for " +
                     std::to_string(space_->size()) + " nodes");
  }
  for (NodeId id = 0; id < tables_.size(); ++id) validate_table(tables_[id], id);
}

CIFunction CIFunction::from(const QFunction& f) {
  std::vector<CopyTable> t(f.size());
  for (NodeId id = 0; id < f.size(); ++id) t[id].tail = f.at(id);
  return CIFunction(f.space_ptr(), std::move(t));
}

std::uint64_t CIFunction::threshold() const {
  std::uint64_t t = 0;
  for (const CopyTable& c : tables_) t = std::max(t, c.threshold());
  return t;
}

bool CIFunction::is_real() const {
  for (const CopyTable& c : tables_) {
    if (!c.tail.is_real()) return false;
    for (const auto& e : c.upto) {
      if (!e.second.is_real()) return false;
    }
  }
  return true;
}

Complex CIFunction::eval(const PointRef& p) const {
  PathWalk w = walk(*space_, p);
  std::optional<std::uint64_t> copy;
  if (!w.recurring.empty()) copy = w.recurring.back().second.copy;
  return tables_[w.node].at(copy);
}

QFunction CIFunction::materialize(const Unrolled& unrolled, std::size_t k) const {
  std::vector<PointRef> reps = representative_points(unrolled, k);
  std::vector<Complex> values;
  values.reserve(reps.size());
  for (const PointRef& p : reps) values.push_back(eval(p));
  return from_values(unrolled.space, values);
}

bool CIFunction::is_continuous() const {
  std::size_t k = threshold();
  Unrolled un = unroll(*space_, k);
  return oscal::is_continuous(materialize(un, k));
}

bool operator==(const CIFunction& a, const CIFunction& b) {
  return (a.space_ == b.space_ || *a.space_ == *b.space_) && a.tables_ == b.tables_;
}

FunctionSeq::FunctionSeq(QFunction limit, Generator generator) : limit_(std::move(limit)), generator_(std::move(generator)) {
  const TreeSpace& s = limit_.space();
  if (auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    for (std::size_t j = 0; j < ev->prefix.size(); ++j) {
      if (!(ev->prefix[j].space() == s)) {
        throw InputError("prefix function " + std::to_string(j + 1) + " lives on a different space");
      }
    }
    return;
  }
  const auto& ms = std::get<MovingStep>(generator_);
  for (std::size_t a = 0; a < ms.designations.size(); ++a) {
    const Designation& d = ms.designations[a];
    if (d.node >= s.size()) throw InputError("designation names unknown node " + std::to_string(d.node));
    const auto& rec = s.node(d.node).recurring;
    if (d.pattern >= rec.size()) {
      throw InputError("node " + std::to_string(d.node) + " has no pattern " + std::to_string(d.pattern));
    }
    for (const auto& [y, v] : d.alt) {
      if (y >= s.size() || !s.in_subtree(rec[d.pattern], y)) {
        throw InputError("alt value for node " + std::to_string(y) + " lies outside the designated pattern");
      }
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (ms.designations[b].node == d.node && ms.designations[b].pattern == d.pattern) {
        throw InputError("pattern " + std::to_string(d.pattern) + " of node " + std::to_string(d.node) +
                         " is designated twice");
      }
    }
  }
}

const Designation* FunctionSeq::designation(NodeId node, std::size_t pattern) const {
  const auto* ms = std::get_if<MovingStep>(&generator_);
  if (!ms) return nullptr;
  for (const Designation& d : ms->designations) {
    if (d.node == node && d.pattern == pattern) return &d;
  }
  return nullptr;
}

namespace {

Complex alt_value(const Designation& d, const QFunction& limit, NodeId y) {
  auto it = d.alt.find(y);
  return it == d.alt.end() ? limit.at(y) : it->second;
}

}  // namespace

Complex FunctionSeq::limit_value(const PointRef& x) const { return limit_.at(resolve(space(), x)); }

Complex FunctionSeq::eval(std::uint64_t j, const PointRef& x) const {
  if (j < 1) throw InputError("sequence indices start at 1");
  if (const auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    if (j <= ev->prefix.size()) return ev->prefix[j - 1].eval(x);
    return limit_value(x);
  }
  PathWalk w = walk(space(), x);
  for (const auto& [at, step] : w.recurring) {
    const Designation* d = designation(at, step.index);
    if (d && step.copy >= j) return alt_value(*d, limit_, w.node);
  }
  return limit_.at(w.node);
}

Interval FunctionSeq::tail_bound(const PointRef& x, std::uint64_t m) const {
  if (m < 1) m = 1;
  Interval sum = Interval::point(0);
  if (const auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    Complex fx = limit_value(x);
    for (std::uint64_t j = m; j <= ev->prefix.size(); ++j) sum = sum + modulus(ev->prefix[j - 1].eval(x) - fx);
    return sum;
  }
  PathWalk w = walk(space(), x);
  Complex fx = limit_.at(w.node);
  // j in (max of earlier designated copies, this copy] sees this designation first
  std::uint64_t covered = 0;
  for (const auto& [at, step] : w.recurring) {
    const Designation* d = designation(at, step.index);
    if (!d) continue;
    std::uint64_t lo = std::max(covered, m - 1);
    if (step.copy > lo) {
      Interval gap = modulus(alt_value(*d, limit_, w.node) - fx);
      sum = sum + gap.scaled(Rational(static_cast<unsigned long>(step.copy - lo)));
    }
    covered = std::max(covered, step.copy);
  }
  return sum;
}

Rational FunctionSeq::neighborhood_deviation(std::uint64_t j, const PointRef& z, std::uint64_t min_copy) const {
  const TreeSpace& s = space();
  Complex fz = eval(j, z);
  PathWalk w = walk(s, z);
  Rational dev = 0;
  auto consider = [&](const Complex& v) { dev = oscal::max_of(dev, modulus(v - fz).hi); };

  if (const auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    for (NodeId y : s.acc(w.node)) {
      if (j > ev->prefix.size()) {
        consider(limit_.at(y));
        continue;
      }
      const CopyTable& t = ev->prefix[j - 1].tables()[y];
      bool first_step_only = prefix_only_below(s, w.node, y);
      consider(t.tail);
      for (const auto& [k, v] : t.upto) {
        if (!first_step_only || k >= min_copy) consider(v);
      }
    }
    return dev;
  }

  const Designation* active = nullptr;
  for (const auto& [at, step] : w.recurring) {
    const Designation* d = designation(at, step.index);
    if (d && step.copy >= j) {
      active = d;
      break;
    }
  }
  const auto& ms = std::get<MovingStep>(generator_);
  const auto& patterns = s.node(w.node).recurring;
  for (NodeId y : s.acc(w.node)) {
    if (active) {
      consider(alt_value(*active, limit_, y));
      continue;
    }
    std::size_t i = 0;
    while (!s.in_subtree(patterns[i], y)) ++i;
    const Designation* first = designation(w.node, i);
    if (first && min_copy >= j) {
      consider(alt_value(*first, limit_, y));
      continue;
    }
    consider(limit_.at(y));
    if (first) consider(alt_value(*first, limit_, y));
    for (const Designation& d : ms.designations) {
      if (!s.in_subtree(patterns[i], d.node)) continue;
      if (s.in_subtree(s.node(d.node).recurring[d.pattern], y)) consider(alt_value(d, limit_, y));
    }
  }
  return dev;
}

std::pair<Unrolled, QFunction> FunctionSeq::materialize(std::uint64_t j) const {
  if (j < 1) throw InputError("sequence indices start at 1");
  std::size_t k = 0;
  if (const auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    if (j <= ev->prefix.size()) k = ev->prefix[j - 1].threshold();
  } else {
    k = j - 1;
  }
  Unrolled un = unroll(space(), k);
  std::vector<PointRef> reps = representative_points(un, k);
  std::vector<Complex> values;
  values.reserve(reps.size());
  for (const PointRef& p : reps) values.push_back(eval(j, p));
  QFunction f = from_values(un.space, values);
  return {std::move(un), std::move(f)};
}

bool FunctionSeq::is_continuous(std::uint64_t j) const { return oscal::is_continuous(materialize(j).second); }

Interval FunctionSeq::uniform_bound() const {
  Interval best = Interval::point(0);
  for (NodeId y = 0; y < limit_.size(); ++y) best = max_of(best, modulus(limit_.at(y)));
  if (const auto* ev = std::get_if<EventuallyLimit>(&generator_)) {
    for (const CIFunction& g : ev->prefix) {
      for (const CopyTable& t : g.tables()) {
        best = max_of(best, modulus(t.tail));
        for (const auto& e : t.upto) best = max_of(best, modulus(e.second));
      }
    }
  } else {
    for (const Designation& d : std::get<MovingStep>(generator_).designations) {
      for (const auto& [y, v] : d.alt) best = max_of(best, modulus(v));
    }
  }
  return best;
}

}  // namespace oscal
