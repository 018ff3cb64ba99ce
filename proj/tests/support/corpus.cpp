#include "corpus.hpp"

#include <algorithm>
#include <numeric>

#include "oscal/error.hpp"

namespace oscal::testing {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

class TreeBuilder {
 public:
  TreeBuilder(Rng& rng, std::size_t budget) : rng_(rng), budget_(budget) {}

  // Subtree whose root has rank exactly r; needs r + 1 nodes at least.
  NodeId grow(std::size_t r) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.emplace_back();
    --budget_;
    if (r == 0) return id;
    NodeId first = grow(r - 1);
    nodes_[id].recurring.push_back(first);
    for (int extra = 0; extra < 4 && budget_ > 0 && coin(rng_, 0.6); ++extra) {
      bool recurring = coin(rng_, 0.5);
      std::size_t top = std::min(recurring ? r - 1 : r, budget_ - 1);
      NodeId child = grow(uniform(rng_, 0, top));
      if (recurring) {
        nodes_[id].recurring.push_back(child);
      } else {
        nodes_[id].prefix.push_back(child);
      }
    }
    // children in random order so the required pattern is not always first
    std::shuffle(nodes_[id].recurring.begin(), nodes_[id].recurring.end(), rng_);
    return id;
  }

  std::vector<SpaceNode> take() { return std::move(nodes_); }

 private:
  Rng& rng_;
  std::size_t budget_;
  std::vector<SpaceNode> nodes_;
};

}  // namespace

Rational random_rational(Rng& rng, int max_num, int max_den) {
  int n = std::uniform_int_distribution<int>(-max_num, max_num)(rng);
  int d = std::uniform_int_distribution<int>(1, max_den)(rng);
  Rational q(n, d);
  q.canonicalize();
  return q;
}

SpacePtr random_space(Rng& rng, std::size_t max_nodes, std::size_t max_rank) {
  // a lone point is too dull to sample often
  std::size_t budget = max_nodes < 2 ? max_nodes : uniform(rng, 2, max_nodes);
  std::size_t top = std::min(max_rank, budget - 1);
  std::size_t rank = uniform(rng, top == 0 ? 0 : 1, top);
  TreeBuilder builder(rng, budget);
  builder.grow(rank);
  std::vector<SpaceNode> nodes = builder.take();

  // relabel so that the root is not always node 0
  std::vector<NodeId> perm(nodes.size());
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  SpaceLayout layout;
  layout.root = perm[0];
  layout.nodes.resize(nodes.size());
  for (std::size_t old = 0; old < nodes.size(); ++old) {
    SpaceNode& out = layout.nodes[perm[old]];
    for (NodeId c : nodes[old].prefix) out.prefix.push_back(perm[c]);
    for (NodeId c : nodes[old].recurring) out.recurring.push_back(perm[c]);
  }
  return make_space(std::move(layout));
}

QFunction random_function(Rng& rng, const SpacePtr& space) {
  std::vector<Rational> values(space->size());
  for (auto& v : values) v = random_rational(rng);
  return QFunction(space, std::move(values));
}

QFunction random_complex_function(Rng& rng, const SpacePtr& space) {
  std::vector<Rational> re(space->size()), im(space->size());
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] = random_rational(rng);
    im[i] = random_rational(rng);
  }
  return QFunction(space, std::move(re), std::move(im));
}

QFunction random_lsc(Rng& rng, const SpacePtr& space) {
  std::vector<Rational> values(space->size());
  for (auto& v : values) v = abs_value(random_rational(rng));
  return lsc_envelope(QFunction(space, std::move(values)));
}

std::vector<QFunction> function_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<QFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_function(rng, random_space(rng)));
  return out;
}

std::vector<Vec> random_vectors(Rng& rng, std::size_t dim, std::size_t count) {
  std::vector<Vec> out(count, Vec(dim));
  for (auto& v : out) {
    for (auto& x : v) x = random_rational(rng, 4, 2);
  }
  return out;
}

PolyBasis random_basis(Rng& rng, NormKind norm, std::size_t dim) {
  for (;;) {
    try {
      return PolyBasis(PolySpace{dim, norm}, random_vectors(rng, dim, dim));
    } catch (const InputError&) {
      // dependent draw, try again
    }
  }
}

Blocking random_blocking(Rng& rng, std::size_t n) {
  Blocking b;
  for (std::size_t left = n; left > 0;) {
    std::size_t size = uniform(rng, 1, std::min<std::size_t>(3, left));
    Vec w(size);
    Rational total;
    for (auto& x : w) {
      x = static_cast<long>(uniform(rng, 0, 4));
      total += x;
    }
    if (total == 0) {
      w[0] = 1;
      total = 1;
    }
    for (auto& x : w) x /= total;
    b.sizes.push_back(size);
    b.weights.push_back(std::move(w));
    left -= size;
  }
  return b;
}

SpacePtr k1_space() { return make_space({0, {{{}, {1}}, {{}, {}}}}); }
SpacePtr k2_space() { return make_space({0, {{{}, {1}}, {{}, {2}}, {{}, {}}}}); }
SpacePtr k3_space() { return make_space({0, {{{}, {1}}, {{}, {2}}, {{}, {3}}, {{}, {}}}}); }

QFunction f1() { return QFunction(k1_space(), {1, 0}); }
QFunction f2() { return QFunction(k2_space(), {0, 1, 0}); }
QFunction phi3() { return QFunction(k3_space(), {0, 1, 0, 1}); }

namespace {
Complex c(int v) { return Complex(Rational(v)); }
}  // namespace

FunctionSeq k1_sequence() {
  return FunctionSeq(QFunction(k1_space(), {-1, 0}), MovingStep{{Designation{0, 0, {{1, c(-1)}}}}});
}

FunctionSeq k2_sequence() {
  return FunctionSeq(QFunction(k2_space(), {0, -1, 0}),
                     MovingStep{{Designation{0, 0, {{1, c(0)}, {2, c(0)}}}, Designation{1, 0, {{2, c(-1)}}}}});
}

FunctionSeq k3_sequence() {
  return FunctionSeq(QFunction(k3_space(), {0, 1, 0, 1}),
                     MovingStep{{Designation{0, 0, {{1, c(0)}, {2, c(0)}, {3, c(0)}}},
                                 Designation{1, 0, {{2, c(1)}, {3, c(1)}}}, Designation{2, 0, {{3, c(0)}}}}});
}

}  // namespace oscal::testing
