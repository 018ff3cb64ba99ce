#include "oscal/space.hpp"

#include <algorithm>
#include <functional>

#include "oscal/error.hpp"

namespace oscal {

std::vector<Violation> validate(const SpaceLayout& layout) {
  std::vector<Violation> out;
  const std::size_t n = layout.nodes.size();
  if (n == 0) {
    out.push_back({std::nullopt, "space has no nodes"});
    return out;
  }
  if (layout.root >= n) {
    out.push_back({layout.root, "root id out of range"});
    return out;
  }
  std::vector<std::size_t> parents(n, 0);
  for (NodeId id = 0; id < n; ++id) {
    const SpaceNode& node = layout.nodes[id];
    auto visit = [&](const std::vector<NodeId>& list) {
      for (NodeId c : list) {
        if (c >= n) {
          out.push_back({id, "child id " + std::to_string(c) + " does not exist"});
        } else if (c == id) {
          out.push_back({id, "node lists itself as a child"});
        } else {
          ++parents[c];
        }
      }
    };
    visit(node.prefix);
    visit(node.recurring);
    if (node.recurring.empty() && !node.prefix.empty()) {
      out.push_back({id, "limit node lacks recurring pattern"});
    }
  }
  for (NodeId id = 0; id < n; ++id) {
    if (id == layout.root) {
      if (parents[id] != 0) out.push_back({id, "root has a parent"});
    } else if (parents[id] != 1) {
      out.push_back({id, "node has " + std::to_string(parents[id]) + " parents, expected 1"});
    }
  }
  if (!out.empty()) return out;

  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{layout.root};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (seen[id]) continue;
    seen[id] = true;
    for (NodeId c : layout.nodes[id].prefix) stack.push_back(c);
    for (NodeId c : layout.nodes[id].recurring) stack.push_back(c);
  }
  for (NodeId id = 0; id < n; ++id) {
    if (!seen[id]) out.push_back({id, "node unreachable from root (cycle or detached)"});
  }
  return out;
}

TreeSpace::TreeSpace(SpaceLayout layout) : layout_(std::move(layout)) {
  auto violations = validate(layout_);
  if (!violations.empty()) {
    std::string msg = "invalid space:";
    for (const auto& v : violations) {
      msg += v.node ? " node " + std::to_string(*v.node) + ": " : " ";
      msg += v.rule + ";";
    }
    throw InputError(msg);
  }
  const std::size_t n = size();
  parent_.assign(n, std::nullopt);
  sub_begin_.assign(n, 0);
  sub_end_.assign(n, 0);
  preorder_.reserve(n);

  std::function<void(NodeId)> walk = [&](NodeId id) {
    sub_begin_[id] = preorder_.size();
    preorder_.push_back(id);
    for (NodeId c : layout_.nodes[id].prefix) {
      parent_[c] = id;
      walk(c);
    }
    for (NodeId c : layout_.nodes[id].recurring) {
      parent_[c] = id;
      walk(c);
    }
    sub_end_[id] = preorder_.size();
  };
  walk(layout_.root);

  acc_begin_.assign(n, 0);
  acc_end_.assign(n, 0);
  for (NodeId id = 0; id < n; ++id) {
    acc_begin_[id] = acc_pool_.size();
    for (NodeId q : layout_.nodes[id].recurring) {
      auto sub = subtree(q);
      acc_pool_.insert(acc_pool_.end(), sub.begin(), sub.end());
    }
    std::sort(acc_pool_.begin() + static_cast<std::ptrdiff_t>(acc_begin_[id]), acc_pool_.end());
    acc_end_[id] = acc_pool_.size();
  }

  rank_.assign(n, 0);
  for (auto it = preorder_.rbegin(); it != preorder_.rend(); ++it) {
    NodeId id = *it;
    if (is_leaf(id)) continue;
    std::size_t r = 0;
    for (NodeId y : acc(id)) r = std::max(r, rank_[y]);
    rank_[id] = r + 1;
  }
}

void TreeSpace::check(NodeId id) const {
  if (id >= size()) throw InputError("unknown node id " + std::to_string(id));
}

const SpaceNode& TreeSpace::node(NodeId id) const {
  check(id);
  return layout_.nodes[id];
}

std::size_t TreeSpace::rank(NodeId id) const {
  check(id);
  return rank_[id];
}

std::size_t TreeSpace::max_rank() const { return *std::max_element(rank_.begin(), rank_.end()); }

std::span<const NodeId> TreeSpace::acc(NodeId id) const {
  check(id);
  return {acc_pool_.data() + acc_begin_[id], acc_end_[id] - acc_begin_[id]};
}

std::span<const NodeId> TreeSpace::subtree(NodeId id) const {
  check(id);
  return {preorder_.data() + sub_begin_[id], sub_end_[id] - sub_begin_[id]};
}

std::optional<NodeId> TreeSpace::parent(NodeId id) const {
  check(id);
  return parent_[id];
}

bool TreeSpace::in_subtree(NodeId ancestor, NodeId id) const {
  check(ancestor);
  check(id);
  return sub_begin_[id] >= sub_begin_[ancestor] && sub_begin_[id] < sub_end_[ancestor];
}

SpacePtr make_space(SpaceLayout layout) { return std::make_shared<const TreeSpace>(std::move(layout)); }

std::vector<NodeId> acc_set(const TreeSpace& space, NodeId id) {
  if (space.is_leaf(id)) {
    throw PreconditionError("accumulation set requested for leaf " + std::to_string(id));
  }
  auto a = space.acc(id);
  return {a.begin(), a.end()};
}

PathWalk walk(const TreeSpace& space, const PointRef& point) {
  PathWalk w{space.root(), {}};
  for (const Step& s : point.path) {
    const SpaceNode& node = space.node(w.node);
    if (s.kind == Step::Kind::Prefix) {
      if (s.index >= node.prefix.size()) {
        throw InputError("point " + to_string(point) + ": node " + std::to_string(w.node) + " has no prefix child " +
                         std::to_string(s.index));
      }
      w.node = node.prefix[s.index];
    } else {
      if (s.index >= node.recurring.size()) {
        throw InputError("point " + to_string(point) + ": node " + std::to_string(w.node) + " has no pattern " +
                         std::to_string(s.index));
      }
      if (s.copy < 1) throw InputError("point " + to_string(point) + ": copy index must be >= 1");
      w.recurring.emplace_back(w.node, s);
      w.node = node.recurring[s.index];
    }
  }
  return w;
}

NodeId resolve(const TreeSpace& space, const PointRef& point) { return walk(space, point).node; }

std::vector<Step> descend(const TreeSpace& space, NodeId from, NodeId to, std::uint64_t k) {
  if (!space.in_subtree(from, to)) {
    throw InputError("node " + std::to_string(to) + " is not below node " + std::to_string(from));
  }
  std::vector<Step> rev;
  for (NodeId at = to; at != from;) {
    NodeId up = *space.parent(at);
    const SpaceNode& p = space.node(up);
    auto pi = std::find(p.prefix.begin(), p.prefix.end(), at);
    if (pi != p.prefix.end()) {
      rev.push_back(Step::prefix(static_cast<std::size_t>(pi - p.prefix.begin())));
    } else {
      auto ri = std::find(p.recurring.begin(), p.recurring.end(), at);
      rev.push_back(Step::recurring(static_cast<std::size_t>(ri - p.recurring.begin()), k));
    }
    at = up;
  }
  return {rev.rbegin(), rev.rend()};
}

PointRef canonical_point(const TreeSpace& space, NodeId id) { return {descend(space, space.root(), id, 1)}; }

std::string to_string(const PointRef& point) {
  if (point.path.empty()) return "root";
  std::string out;
  for (const Step& s : point.path) {
    if (!out.empty()) out += '/';
    if (s.kind == Step::Kind::Prefix) {
      out += "p" + std::to_string(s.index);
    } else {
      out += "r" + std::to_string(s.index) + "@" + std::to_string(s.copy);
    }
  }
  return out;
}

Unrolled unroll(const TreeSpace& space, std::size_t k, std::size_t node_cap) {
  SpaceLayout out;
  Unrolled result;
  auto allocate = [&](NodeId src, UnrollEdge edge) {
    if (out.nodes.size() >= node_cap) {
      throw ResourceCapError("unroll exceeds node cap of " + std::to_string(node_cap));
    }
    out.nodes.emplace_back();
    result.source.push_back(src);
    result.edge.push_back(edge);
    return static_cast<NodeId>(out.nodes.size() - 1);
  };
  std::function<NodeId(NodeId, UnrollEdge)> clone = [&](NodeId src, UnrollEdge edge) {
    NodeId id = allocate(src, edge);
    const SpaceNode& node = space.node(src);
    for (std::size_t i = 0; i < node.prefix.size(); ++i) {
      NodeId child = clone(node.prefix[i], {UnrollEdge::Kind::Prefix, i, 0});
      out.nodes[id].prefix.push_back(child);
    }
    for (std::size_t i = 0; i < node.recurring.size(); ++i) {
      for (std::uint64_t copy = 1; copy <= k; ++copy) {
        NodeId child = clone(node.recurring[i], {UnrollEdge::Kind::ExplicitCopy, i, copy});
        out.nodes[id].prefix.push_back(child);
      }
    }
    for (std::size_t i = 0; i < node.recurring.size(); ++i) {
      NodeId child = clone(node.recurring[i], {UnrollEdge::Kind::Tail, i, 0});
      out.nodes[id].recurring.push_back(child);
    }
    return id;
  };
  out.root = clone(space.root(), {UnrollEdge::Kind::Root, 0, 0});
  result.space = make_space(std::move(out));
  return result;
}

std::vector<PointRef> representative_points(const Unrolled& unrolled, std::size_t k) {
  const TreeSpace& u = *unrolled.space;
  std::vector<PointRef> out(u.size());
  // children are allocated after their parents
  for (NodeId id = 0; id < u.size(); ++id) {
    auto parent = u.parent(id);
    if (!parent) continue;
    const UnrollEdge& e = unrolled.edge[id];
    switch (e.kind) {
      case UnrollEdge::Kind::Root: break;
      case UnrollEdge::Kind::Prefix: out[id] = out[*parent].extended(Step::prefix(e.index)); break;
      case UnrollEdge::Kind::ExplicitCopy: out[id] = out[*parent].extended(Step::recurring(e.index, e.copy)); break;
      case UnrollEdge::Kind::Tail: out[id] = out[*parent].extended(Step::recurring(e.index, k + 1)); break;
    }
  }
  return out;
}

}  // namespace oscal
