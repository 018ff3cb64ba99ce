#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oscal {

using NodeId = std::uint32_t;

struct SpaceNode {
  std::vector<NodeId> prefix;     // children appearing once
  std::vector<NodeId> recurring;  // pattern roots, each repeated as copies 1, 2, 3, ...

  friend bool operator==(const SpaceNode&, const SpaceNode&) = default;
};

// Raw description; may violate the tree invariants (see validate).
struct SpaceLayout {
  NodeId root = 0;
  std::vector<SpaceNode> nodes;  // node id = index

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;
};

struct Violation {
  std::optional<NodeId> node;
  std::string rule;
};

std::vector<Violation> validate(const SpaceLayout& layout);

// A countable compact space presented as a finite tree with recurring patterns.
class TreeSpace {
 public:
  // Throws InputError listing every violation.
  explicit TreeSpace(SpaceLayout layout);

  const SpaceLayout& layout() const { return layout_; }
  std::size_t size() const { return layout_.nodes.size(); }
  NodeId root() const { return layout_.root; }
  const SpaceNode& node(NodeId id) const;

  bool is_leaf(NodeId id) const { return node(id).recurring.empty(); }
  bool is_limit(NodeId id) const { return !is_leaf(id); }

  std::size_t rank(NodeId id) const;
  // Largest node rank anywhere in the tree.
  std::size_t max_rank() const;

  // All nodes of the recurring-pattern subtrees of id, ascending; empty for leaves.
  std::span<const NodeId> acc(NodeId id) const;
  // Node id and all its descendants, preorder.
  std::span<const NodeId> subtree(NodeId id) const;
  std::optional<NodeId> parent(NodeId id) const;
  bool in_subtree(NodeId ancestor, NodeId id) const;

  friend bool operator==(const TreeSpace& a, const TreeSpace& b) { return a.layout_ == b.layout_; }

 private:
  void check(NodeId id) const;

  SpaceLayout layout_;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::size_t> rank_;
  std::vector<std::size_t> acc_begin_, acc_end_;
  std::vector<NodeId> acc_pool_;
  std::vector<std::size_t> sub_begin_, sub_end_;
  std::vector<NodeId> preorder_;
};

using SpacePtr = std::shared_ptr<const TreeSpace>;

SpacePtr make_space(SpaceLayout layout);

// Acc(id); throws PreconditionError on a leaf.
std::vector<NodeId> acc_set(const TreeSpace& space, NodeId id);

struct Step {
  enum class Kind { Prefix, Recurring };
  Kind kind = Kind::Prefix;
  std::size_t index = 0;   // position in prefix or recurring list
  std::uint64_t copy = 0;  // recurring copy, >= 1

  static Step prefix(std::size_t i) { return {Kind::Prefix, i, 0}; }
  static Step recurring(std::size_t i, std::uint64_t k) { return {Kind::Recurring, i, k}; }
  friend bool operator==(const Step&, const Step&) = default;
};

// Address of a realized point: a path of steps from the root.
struct PointRef {
  std::vector<Step> path;

  PointRef extended(const Step& s) const {
    PointRef p = *this;
    p.path.push_back(s);
    return p;
  }
  friend bool operator==(const PointRef&, const PointRef&) = default;
};

// Node class reached by the path; throws InputError on an invalid path.
NodeId resolve(const TreeSpace& space, const PointRef& point);

// Path from `from` down to a descendant `to`, every recurring step using copy k.
std::vector<Step> descend(const TreeSpace& space, NodeId from, NodeId to, std::uint64_t k);

// Canonical realized point of a node: recurring steps use copy 1.
PointRef canonical_point(const TreeSpace& space, NodeId id);

std::string to_string(const PointRef& point);

struct PathWalk {
  NodeId node;
  // (node the step leaves, step) for every recurring step, in path order
  std::vector<std::pair<NodeId, Step>> recurring;
};

// Follows the path; throws InputError on an invalid step.
PathWalk walk(const TreeSpace& space, const PointRef& point);

struct UnrollEdge {
  enum class Kind { Root, Prefix, ExplicitCopy, Tail };
  Kind kind = Kind::Root;
  std::size_t index = 0;    // prefix position, or pattern index for ExplicitCopy and Tail
  std::uint64_t copy = 0;   // 1..k for ExplicitCopy
};

struct Unrolled {
  SpacePtr space;
  std::vector<NodeId> source;     // new node -> source node
  std::vector<UnrollEdge> edge;   // how each new node hangs off its parent
};

constexpr std::size_t kDefaultNodeCap = 10000;

// Materializes copies 1..k of every recurring pattern as prefix children.
Unrolled unroll(const TreeSpace& space, std::size_t k, std::size_t node_cap = kDefaultNodeCap);

// A point of `space` realizing each unrolled node; tail copies are represented by copy k + 1.
std::vector<PointRef> representative_points(const Unrolled& unrolled, std::size_t k);

}  // namespace oscal
