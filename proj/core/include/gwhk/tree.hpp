#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gwhk/offspring.hpp"

namespace gwhk {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Finite rooted tree with dense ids (root 0, parent id < child id).
///
/// A vertex may carry `frontier_extra` half-edges: children that exist in the
/// underlying (possibly infinite) tree but were not materialised. They count
/// towards the degree and towards the edge boundary of every vertex set that
/// contains the vertex, so boundaries agree with the untruncated tree.
class RootedTree {
 public:
  RootedTree() = default;

  /// Builds from a parent array (parents[0] must be kNoVertex, parents[v] < v
  /// otherwise) and per-vertex frontier half-edge counts.
  static RootedTree from_parents(std::span<const VertexId> parents, std::span<const std::uint32_t> frontier);

  std::size_t size() const { return parent_.size(); }
  bool empty() const { return parent_.empty(); }

  VertexId parent(VertexId v) const { return parent_[v]; }
  std::span<const VertexId> children(VertexId v) const {
    return {child_list_.data() + child_offset_[v], child_offset_[v + 1] - child_offset_[v]};
  }
  std::uint32_t depth(VertexId v) const { return depth_[v]; }
  std::uint32_t frontier_extra(VertexId v) const { return frontier_[v]; }

  /// Number of children in the underlying tree (materialised + frontier).
  std::uint32_t offspring(VertexId v) const {
    return static_cast<std::uint32_t>(children(v).size()) + frontier_[v];
  }
  /// Effective degree: parent edge + materialised children + frontier half-edges.
  std::uint32_t degree(VertexId v) const { return (v == 0 ? 0u : 1u) + offspring(v); }

  /// Calls f(u) for the parent (if any) and then each materialised child.
  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    if (v != 0) f(parent_[v]);
    for (VertexId c : children(v)) f(c);
  }

  std::uint32_t max_depth() const { return max_depth_; }

  /// Depth below which the tree is fully known: the smallest depth of a vertex
  /// with frontier half-edges, or nullopt if the tree is complete.
  std::optional<std::uint32_t> depth_cap() const { return depth_cap_; }

  /// True when every frontier vertex sits at max_depth() (the shape produced by
  /// depth-capped sampling).
  bool frontier_at_cap() const;

  std::span<const VertexId> parents() const { return parent_; }
  std::span<const std::uint32_t> frontier() const { return frontier_; }

  void check_vertex(VertexId v) const;

  friend bool operator==(const RootedTree& a, const RootedTree& b) {
    return a.parent_ == b.parent_ && a.frontier_ == b.frontier_;
  }

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> frontier_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> child_offset_;
  std::vector<VertexId> child_list_;
  std::uint32_t max_depth_ = 0;
  std::optional<std::uint32_t> depth_cap_;
};

/// Incremental construction helper; ids are assigned in insertion order.
class TreeBuilder {
 public:
  TreeBuilder() { add_root(); }
  explicit TreeBuilder(std::uint32_t root_frontier) { add_root(root_frontier); }

  VertexId add_child(VertexId parent, std::uint32_t frontier = 0);
  void set_frontier(VertexId v, std::uint32_t frontier) { frontier_.at(v) = frontier; }
  std::size_t size() const { return parents_.size(); }
  RootedTree build() const { return RootedTree::from_parents(parents_, frontier_); }

 private:
  void add_root(std::uint32_t frontier = 0) {
    parents_.push_back(kNoVertex);
    frontier_.push_back(frontier);
  }

  std::vector<VertexId> parents_;
  std::vector<std::uint32_t> frontier_;
};

/// Complete `branching`-ary tree of the given depth; leaves at `depth` carry
/// `branching` frontier half-edges.
RootedTree regular_tree(std::uint32_t branching, std::uint32_t depth);

/// Subtree of depths <= t. Vertices at depth t keep their full offspring count
/// as frontier half-edges. Throws kDepthExceeded when t > depth_cap().
RootedTree truncate(const RootedTree& tree, std::uint32_t t);

/// "gwtree v1" text: header line, then "<id> <parent|-1> <frontier_extra>" per vertex.
std::string serialize_tree(const RootedTree& tree);
/// Inverse of serialize_tree. Lines starting with '#' are ignored.
RootedTree parse_tree(std::string_view text);

// ---------------------------------------------------------------------------
// Galton-Watson sampling

struct TreeSampleSpec {
  OffspringDistribution dist;
  std::uint32_t depth_cap = 0;
  bool survival_required = false;
  std::uint64_t master_seed = 0;
  std::uint32_t sample_index = 0;
};

inline constexpr std::uint64_t kRejectionBudget = 10'000'000;

/// Offspring count of the vertex at `address` in attempt `attempt` of sample
/// `sample_index`. Every sampler below is built on this one keyed draw.
std::uint32_t keyed_offspring(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t sample_index,
                              std::uint32_t attempt, std::uint64_t address);

/// Whether the implicit tree of the given attempt reaches depth `depth`.
/// Depth-first with early exit; never materialises the tree.
bool survives_to_depth(const TreeSampleSpec& spec, std::uint32_t attempt, std::uint32_t depth);

/// Index of the first attempt whose tree reaches spec.depth_cap (0 when
/// survival is not required). Throws kRejectionBudgetExhausted.
std::uint32_t first_surviving_attempt(const TreeSampleSpec& spec);

/// Materialises the sampled tree to spec.depth_cap in breadth-first order.
/// A pure function of (master_seed, sample_index).
RootedTree sample_tree(const TreeSampleSpec& spec);

/// Materialises one given attempt (no rejection).
RootedTree sample_attempt(const TreeSampleSpec& spec, std::uint32_t attempt);

/// Infinite Galton-Watson tree generated on demand, identical (on every
/// materialised vertex) to sample_attempt() with the same key.
class LazyTree {
 public:
  LazyTree(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t sample_index, std::uint32_t attempt);

  static constexpr VertexId root() { return 0; }

  std::uint32_t degree(VertexId v) {
    expand(v);
    return (v == 0 ? 0u : 1u) + nodes_[v].num_children;
  }

  /// Neighbour `slot` of v in [0, degree(v)); for non-root v slot 0 is the parent.
  VertexId neighbor(VertexId v, std::uint32_t slot) {
    expand(v);
    const Node& n = nodes_[v];
    if (v != 0) {
      if (slot == 0) return n.parent;
      --slot;
    }
    return n.first_child + slot;
  }

  std::uint32_t depth(VertexId v) const { return nodes_[v].depth; }
  std::size_t materialised() const { return nodes_.size(); }

 private:
  struct Node {
    std::uint64_t address;
    VertexId parent;
    VertexId first_child;
    std::uint32_t num_children;
    std::uint32_t depth;
  };
  static constexpr VertexId kUnexpanded = kNoVertex;

  void expand(VertexId v) {
    if (nodes_[v].first_child == kUnexpanded) expand_slow(v);
  }
  void expand_slow(VertexId v);

  const OffspringDistribution* dist_;
  std::uint64_t seed_;
  std::uint32_t sample_index_;
  std::uint32_t attempt_;
  std::vector<Node> nodes_;
};

}  // namespace gwhk
