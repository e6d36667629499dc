#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gwhk/isolation.hpp"
#include "gwhk/rng.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

struct OceanEdge {
  VertexId to;  ///< tree id of the neighbouring ocean vertex (may equal the source)
  double weight;
};

/// Weighted graph on the ocean vertices of a finite tree.
///
/// w(x, y) = deg(x) * P_x[first ocean vertex after time 0 is y]. Frontier
/// half-edges of ocean vertices are kept as a separate weight, so that
/// vertex_weight(x) = sum_y w(x, y) + frontier_weight(x) = deg(x).
class WeightedOceanGraph {
 public:
  const std::vector<VertexId>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool contains(VertexId v) const { return v < local_.size() && local_[v] >= 0; }
  /// Position of `v` in vertices(); throws kUnknownVertex for island or unknown ids.
  std::uint32_t index(VertexId v) const;

  /// Sorted by neighbour id.
  std::span<const OceanEdge> edges(VertexId x) const { return adjacency_[index(x)]; }
  double weight(VertexId x, VertexId y) const;
  double frontier_weight(VertexId x) const { return frontier_[index(x)]; }
  double vertex_weight(VertexId x) const { return total_[index(x)]; }

  /// Number of vertices in the underlying tree.
  std::size_t tree_size() const { return local_.size(); }

 private:
  friend WeightedOceanGraph build_ocean_weights(const RootedTree&, const IslandDecomposition&);

  std::vector<VertexId> vertices_;
  std::vector<std::int32_t> local_;
  std::vector<std::vector<OceanEdge>> adjacency_;
  std::vector<double> frontier_;
  std::vector<double> total_;
};

/// Solves the absorbing chain of each island with a dense LU factorisation.
/// Throws kClippedIsland when an island vertex has frontier half-edges and
/// kInvalidArgument when the ocean is empty.
WeightedOceanGraph build_ocean_weights(const RootedTree& tree, const IslandDecomposition& decomp);

/// One step of the induced chain from ocean vertex x. nullopt means the step
/// left through a frontier half-edge.
std::optional<VertexId> induced_step(const WeightedOceanGraph& graph, VertexId x, PhiloxStream& rng);

struct HittingPair {
  double p_srw;
  double p_induced;
};

/// Probability of visiting y before absorption at the frontier, from x, for
/// the simple random walk on the tree and for the induced chain.
HittingPair hitting_equivalence(const RootedTree& tree, const IslandDecomposition& decomp,
                                const WeightedOceanGraph& graph, VertexId x, VertexId y);

struct EscapeBracket {
  double lower;        ///< P_x[hit the islands before the frontier or the guard]
  double upper;        ///< lower + P_x[frontier or guard first]
  double paper_bound;  ///< (18/q^2) (1 - q^2/9)^(n/2 - 1) sqrt(z J)
  std::uint32_t n;     ///< q-distance from x to the chosen islands
  std::uint32_t z;     ///< largest ocean degree
  std::size_t j;       ///< number of chosen islands
  bool within_bound() const { return upper <= paper_bound; }
};

/// Escape bracket for the union of the chosen islands (indices into
/// decomp.islands). Vertices deeper than depth_guard are treated like the
/// frontier.
EscapeBracket escape_probability_bracket(const RootedTree& tree, const IslandDecomposition& decomp, VertexId x,
                                         std::span<const std::size_t> islands, std::uint32_t depth_guard);

}  // namespace gwhk
