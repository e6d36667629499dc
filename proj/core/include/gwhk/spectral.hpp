#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwhk/isolation.hpp"
#include "gwhk/ocean_chain.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

/// One row of a return-probability series. `s` is the walk time.
struct ReturnEntry {
  std::uint32_t s;
  double value;
  double std_error;  ///< 0 for exact values
  std::uint64_t n;
};

struct ReturnSeries {
  std::vector<ReturnEntry> entries;

  /// Even walk times s = 2t, reindexed by t (paper convention R_t).
  std::vector<ReturnEntry> even_entries() const;
};

inline constexpr std::uint64_t kIsoperimetricBudget = 2'000'000;

struct IsoperimetricResult {
  double ratio;
  std::vector<VertexId> argmin;
  std::uint64_t sets_explored;
};

/// min |dS|_w / |S|_w over connected S (positive-weight edges) with
/// |S| <= max_size. Frontier weight counts towards the boundary, self-loops do
/// not. Throws kBudgetExceeded after kIsoperimetricBudget sets.
IsoperimetricResult isoperimetric_bruteforce(const WeightedOceanGraph& graph, std::size_t max_size);

struct OperatorNorm {
  double norm;
  double rayleigh;  ///< last Rayleigh quotient of the squared operator
  std::uint32_t iterations;
  bool degenerate;  ///< norm within 1e-12 of 1
};

/// Power iteration for the norm of D^(-1/2) W D^(-1/2) on the ocean vertices
/// (frontier weight dropped). Iterates with the square of the operator so the
/// spectral radius is found whatever the sign of the extreme eigenvalue.
/// Throws kNonConvergence after max_iters.
OperatorNorm operator_norm(const WeightedOceanGraph& graph, std::uint32_t max_iters = 10'000, double tol = 1e-10);

/// Dense symmetric matrix D^(-1/2) W D^(-1/2) in vertices() order.
std::vector<double> symmetrized_kernel(const WeightedOceanGraph& graph);

struct HeatKernel {
  std::vector<double> returns;  ///< P[X_s = start], s = 0..s_max
  std::vector<double> mass;     ///< total probability on the tree after s steps
};

/// Exact propagation from `start`. Throws kDepthExceeded unless the walk
/// cannot reach a frontier half-edge within s_max steps.
HeatKernel heat_kernel(const RootedTree& tree, VertexId start, std::uint32_t s_max);
ReturnSeries heat_kernel_series(const RootedTree& tree, VertexId start, std::uint32_t s_max);

/// Root returns with mass leaving through frontier half-edges dropped. Exact
/// for s <= 2 * depth_cap + 1, which is required.
HeatKernel root_return_leaky(const RootedTree& tree, std::uint32_t s_max);

/// Quotient of a rooted tree by isomorphism of sibling subtrees. Node i stands
/// for `multiplicity` children of each copy of its parent node; the walk mass
/// on a node is the total mass on all vertices it represents.
class LumpedTree {
 public:
  struct Node {
    std::uint32_t parent;        ///< kNoVertex for the root
    std::uint32_t multiplicity;  ///< copies per parent copy
    std::uint32_t degree;
    std::uint32_t frontier;
    std::uint32_t depth;
  };

  static LumpedTree from_tree(const RootedTree& tree);
  /// Complete `branching`-ary tree of the given depth (leaves carry frontier).
  static LumpedTree regular(std::uint32_t branching, std::uint32_t depth);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(std::uint32_t i) const { return nodes_[i]; }
  /// Smallest depth of a node with frontier, or UINT32_MAX.
  std::uint32_t depth_cap() const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<std::uint32_t>> children_;

  friend HeatKernel lumped_root_return(const LumpedTree&, std::uint32_t, bool);
};

/// Root returns on a lumped tree. Strict mode requires depth_cap >= s_max;
/// leaky mode requires s_max <= 2 * depth_cap + 1.
HeatKernel lumped_root_return(const LumpedTree& tree, std::uint32_t s_max, bool leaky);

/// Ocean coordinates of a full tree vector (ordered as ocean_vertices()).
std::vector<double> restrict_vector(std::span<const double> u, const IslandDecomposition& decomp);
/// Zero extension of an ocean vector to the whole tree.
std::vector<double> embed_vector(std::span<const double> v, const IslandDecomposition& decomp);

/// sum_x w_q(x) f(x) g(x) over ocean vertices.
double ocean_inner_product(const WeightedOceanGraph& graph, std::span<const double> f, std::span<const double> g);
/// sum_x deg(x) u(x) v(x) over tree vertices.
double tree_inner_product(const RootedTree& tree, std::span<const double> u, std::span<const double> v);

}  // namespace gwhk
