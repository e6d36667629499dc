#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gwhk/rational.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

/// Isolation parameter q and the anchored-expansion floor h it is derived from.
struct IsolationParams {
  Rational q;
  Rational h;

  /// q = 2h/3 exactly.
  static IsolationParams from_h(const Rational& h);
  void validate() const;
};

/// Size limits of the brute-force oracles.
inline constexpr std::size_t kBruteForceTreeLimit = 18;
inline constexpr std::size_t kCoreCheckLimit = 20;

/// q|S| - |dS|, where dS counts tree edges leaving S plus frontier half-edges of
/// members of S. Duplicate or unknown ids are rejected.
Rational delta_q(const RootedTree& tree, std::span<const VertexId> set, const Rational& q);

/// Definition check: delta_q(S) > delta_q(A) for every proper subset A of S.
/// Enumerates all 2^|S| subsets; throws kSubsetTooLarge above kCoreCheckLimit.
bool is_core_bruteforce(const RootedTree& tree, std::span<const VertexId> set, const Rational& q);

struct Island {
  std::vector<VertexId> vertices;  ///< ascending
  Rational delta;
  friend bool operator==(const Island&, const Island&) = default;
};

struct IslandDecomposition {
  Rational q;
  std::vector<std::int32_t> island_of;  ///< island index per vertex, -1 in the oceans
  std::vector<Island> islands;          ///< ordered by smallest vertex

  bool in_ocean(VertexId v) const { return island_of[v] < 0; }
  std::vector<VertexId> ocean_vertices() const;
  std::vector<VertexId> island_union() const;
  friend bool operator==(const IslandDecomposition&, const IslandDecomposition&) = default;
};

/// Union of all q-isolated cores, split into connected islands. Exact.
///
/// The union of all cores is the inclusion-minimal maximiser of delta_q, so it
/// is found by a linear tree DP maximising (delta_q, -|S|) lexicographically.
IslandDecomposition decompose_islands(const RootedTree& tree, const Rational& q);

/// Oracle: enumerates all 2^|T| subsets, marks every core by the definition,
/// and returns the decomposition of their union. |T| <= kBruteForceTreeLimit.
IslandDecomposition decompose_islands_bruteforce(const RootedTree& tree, const Rational& q);

/// Builds the decomposition record for a given island union (split into
/// components, deltas computed). Used by both decomposition routes.
IslandDecomposition decomposition_from_union(const RootedTree& tree, const Rational& q,
                                             const std::vector<bool>& in_union);

/// 0 if v in S, else 1 + fewest ocean vertices strictly between v and S.
std::uint32_t q_distance(const RootedTree& tree, const IslandDecomposition& decomp, VertexId v,
                         std::span<const VertexId> set);

/// Vector of dist_q(., S) for every vertex.
std::vector<std::uint32_t> q_distances(const RootedTree& tree, const IslandDecomposition& decomp,
                                       std::span<const VertexId> set);

/// min |dK|/|K| over connected K containing the root with n_lo <= |K| <= n_hi.
/// n_hi is clamped to |T|; throws kInfeasibleSize when no size is admissible.
Rational anchored_ratio_min(const RootedTree& tree, std::size_t n_lo, std::size_t n_hi);

/// Minimal boundary |dK| over rooted connected K of each size 0..n_max
/// (entry 0 unused). Tree knapsack, O(|T| * n_max).
std::vector<std::int64_t> min_rooted_boundary_by_size(const RootedTree& tree, std::size_t n_max);

struct EventParams {
  std::uint32_t t = 1;
  std::uint32_t z_t = 3;
  double c3 = 1.0;
  double k = 3.0;

  void validate() const;
};

/// Some vertex of depth <= t has at least c3 * t^(1/k) children.
bool indicator_F(const RootedTree& tree, const EventParams& params);
/// Every vertex of depth <= t has at most z_t - 1 children.
bool indicator_M(const RootedTree& tree, const EventParams& params);
/// Some connected root set K with |K| >= t has |dK|/|K| <= h (within the
/// materialised tree).
bool indicator_D(const RootedTree& tree, std::uint32_t t, const Rational& h);

}  // namespace gwhk
