#pragma once

#include <cstdint>
#include <vector>

#include "gwhk/isolation.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

/// q-regularised tree, materialised to `depth_cap`.
///
/// Offspring counts are copied from `tree` on depths <= t and on every island
/// of `decomp` that reaches depth <= t; every other vertex gets z_t - 1
/// children. Vertices at `depth_cap` keep their count as frontier half-edges.
///
/// Throws kClippedIsland when a copied island carries frontier half-edges,
/// kDepthExceeded when the tree is not known to depth t, kInvalidArgument when
/// depth_cap < t or z_t < 3. When `source` is given it receives, per output
/// vertex, the vertex of `tree` at the same position (kNoVertex below
/// generated vertices).
RootedTree regularise(const RootedTree& tree, const Rational& q, std::uint32_t t, std::uint32_t z_t,
                      const IslandDecomposition& decomp, std::uint32_t depth_cap,
                      std::vector<VertexId>* source = nullptr);

}  // namespace gwhk
