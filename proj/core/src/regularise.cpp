#include "gwhk/regularise.hpp"

#include <string>
#include <utility>

#include "gwhk/error.hpp"

namespace gwhk {

namespace {

constexpr std::size_t kVertexBudget = 200'000'000;

}  // namespace

RootedTree regularise(const RootedTree& tree, const Rational& q, std::uint32_t t, std::uint32_t z_t,
                      const IslandDecomposition& decomp, std::uint32_t depth_cap,
                      std::vector<VertexId>* source_out) {
  if (z_t < 3) throw Error(ErrorKind::kInvalidArgument, "z_t must be at least 3");
  if (depth_cap < t) throw Error(ErrorKind::kInvalidArgument, "depth_cap must be at least t");
  if (decomp.q != q || decomp.island_of.size() != tree.size()) {
    throw Error(ErrorKind::kInvalidArgument, "decomposition does not match tree and q");
  }
  if (auto cap = tree.depth_cap(); cap && *cap < t) {
    throw Error(ErrorKind::kDepthExceeded, "tree known only to depth " + std::to_string(*cap));
  }

  std::vector<bool> island_kept(decomp.islands.size(), false);
  for (std::size_t i = 0; i < decomp.islands.size(); ++i) {
    const auto& island = decomp.islands[i];
    // Ids grow with depth, so the first vertex is the shallowest.
    if (tree.depth(island.vertices.front()) > t) continue;
    island_kept[i] = true;
    for (VertexId v : island.vertices) {
      if (tree.frontier_extra(v) > 0) {
        throw Error(ErrorKind::kClippedIsland,
                    "island " + std::to_string(i) + " reaches the frontier at vertex " + std::to_string(v));
      }
    }
  }
  auto copied = [&](VertexId s) {
    if (tree.depth(s) <= t) return true;
    const std::int32_t id = decomp.island_of[s];
    return id >= 0 && island_kept[static_cast<std::size_t>(id)];
  };

  // Breadth-first; source[u] is the vertex of `tree` that u copies, if any.
  std::vector<VertexId> parents{kNoVertex};
  std::vector<std::uint32_t> frontier{0};
  std::vector<VertexId> source{0};
  std::vector<std::uint32_t> depth{0};
  for (std::size_t u = 0; u < parents.size(); ++u) {
    const VertexId s = source[u];
    const bool copy = s != kNoVertex && copied(s);
    const std::uint32_t count = copy ? tree.offspring(s) : z_t - 1;
    if (depth[u] == depth_cap) {
      frontier[u] = count;
      continue;
    }
    if (parents.size() + count > kVertexBudget) {
      throw Error(ErrorKind::kBudgetExceeded, "regularised tree exceeds the vertex budget");
    }
    const auto kids = copy ? tree.children(s) : std::span<const VertexId>{};
    for (std::uint32_t i = 0; i < count; ++i) {
      parents.push_back(static_cast<VertexId>(u));
      frontier.push_back(0);
      source.push_back(i < kids.size() ? kids[i] : kNoVertex);
      depth.push_back(depth[u] + 1);
    }
  }
  if (source_out != nullptr) *source_out = std::move(source);
  return RootedTree::from_parents(parents, frontier);
}

}  // namespace gwhk
