#include "gwhk/tree.hpp"

#include <deque>
#include <string>

#include "gwhk/error.hpp"
#include "gwhk/rng.hpp"

namespace gwhk {

namespace {

constexpr std::size_t kMaxMaterialisedVertices = 200'000'000;

}  // namespace

std::uint32_t keyed_offspring(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t sample_index,
                              std::uint32_t attempt, std::uint64_t address) {
  return dist.draw(keyed_uniform(seed, sample_index, attempt, address));
}

bool survives_to_depth(const TreeSampleSpec& spec, std::uint32_t attempt, std::uint32_t depth) {
  struct Frame {
    std::uint64_t address;
    std::uint32_t depth;
  };
  std::vector<Frame> stack{{kRootAddress, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth >= depth) return true;
    const std::uint32_t k = keyed_offspring(spec.dist, spec.master_seed, spec.sample_index, attempt, f.address);
    for (std::uint32_t i = k; i-- > 0;) stack.push_back({child_address(f.address, i), f.depth + 1});
  }
  return false;
}

std::uint32_t first_surviving_attempt(const TreeSampleSpec& spec) {
  if (!spec.survival_required) return 0;
  if (spec.depth_cap < 1) throw Error(ErrorKind::kInvalidArgument, "survival_required needs depth_cap >= 1");
  for (std::uint64_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    if (survives_to_depth(spec, static_cast<std::uint32_t>(attempt), spec.depth_cap)) {
      return static_cast<std::uint32_t>(attempt);
    }
  }
  throw Error(ErrorKind::kRejectionBudgetExhausted,
              "no tree survived to depth " + std::to_string(spec.depth_cap) + " in " +
                  std::to_string(kRejectionBudget) + " attempts (sample " + std::to_string(spec.sample_index) +
                  "); the distribution is likely (near-)critical");
}

RootedTree sample_attempt(const TreeSampleSpec& spec, std::uint32_t attempt) {
  std::vector<VertexId> parents{kNoVertex};
  std::vector<std::uint32_t> frontier{0};
  std::vector<std::uint64_t> address{kRootAddress};
  std::vector<std::uint32_t> depth{0};
  // Ids are handed out in breadth-first order, so the vector doubles as the queue.
  for (std::size_t v = 0; v < parents.size(); ++v) {
    const std::uint32_t k = keyed_offspring(spec.dist, spec.master_seed, spec.sample_index, attempt, address[v]);
    if (depth[v] == spec.depth_cap) {
      frontier[v] = k;
      continue;
    }
    if (parents.size() + k > kMaxMaterialisedVertices) {
      throw Error(ErrorKind::kBudgetExceeded, "sampled tree exceeds the materialisation budget");
    }
    for (std::uint32_t i = 0; i < k; ++i) {
      parents.push_back(static_cast<VertexId>(v));
      frontier.push_back(0);
      address.push_back(child_address(address[v], i));
      depth.push_back(depth[v] + 1);
    }
  }
  return RootedTree::from_parents(parents, frontier);
}

RootedTree sample_tree(const TreeSampleSpec& spec) {
  if (spec.survival_required && spec.depth_cap < 1) {
    throw Error(ErrorKind::kInvalidArgument, "survival_required needs depth_cap >= 1");
  }
  return sample_attempt(spec, first_surviving_attempt(spec));
}

LazyTree::LazyTree(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t sample_index,
                   std::uint32_t attempt)
    : dist_(&dist), seed_(seed), sample_index_(sample_index), attempt_(attempt) {
  nodes_.push_back({kRootAddress, kNoVertex, kUnexpanded, 0, 0});
}

void LazyTree::expand_slow(VertexId v) {
  const std::uint64_t address = nodes_[v].address;
  const std::uint32_t depth = nodes_[v].depth;
  const std::uint32_t k = keyed_offspring(*dist_, seed_, sample_index_, attempt_, address);
  const auto first = static_cast<VertexId>(nodes_.size());
  for (std::uint32_t i = 0; i < k; ++i) {
    nodes_.push_back({child_address(address, i), v, kUnexpanded, 0, depth + 1});
  }
  nodes_[v].first_child = first;
  nodes_[v].num_children = k;
}

}  // namespace gwhk
