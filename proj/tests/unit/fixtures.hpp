#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gwhk/isolation.hpp"
#include "gwhk/rational.hpp"
#include "gwhk/tree.hpp"

namespace gwhk::test {

// o (3 frontier half-edges) with children a, b; a has leaves l1, l2.
struct FiveVertexTree {
  static constexpr VertexId o = 0, a = 1, b = 2, l1 = 3, l2 = 4;
  static RootedTree build() {
    TreeBuilder t(3);
    t.add_child(o);
    t.add_child(o);
    t.add_child(a);
    t.add_child(a);
    return t.build();
  }
};

// Boundary of a vertex set counted directly from the parent array.
inline std::int64_t naive_boundary(const RootedTree& tree, const std::vector<bool>& in) {
  std::int64_t boundary = 0;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (!in[v]) continue;
    boundary += tree.frontier_extra(v);
    if (v != 0 && !in[tree.parent(v)]) ++boundary;
    for (VertexId c : tree.children(v)) {
      if (!in[c]) ++boundary;
    }
  }
  return boundary;
}

inline std::vector<bool> mask_to_set(std::uint64_t mask, std::size_t n) {
  std::vector<bool> in(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = (mask >> i) & 1u;
  return in;
}

inline Rational naive_delta(const RootedTree& tree, std::uint64_t mask, const Rational& q) {
  const auto in = mask_to_set(mask, tree.size());
  return q * Rational(std::count(in.begin(), in.end(), true)) - Rational(naive_boundary(tree, in));
}

inline bool rooted_connected(const RootedTree& tree, std::uint64_t mask) {
  if ((mask & 1u) == 0) return false;
  for (VertexId v = 1; v < tree.size(); ++v) {
    if (((mask >> v) & 1u) && !((mask >> tree.parent(v)) & 1u)) return false;
  }
  return true;
}

}  // namespace gwhk::test
