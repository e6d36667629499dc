#include "gwhk/isolation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "gwhk/error.hpp"

namespace gwhk {

namespace {

// Every quantity below is den(q) * delta_q, which keeps the arithmetic in
// integers: den * delta(S) = num * |S| - den * |dS|.
struct Scale {
  std::int64_t num;
  std::int64_t den;
};

Scale scale_of(const Rational& q) {
  if (q <= Rational(0)) throw Error(ErrorKind::kInvalidArgument, "q must be positive, got " + q.str());
  return {q.num(), q.den()};
}

std::vector<bool> membership(const RootedTree& tree, std::span<const VertexId> set) {
  std::vector<bool> in(tree.size(), false);
  for (VertexId v : set) {
    tree.check_vertex(v);
    if (in[v]) throw Error(ErrorKind::kInvalidArgument, "duplicate vertex " + std::to_string(v) + " in set");
    in[v] = true;
  }
  return in;
}

std::int64_t boundary_size(const RootedTree& tree, std::span<const VertexId> set, const std::vector<bool>& in) {
  std::int64_t boundary = 0;
  for (VertexId v : set) {
    boundary += tree.frontier_extra(v);
    if (v != 0 && !in[tree.parent(v)]) ++boundary;
    for (VertexId c : tree.children(v)) {
      if (!in[c]) ++boundary;
    }
  }
  return boundary;
}

// Lexicographic objective (scaled delta, -|S|).
struct Score {
  std::int64_t value = 0;
  std::int64_t neg_count = 0;

  Score operator+(const Score& o) const { return {value + o.value, neg_count + o.neg_count}; }
  auto operator<=>(const Score&) const = default;
};

}  // namespace

IsolationParams IsolationParams::from_h(const Rational& h) {
  IsolationParams p{Rational(2, 3) * h, h};
  p.validate();
  return p;
}

void IsolationParams::validate() const {
  if (q <= Rational(0) || q >= Rational(1)) throw Error(ErrorKind::kInvalidArgument, "q must lie in (0,1)");
  if (h <= Rational(0) || h >= Rational(1)) throw Error(ErrorKind::kInvalidArgument, "h must lie in (0,1)");
}

Rational delta_q(const RootedTree& tree, std::span<const VertexId> set, const Rational& q) {
  const auto in = membership(tree, set);
  return q * Rational(static_cast<std::int64_t>(set.size())) - Rational(boundary_size(tree, set, in));
}

bool is_core_bruteforce(const RootedTree& tree, std::span<const VertexId> set, const Rational& q) {
  const Scale s = scale_of(q);
  const auto in = membership(tree, set);
  const std::size_t k = set.size();
  if (k > kCoreCheckLimit) {
    throw Error(ErrorKind::kSubsetTooLarge, "core check limited to " + std::to_string(kCoreCheckLimit) + " vertices");
  }
  if (k == 0) return true;

  std::vector<std::uint32_t> nbr_mask(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const VertexId a = set[i];
      const VertexId b = set[j];
      if (a != 0 && tree.parent(a) == b) {
        nbr_mask[i] |= 1u << j;
        nbr_mask[j] |= 1u << i;
      }
    }
  }
  const std::uint32_t full = (1u << k) - 1;
  std::vector<std::int64_t> delta(std::size_t{1} << k, 0);
  std::int64_t best_proper = std::numeric_limits<std::int64_t>::min();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    delta[mask] = delta[rest] + s.num - s.den * tree.degree(set[low]) +
                  2 * s.den * std::popcount(nbr_mask[low] & rest);
    if (mask != full) best_proper = std::max(best_proper, delta[mask]);
  }
  best_proper = std::max<std::int64_t>(best_proper, 0);  // the empty set
  return delta[full] > best_proper;
}

std::vector<VertexId> IslandDecomposition::ocean_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < island_of.size(); ++v) {
    if (island_of[v] < 0) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

std::vector<VertexId> IslandDecomposition::island_union() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < island_of.size(); ++v) {
    if (island_of[v] >= 0) out.push_back(static_cast<VertexId>(v));
  }
  return out;
}

IslandDecomposition decomposition_from_union(const RootedTree& tree, const Rational& q,
                                             const std::vector<bool>& in_union) {
  IslandDecomposition d;
  d.q = q;
  d.island_of.assign(tree.size(), -1);
  // Ids increase away from the root, so an island's first vertex in id order
  // is its topmost vertex and all members follow it.
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (!in_union[v]) continue;
    if (v != 0 && in_union[tree.parent(v)]) {
      d.island_of[v] = d.island_of[tree.parent(v)];
      d.islands[static_cast<std::size_t>(d.island_of[v])].vertices.push_back(v);
    } else {
      d.island_of[v] = static_cast<std::int32_t>(d.islands.size());
      d.islands.push_back({{v}, Rational(0)});
    }
  }
  for (auto& island : d.islands) island.delta = delta_q(tree, island.vertices, q);
  return d;
}

IslandDecomposition decompose_islands(const RootedTree& tree, const Rational& q) {
  const Scale s = scale_of(q);
  const std::size_t n = tree.size();
  std::vector<Score> inc(n);
  std::vector<Score> exc(n);
  const Score edge_bonus{2 * s.den, 0};
  for (std::size_t i = n; i-- > 0;) {
    const auto v = static_cast<VertexId>(i);
    Score in{s.num - s.den * tree.degree(v), -1};
    Score out{};
    for (VertexId c : tree.children(v)) {
      in = in + std::max(exc[c], inc[c] + edge_bonus);
      out = out + std::max(exc[c], inc[c]);
    }
    inc[v] = in;
    exc[v] = out;
  }
  std::vector<bool> chosen(n, false);
  chosen[0] = inc[0] > exc[0];
  for (VertexId v = 1; v < n; ++v) {
    const VertexId p = tree.parent(v);
    chosen[v] = chosen[p] ? (inc[v] + edge_bonus > exc[v]) : (inc[v] > exc[v]);
  }
  return decomposition_from_union(tree, q, chosen);
}

IslandDecomposition decompose_islands_bruteforce(const RootedTree& tree, const Rational& q) {
  const Scale s = scale_of(q);
  const std::size_t n = tree.size();
  if (n > kBruteForceTreeLimit) {
    throw Error(ErrorKind::kSubsetTooLarge,
                "brute-force decomposition limited to " + std::to_string(kBruteForceTreeLimit) + " vertices");
  }
  std::vector<std::uint32_t> nbr(n, 0);
  for (VertexId v = 1; v < n; ++v) {
    nbr[v] |= 1u << tree.parent(v);
    nbr[tree.parent(v)] |= 1u << v;
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<std::int64_t> delta(count, 0);
  // best_sub[S] = max delta over all subsets of S (including S itself).
  std::vector<std::int64_t> best_sub(count, 0);
  std::uint32_t core_union = 0;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    delta[mask] = delta[rest] + s.num - s.den * tree.degree(static_cast<VertexId>(low)) +
                  2 * s.den * std::popcount(nbr[low] & rest);
    std::int64_t best_proper = std::numeric_limits<std::int64_t>::min();
    for (std::uint32_t bits = mask; bits != 0; bits &= bits - 1) {
      const std::uint32_t without = mask & ~(bits & -bits);
      best_proper = std::max(best_proper, best_sub[without]);
    }
    best_sub[mask] = std::max(best_proper, delta[mask]);
    if (delta[mask] > best_proper) core_union |= mask;
  }
  std::vector<bool> in_union(n, false);
  for (std::size_t v = 0; v < n; ++v) in_union[v] = (core_union >> v) & 1u;
  return decomposition_from_union(tree, q, in_union);
}

std::vector<std::uint32_t> q_distances(const RootedTree& tree, const IslandDecomposition& decomp,
                                       std::span<const VertexId> set) {
  if (decomp.island_of.size() != tree.size()) {
    throw Error(ErrorKind::kInvalidArgument, "decomposition does not match tree");
  }
  const auto in = membership(tree, set);
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  // cost[u]: fewest ocean vertices strictly between u and S (0-1 BFS).
  std::vector<std::uint32_t> cost(tree.size(), kInf);
  std::deque<VertexId> queue;
  for (VertexId v : set) {
    cost[v] = 0;
    queue.push_back(v);
  }
  auto relax = [&](VertexId from, VertexId to) {
    const std::uint32_t step = (!in[from] && decomp.in_ocean(from)) ? 1u : 0u;
    if (cost[from] + step < cost[to]) {
      cost[to] = cost[from] + step;
      if (step == 0) {
        queue.push_front(to);
      } else {
        queue.push_back(to);
      }
    }
  };
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    if (u != 0) relax(u, tree.parent(u));
    for (VertexId c : tree.children(u)) relax(u, c);
  }
  std::vector<std::uint32_t> dist(tree.size(), kInf);
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (in[v]) {
      dist[v] = 0;
    } else if (cost[v] != kInf) {
      dist[v] = 1 + cost[v];
    }
  }
  return dist;
}

std::uint32_t q_distance(const RootedTree& tree, const IslandDecomposition& decomp, VertexId v,
                         std::span<const VertexId> set) {
  tree.check_vertex(v);
  if (set.empty()) throw Error(ErrorKind::kInvalidArgument, "q-distance to the empty set");
  return q_distances(tree, decomp, set)[v];
}

std::vector<std::int64_t> min_rooted_boundary_by_size(const RootedTree& tree, std::size_t n_max) {
  n_max = std::min(n_max, tree.size());
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // cost[v][k]: min sum of (deg - 2) over connected K of size k topped at v.
  std::vector<std::vector<std::int64_t>> cost(tree.size());
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto v = static_cast<VertexId>(i);
    std::vector<std::int64_t> acc{kInf, static_cast<std::int64_t>(tree.degree(v)) - 2};
    for (VertexId c : tree.children(v)) {
      std::vector<std::int64_t>& child = cost[c];
      std::vector<std::int64_t> merged(std::min(acc.size() + child.size() - 1, n_max + 1), kInf);
      for (std::size_t a = 1; a < acc.size(); ++a) {
        if (acc[a] >= kInf) continue;
        merged[a] = std::min(merged[a], acc[a]);
        for (std::size_t b = 1; b < child.size() && a + b < merged.size(); ++b) {
          if (child[b] < kInf) merged[a + b] = std::min(merged[a + b], acc[a] + child[b]);
        }
      }
      acc = std::move(merged);
      std::vector<std::int64_t>().swap(child);
    }
    cost[v] = std::move(acc);
  }
  std::vector<std::int64_t> boundary(n_max + 1, kInf);
  for (std::size_t k = 1; k < cost[0].size() && k <= n_max; ++k) {
    if (cost[0][k] < kInf) boundary[k] = cost[0][k] + 2;
  }
  return boundary;
}

Rational anchored_ratio_min(const RootedTree& tree, std::size_t n_lo, std::size_t n_hi) {
  n_hi = std::min(n_hi, tree.size());
  if (n_lo == 0 || n_lo > n_hi) {
    throw Error(ErrorKind::kInfeasibleSize, "no admissible set size in [" + std::to_string(n_lo) + ", " +
                                                std::to_string(n_hi) + "] for a tree of " +
                                                std::to_string(tree.size()) + " vertices");
  }
  const auto boundary = min_rooted_boundary_by_size(tree, n_hi);
  Rational best(std::numeric_limits<std::int64_t>::max());
  for (std::size_t k = n_lo; k <= n_hi; ++k) {
    best = std::min(best, Rational(boundary[k], static_cast<std::int64_t>(k)));
  }
  return best;
}

void EventParams::validate() const {
  if (t < 1) throw Error(ErrorKind::kInvalidArgument, "event time t must be positive");
  if (z_t < 3) throw Error(ErrorKind::kInvalidArgument, "z_t must be at least 3");
  if (!(c3 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "c3 must be positive");
  if (!(k > 2.0)) throw Error(ErrorKind::kInvalidArgument, "k must exceed 2");
}

namespace {

void require_depth(const RootedTree& tree, std::uint32_t t) {
  if (auto cap = tree.depth_cap(); cap && *cap < t) {
    throw Error(ErrorKind::kDepthExceeded,
                "tree known only to depth " + std::to_string(*cap) + ", event needs depth " + std::to_string(t));
  }
}

}  // namespace

bool indicator_F(const RootedTree& tree, const EventParams& params) {
  params.validate();
  require_depth(tree, params.t);
  const double threshold = params.c3 * std::pow(static_cast<double>(params.t), 1.0 / params.k);
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (tree.depth(v) <= params.t && static_cast<double>(tree.offspring(v)) >= threshold) return true;
  }
  return false;
}

bool indicator_M(const RootedTree& tree, const EventParams& params) {
  params.validate();
  require_depth(tree, params.t);
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (tree.depth(v) <= params.t && tree.offspring(v) > params.z_t - 1) return false;
  }
  return true;
}

bool indicator_D(const RootedTree& tree, std::uint32_t t, const Rational& h) {
  if (t < 1) throw Error(ErrorKind::kInvalidArgument, "event time t must be positive");
  require_depth(tree, t);
  if (tree.size() < t) return false;
  return anchored_ratio_min(tree, t, tree.size()) <= h;
}

}  // namespace gwhk
