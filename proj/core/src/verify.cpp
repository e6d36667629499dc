#include "gwhk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "gwhk/error.hpp"
#include "gwhk/ocean_chain.hpp"
#include "gwhk/regularise.hpp"
#include "gwhk/rng.hpp"
#include "gwhk/spectral.hpp"

namespace gwhk {

namespace {

// Stream tags keep the corpora independent of each other.
enum StreamTag : std::uint32_t {
  kSmallTrees = 1,
  kInRegime = 2,
  kAdditivity = 3,
  kIdentity = 4,
  kMonotone = 5,
  kHitting = 6,
  kAdjoint = 7,
  kRegularise = 8,
};

constexpr double kWeightTol = 1e-10;

CheckResult named(std::string name) {
  CheckResult r;
  r.name = std::move(name);
  return r;
}

void fail(CheckResult& r, const std::string& what) {
  if (r.passed) r.detail = what;
  r.passed = false;
}

std::string where(std::size_t tree, const Rational& q) {
  std::ostringstream out;
  out << "tree " << tree << ", q=" << q.str();
  return out.str();
}

std::vector<VertexId> random_subset(const RootedTree& tree, PhiloxStream& rng) {
  std::vector<VertexId> s;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (rng.below(2) == 1) s.push_back(v);
  }
  return s;
}

std::vector<VertexId> set_union(std::vector<VertexId> a, const std::vector<VertexId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

bool includes(const std::vector<VertexId>& big, const std::vector<VertexId>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::size_t components(const RootedTree& tree, const std::vector<VertexId>& set) {
  std::vector<bool> in(tree.size(), false);
  for (VertexId v : set) in[v] = true;
  std::size_t count = 0;
  for (VertexId v : set) {
    if (v == 0 || !in[tree.parent(v)]) ++count;
  }
  return count;
}

RootedTree random_recursive_tree(PhiloxStream& rng, std::size_t n, std::uint32_t frontier_odds) {
  std::vector<VertexId> parents{kNoVertex};
  std::vector<std::uint32_t> frontier(n, 0);
  for (std::size_t v = 1; v < n; ++v) parents.push_back(rng.below(static_cast<std::uint32_t>(v)));
  std::uint32_t total = 0;
  for (auto& f : frontier) {
    if (rng.below(frontier_odds) == 0) f = 1 + rng.below(3);
    total += f;
  }
  if (total == 0) frontier[rng.below(static_cast<std::uint32_t>(n))] = 1 + rng.below(2);
  return RootedTree::from_parents(parents, frontier);
}

}  // namespace

std::vector<Rational> battery_qs() { return {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4)}; }

std::vector<RootedTree> small_tree_corpus(std::uint64_t seed, std::size_t count, std::size_t max_vertices) {
  std::vector<RootedTree> out;
  for (std::size_t i = 0; i < count; ++i) {
    PhiloxStream rng(seed, kSmallTrees, static_cast<std::uint32_t>(i), 0);
    const std::size_t n = 1 + rng.below(static_cast<std::uint32_t>(max_vertices));
    out.push_back(random_recursive_tree(rng, n, 3));
  }
  return out;
}

std::vector<InRegimeInstance> in_regime_corpus(std::uint64_t seed, std::size_t count, const Rational& q,
                                               std::size_t min_vertices, std::size_t max_vertices) {
  constexpr std::uint32_t kAttempts = 100'000;
  std::vector<InRegimeInstance> out;
  for (std::size_t i = 0; i < count; ++i) {
    PhiloxStream rng(seed, kInRegime, static_cast<std::uint32_t>(i), 0);
    bool found = false;
    for (std::uint32_t attempt = 0; attempt < kAttempts && !found; ++attempt) {
      const auto span = static_cast<std::uint32_t>(max_vertices - min_vertices + 1);
      const std::size_t n = min_vertices + rng.below(span);
      RootedTree tree = random_recursive_tree(rng, n, 6);
      IslandDecomposition decomp = decompose_islands(tree, q);
      if (decomp.islands.empty() || decomp.ocean_vertices().empty()) continue;
      bool clipped = false;
      for (VertexId v : decomp.island_union()) clipped = clipped || tree.frontier_extra(v) > 0;
      if (clipped) continue;
      out.push_back({std::move(tree), std::move(decomp), seed, static_cast<std::uint32_t>(i)});
      found = true;
    }
    if (!found) throw Error(ErrorKind::kBudgetExceeded, "no in-regime instance found for index " + std::to_string(i));
  }
  return out;
}

CheckResult check_oracle_equivalence(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs) {
  CheckResult r = named("island decomposition equals brute-force union of cores");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& q : qs) {
      ++r.instances;
      if (decompose_islands(corpus[i], q) != decompose_islands_bruteforce(corpus[i], q)) fail(r, where(i, q));
    }
  }
  return r;
}

CheckResult check_additivity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                             std::uint64_t seed) {
  CheckResult r = named("additivity over disjoint sets");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RootedTree& tree = corpus[i];
    PhiloxStream rng(seed, kAdditivity, static_cast<std::uint32_t>(i), 0);
    for (const auto& q : qs) {
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<VertexId> b;
        std::vector<VertexId> c;
        std::vector<int> side(tree.size(), 0);
        for (VertexId v = 0; v < tree.size(); ++v) {
          side[v] = static_cast<int>(rng.below(3));
          if (side[v] == 1) b.push_back(v);
          if (side[v] == 2) c.push_back(v);
        }
        std::int64_t shared = 0;
        for (VertexId v = 1; v < tree.size(); ++v) {
          const int a = side[v];
          const int p = side[tree.parent(v)];
          if ((a == 1 && p == 2) || (a == 2 && p == 1)) ++shared;
        }
        ++r.instances;
        const Rational lhs = delta_q(tree, set_union(b, c), q);
        const Rational rhs = delta_q(tree, b, q) + delta_q(tree, c, q) + Rational(2 * shared);
        if (lhs != rhs) fail(r, where(i, q) + ": " + lhs.str() + " != " + rhs.str());
      }
    }
  }
  return r;
}

CheckResult check_tree_identity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                                std::uint64_t seed) {
  CheckResult r = named("forest identity for delta_q");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RootedTree& tree = corpus[i];
    PhiloxStream rng(seed, kIdentity, static_cast<std::uint32_t>(i), 0);
    for (const auto& q : qs) {
      for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_subset(tree, rng);
        Rational sum(0);
        for (VertexId v : a) sum += q + Rational(2) - Rational(tree.degree(v));
        sum -= Rational(2 * static_cast<std::int64_t>(components(tree, a)));
        ++r.instances;
        if (sum != delta_q(tree, a, q)) fail(r, where(i, q));
      }
    }
  }
  return r;
}

CheckResult check_core_monotonicity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                                    std::uint64_t seed) {
  CheckResult r = named("delta_q(A) <= delta_q(A u island), equality iff island in A");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RootedTree& tree = corpus[i];
    PhiloxStream rng(seed, kMonotone, static_cast<std::uint32_t>(i), 0);
    for (const auto& q : qs) {
      const auto decomp = decompose_islands(tree, q);
      for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_subset(tree, rng);
        const Rational da = delta_q(tree, a, q);
        for (const auto& island : decomp.islands) {
          ++r.instances;
          const Rational du = delta_q(tree, set_union(a, island.vertices), q);
          const bool contained = includes(a, island.vertices);
          if (du < da || ((du == da) != contained)) fail(r, where(i, q));
        }
      }
    }
  }
  return r;
}

CheckResult check_union_closure(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs) {
  CheckResult r = named("unions of islands are cores");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& q : qs) {
      const auto decomp = decompose_islands(corpus[i], q);
      const std::size_t k = std::min<std::size_t>(decomp.islands.size(), 8);
      for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        std::vector<VertexId> u;
        for (std::size_t j = 0; j < k; ++j) {
          if ((mask >> j) & 1u) u = set_union(u, decomp.islands[j].vertices);
        }
        if (u.size() > kCoreCheckLimit) continue;
        ++r.instances;
        if (!is_core_bruteforce(corpus[i], u, q)) fail(r, where(i, q));
      }
    }
  }
  return r;
}

CheckResult check_nesting(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs) {
  CheckResult r = named("A_q' contained in A_q for q' < q");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& q : qs) {
      for (const auto& qp : qs) {
        if (!(qp < q)) continue;
        ++r.instances;
        if (!includes(decompose_islands(corpus[i], q).island_union(), decompose_islands(corpus[i], qp).island_union())) {
          fail(r, where(i, q) + ", q'=" + qp.str());
        }
      }
    }
  }
  return r;
}

CheckResult check_sinking(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs) {
  CheckResult r = named("island unions of size <= 1/q' sink below q'");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& q : qs) {
      const auto decomp = decompose_islands(corpus[i], q);
      for (const auto& qp : qs) {
        if (!(qp < q)) continue;
        const auto lower = decompose_islands(corpus[i], qp);
        const std::size_t k = std::min<std::size_t>(decomp.islands.size(), 8);
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
          std::vector<VertexId> s;
          for (std::size_t j = 0; j < k; ++j) {
            if ((mask >> j) & 1u) s = set_union(s, decomp.islands[j].vertices);
          }
          if (Rational(static_cast<std::int64_t>(s.size())) * qp > Rational(1)) continue;
          ++r.instances;
          for (VertexId v : s) {
            if (!lower.in_ocean(v)) {
              fail(r, where(i, q) + ", q'=" + qp.str());
              break;
            }
          }
        }
      }
    }
  }
  return r;
}

CheckResult check_island_invariants(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs) {
  CheckResult r = named("islands are connected cores with positive delta summing to delta of the union");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& q : qs) {
      const auto decomp = decompose_islands(corpus[i], q);
      Rational total(0);
      for (const auto& island : decomp.islands) {
        ++r.instances;
        total += island.delta;
        const bool ok = components(corpus[i], island.vertices) == 1 && island.delta > Rational(0) &&
                        island.delta == delta_q(corpus[i], island.vertices, q) &&
                        (island.vertices.size() > kCoreCheckLimit || is_core_bruteforce(corpus[i], island.vertices, q));
        if (!ok) fail(r, where(i, q));
      }
      if (total != delta_q(corpus[i], decomp.island_union(), q)) fail(r, where(i, q) + ": union delta");
    }
  }
  return r;
}

std::vector<CheckResult> check_ocean_invariants(const std::vector<InRegimeInstance>& instances) {
  CheckResult sym = named("ocean weights symmetric");
  CheckResult cons = named("ocean weights conserve degree");
  CheckResult dom = named("tree edges dominated, excess only across a common island");
  CheckResult diag = named("self-weight positive iff adjacent to an island");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const RootedTree& tree = inst.tree;
    const auto& d = inst.decomp;
    const WeightedOceanGraph g = build_ocean_weights(tree, d);
    const std::string tag = "instance " + std::to_string(inst.index) + " (seed " + std::to_string(inst.seed) + ")";
    // Islands whose outer boundary contains each ocean vertex.
    std::vector<std::vector<std::int32_t>> touching(tree.size());
    for (VertexId v : g.vertices()) {
      tree.for_each_neighbor(v, [&](VertexId u) {
        if (!d.in_ocean(u)) touching[v].push_back(d.island_of[u]);
      });
      std::sort(touching[v].begin(), touching[v].end());
    }
    auto share_island = [&](VertexId x, VertexId y) {
      std::vector<std::int32_t> common;
      std::set_intersection(touching[x].begin(), touching[x].end(), touching[y].begin(), touching[y].end(),
                            std::back_inserter(common));
      return !common.empty();
    };
    auto tree_edge = [&](VertexId x, VertexId y) {
      return x != y && ((x != 0 && tree.parent(x) == y) || (y != 0 && tree.parent(y) == x));
    };
    ++sym.instances;
    ++cons.instances;
    ++dom.instances;
    ++diag.instances;
    for (VertexId x : g.vertices()) {
      double row = 0.0;
      for (const OceanEdge& e : g.edges(x)) {
        row += e.weight;
        const double asym = std::abs(e.weight - g.weight(e.to, x));
        sym.worst = std::max(sym.worst, asym);
        if (asym > kWeightTol) fail(sym, tag);
        if (e.to != x && !tree_edge(x, e.to) && e.weight > kWeightTol && !share_island(x, e.to)) {
          fail(dom, tag + ": weight between non-adjacent vertices without a common island");
        }
        if (tree_edge(x, e.to) && e.weight > 1.0 + kWeightTol && !share_island(x, e.to)) {
          fail(dom, tag + ": excess weight on a tree edge without a common island");
        }
      }
      tree.for_each_neighbor(x, [&](VertexId u) {
        if (d.in_ocean(u) && g.weight(x, u) < 1.0 - kWeightTol) fail(dom, tag + ": tree edge below weight 1");
      });
      const double drift = std::abs(row + g.frontier_weight(x) - tree.degree(x));
      cons.worst = std::max(cons.worst, drift);
      if (drift > kWeightTol || std::abs(g.vertex_weight(x) - tree.degree(x)) > kWeightTol) fail(cons, tag);
      if ((g.weight(x, x) > kWeightTol) != !touching[x].empty()) fail(diag, tag + ", vertex " + std::to_string(x));
    }
  }
  return {sym, cons, dom, diag};
}

CheckResult check_hitting_equivalence(const std::vector<InRegimeInstance>& instances, std::uint64_t seed) {
  CheckResult r = named("hitting probabilities agree for the tree walk and the induced chain");
  for (const auto& inst : instances) {
    const WeightedOceanGraph g = build_ocean_weights(inst.tree, inst.decomp);
    if (g.size() < 2) continue;
    PhiloxStream rng(seed, kHitting, inst.index, 0);
    const auto n = static_cast<std::uint32_t>(g.size());
    const VertexId x = g.vertices()[rng.below(n)];
    VertexId y = x;
    while (y == x) y = g.vertices()[rng.below(n)];
    const HittingPair p = hitting_equivalence(inst.tree, inst.decomp, g, x, y);
    const double diff = std::abs(p.p_srw - p.p_induced);
    ++r.instances;
    r.worst = std::max(r.worst, diff);
    if (diff > 1e-8) fail(r, "instance " + std::to_string(inst.index) + " (seed " + std::to_string(inst.seed) + ")");
  }
  return r;
}

CheckResult check_restriction_adjoint(const std::vector<InRegimeInstance>& instances, std::uint64_t seed) {
  CheckResult r = named("restriction and embedding are adjoint");
  for (const auto& inst : instances) {
    const WeightedOceanGraph g = build_ocean_weights(inst.tree, inst.decomp);
    PhiloxStream rng(seed, kAdjoint, inst.index, 0);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> u(inst.tree.size());
      std::vector<double> v(g.size());
      for (double& x : u) x = 2.0 * rng.uniform() - 1.0;
      for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
      const double lhs = ocean_inner_product(g, restrict_vector(u, inst.decomp), v);
      const double rhs = tree_inner_product(inst.tree, u, embed_vector(v, inst.decomp));
      const double diff = std::abs(lhs - rhs);
      ++r.instances;
      r.worst = std::max(r.worst, diff);
      bool ok = diff <= 1e-12 * std::max(1.0, std::abs(rhs));
      ok = ok && restrict_vector(embed_vector(v, inst.decomp), inst.decomp) == v;
      const auto round = embed_vector(restrict_vector(u, inst.decomp), inst.decomp);
      for (VertexId x = 0; x < inst.tree.size(); ++x) {
        ok = ok && round[x] == (inst.decomp.in_ocean(x) ? u[x] : 0.0);
      }
      if (!ok) fail(r, "instance " + std::to_string(inst.index));
    }
  }
  return r;
}

std::vector<CheckResult> check_spectral_sandwich(const std::vector<InRegimeInstance>& instances,
                                                 std::size_t max_set_size) {
  CheckResult iso = named("isoperimetric ratio >= q/(q+2)");
  CheckResult norm = named("operator norm <= sqrt(1 - (q/(q+2))^2)");
  for (const auto& inst : instances) {
    const WeightedOceanGraph g = build_ocean_weights(inst.tree, inst.decomp);
    const double q = inst.decomp.q.to_double();
    const double floor = q / (q + 2.0);
    const std::string tag = "instance " + std::to_string(inst.index) + " (seed " + std::to_string(inst.seed) + ")";
    const IsoperimetricResult ir = isoperimetric_bruteforce(g, max_set_size);
    ++iso.instances;
    iso.worst = std::max(iso.worst, floor - ir.ratio);
    if (ir.ratio < floor - 1e-12) fail(iso, tag);
    const OperatorNorm on = operator_norm(g);
    const double cap = std::sqrt(1.0 - floor * floor);
    ++norm.instances;
    norm.worst = std::max(norm.worst, on.norm - cap);
    if (on.norm > cap + 1e-9) fail(norm, tag);
  }
  return {iso, norm};
}

std::vector<CheckResult> check_heat_kernel(std::uint32_t s_max) {
  CheckResult mass = named("heat-kernel mass conserved per step");
  CheckResult parity = named("odd-time returns exactly zero");
  CheckResult deepen = named("returns invariant under deepening");
  CheckResult two = named("P[X_2 = o] = 1/3 on the binary tree");
  const HeatKernel hk = lumped_root_return(LumpedTree::regular(2, s_max + 1), s_max, false);
  const HeatKernel deeper = lumped_root_return(LumpedTree::regular(2, s_max + 4), s_max, false);
  for (std::uint32_t s = 1; s <= s_max; ++s) {
    ++mass.instances;
    const double drift = std::abs(hk.mass[s] - hk.mass[s - 1]);
    mass.worst = std::max(mass.worst, drift);
    if (drift > 1e-12) fail(mass, "binary tree, s=" + std::to_string(s));
    if (s % 2 == 1) {
      ++parity.instances;
      if (hk.returns[s] != 0.0) fail(parity, "binary tree, s=" + std::to_string(s));
    }
  }
  ++deepen.instances;
  if (hk.returns != deeper.returns) fail(deepen, "binary tree");
  ++two.instances;
  two.worst = std::abs(hk.returns[2] - 1.0 / 3.0);
  if (two.worst > 1e-15) fail(two, "binary tree");

  // Materialised Galton-Watson trees: deepening and lumping agree.
  const auto dist = OffspringDistribution::parse("0:1/5,1:1/5,2:2/5,3:1/5");
  for (std::uint32_t i = 0; i < 20; ++i) {
    TreeSampleSpec shallow{dist, 8, true, 11, i};
    TreeSampleSpec deep = shallow;
    deep.depth_cap = 11;
    const std::uint32_t attempt = first_surviving_attempt(deep);
    const RootedTree a = sample_attempt(shallow, attempt);
    const RootedTree b = sample_attempt(deep, attempt);
    const HeatKernel ha = heat_kernel(a, 0, 8);
    const HeatKernel hb = heat_kernel(b, 0, 8);
    ++deepen.instances;
    if (ha.returns != hb.returns) fail(deepen, "sample " + std::to_string(i));
    const HeatKernel lumped = lumped_root_return(LumpedTree::from_tree(a), 8, false);
    for (std::uint32_t s = 0; s <= 8; ++s) {
      ++mass.instances;
      const double drift = std::abs(ha.mass[s] - 1.0);
      mass.worst = std::max(mass.worst, drift);
      if (drift > 1e-12 || std::abs(lumped.returns[s] - ha.returns[s]) > 1e-12) fail(mass, "sample " + std::to_string(i));
      if (s % 2 == 1) {
        ++parity.instances;
        if (ha.returns[s] != 0.0) fail(parity, "sample " + std::to_string(i));
      }
    }
  }
  return {mass, parity, deepen, two};
}

CheckResult check_regularise(std::uint64_t seed, std::size_t count) {
  CheckResult r = named("islands of the regularised tree are the islands of T near the root");
  const auto dist = OffspringDistribution::parse("0:3/10,1:1/5,2:3/10,3:1/5");
  const Rational q(1, 2);
  const std::uint32_t t = 2;
  const std::uint32_t z = 4;
  const std::uint32_t cap = 7;
  for (std::uint32_t i = 0; i < count; ++i) {
    const RootedTree tree = sample_attempt({dist, cap, false, seed ^ kRegularise, i}, 0);
    const auto decomp = decompose_islands(tree, q);
    std::vector<VertexId> source;
    RootedTree reg;
    try {
      reg = regularise(tree, q, t, z, decomp, cap, &source);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kClippedIsland) continue;
      throw;
    }
    for (const Rational& qp : {Rational(1, 3), Rational(1, 2)}) {
      ++r.instances;
      std::vector<VertexId> got;
      bool ok = true;
      for (VertexId v : decompose_islands(reg, qp).island_union()) {
        if (source[v] == kNoVertex) ok = false;
        got.push_back(source[v]);
      }
      std::sort(got.begin(), got.end());
      std::vector<VertexId> want;
      for (const auto& island : decompose_islands(tree, qp).islands) {
        if (tree.depth(island.vertices.front()) <= t) want = set_union(want, island.vertices);
      }
      if (!ok || got != want) fail(r, "sample " + std::to_string(i) + ", q'=" + qp.str());
    }
  }
  return r;
}

std::vector<CheckResult> run_verification(CorpusSize size, std::uint64_t seed) {
  const bool full = size == CorpusSize::kFull;
  std::vector<CheckResult> out;
  auto append = [&out](std::vector<CheckResult> rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  const auto qs = battery_qs();
  const auto corpus = small_tree_corpus(seed, full ? 200 : 40, 14);
  out.push_back(check_oracle_equivalence(corpus, qs));
  out.push_back(check_island_invariants(corpus, qs));
  out.push_back(check_additivity(corpus, qs, seed));
  out.push_back(check_tree_identity(corpus, qs, seed));
  out.push_back(check_core_monotonicity(corpus, qs, seed));
  out.push_back(check_union_closure(corpus, qs));
  out.push_back(check_nesting(corpus, qs));
  out.push_back(check_sinking(corpus, qs));

  std::vector<InRegimeInstance> regime;
  for (const Rational& q : {Rational(1, 5), Rational(1, 3), Rational(1, 2)}) {
    auto part = in_regime_corpus(seed, full ? 34 : 8, q, 10, 60);
    regime.insert(regime.end(), part.begin(), part.end());
  }
  append(check_ocean_invariants(regime));
  out.push_back(check_hitting_equivalence(regime, seed));
  out.push_back(check_restriction_adjoint(regime, seed));

  std::vector<InRegimeInstance> sandwich;
  for (const Rational& h : {Rational(3, 20), Rational(3, 10)}) {
    auto part = in_regime_corpus(seed, full ? 15 : 4, Rational(2, 3) * h, 15, 30);
    sandwich.insert(sandwich.end(), part.begin(), part.end());
  }
  append(check_spectral_sandwich(sandwich, 8));
  append(check_heat_kernel(full ? 1000 : 200));
  out.push_back(check_regularise(seed, full ? 200 : 40));
  return out;
}

}  // namespace gwhk
