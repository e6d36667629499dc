#include "gwhk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "gwhk/error.hpp"
#include "gwhk/rng.hpp"

namespace gwhk {

std::vector<ReturnEntry> ReturnSeries::even_entries() const {
  std::vector<ReturnEntry> out;
  for (const auto& e : entries) {
    if (e.s % 2 == 0) out.push_back({e.s / 2, e.value, e.std_error, e.n});
  }
  return out;
}

namespace {

struct LocalGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> nbr;  // positive off-diagonal weights
  std::vector<double> self;
  std::vector<double> total;
};

LocalGraph local_graph(const WeightedOceanGraph& graph) {
  LocalGraph g;
  g.nbr.resize(graph.size());
  g.self.assign(graph.size(), 0.0);
  g.total.resize(graph.size());
  for (std::uint32_t i = 0; i < graph.size(); ++i) {
    const VertexId x = graph.vertices()[i];
    g.total[i] = graph.vertex_weight(x);
    for (const OceanEdge& e : graph.edges(x)) {
      if (e.to == x) {
        g.self[i] = e.weight;
      } else if (e.weight > 0.0) {
        g.nbr[i].push_back({graph.index(e.to), e.weight});
      }
    }
  }
  return g;
}

class ConnectedSetSearch {
 public:
  ConnectedSetSearch(const LocalGraph& g, std::size_t max_size)
      : g_(g), max_size_(max_size), cover_(g.nbr.size(), 0), in_set_(g.nbr.size(), false) {}

  IsoperimetricResult run() {
    for (std::uint32_t v = 0; v < g_.nbr.size(); ++v) {
      root_ = v;
      std::vector<std::uint32_t> ext;
      for (const auto& [u, w] : g_.nbr[v]) {
        if (u > v) ext.push_back(u);
      }
      push(v);
      extend(std::move(ext));
      pop(v);
    }
    return best_;
  }

 private:
  void push(std::uint32_t v) {
    set_.push_back(v);
    in_set_[v] = true;
    ++cover_[v];
    for (const auto& [u, w] : g_.nbr[v]) ++cover_[u];
  }

  void pop(std::uint32_t v) {
    set_.pop_back();
    in_set_[v] = false;
    --cover_[v];
    for (const auto& [u, w] : g_.nbr[v]) --cover_[u];
  }

  void visit() {
    if (++best_.sets_explored > kIsoperimetricBudget) {
      throw Error(ErrorKind::kBudgetExceeded, "isoperimetric enumeration exceeded " +
                                                  std::to_string(kIsoperimetricBudget) + " sets");
    }
    double boundary = 0.0;
    double volume = 0.0;
    for (std::uint32_t x : set_) {
      volume += g_.total[x];
      double inside = g_.self[x];
      for (const auto& [u, w] : g_.nbr[x]) {
        if (in_set_[u]) inside += w;
      }
      boundary += g_.total[x] - inside;
    }
    const double ratio = boundary / volume;
    if (ratio < best_.ratio) {
      best_.ratio = ratio;
      best_.argmin = set_;
    }
  }

  // Each connected set is produced once, from its smallest vertex.
  void extend(std::vector<std::uint32_t> ext) {
    visit();
    if (set_.size() == max_size_) return;
    while (!ext.empty()) {
      const std::uint32_t w = ext.back();
      ext.pop_back();
      std::vector<std::uint32_t> next = ext;
      for (const auto& [u, weight] : g_.nbr[w]) {
        if (u > root_ && cover_[u] == 0) next.push_back(u);
      }
      push(w);
      extend(std::move(next));
      pop(w);
    }
  }

  const LocalGraph& g_;
  std::size_t max_size_;
  std::vector<std::uint32_t> cover_;
  std::vector<bool> in_set_;
  std::vector<std::uint32_t> set_;
  std::uint32_t root_ = 0;
  IsoperimetricResult best_{std::numeric_limits<double>::infinity(), {}, 0};
};

std::vector<double> inverse_degrees(const RootedTree& tree) {
  std::vector<double> inv(tree.size());
  for (VertexId v = 0; v < tree.size(); ++v) {
    const std::uint32_t d = tree.degree(v);
    if (d == 0) throw Error(ErrorKind::kInvalidArgument, "walk undefined on an isolated vertex");
    inv[v] = 1.0 / d;
  }
  return inv;
}

HeatKernel propagate(const RootedTree& tree, VertexId start, std::uint32_t s_max) {
  const auto inv = inverse_degrees(tree);
  std::vector<double> p(tree.size(), 0.0);
  std::vector<double> next(tree.size(), 0.0);
  p[start] = 1.0;
  HeatKernel out;
  out.returns.reserve(s_max + 1);
  out.mass.reserve(s_max + 1);
  out.returns.push_back(1.0);
  out.mass.push_back(1.0);
  for (std::uint32_t s = 1; s <= s_max; ++s) {
    double mass = 0.0;
    for (VertexId y = 0; y < tree.size(); ++y) {
      double acc = 0.0;
      tree.for_each_neighbor(y, [&](VertexId x) { acc += p[x] * inv[x]; });
      next[y] = acc;
      mass += acc;
    }
    std::swap(p, next);
    out.returns.push_back(p[start]);
    out.mass.push_back(mass);
  }
  return out;
}

ReturnSeries to_series(const HeatKernel& hk) {
  ReturnSeries series;
  for (std::size_t s = 0; s < hk.returns.size(); ++s) {
    series.entries.push_back({static_cast<std::uint32_t>(s), hk.returns[s], 0.0, 1});
  }
  return series;
}

}  // namespace

IsoperimetricResult isoperimetric_bruteforce(const WeightedOceanGraph& graph, std::size_t max_size) {
  if (max_size == 0) throw Error(ErrorKind::kInvalidArgument, "max_size must be positive");
  const LocalGraph g = local_graph(graph);
  IsoperimetricResult r = ConnectedSetSearch(g, max_size).run();
  for (auto& v : r.argmin) v = graph.vertices()[v];
  std::sort(r.argmin.begin(), r.argmin.end());
  return r;
}

std::vector<double> symmetrized_kernel(const WeightedOceanGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<double> a(n * n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    const VertexId x = graph.vertices()[i];
    for (const OceanEdge& e : graph.edges(x)) {
      const std::uint32_t j = graph.index(e.to);
      a[i * n + j] = e.weight / std::sqrt(graph.vertex_weight(x) * graph.vertex_weight(e.to));
    }
  }
  return a;
}

OperatorNorm operator_norm(const WeightedOceanGraph& graph, std::uint32_t max_iters, double tol) {
  const std::size_t n = graph.size();
  // Sparse rows of D^(-1/2) W D^(-1/2).
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const VertexId x = graph.vertices()[i];
    if (!(graph.vertex_weight(x) > 0.0)) throw Error(ErrorKind::kInvalidArgument, "vertex with zero weight");
    for (const OceanEdge& e : graph.edges(x)) {
      rows[i].push_back({graph.index(e.to), e.weight / std::sqrt(graph.vertex_weight(x) * graph.vertex_weight(e.to))});
    }
  }
  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& [j, a] : rows[i]) acc += a * in[j];
      out[i] = acc;
    }
  };
  auto normalise = [](std::vector<double>& v) {
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const double norm = std::sqrt(norm2);
    for (double& x : v) x /= norm;
    return norm;
  };

  PhiloxStream rng(0x6f70e7a1u, 0, 0, 0);
  std::vector<double> v(n);
  for (double& x : v) x = 0.5 + rng.uniform();
  normalise(v);
  std::vector<double> av(n);
  std::vector<double> aav(n);
  double mu_prev = -1.0;
  for (std::uint32_t it = 1; it <= max_iters; ++it) {
    apply(v, av);
    apply(av, aav);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += v[i] * aav[i];
    v = aav;
    if (normalise(v) == 0.0) return {0.0, 0.0, it, false};
    if (std::abs(mu - mu_prev) <= tol * std::max(mu, 1e-300)) {
      const double norm = std::sqrt(std::max(mu, 0.0));
      return {norm, mu, it, norm >= 1.0 - 1e-12};
    }
    mu_prev = mu;
  }
  throw Error(ErrorKind::kNonConvergence, "power iteration did not converge in " + std::to_string(max_iters) +
                                              " iterations; last Rayleigh quotient " + std::to_string(mu_prev));
}

HeatKernel heat_kernel(const RootedTree& tree, VertexId start, std::uint32_t s_max) {
  tree.check_vertex(start);
  // Distance from start to the nearest vertex carrying frontier half-edges.
  std::vector<std::uint32_t> dist(tree.size(), std::numeric_limits<std::uint32_t>::max());
  std::deque<VertexId> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    if (tree.frontier_extra(u) > 0) {
      if (dist[u] < s_max) {
        throw Error(ErrorKind::kDepthExceeded, "walk can leave through the frontier at step " + std::to_string(dist[u] + 1) +
                                                   ", within the " + std::to_string(s_max) + " requested");
      }
      break;
    }
    tree.for_each_neighbor(u, [&](VertexId w) {
      if (dist[w] == std::numeric_limits<std::uint32_t>::max()) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    });
  }
  return propagate(tree, start, s_max);
}

ReturnSeries heat_kernel_series(const RootedTree& tree, VertexId start, std::uint32_t s_max) {
  return to_series(heat_kernel(tree, start, s_max));
}

HeatKernel root_return_leaky(const RootedTree& tree, std::uint32_t s_max) {
  if (auto cap = tree.depth_cap(); cap && s_max > 2 * std::uint64_t{*cap} + 1) {
    throw Error(ErrorKind::kDepthExceeded, "leaky root returns are exact only to walk time " +
                                               std::to_string(2 * std::uint64_t{*cap} + 1));
  }
  return propagate(tree, 0, s_max);
}

LumpedTree LumpedTree::from_tree(const RootedTree& tree) {
  // Canonical class of every subtree, bottom-up.
  std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> classes;
  std::vector<std::uint32_t> cls(tree.size());
  for (std::size_t i = tree.size(); i-- > 0;) {
    const auto v = static_cast<VertexId>(i);
    std::vector<std::uint32_t> key;
    for (VertexId c : tree.children(v)) key.push_back(cls[c]);
    std::sort(key.begin(), key.end());
    auto [it, inserted] =
        classes.try_emplace({tree.frontier_extra(v), std::move(key)}, static_cast<std::uint32_t>(classes.size()));
    cls[v] = it->second;
  }

  LumpedTree out;
  std::vector<VertexId> rep{0};
  out.nodes_.push_back({kNoVertex, 1, tree.degree(0), tree.frontier_extra(0), 0});
  out.children_.emplace_back();
  for (std::uint32_t i = 0; i < out.nodes_.size(); ++i) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> groups;  // (class, count)
    std::vector<VertexId> group_rep;
    for (VertexId c : tree.children(rep[i])) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == cls[c]; });
      if (it == groups.end()) {
        groups.push_back({cls[c], 1});
        group_rep.push_back(c);
      } else {
        ++it->second;
      }
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const VertexId c = group_rep[g];
      out.children_[i].push_back(static_cast<std::uint32_t>(out.nodes_.size()));
      out.nodes_.push_back({i, groups[g].second, tree.degree(c), tree.frontier_extra(c), tree.depth(c)});
      out.children_.emplace_back();
      rep.push_back(c);
    }
  }
  return out;
}

LumpedTree LumpedTree::regular(std::uint32_t branching, std::uint32_t depth) {
  if (branching == 0) throw Error(ErrorKind::kInvalidArgument, "branching must be positive");
  LumpedTree out;
  for (std::uint32_t d = 0; d <= depth; ++d) {
    const bool root = d == 0;
    out.nodes_.push_back({root ? kNoVertex : d - 1, root ? 1 : branching, branching + (root ? 0 : 1),
                          d == depth ? branching : 0, d});
    out.children_.emplace_back();
    if (!root) out.children_[d - 1].push_back(d);
  }
  return out;
}

std::uint32_t LumpedTree::depth_cap() const {
  std::uint32_t cap = std::numeric_limits<std::uint32_t>::max();
  for (const Node& n : nodes_) {
    if (n.frontier > 0) cap = std::min(cap, n.depth);
  }
  return cap;
}

HeatKernel lumped_root_return(const LumpedTree& tree, std::uint32_t s_max, bool leaky) {
  const std::uint64_t cap = tree.depth_cap();
  if (leaky ? s_max > 2 * cap + 1 : s_max > cap) {
    throw Error(ErrorKind::kDepthExceeded, "lumped tree too shallow for walk time " + std::to_string(s_max));
  }
  const std::size_t n = tree.size();
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (tree.nodes_[i].degree == 0) throw Error(ErrorKind::kInvalidArgument, "walk undefined on an isolated vertex");
    inv[i] = 1.0 / tree.nodes_[i].degree;
  }
  std::vector<double> p(n, 0.0);
  std::vector<double> next(n, 0.0);
  p[0] = 1.0;
  HeatKernel out;
  out.returns.push_back(1.0);
  out.mass.push_back(1.0);
  for (std::uint32_t s = 1; s <= s_max; ++s) {
    double mass = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const auto& node = tree.nodes_[y];
      double acc = 0.0;
      if (node.parent != kNoVertex) acc += p[node.parent] * inv[node.parent] * node.multiplicity;
      for (std::uint32_t c : tree.children_[y]) acc += p[c] * inv[c];
      next[y] = acc;
      mass += acc;
    }
    std::swap(p, next);
    out.returns.push_back(p[0]);
    out.mass.push_back(mass);
  }
  return out;
}

std::vector<double> restrict_vector(std::span<const double> u, const IslandDecomposition& decomp) {
  if (u.size() != decomp.island_of.size()) throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
  std::vector<double> out;
  for (std::size_t v = 0; v < u.size(); ++v) {
    if (decomp.island_of[v] < 0) out.push_back(u[v]);
  }
  return out;
}

std::vector<double> embed_vector(std::span<const double> v, const IslandDecomposition& decomp) {
  std::vector<double> out(decomp.island_of.size(), 0.0);
  std::size_t k = 0;
  for (std::size_t x = 0; x < out.size(); ++x) {
    if (decomp.island_of[x] >= 0) continue;
    if (k == v.size()) throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
    out[x] = v[k++];
  }
  if (k != v.size()) throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
  return out;
}

double ocean_inner_product(const WeightedOceanGraph& graph, std::span<const double> f, std::span<const double> g) {
  if (f.size() != graph.size() || g.size() != graph.size()) {
    throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += graph.vertex_weight(graph.vertices()[i]) * f[i] * g[i];
  return acc;
}

double tree_inner_product(const RootedTree& tree, std::span<const double> u, std::span<const double> v) {
  if (u.size() != tree.size() || v.size() != tree.size()) {
    throw Error(ErrorKind::kInvalidArgument, "dimension mismatch");
  }
  double acc = 0.0;
  for (VertexId x = 0; x < tree.size(); ++x) acc += tree.degree(x) * u[x] * v[x];
  return acc;
}

}  // namespace gwhk
