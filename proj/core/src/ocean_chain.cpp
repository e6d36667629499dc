#include "gwhk/ocean_chain.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "gwhk/error.hpp"

namespace gwhk {

namespace {

constexpr double kMinRcond = 1e-14;

void check_decomposition(const RootedTree& tree, const IslandDecomposition& decomp) {
  if (decomp.island_of.size() != tree.size()) {
    throw Error(ErrorKind::kInvalidArgument, "decomposition does not match tree");
  }
}

// Solves A X = B for sparse A, throwing kSingularSolve on failure.
Eigen::MatrixXd sparse_solve(const Eigen::SparseMatrix<double>& a, const Eigen::MatrixXd& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::kSingularSolve, "sparse LU failed: " + lu.lastErrorMessage());
  Eigen::MatrixXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw Error(ErrorKind::kSingularSolve, "sparse solve failed");
  return x;
}

}  // namespace

std::uint32_t WeightedOceanGraph::index(VertexId v) const {
  if (!contains(v)) throw Error(ErrorKind::kUnknownVertex, "vertex " + std::to_string(v) + " is not an ocean vertex");
  return static_cast<std::uint32_t>(local_[v]);
}

double WeightedOceanGraph::weight(VertexId x, VertexId y) const {
  const auto& row = adjacency_[index(x)];
  index(y);
  auto it = std::lower_bound(row.begin(), row.end(), y, [](const OceanEdge& e, VertexId v) { return e.to < v; });
  return (it != row.end() && it->to == y) ? it->weight : 0.0;
}

WeightedOceanGraph build_ocean_weights(const RootedTree& tree, const IslandDecomposition& decomp) {
  check_decomposition(tree, decomp);
  WeightedOceanGraph g;
  g.vertices_ = decomp.ocean_vertices();
  if (g.vertices_.empty()) throw Error(ErrorKind::kInvalidArgument, "ocean is empty");
  g.local_.assign(tree.size(), -1);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) g.local_[g.vertices_[i]] = static_cast<std::int32_t>(i);

  std::vector<std::map<VertexId, double>> rows(g.vertices_.size());
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    const VertexId x = g.vertices_[i];
    tree.for_each_neighbor(x, [&](VertexId u) {
      if (decomp.in_ocean(u)) rows[i][u] += 1.0;
    });
  }

  for (std::size_t k = 0; k < decomp.islands.size(); ++k) {
    const auto& island = decomp.islands[k].vertices;
    std::map<VertexId, Eigen::Index> pos;
    for (std::size_t i = 0; i < island.size(); ++i) {
      if (tree.frontier_extra(island[i]) > 0) {
        throw Error(ErrorKind::kClippedIsland,
                    "island " + std::to_string(k) + " reaches the frontier at vertex " + std::to_string(island[i]));
      }
      pos[island[i]] = static_cast<Eigen::Index>(i);
    }
    std::map<VertexId, Eigen::Index> exit_pos;
    for (VertexId v : island) {
      tree.for_each_neighbor(v, [&](VertexId u) {
        if (decomp.in_ocean(u)) exit_pos.emplace(u, 0);
      });
    }
    Eigen::Index next = 0;
    for (auto& [u, idx] : exit_pos) idx = next++;

    const auto m = static_cast<Eigen::Index>(island.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, next);
    for (Eigen::Index i = 0; i < m; ++i) {
      const VertexId v = island[static_cast<std::size_t>(i)];
      const double step = 1.0 / tree.degree(v);
      tree.for_each_neighbor(v, [&](VertexId u) {
        if (decomp.in_ocean(u)) {
          b(i, exit_pos.at(u)) += step;
        } else {
          a(i, pos.at(u)) -= step;
        }
      });
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (!(lu.rcond() > kMinRcond)) {
      throw Error(ErrorKind::kSingularSolve, "absorbing chain of island " + std::to_string(k) + " is singular");
    }
    const Eigen::MatrixXd exit = lu.solve(b);
    if (!exit.allFinite()) throw Error(ErrorKind::kSingularSolve, "non-finite exit distribution");

    // Entering the island from x at u, the walk next meets the ocean at y
    // with probability exit(u, y).
    for (const auto& [x, unused] : exit_pos) {
      auto& row = rows[static_cast<std::size_t>(g.local_[x])];
      tree.for_each_neighbor(x, [&](VertexId u) {
        if (decomp.island_of[u] != static_cast<std::int32_t>(k)) return;
        const Eigen::Index r = pos.at(u);
        for (const auto& [y, col] : exit_pos) row[y] += exit(r, col);
      });
    }
  }

  g.adjacency_.resize(g.vertices_.size());
  g.frontier_.resize(g.vertices_.size());
  g.total_.resize(g.vertices_.size());
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    double total = 0.0;
    for (const auto& [y, w] : rows[i]) {
      g.adjacency_[i].push_back({y, w});
      total += w;
    }
    g.frontier_[i] = tree.frontier_extra(g.vertices_[i]);
    g.total_[i] = total + g.frontier_[i];
  }
  return g;
}

std::optional<VertexId> induced_step(const WeightedOceanGraph& graph, VertexId x, PhiloxStream& rng) {
  const double total = graph.vertex_weight(x);
  double target = rng.uniform() * total;
  for (const OceanEdge& e : graph.edges(x)) {
    if (target < e.weight) return e.to;
    target -= e.weight;
  }
  if (graph.frontier_weight(x) > 0.0) return std::nullopt;
  // Rounding pushed the draw past the last edge.
  return graph.edges(x).back().to;
}

HittingPair hitting_equivalence(const RootedTree& tree, const IslandDecomposition& decomp,
                                const WeightedOceanGraph& graph, VertexId x, VertexId y) {
  check_decomposition(tree, decomp);
  graph.index(x);
  graph.index(y);
  if (graph.tree_size() != tree.size()) throw Error(ErrorKind::kInvalidArgument, "ocean graph does not match tree");
  if (x == y) return {1.0, 1.0};

  // Tree walk: unknowns are all vertices except y.
  auto tree_index = [y](VertexId v) { return static_cast<Eigen::Index>(v < y ? v : v - 1); };
  const auto n = static_cast<Eigen::Index>(tree.size() - 1);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 1);
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (v == y) continue;
    const Eigen::Index r = tree_index(v);
    entries.emplace_back(r, r, static_cast<double>(tree.degree(v)));
    tree.for_each_neighbor(v, [&](VertexId u) {
      if (u == y) {
        rhs(r, 0) += 1.0;
      } else {
        entries.emplace_back(r, tree_index(u), -1.0);
      }
    });
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  const double p_srw = sparse_solve(a, rhs)(tree_index(x), 0);

  // Induced chain on the ocean graph.
  const std::uint32_t iy = graph.index(y);
  auto ocean_index = [iy](std::uint32_t i) { return static_cast<Eigen::Index>(i < iy ? i : i - 1); };
  const auto m = static_cast<Eigen::Index>(graph.size() - 1);
  entries.clear();
  Eigen::MatrixXd rhs_w = Eigen::MatrixXd::Zero(m, 1);
  for (VertexId v : graph.vertices()) {
    if (v == y) continue;
    const Eigen::Index r = ocean_index(graph.index(v));
    double diag = graph.vertex_weight(v);
    for (const OceanEdge& e : graph.edges(v)) {
      if (e.to == v) {
        diag -= e.weight;
      } else if (e.to == y) {
        rhs_w(r, 0) += e.weight;
      } else {
        entries.emplace_back(r, ocean_index(graph.index(e.to)), -e.weight);
      }
    }
    entries.emplace_back(r, r, diag);
  }
  Eigen::SparseMatrix<double> aw(m, m);
  aw.setFromTriplets(entries.begin(), entries.end());
  const double p_induced = sparse_solve(aw, rhs_w)(ocean_index(graph.index(x)), 0);
  return {p_srw, p_induced};
}

EscapeBracket escape_probability_bracket(const RootedTree& tree, const IslandDecomposition& decomp, VertexId x,
                                         std::span<const std::size_t> islands, std::uint32_t depth_guard) {
  check_decomposition(tree, decomp);
  tree.check_vertex(x);
  if (islands.empty()) throw Error(ErrorKind::kInvalidArgument, "no islands chosen");
  const double q = decomp.q.to_double();
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::kInvalidArgument, "q must lie in (0,1)");
  if (tree.depth(x) > depth_guard) throw Error(ErrorKind::kInvalidArgument, "start vertex lies beyond the depth guard");

  std::vector<bool> target(tree.size(), false);
  std::vector<VertexId> members;
  for (std::size_t k : islands) {
    if (k >= decomp.islands.size()) throw Error(ErrorKind::kInvalidArgument, "island index out of range");
    for (VertexId v : decomp.islands[k].vertices) {
      if (target[v]) throw Error(ErrorKind::kInvalidArgument, "island chosen twice");
      target[v] = true;
      members.push_back(v);
    }
  }
  if (target[x]) throw Error(ErrorKind::kInvalidArgument, "start vertex lies in a chosen island");

  EscapeBracket out{};
  out.j = islands.size();
  out.n = q_distance(tree, decomp, x, members);
  for (VertexId v : decomp.ocean_vertices()) out.z = std::max(out.z, tree.degree(v));

  // Transient vertices: not a target, not beyond the guard.
  std::vector<Eigen::Index> idx(tree.size(), -1);
  Eigen::Index n = 0;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (!target[v] && tree.depth(v) <= depth_guard) idx[v] = n++;
  }
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  for (VertexId v = 0; v < tree.size(); ++v) {
    const Eigen::Index r = idx[v];
    if (r < 0) continue;
    entries.emplace_back(r, r, static_cast<double>(tree.degree(v)));
    rhs(r, 1) += tree.frontier_extra(v);
    tree.for_each_neighbor(v, [&](VertexId u) {
      if (target[u]) {
        rhs(r, 0) += 1.0;
      } else if (idx[u] < 0) {
        rhs(r, 1) += 1.0;
      } else {
        entries.emplace_back(r, idx[u], -1.0);
      }
    });
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  const Eigen::MatrixXd sol = sparse_solve(a, rhs);
  out.lower = sol(idx[x], 0);
  out.upper = out.lower + sol(idx[x], 1);
  out.paper_bound = 18.0 / (q * q) * std::pow(1.0 - q * q / 9.0, out.n / 2.0 - 1.0) *
                    std::sqrt(static_cast<double>(out.z) * static_cast<double>(out.j));
  return out;
}

}  // namespace gwhk
