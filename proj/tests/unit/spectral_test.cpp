#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fixtures.hpp"
#include "gwhk/error.hpp"
#include "gwhk/rng.hpp"
#include "gwhk/spectral.hpp"
#include "gwhk/tree.hpp"
#include "gwhk/verify.hpp"

using namespace gwhk;

namespace {

// Root returns on the infinite binary tree from the distance-to-root chain:
// 0 -> 1 surely; from d >= 1 up with probability 1/3, down with 2/3.
std::vector<double> binary_chain_returns(std::uint32_t s_max) {
  std::vector<double> p(s_max + 2, 0.0), next(s_max + 2);
  p[0] = 1.0;
  std::vector<double> out{1.0};
  for (std::uint32_t s = 1; s <= s_max; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    next[1] += p[0];
    for (std::uint32_t d = 1; d <= s_max; ++d) {
      next[d - 1] += p[d] / 3.0;
      next[d + 1] += 2.0 * p[d] / 3.0;
    }
    p.swap(next);
    out.push_back(p[0]);
  }
  return out;
}

// Lone ocean vertex x (2 frontier) with a pendant island below it.
RootedTree lone_ocean_vertex() {
  TreeBuilder b(2);
  const auto v = b.add_child(0);
  b.add_child(v);
  b.add_child(v);
  return b.build();
}

}  // namespace

TEST(Isoperimetric, SingletonsHaveRatioOne) {
  const auto t = regular_tree(2, 3);
  const auto g = build_ocean_weights(t, decompose_islands(t, Rational(1, 2)));
  EXPECT_DOUBLE_EQ(isoperimetric_bruteforce(g, 1).ratio, 1.0);
}

TEST(Isoperimetric, BinaryTreeAboveOneThird) {
  const auto t = regular_tree(2, 3);
  const auto g = build_ocean_weights(t, decompose_islands(t, Rational(1, 2)));
  const auto r = isoperimetric_bruteforce(g, t.size());
  EXPECT_GE(r.ratio, 1.0 / 3.0);
  EXPECT_NEAR(r.ratio, 16.0 / 44.0, 1e-12);
  EXPECT_EQ(r.argmin.size(), t.size());
}

TEST(Isoperimetric, SelfLoopsAreNotBoundary) {
  const auto t = lone_ocean_vertex();
  const auto g = build_ocean_weights(t, decompose_islands(t, Rational(1, 2)));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(isoperimetric_bruteforce(g, 1).ratio, 2.0 / 3.0, 1e-12);
}

TEST(Isoperimetric, InRegimeLowerBound) {
  for (const Rational q : {Rational(1, 10), Rational(1, 5)}) {
    for (const auto& inst : in_regime_corpus(3, 10, q, 8, 25)) {
      const auto g = build_ocean_weights(inst.tree, inst.decomp);
      const double qd = q.to_double();
      EXPECT_GE(isoperimetric_bruteforce(g, 10).ratio, qd / (qd + 2) - 1e-12);
    }
  }
}

TEST(OperatorNorm, LoneOceanVertex) {
  const auto t = lone_ocean_vertex();
  const auto d = decompose_islands(t, Rational(1, 2));
  ASSERT_EQ(d.islands.size(), 1u);
  const auto g = build_ocean_weights(t, d);
  EXPECT_NEAR(g.weight(0, 0), 1.0, 1e-14);
  const auto k = symmetrized_kernel(g);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_NEAR(k[0], 1.0 / 3.0, 1e-14);
  const auto n = operator_norm(g);
  EXPECT_NEAR(n.norm, 1.0 / 3.0, 1e-9);
  EXPECT_FALSE(n.degenerate);
}

TEST(OperatorNorm, SingleEdge) {
  TreeBuilder b(1);
  b.add_child(0, 1);
  const auto t = b.build();
  const auto g = build_ocean_weights(t, decompose_islands(t, Rational(1, 2)));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_NEAR(operator_norm(g).norm, 0.5, 1e-9);
}

TEST(OperatorNorm, MatchesEigenSolver) {
  for (const Rational q : {Rational(1, 10), Rational(1, 5), Rational(1, 2)}) {
    for (const auto& inst : in_regime_corpus(12, 15, q, 10, 80)) {
      const auto g = build_ocean_weights(inst.tree, inst.decomp);
      const auto k = symmetrized_kernel(g);
      const auto n = static_cast<Eigen::Index>(g.size());
      const Eigen::Map<const Eigen::MatrixXd> m(k.data(), n, n);
      ASSERT_LT((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_NEAR(operator_norm(g, 100000, 1e-13).norm, rho, 1e-6) << "seed " << inst.seed << " index " << inst.index;
      const double qd = q.to_double();
      EXPECT_LE(rho, std::sqrt(1 - std::pow(qd / (qd + 2), 2)) + 1e-9);
    }
  }
}

TEST(HeatKernel, StartAndParity) {
  const auto t = regular_tree(2, 10);
  const auto hk = heat_kernel(t, 0, 10);
  EXPECT_EQ(hk.returns[0], 1.0);
  EXPECT_DOUBLE_EQ(hk.returns[2], 1.0 / 3.0);
  for (std::uint32_t s = 1; s <= 10; s += 2) EXPECT_EQ(hk.returns[s], 0.0);
  for (double m : hk.mass) EXPECT_NEAR(m, 1.0, 1e-12);
}

TEST(HeatKernel, MatchesDistanceChain) {
  const auto chain = binary_chain_returns(400);
  const auto hk = heat_kernel(regular_tree(2, 12), 0, 12);
  for (std::uint32_t s = 0; s <= 12; ++s) EXPECT_NEAR(hk.returns[s], chain[s], 1e-15);
  const auto lumped = lumped_root_return(LumpedTree::regular(2, 401), 400, false);
  for (std::uint32_t s = 0; s <= 400; ++s) {
    EXPECT_NEAR(lumped.returns[s], chain[s], 1e-12 * chain[s]) << s;
    EXPECT_NEAR(lumped.mass[s], 1.0, 1e-12);
  }
  // R_t ~ C t^(-3/2) (8/9)^t with t = s/2.
  auto f = [&](std::uint32_t t) { return -std::log(chain[2 * t]) - 1.5 * std::log(static_cast<double>(t)); };
  EXPECT_NEAR((f(200) - f(100)) / 100.0, std::log(9.0 / 8.0), 1e-3);
}

TEST(HeatKernel, StrictPreconditions) {
  const auto t = regular_tree(2, 4);
  EXPECT_NO_THROW(heat_kernel(t, 0, 4));
  EXPECT_THROW(heat_kernel(t, 0, 5), Error);
  EXPECT_THROW(heat_kernel(t, 99, 2), Error);
  TreeBuilder lone;
  EXPECT_THROW(heat_kernel(lone.build(), 0, 2), Error);
}

TEST(HeatKernel, NonRootStart) {
  // From a depth-1 vertex of the binary tree: 2-step returns are 1/3 * (1/2 + 2/3).
  const auto t = regular_tree(2, 8);
  const auto hk = heat_kernel(t, 1, 4);
  EXPECT_NEAR(hk.returns[2], (1.0 / 3.0) * (1.0 / 2.0) + (2.0 / 3.0) * (1.0 / 3.0), 1e-15);
  const auto series = heat_kernel_series(t, 1, 4);
  ASSERT_EQ(series.entries.size(), 5u);
  EXPECT_EQ(series.entries[2].value, hk.returns[2]);
  EXPECT_EQ(series.entries[2].n, 1u);
  EXPECT_EQ(series.even_entries().size(), 3u);
  EXPECT_EQ(series.even_entries()[1].s, 1u);
}

TEST(HeatKernel, LeakyMatchesDeeperStrict) {
  const auto dist = OffspringDistribution::parse("0:3/10,1:1/5,2:3/10,3:1/5");
  for (std::uint32_t i = 0; i < 15; ++i) {
    const TreeSampleSpec deep{dist, 12, true, 3, i};
    const auto attempt = first_surviving_attempt(deep);
    const auto big = sample_attempt(deep, attempt);
    const auto strict = heat_kernel(big, 0, 11);
    for (std::uint32_t cap : {5u, 8u}) {
      const auto small = truncate(big, cap);
      const auto leaky = root_return_leaky(small, 2 * cap + 1);
      for (std::uint32_t s = 0; s <= 2 * cap + 1 && s <= 11; ++s) {
        EXPECT_NEAR(leaky.returns[s], strict.returns[s], 1e-15) << i << " " << cap << " " << s;
      }
      EXPECT_THROW(root_return_leaky(small, 2 * cap + 2), Error);
      const auto lumped = lumped_root_return(LumpedTree::from_tree(small), 2 * cap + 1, true);
      for (std::uint32_t s = 0; s <= 2 * cap + 1; ++s) EXPECT_NEAR(lumped.returns[s], leaky.returns[s], 1e-14);
    }
  }
}

TEST(LumpedTree, QuotientSizes) {
  EXPECT_EQ(LumpedTree::regular(2, 50).size(), 51u);
  EXPECT_EQ(LumpedTree::from_tree(regular_tree(3, 4)).size(), 5u);
  EXPECT_EQ(LumpedTree::regular(2, 50).depth_cap(), 50u);
  const auto n = LumpedTree::from_tree(test::FiveVertexTree::build());
  EXPECT_EQ(n.depth_cap(), 0u);
}

TEST(Restriction, EmbedRestrictIdentity) {
  const auto t = test::FiveVertexTree::build();
  const auto d = decompose_islands(t, Rational(1, 2));
  const std::vector<double> v{2.5, -1.0};
  EXPECT_EQ(restrict_vector(embed_vector(v, d), d), v);
  std::vector<double> island_indicator(t.size());
  for (VertexId x : d.island_union()) island_indicator[x] = 1.0;
  EXPECT_EQ(restrict_vector(island_indicator, d), (std::vector<double>{0.0, 0.0}));
}

TEST(Restriction, Adjoint) {
  const auto inst = in_regime_corpus(2, 1, Rational(1, 2), 20, 40).front();
  const auto g = build_ocean_weights(inst.tree, inst.decomp);
  PhiloxStream rng(1, 2, 3, 4);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> u(inst.tree.size()), v(g.size());
    for (auto& x : u) x = rng.uniform() - 0.5;
    for (auto& x : v) x = rng.uniform() - 0.5;
    const double lhs = ocean_inner_product(g, restrict_vector(u, inst.decomp), v);
    const double rhs = tree_inner_product(inst.tree, u, embed_vector(v, inst.decomp));
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}
