#include <gtest/gtest.h>

#include <cmath>
#include <deque>

#include "gwhk/error.hpp"
#include "gwhk/tree.hpp"

using namespace gwhk;

namespace {

OffspringDistribution law(const char* text) { return OffspringDistribution::parse(text); }

}  // namespace

TEST(RootedTree, FromParentsAndAccessors) {
  const std::vector<VertexId> parents{kNoVertex, 0, 0, 1};
  const std::vector<std::uint32_t> frontier{1, 0, 2, 0};
  const auto t = RootedTree::from_parents(parents, frontier);
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.degree(0), 3u);
  EXPECT_EQ(t.degree(1), 2u);
  EXPECT_EQ(t.degree(2), 3u);
  EXPECT_EQ(t.offspring(2), 2u);
  EXPECT_EQ(t.depth(3), 2u);
  EXPECT_EQ(t.max_depth(), 2u);
  EXPECT_EQ(t.depth_cap(), 0u);
  std::vector<VertexId> nb;
  t.for_each_neighbor(1, [&](VertexId u) { nb.push_back(u); });
  EXPECT_EQ(nb, (std::vector<VertexId>{0, 3}));
}

TEST(RootedTree, RejectsBadParents) {
  const std::vector<std::uint32_t> frontier(3);
  EXPECT_THROW(RootedTree::from_parents(std::vector<VertexId>{kNoVertex, 2, 0}, frontier), Error);
  EXPECT_THROW(RootedTree::from_parents(std::vector<VertexId>{0, 0, 0}, frontier), Error);
  EXPECT_THROW(RootedTree::from_parents(std::vector<VertexId>{kNoVertex, 0}, frontier), Error);
}

TEST(RegularTree, Sizes) {
  const auto t = regular_tree(2, 3);
  EXPECT_EQ(t.size(), 15u);
  for (VertexId v = 0; v < t.size(); ++v) EXPECT_EQ(t.frontier_extra(v), t.depth(v) == 3 ? 2u : 0u);
  EXPECT_TRUE(t.frontier_at_cap());
  EXPECT_EQ(t.depth_cap(), 3u);
}

TEST(Truncate, BinaryDepthOne) {
  const auto t = truncate(regular_tree(2, 4), 1);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.frontier_extra(1), 2u);
  EXPECT_EQ(t.frontier_extra(2), 2u);
}

TEST(Truncate, IdentityAtCapAndMonotone) {
  const auto t = sample_tree({law("0:1/5,2:4/5"), 7, true, 3, 0});
  EXPECT_EQ(truncate(t, 7), t);
  std::size_t prev = 0;
  for (std::uint32_t d = 0; d <= 7; ++d) {
    const auto s = truncate(t, d).size();
    EXPECT_GE(s, prev);
    prev = s;
  }
  EXPECT_THROW(truncate(t, 8), Error);
}

TEST(Serialize, SmallestTree) {
  TreeBuilder b;
  EXPECT_EQ(serialize_tree(b.build()), "gwtree v1\n0 -1 0\n");
}

TEST(Serialize, LineFormat) {
  const auto t = parse_tree("gwtree v1\n0 -1 0\n1 0 0\n2 0 0\n3 1 0\n4 1 0\n5 2 3\n");
  EXPECT_EQ(t.parent(5), 2u);
  EXPECT_EQ(t.frontier_extra(5), 3u);
}

TEST(Serialize, RoundTripWithComments) {
  const auto t = sample_tree({law("0:1/4,1:1/4,3:1/2"), 5, true, 11, 2});
  EXPECT_EQ(parse_tree(serialize_tree(t)), t);
  EXPECT_EQ(parse_tree("# header\n" + serialize_tree(t)), t);
}

TEST(Serialize, RejectsMalformed) {
  EXPECT_THROW(parse_tree(""), Error);
  EXPECT_THROW(parse_tree("gwtree v2\n0 -1 0\n"), Error);
  EXPECT_THROW(parse_tree("gwtree v1\n0 -1 0\n2 0 0\n"), Error);
  EXPECT_THROW(parse_tree("gwtree v1\n0 -1 0\n1 1 0\n"), Error);
  EXPECT_THROW(parse_tree("gwtree v1\n0 -1 x\n"), Error);
}

TEST(Sampling, DegenerateBinary) {
  const auto t = sample_tree({law("2:1"), 3, false, 0, 0});
  EXPECT_EQ(t.size(), 15u);
  for (VertexId v = 0; v < t.size(); ++v) EXPECT_EQ(t.frontier_extra(v), t.depth(v) == 3 ? 2u : 0u);
}

TEST(Sampling, Deterministic) {
  const TreeSampleSpec spec{law("0:1/5,2:4/5"), 8, true, 99, 5};
  EXPECT_EQ(sample_tree(spec), sample_tree(spec));
  auto other = spec;
  other.sample_index = 6;
  EXPECT_NE(sample_tree(spec), sample_tree(other));
}

TEST(Sampling, SurvivingTreesReachCap) {
  for (std::uint32_t i = 0; i < 20; ++i) {
    const auto t = sample_tree({law("0:1/5,2:4/5"), 6, true, 1, i});
    EXPECT_EQ(t.max_depth(), 6u);
    EXPECT_TRUE(t.frontier_at_cap());
  }
}

TEST(Sampling, MeanTruncatedSize) {
  // E|T_o6| = sum_{j<=6} 1.6^j for the unconditioned process.
  const auto dist = law("0:1/5,2:4/5");
  const int n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(sample_tree({dist, 6, false, 17, static_cast<std::uint32_t>(i)}).size());
    sum += s;
    sum_sq += s * s;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / (n - 1));
  const double expected = (std::pow(1.6, 7) - 1) / 0.6;
  EXPECT_NEAR(mean, expected, 3 * se);
}

TEST(Sampling, SurvivalRateMatchesPgfIteration) {
  const auto dist = law("0:1/5,2:4/5");
  double s = 0.0;
  for (int i = 0; i < 20; ++i) s = dist.pgf(s);
  const double p = 1.0 - s;

  const std::uint32_t n = 4000;
  std::uint64_t attempts = 0;
  for (std::uint32_t i = 0; i < n; ++i) attempts += first_surviving_attempt({dist, 20, true, 5, i}) + 1;
  const double rate = static_cast<double>(n) / static_cast<double>(attempts);
  // Attempts per sample are geometric with mean 1/p.
  const double se_mean = std::sqrt((1 - p) / (p * p) / n);
  EXPECT_NEAR(static_cast<double>(attempts) / n, 1.0 / p, 3 * se_mean);
  EXPECT_NEAR(rate, p, 0.03);
}

TEST(Sampling, SurvivesToDepthAgreesWithMaterialisedTree) {
  const TreeSampleSpec spec{law("0:1/3,1:1/3,2:1/3"), 9, false, 4, 0};
  for (std::uint32_t attempt = 0; attempt < 50; ++attempt) {
    const auto t = sample_attempt(spec, attempt);
    for (std::uint32_t d = 0; d <= 9; ++d) {
      EXPECT_EQ(survives_to_depth(spec, attempt, d), t.max_depth() >= d) << attempt << " " << d;
    }
  }
}

TEST(Sampling, RejectionBudget) {
  EXPECT_THROW(sample_tree({law("0:1/2,1:1/2"), 200, true, 0, 0}), Error);
}

TEST(LazyTree, MatchesMaterialisedTree) {
  const auto dist = law("0:1/5,1:1/5,3:3/5");
  const TreeSampleSpec spec{dist, 6, true, 21, 3};
  const std::uint32_t attempt = first_surviving_attempt(spec);
  const auto t = sample_attempt(spec, attempt);
  LazyTree lazy(dist, 21, 3, attempt);
  // BFS both trees in parallel.
  std::deque<std::pair<VertexId, VertexId>> queue{{0, LazyTree::root()}};
  std::size_t visited = 0;
  while (!queue.empty()) {
    const auto [v, w] = queue.front();
    queue.pop_front();
    ++visited;
    EXPECT_EQ(lazy.depth(w), t.depth(v));
    ASSERT_EQ(lazy.degree(w), t.degree(v));
    if (t.depth(v) == 6) continue;
    const auto kids = t.children(v);
    const std::uint32_t first = w == 0 ? 0 : 1;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const VertexId c = lazy.neighbor(w, first + static_cast<std::uint32_t>(i));
      EXPECT_EQ(lazy.neighbor(c, 0), w);
      queue.emplace_back(kids[i], c);
    }
  }
  EXPECT_EQ(visited, t.size());
}
