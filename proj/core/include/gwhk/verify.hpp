#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwhk/isolation.hpp"
#include "gwhk/rational.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t instances = 0;
  double worst = 0.0;  ///< largest observed deviation, where meaningful
  std::string detail;  ///< first failure (instance and seed), if any
};

/// The isolation parameters exercised by the exact battery.
std::vector<Rational> battery_qs();

/// Random recursive trees with 1..max_vertices vertices and random frontier
/// half-edges (at least one per tree). Pure function of (seed, count).
std::vector<RootedTree> small_tree_corpus(std::uint64_t seed, std::size_t count, std::size_t max_vertices);

struct InRegimeInstance {
  RootedTree tree;
  IslandDecomposition decomp;
  std::uint64_t seed;
  std::uint32_t index;
};

/// Trees whose islands at q avoid the frontier, with at least one island and
/// a nonempty ocean. Vertex counts lie in [min_vertices, max_vertices].
std::vector<InRegimeInstance> in_regime_corpus(std::uint64_t seed, std::size_t count, const Rational& q,
                                               std::size_t min_vertices, std::size_t max_vertices);

CheckResult check_oracle_equivalence(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs);
CheckResult check_additivity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                             std::uint64_t seed);
CheckResult check_tree_identity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                                std::uint64_t seed);
CheckResult check_core_monotonicity(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs,
                                    std::uint64_t seed);
CheckResult check_union_closure(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs);
CheckResult check_nesting(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs);
CheckResult check_sinking(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs);
CheckResult check_island_invariants(const std::vector<RootedTree>& corpus, const std::vector<Rational>& qs);

/// Symmetry, conservation, edge domination and diagonal positivity of w_q.
std::vector<CheckResult> check_ocean_invariants(const std::vector<InRegimeInstance>& instances);
CheckResult check_hitting_equivalence(const std::vector<InRegimeInstance>& instances, std::uint64_t seed);
CheckResult check_restriction_adjoint(const std::vector<InRegimeInstance>& instances, std::uint64_t seed);
/// Isoperimetric lower bound and operator-norm upper bound on each instance.
std::vector<CheckResult> check_spectral_sandwich(const std::vector<InRegimeInstance>& instances,
                                                 std::size_t max_set_size);

/// Mass drift, parity, deepening invariance and P[X_2 = o] on the binary tree.
std::vector<CheckResult> check_heat_kernel(std::uint32_t s_max);
/// Island representation of regularised trees.
CheckResult check_regularise(std::uint64_t seed, std::size_t count);

enum class CorpusSize { kSmall, kFull };

/// Every battery above with sizes chosen by `size`.
std::vector<CheckResult> run_verification(CorpusSize size, std::uint64_t seed);

}  // namespace gwhk
