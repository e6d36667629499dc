#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwhk/rational.hpp"

namespace gwhk {

/// Finite-support law of the number of children of a vertex.
class OffspringDistribution {
 public:
  struct Atom {
    std::uint32_t count;
    double prob;
  };

  /// Atoms with zero probability are dropped; duplicate counts are rejected.
  /// Probabilities must sum to 1 within 1e-12.
  explicit OffspringDistribution(std::vector<Atom> atoms);

  /// Exact-probability constructor; the sum must be exactly 1.
  static OffspringDistribution from_rationals(const std::vector<std::pair<std::uint32_t, Rational>>& atoms);

  /// Parses "j:p,j:p,..." with p rational ("1/5") or decimal ("0.2"). When
  /// every p is given, the sum is checked exactly.
  static OffspringDistribution parse(std::string_view text);

  /// Truncates an unbounded law once the cumulative mass exceeds 1 - 1e-12
  /// and renormalises the kept atoms.
  static OffspringDistribution from_unbounded(const std::function<double(std::uint32_t)>& pmf,
                                              std::uint32_t max_count = 1u << 20);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mean() const { return mean_; }
  bool supercritical() const { return mean_ > 1.0; }
  std::uint32_t max_count() const { return atoms_.back().count; }
  bool degenerate() const { return atoms_.size() == 1; }
  double prob(std::uint32_t count) const;

  /// Probability generating function f(s) = sum_j p_j s^j.
  double pgf(double s) const;

  /// Inverse-CDF draw from a uniform in [0, 1).
  std::uint32_t draw(double u) const;

  /// Canonical text form, e.g. "0:0.20000000000000001,2:0.80000000000000004".
  std::string str() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  std::optional<std::vector<Rational>> exact_;
};

struct ExtinctionResult {
  double extinction;  ///< smallest fixed point s* of the pgf in [0, 1]
  double survival;    ///< g_inf = 1 - s*
};

ExtinctionResult extinction_probability(const OffspringDistribution& dist);

}  // namespace gwhk
