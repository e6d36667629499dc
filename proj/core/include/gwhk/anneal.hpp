#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gwhk/offspring.hpp"
#include "gwhk/rational.hpp"
#include "gwhk/spectral.hpp"

namespace gwhk {

enum class QMode { kFixed, kDerived, kSchedule };
enum class Estimator { kAuto, kExact, kWalks };

/// z_t: either a constant, or 3 + c3 * t^(1/k).
struct ZSchedule {
  std::optional<std::uint32_t> fixed;
  double c3 = 1.0;
  double k = 3.0;

  double value(std::uint32_t t) const;
  /// Smallest admissible integer z_t (>= 3).
  std::uint32_t ceil_value(std::uint32_t t) const;
};

struct ExperimentConfig {
  OffspringDistribution dist = OffspringDistribution::parse("0:0.2,2:0.8");
  std::uint32_t t_max = 64;  ///< return index; the walk runs 2 * t_max steps
  std::uint32_t n_trees = 1000;
  std::uint64_t master_seed = 0;
  Rational h{3, 10};
  QMode q_mode = QMode::kDerived;
  Rational q{1, 5};  ///< used when q_mode is kFixed
  ZSchedule z;
  std::uint32_t depth_margin = 4;
  Estimator estimator = Estimator::kAuto;
  std::uint32_t walks_per_tree = 256;
  std::uint32_t workers = 1;
  std::string out_dir = ".";

  void validate() const;
  std::uint32_t depth_cap() const { return t_max + depth_margin; }
  /// Isolation parameter selected by q_mode at return index t.
  Rational isolation_q(std::uint32_t t) const;
};

/// Which per-tree computation annealed_return uses.
enum class EstimatorPath { kLumped, kMaterialised, kWalks };
EstimatorPath choose_estimator(const ExperimentConfig& config);
std::string_view to_string(EstimatorPath path);

struct AnnealResult {
  ReturnSeries series;  ///< walk times s = 0..2 t_max
  EstimatorPath path;
  /// Fraction of trees whose per-tree value at s = 2 t_max exceeds the
  /// schedule bound. Diagnostic only.
  double quenched_violation;
};

/// Annealed return probabilities over surviving trees. Output is bit-identical
/// for a fixed master_seed whatever the worker count.
AnnealResult annealed_return(const ExperimentConfig& config);

/// Runs fn(i) for i in [0, n) on `workers` threads. Rethrows the exception of
/// the smallest failing index.
void parallel_for(std::size_t n, std::uint32_t workers, const std::function<void(std::size_t)>& fn);

/// Pairwise sum in a fixed order.
double pairwise_sum(std::span<const double> values);

struct FitResult {
  double c_hat;
  double beta_hat;
  double r_squared;
  std::uint32_t t_lo;
  std::uint32_t t_hi;
  std::size_t points;
};

/// Least squares of log(-log R_t) on log t over t in [t_lo, t_hi]. Entries
/// with value 0 are skipped. Throws kDegenerateFit on values outside [0, 1),
/// fewer than 5 usable points, or constant response.
FitResult fit_decay(std::span<const std::uint32_t> t, std::span<const double> value, std::uint32_t t_lo,
                    std::uint32_t t_hi);
/// Same, on the even entries of a walk-time series (t = s/2).
FitResult fit_decay(const ReturnSeries& series, std::uint32_t t_lo, std::uint32_t t_hi);

/// Widest window [1, t] over which every even entry exceeds 10 standard errors.
std::pair<std::uint32_t, std::uint32_t> default_fit_window(const ReturnSeries& series);

struct ScheduleValues {
  double z_t;
  std::uint32_t z_ceil;
  double q_t;
  double bound;
};

/// z_t, q_t = h / (2 sqrt2 (t z_t)^(1/3)) and exp(-(h^2/144) (t / z_t^2)^(1/3)).
ScheduleValues schedule_values(std::uint32_t t, double h, const ZSchedule& z);

enum class Event { kF, kM, kD };
std::optional<Event> parse_event(std::string_view name);

struct EventRow {
  std::uint32_t t;
  double freq;
  double std_error;
  std::uint64_t n;
};

/// Frequencies of the event over config.n_trees surviving trees, for
/// t = 1..config.t_max. F and M use the z schedule; D uses config.h.
std::vector<EventRow> event_frequencies(const ExperimentConfig& config, Event event);

}  // namespace gwhk
