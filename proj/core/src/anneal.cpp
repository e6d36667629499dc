#include "gwhk/anneal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gwhk/error.hpp"
#include "gwhk/isolation.hpp"
#include "gwhk/rng.hpp"
#include "gwhk/tree.hpp"

namespace gwhk {

namespace {

constexpr std::uint64_t kWalkSalt = 0xA0761D6478BD642Full;
constexpr double kMaterialiseLimit = 2e5;

struct MeanStd {
  double mean;
  double std_error;
};

// Per-column statistics of rows[i][col], reduced in index order.
MeanStd column_stats(const std::vector<std::vector<double>>& rows, std::size_t col) {
  const std::size_t n = rows.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rows[i][col];
  const double mean = pairwise_sum(x) / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  for (double& v : x) v = (v - mean) * (v - mean);
  const double var = pairwise_sum(x) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

TreeSampleSpec sample_spec(const ExperimentConfig& config, std::uint32_t index) {
  return {config.dist, config.depth_cap(), true, config.master_seed, index};
}

std::vector<double> walk_returns(const ExperimentConfig& config, std::uint32_t index, std::uint32_t s_max) {
  const TreeSampleSpec spec = sample_spec(config, index);
  const std::uint32_t attempt = first_surviving_attempt(spec);
  LazyTree tree(config.dist, config.master_seed, index, attempt);
  std::vector<std::uint64_t> hits(s_max + 1, 0);
  for (std::uint32_t w = 0; w < config.walks_per_tree; ++w) {
    PhiloxStream rng(mix64(config.master_seed ^ kWalkSalt), index, w, attempt);
    VertexId v = LazyTree::root();
    ++hits[0];
    for (std::uint32_t s = 1; s <= s_max; ++s) {
      v = tree.neighbor(v, rng.below(tree.degree(v)));
      if (v == LazyTree::root()) ++hits[s];
    }
  }
  std::vector<double> out(s_max + 1);
  for (std::uint32_t s = 0; s <= s_max; ++s) out[s] = static_cast<double>(hits[s]) / config.walks_per_tree;
  return out;
}

double expected_materialised_size(const ExperimentConfig& config) {
  const double lambda = config.dist.mean();
  double size = 0.0;
  double level = 1.0;
  for (std::uint32_t d = 0; d <= config.depth_cap(); ++d) {
    size += level;
    level *= lambda;
  }
  const double survival = extinction_probability(config.dist).survival;
  return survival > 0.0 ? size / survival : std::numeric_limits<double>::infinity();
}

}  // namespace

double ZSchedule::value(std::uint32_t t) const {
  if (fixed) return *fixed;
  return 3.0 + c3 * std::pow(static_cast<double>(t), 1.0 / k);
}

std::uint32_t ZSchedule::ceil_value(std::uint32_t t) const {
  if (fixed) return *fixed;
  return static_cast<std::uint32_t>(std::ceil(value(t)));
}

void ExperimentConfig::validate() const {
  if (t_max < 1) throw Error(ErrorKind::kInvalidArgument, "t_max must be at least 1");
  if (n_trees < 1) throw Error(ErrorKind::kInvalidArgument, "n_trees must be at least 1");
  if (h <= Rational(0) || h >= Rational(1)) throw Error(ErrorKind::kInvalidArgument, "h must lie in (0,1)");
  if (q_mode == QMode::kFixed && (q <= Rational(0) || q >= Rational(1))) {
    throw Error(ErrorKind::kInvalidArgument, "q must lie in (0,1)");
  }
  if (z.fixed && *z.fixed < 3) throw Error(ErrorKind::kInvalidArgument, "fixed z must be at least 3");
  if (!(z.c3 > 0.0)) throw Error(ErrorKind::kInvalidArgument, "c3 must be positive");
  if (!(z.k > 2.0)) throw Error(ErrorKind::kInvalidArgument, "k must exceed 2");
  if (walks_per_tree < 1) throw Error(ErrorKind::kInvalidArgument, "walks_per_tree must be at least 1");
  if (workers < 1) throw Error(ErrorKind::kInvalidArgument, "workers must be at least 1");
  if (t_max > (std::numeric_limits<std::uint32_t>::max() - depth_margin) / 2) {
    throw Error(ErrorKind::kInvalidArgument, "t_max too large");
  }
}

Rational ExperimentConfig::isolation_q(std::uint32_t t) const {
  switch (q_mode) {
    case QMode::kFixed:
      return q;
    case QMode::kDerived:
      return Rational(2, 3) * h;
    case QMode::kSchedule:
      break;
  }
  // q_t is irrational in general; round down to a rational with denominator 10^9.
  const double qt = schedule_values(t, h.to_double(), z).q_t;
  return Rational(static_cast<std::int64_t>(std::floor(qt * 1e9)), 1'000'000'000);
}

EstimatorPath choose_estimator(const ExperimentConfig& config) {
  if (config.dist.degenerate()) return EstimatorPath::kLumped;
  switch (config.estimator) {
    case Estimator::kExact:
      return EstimatorPath::kMaterialised;
    case Estimator::kWalks:
      return EstimatorPath::kWalks;
    case Estimator::kAuto:
      break;
  }
  return expected_materialised_size(config) <= kMaterialiseLimit ? EstimatorPath::kMaterialised
                                                                  : EstimatorPath::kWalks;
}

std::string_view to_string(EstimatorPath path) {
  switch (path) {
    case EstimatorPath::kLumped:
      return "lumped";
    case EstimatorPath::kMaterialised:
      return "exact";
    case EstimatorPath::kWalks:
      return "walks";
  }
  return "unknown";
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void parallel_for(std::size_t n, std::uint32_t workers, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max<std::uint32_t>(workers, 1), std::max<std::size_t>(n, 1));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

AnnealResult annealed_return(const ExperimentConfig& config) {
  config.validate();
  const std::uint32_t s_max = 2 * config.t_max;
  AnnealResult result{};
  result.path = choose_estimator(config);
  const double bound = schedule_values(s_max, config.h.to_double(), config.z).bound;

  if (result.path == EstimatorPath::kLumped) {
    const std::uint32_t branching = config.dist.atoms().front().count;
    if (branching == 0) throw Error(ErrorKind::kRejectionBudgetExhausted, "distribution never survives");
    const HeatKernel hk = lumped_root_return(LumpedTree::regular(branching, s_max), s_max, false);
    for (std::uint32_t s = 0; s <= s_max; ++s) result.series.entries.push_back({s, hk.returns[s], 0.0, config.n_trees});
    result.quenched_violation = hk.returns[s_max] > bound ? 1.0 : 0.0;
    return result;
  }

  std::vector<std::vector<double>> per_tree(config.n_trees);
  parallel_for(config.n_trees, config.workers, [&](std::size_t i) {
    const auto index = static_cast<std::uint32_t>(i);
    if (result.path == EstimatorPath::kMaterialised) {
      per_tree[i] = root_return_leaky(sample_tree(sample_spec(config, index)), s_max).returns;
    } else {
      per_tree[i] = walk_returns(config, index, s_max);
    }
  });

  for (std::uint32_t s = 0; s <= s_max; ++s) {
    const MeanStd st = column_stats(per_tree, s);
    result.series.entries.push_back({s, st.mean, st.std_error, config.n_trees});
  }
  std::size_t violations = 0;
  for (const auto& row : per_tree) violations += row[s_max] > bound ? 1 : 0;
  result.quenched_violation = static_cast<double>(violations) / config.n_trees;
  return result;
}

FitResult fit_decay(std::span<const std::uint32_t> t, std::span<const double> value, std::uint32_t t_lo,
                    std::uint32_t t_hi) {
  if (t.size() != value.size()) throw Error(ErrorKind::kInvalidArgument, "t and value lengths differ");
  if (t_lo < 1 || t_lo > t_hi) throw Error(ErrorKind::kDegenerateFit, "fit window must satisfy 1 <= t_lo <= t_hi");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    const double v = value[i];
    if (!(v >= 0.0 && v < 1.0)) {
      throw Error(ErrorKind::kDegenerateFit, "value " + std::to_string(v) + " at t=" + std::to_string(t[i]) +
                                                 " outside [0,1)");
    }
    if (v == 0.0) continue;
    xs.push_back(std::log(static_cast<double>(t[i])));
    ys.push_back(std::log(-std::log(v)));
  }
  const std::size_t n = xs.size();
  if (n < 5) throw Error(ErrorKind::kDegenerateFit, "fewer than 5 usable points in the fit window");
  const double mx = pairwise_sum(xs) / n;
  const double my = pairwise_sum(ys) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::kDegenerateFit, "zero variance in the fit window");
  const double beta = sxy / sxx;
  const double intercept = my - beta * mx;
  return {std::exp(intercept), beta, sxy * sxy / (sxx * syy), t_lo, t_hi, n};
}

FitResult fit_decay(const ReturnSeries& series, std::uint32_t t_lo, std::uint32_t t_hi) {
  std::vector<std::uint32_t> t;
  std::vector<double> v;
  for (const auto& e : series.even_entries()) {
    t.push_back(e.s);
    v.push_back(e.value);
  }
  return fit_decay(t, v, t_lo, t_hi);
}

std::pair<std::uint32_t, std::uint32_t> default_fit_window(const ReturnSeries& series) {
  std::uint32_t t_hi = 0;
  for (const auto& e : series.even_entries()) {
    if (e.s == 0) continue;
    if (!(e.value > 10.0 * e.std_error) || e.value <= 0.0) break;
    t_hi = e.s;
  }
  if (t_hi < 1) throw Error(ErrorKind::kDegenerateFit, "no entry exceeds 10 standard errors");
  return {1, t_hi};
}

ScheduleValues schedule_values(std::uint32_t t, double h, const ZSchedule& z) {
  if (t < 1) throw Error(ErrorKind::kInvalidArgument, "t must be at least 1");
  if (!(h > 0.0 && h < 1.0)) throw Error(ErrorKind::kInvalidArgument, "h must lie in (0,1)");
  if (!z.fixed && !(z.c3 > 0.0 && z.k > 2.0)) throw Error(ErrorKind::kInvalidArgument, "need c3 > 0 and k > 2");
  if (z.fixed && *z.fixed < 3) throw Error(ErrorKind::kInvalidArgument, "fixed z must be at least 3");
  ScheduleValues out{};
  out.z_t = z.value(t);
  out.z_ceil = z.ceil_value(t);
  const double td = t;
  out.q_t = h / (2.0 * std::sqrt(2.0) * std::cbrt(td * out.z_t));
  out.bound = std::exp(-(h * h / 144.0) * std::cbrt(td / (out.z_t * out.z_t)));
  if (!(out.q_t < 2.0 * h / 3.0)) throw Error(ErrorKind::kInvalidArgument, "q_t must stay below 2h/3");
  return out;
}

std::optional<Event> parse_event(std::string_view name) {
  if (name == "F") return Event::kF;
  if (name == "M") return Event::kM;
  if (name == "D") return Event::kD;
  return std::nullopt;
}

std::vector<EventRow> event_frequencies(const ExperimentConfig& config, Event event) {
  config.validate();
  const std::uint32_t t_max = config.t_max;
  std::vector<std::vector<double>> hits(config.n_trees);
  parallel_for(config.n_trees, config.workers, [&](std::size_t i) {
    const RootedTree tree = sample_tree(sample_spec(config, static_cast<std::uint32_t>(i)));
    auto& row = hits[i];
    row.assign(t_max + 1, 0.0);
    if (event == Event::kD) {
      // D_t holds iff min over sizes k >= t of |dK| / k is at most h.
      const auto boundary = min_rooted_boundary_by_size(tree, tree.size());
      bool any = false;
      std::vector<bool> from(boundary.size() + 1, false);
      for (std::size_t k = boundary.size(); k-- > 1;) {
        const bool reachable = boundary[k] < std::numeric_limits<std::int64_t>::max() / 8;
        any = any || (reachable && Rational(boundary[k], static_cast<std::int64_t>(k)) <= config.h);
        from[k] = any;
      }
      for (std::uint32_t t = 1; t <= t_max; ++t) row[t] = (t < from.size() && from[t]) ? 1.0 : 0.0;
      return;
    }
    for (std::uint32_t t = 1; t <= t_max; ++t) {
      EventParams params{t, config.z.ceil_value(t), config.z.c3, config.z.k};
      row[t] = (event == Event::kF ? indicator_F(tree, params) : indicator_M(tree, params)) ? 1.0 : 0.0;
    }
  });
  std::vector<EventRow> out;
  for (std::uint32_t t = 1; t <= t_max; ++t) {
    const MeanStd st = column_stats(hits, t);
    out.push_back({t, st.mean, st.std_error, config.n_trees});
  }
  return out;
}

}  // namespace gwhk
