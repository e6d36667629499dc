#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "gwhk/anneal.hpp"
#include "gwhk/error.hpp"
#include "gwhk/io.hpp"
#include "gwhk/isolation.hpp"
#include "gwhk/ocean_chain.hpp"
#include "gwhk/spectral.hpp"
#include "gwhk/tree.hpp"
#include "gwhk/verify.hpp"

namespace gwhk::cli {

namespace {

using nlohmann::json;

// Raised while resolving options; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string out_file;
  std::string dist;
  std::optional<std::uint32_t> t_max;
  std::optional<std::uint32_t> trees;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> workers;
  std::string h;
  std::string q;
  std::string estimator;
  std::optional<std::uint32_t> walks;
  std::optional<std::uint32_t> depth_margin;
  std::optional<double> c3;
  std::optional<double> k;
  std::optional<std::uint32_t> z;

  // Subcommand specific.
  std::string tree_path;
  std::uint32_t depth_cap = 6;
  std::uint32_t index = 0;
  bool survival = true;
  std::uint32_t start = 0;
  std::optional<std::uint32_t> steps;
  std::string event = "F";
  std::string in_path;
  std::optional<std::uint32_t> t_lo;
  std::optional<std::uint32_t> t_hi;
  std::string corpus = "small";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
}

// Config file < GWHK_SEED < explicit flags.
ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig c;
  if (!o.config_path.empty()) c = parse_config_json(read_file(o.config_path), c);
  if (const char* env = std::getenv("GWHK_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      c.master_seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("GWHK_SEED is not an unsigned integer: ") + env);
    }
  }
  if (!o.dist.empty()) c.dist = OffspringDistribution::parse(o.dist);
  if (o.t_max) c.t_max = *o.t_max;
  if (o.trees) c.n_trees = *o.trees;
  if (o.seed) c.master_seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (!o.h.empty()) c.h = Rational::parse(o.h);
  if (!o.q.empty()) {
    c.q = Rational::parse(o.q);
    c.q_mode = QMode::kFixed;
  }
  if (!o.estimator.empty()) {
    c = parse_config_json(json{{"estimator", o.estimator}}.dump(), c);
  }
  if (o.walks) c.walks_per_tree = *o.walks;
  if (o.depth_margin) c.depth_margin = *o.depth_margin;
  if (o.c3) c.z.c3 = *o.c3;
  if (o.k) c.z.k = *o.k;
  if (o.z) c.z.fixed = *o.z;
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  c.validate();
  return c;
}

std::filesystem::path output_path(const Options& o, const ExperimentConfig& c, const std::string& default_name) {
  if (!o.out_file.empty()) return o.out_file;
  return std::filesystem::path(c.out_dir) / default_name;
}

// Resolved settings of a non-ensemble command, embedded in its outputs.
json command_meta(const std::string& command, const ExperimentConfig& c) {
  json j = json::parse(config_json(c));
  j["command"] = command;
  return j;
}

RootedTree load_tree(const Options& o) {
  if (o.tree_path.empty()) throw ConfigError("--tree is required");
  return parse_tree(read_file(o.tree_path));
}

Rational command_q(const Options& o, const ExperimentConfig& c) {
  if (!o.q.empty()) return Rational::parse(o.q);
  return c.isolation_q(1);
}

int cmd_sample_tree(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  json meta = command_meta("sample-tree", c);
  meta["depth_cap"] = o.depth_cap;
  meta["index"] = o.index;
  meta["survival"] = o.survival;
  const RootedTree tree = sample_tree({c.dist, o.depth_cap, o.survival, c.master_seed, o.index});
  const auto path = output_path(o, c, "tree.gwtree");
  write_file(path, "# " + meta.dump() + "\n" + serialize_tree(tree));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_islands(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  const RootedTree tree = load_tree(o);
  const Rational q = command_q(o, c);
  json meta = command_meta("islands", c);
  meta["tree"] = o.tree_path;
  meta["q"] = q.str();
  const auto path = output_path(o, c, "islands.json");
  write_file(path, decomposition_json(decompose_islands(tree, q), meta.dump()));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_ocean_chain(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  const RootedTree tree = load_tree(o);
  const Rational q = command_q(o, c);
  json meta = command_meta("ocean-chain", c);
  meta["tree"] = o.tree_path;
  meta["q"] = q.str();
  const auto path = output_path(o, c, "ocean.json");
  write_file(path, ocean_graph_json(build_ocean_weights(tree, decompose_islands(tree, q)), meta.dump()));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_heat_kernel(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  const RootedTree tree = load_tree(o);
  json meta = command_meta("heat-kernel", c);
  meta["tree"] = o.tree_path;
  meta["start"] = o.start;
  const std::uint32_t steps = o.steps.value_or(2 * c.t_max);
  meta["steps"] = steps;
  const auto path = output_path(o, c, "heat_kernel.csv");
  write_file(path, returns_csv(heat_kernel_series(tree, o.start, steps), meta.dump()));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_anneal(const Options& o, std::ostream& out, std::ostream& err) {
  const ExperimentConfig c = resolve_config(o);
  const AnnealResult r = annealed_return(c);
  const auto path = output_path(o, c, "returns.csv");
  write_file(path, returns_csv(r.series, config_json(c)));
  err << "anneal: estimator=" << to_string(r.path) << " trees=" << c.n_trees
      << " quenched_bound_violation=" << format_double(r.quenched_violation) << '\n';
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_events(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  const auto event = parse_event(o.event);
  if (!event) throw ConfigError("unknown event '" + o.event + "' (expected F, M or D)");
  json meta = json::parse(config_json(c));
  meta["event"] = o.event;
  const auto path = output_path(o, c, "events_" + o.event + ".csv");
  write_file(path, events_csv(event_frequencies(c, *event), meta.dump()));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  if (o.in_path.empty()) throw ConfigError("--in is required");
  const std::string text = read_file(o.in_path);
  const ReturnSeries series = parse_returns_csv(text);
  auto window = (o.t_lo && o.t_hi) ? std::pair{*o.t_lo, *o.t_hi} : default_fit_window(series);
  if (o.t_lo) window.first = *o.t_lo;
  if (o.t_hi) window.second = *o.t_hi;
  json meta;
  meta["command"] = "fit";
  meta["in"] = o.in_path;
  if (text.rfind("# ", 0) == 0) {
    try {
      meta["source"] = json::parse(text.substr(2, text.find('\n') - 2));
    } catch (const json::exception&) {
      meta["source"] = text.substr(2, text.find('\n') - 2);
    }
  }
  const FitResult fit = fit_decay(series, window.first, window.second);
  const auto path = output_path(o, c, "fit.csv");
  write_file(path, fits_csv({fit}, meta.dump()));
  out << path.string() << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const ExperimentConfig c = resolve_config(o);
  CorpusSize size;
  if (o.corpus == "small") {
    size = CorpusSize::kSmall;
  } else if (o.corpus == "full") {
    size = CorpusSize::kFull;
  } else {
    throw ConfigError("unknown corpus '" + o.corpus + "' (expected small or full)");
  }
  bool ok = true;
  for (const auto& r : run_verification(size, c.master_seed)) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.instances << " instances";
    if (r.worst != 0.0) out << ", worst " << format_double(r.worst);
    out << ")";
    if (!r.passed) out << "  first failure: " << r.detail << ", master seed " << c.master_seed;
    out << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitVerify;
}

void add_experiment_flags(CLI::App* app, Options& o) {
  app->add_option("--dist", o.dist, "offspring law, e.g. \"0:0.2,2:0.8\"");
  app->add_option("--tmax", o.t_max, "largest return index t (walk time 2t)");
  app->add_option("--trees", o.trees, "number of trees");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--workers", o.workers, "worker threads");
  app->add_option("--h", o.h, "anchored-expansion floor h");
  app->add_option("--q", o.q, "isolation parameter q (fixes q_mode)");
  app->add_option("--estimator", o.estimator, "auto, exact or walks");
  app->add_option("--walks", o.walks, "walks per tree for the walk estimator");
  app->add_option("--depth-margin", o.depth_margin, "extra survival depth beyond t_max");
  app->add_option("--c3", o.c3, "z_t = 3 + c3 t^(1/k)");
  app->add_option("--k", o.k, "z_t = 3 + c3 t^(1/k)");
  app->add_option("--z", o.z, "constant z_t");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Galton-Watson random-walk heat kernels"};
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "print this help and exit");
  Options o;
  app.add_option("--config", o.config_path, "JSON experiment config");
  app.add_option("--out-dir", o.out_dir, "output directory");
  app.add_option("--out", o.out_file, "output file (overrides --out-dir)");

  auto* sample = app.add_subcommand("sample-tree", "sample one tree as gwtree text");
  auto* islands = app.add_subcommand("islands", "island decomposition as JSON");
  auto* ocean = app.add_subcommand("ocean-chain", "weighted ocean graph as JSON");
  auto* heat = app.add_subcommand("heat-kernel", "exact return series of one tree");
  auto* anneal = app.add_subcommand("anneal", "annealed return series");
  auto* events = app.add_subcommand("events", "event frequencies");
  auto* fit = app.add_subcommand("fit", "decay-exponent fit of a returns CSV");
  auto* verify = app.add_subcommand("verify", "property suite");
  for (auto* sub : {sample, islands, ocean, heat, anneal, events, fit, verify}) {
    add_experiment_flags(sub, o);
    sub->add_option("--config", o.config_path, "JSON experiment config");
    sub->add_option("--out-dir", o.out_dir, "output directory");
    sub->add_option("--out", o.out_file, "output file (overrides --out-dir)");
  }
  sample->add_option("--depth-cap", o.depth_cap, "materialisation depth");
  sample->add_option("--index", o.index, "sample index");
  sample->add_option("--survival", o.survival, "condition on reaching the depth cap");
  for (auto* sub : {islands, ocean, heat}) sub->add_option("--tree", o.tree_path, "gwtree file")->required();
  heat->add_option("--start", o.start, "start vertex");
  heat->add_option("--steps", o.steps, "walk steps (default 2 * tmax)");
  events->add_option("--event", o.event, "F, M or D");
  fit->add_option("--in", o.in_path, "returns CSV")->required();
  fit->add_option("--t-lo", o.t_lo, "first return index of the window");
  fit->add_option("--t-hi", o.t_hi, "last return index of the window");
  verify->add_option("--corpus", o.corpus, "small or full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sample->parsed()) return cmd_sample_tree(o, out);
    if (islands->parsed()) return cmd_islands(o, out);
    if (ocean->parsed()) return cmd_ocean_chain(o, out);
    if (heat->parsed()) return cmd_heat_kernel(o, out);
    if (anneal->parsed()) return cmd_anneal(o, out, err);
    if (events->parsed()) return cmd_events(o, out);
    if (fit->parsed()) return cmd_fit(o, out);
    return cmd_verify(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    const bool config = e.kind() == ErrorKind::kParse || e.kind() == ErrorKind::kInvalidArgument;
    err << (config ? "config error" : "runtime error") << " [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return config ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace gwhk::cli
