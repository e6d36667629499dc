#include "gwhk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gwhk/error.hpp"

namespace gwhk {

namespace {

using nlohmann::json;

void put_comment(std::ostringstream& out, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("invalid JSON: ") + e.what());
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kAuto:
      return "auto";
    case Estimator::kExact:
      return "exact";
    case Estimator::kWalks:
      return "walks";
  }
  return "auto";
}

std::string_view q_mode_name(QMode m) {
  switch (m) {
    case QMode::kFixed:
      return "fixed";
    case QMode::kDerived:
      return "derived";
    case QMode::kSchedule:
      return "schedule";
  }
  return "derived";
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string returns_csv(const ReturnSeries& series, std::string_view comment) {
  std::ostringstream out;
  put_comment(out, comment);
  out << "s,value,stderr,n\n";
  for (const auto& e : series.entries) {
    out << e.s << ',' << format_double(e.value) << ',' << format_double(e.std_error) << ',' << e.n << '\n';
  }
  return out.str();
}

std::string events_csv(const std::vector<EventRow>& rows, std::string_view comment) {
  std::ostringstream out;
  put_comment(out, comment);
  out << "t,freq,stderr,n\n";
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.freq) << ',' << format_double(r.std_error) << ',' << r.n << '\n';
  }
  return out.str();
}

std::string fits_csv(const std::vector<FitResult>& fits, std::string_view comment) {
  std::ostringstream out;
  put_comment(out, comment);
  out << "t_lo,t_hi,beta_hat,c_hat,r_squared\n";
  for (const auto& f : fits) {
    out << f.t_lo << ',' << f.t_hi << ',' << format_double(f.beta_hat) << ',' << format_double(f.c_hat) << ','
        << format_double(f.r_squared) << '\n';
  }
  return out.str();
}

ReturnSeries parse_returns_csv(std::string_view text) {
  ReturnSeries series;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "s,value,stderr,n") throw Error(ErrorKind::kParse, "expected header 's,value,stderr,n'");
      header_seen = true;
      continue;
    }
    std::string_view fields[4];
    for (int i = 0; i < 4; ++i) {
      const auto comma = line.find(',');
      if ((comma == std::string_view::npos) != (i == 3)) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected 4 fields");
      }
      fields[i] = line.substr(0, comma);
      if (i < 3) line.remove_prefix(comma + 1);
    }
    series.entries.push_back({parse_number<std::uint32_t>(fields[0], line_no), parse_number<double>(fields[1], line_no),
                              parse_number<double>(fields[2], line_no),
                              parse_number<std::uint64_t>(fields[3], line_no)});
  }
  if (!header_seen) throw Error(ErrorKind::kParse, "missing CSV header");
  return series;
}

std::string decomposition_json(const IslandDecomposition& decomp, std::string_view meta_json) {
  json j;
  j["q"] = decomp.q.str();
  j["islands"] = json::array();
  j["deltas"] = json::array();
  for (const auto& island : decomp.islands) {
    j["islands"].push_back(island.vertices);
    j["deltas"].push_back(island.delta.str());
  }
  if (!meta_json.empty()) j["meta"] = parse_json(meta_json);
  return j.dump() + "\n";
}

IslandDecomposition parse_decomposition_json(std::string_view text, std::size_t tree_size) {
  const json j = parse_json(text);
  try {
    IslandDecomposition d;
    d.q = Rational::parse(j.at("q").get<std::string>());
    d.island_of.assign(tree_size, -1);
    const auto& islands = j.at("islands");
    const auto& deltas = j.at("deltas");
    if (islands.size() != deltas.size()) throw Error(ErrorKind::kParse, "islands and deltas differ in length");
    for (std::size_t i = 0; i < islands.size(); ++i) {
      Island island{islands[i].get<std::vector<VertexId>>(), Rational::parse(deltas[i].get<std::string>())};
      for (VertexId v : island.vertices) {
        if (v >= tree_size) throw Error(ErrorKind::kUnknownVertex, "island vertex " + std::to_string(v));
        d.island_of[v] = static_cast<std::int32_t>(i);
      }
      d.islands.push_back(std::move(island));
    }
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad decomposition JSON: ") + e.what());
  }
}

std::string ocean_graph_json(const WeightedOceanGraph& graph, std::string_view meta_json) {
  json j;
  j["edges"] = json::array();
  j["vertex_weights"] = json::array();
  j["frontier_weights"] = json::array();
  for (VertexId x : graph.vertices()) {
    for (const OceanEdge& e : graph.edges(x)) j["edges"].push_back({{"x", x}, {"y", e.to}, {"w", e.weight}});
    j["vertex_weights"].push_back({{"x", x}, {"w", graph.vertex_weight(x)}});
    j["frontier_weights"].push_back({{"x", x}, {"w", graph.frontier_weight(x)}});
  }
  if (!meta_json.empty()) j["meta"] = parse_json(meta_json);
  return j.dump() + "\n";
}

std::string config_json(const ExperimentConfig& c) {
  json j;
  j["dist"] = c.dist.str();
  j["t_max"] = c.t_max;
  j["n_trees"] = c.n_trees;
  j["master_seed"] = c.master_seed;
  j["h"] = c.h.str();
  j["q_mode"] = q_mode_name(c.q_mode);
  j["q"] = c.q.str();
  if (c.z.fixed) {
    j["z_schedule"] = {{"mode", "fixed"}, {"z", *c.z.fixed}, {"c3", c.z.c3}, {"k", c.z.k}};
  } else {
    j["z_schedule"] = {{"mode", "power"}, {"c3", c.z.c3}, {"k", c.z.k}};
  }
  j["depth_margin"] = c.depth_margin;
  j["estimator"] = estimator_name(c.estimator);
  j["walks_per_tree"] = c.walks_per_tree;
  j["out_dir"] = c.out_dir;
  return j.dump();
}

ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig c) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::kParse, "config must be a JSON object");
  static const char* const kKnown[] = {"dist",  "t_max",      "n_trees",      "master_seed", "h",
                                       "q_mode", "q",         "z_schedule",   "depth_margin", "estimator",
                                       "walks_per_tree", "workers", "out_dir"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw Error(ErrorKind::kParse, "unknown config field '" + key + "'");
    }
  }
  try {
    if (j.contains("dist")) c.dist = OffspringDistribution::parse(j["dist"].get<std::string>());
    if (j.contains("t_max")) c.t_max = j["t_max"].get<std::uint32_t>();
    if (j.contains("n_trees")) c.n_trees = j["n_trees"].get<std::uint32_t>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("h")) c.h = Rational::parse(j["h"].get<std::string>());
    if (j.contains("q")) c.q = Rational::parse(j["q"].get<std::string>());
    if (j.contains("q_mode")) {
      const auto m = j["q_mode"].get<std::string>();
      if (m == "fixed") {
        c.q_mode = QMode::kFixed;
      } else if (m == "derived") {
        c.q_mode = QMode::kDerived;
      } else if (m == "schedule") {
        c.q_mode = QMode::kSchedule;
      } else {
        throw Error(ErrorKind::kParse, "unknown q_mode '" + m + "'");
      }
    }
    if (j.contains("z_schedule")) {
      const auto& z = j["z_schedule"];
      const auto mode = z.value("mode", std::string("power"));
      if (z.contains("c3")) c.z.c3 = z["c3"].get<double>();
      if (z.contains("k")) c.z.k = z["k"].get<double>();
      if (mode == "fixed") {
        c.z.fixed = z.at("z").get<std::uint32_t>();
      } else if (mode == "power") {
        c.z.fixed.reset();
      } else {
        throw Error(ErrorKind::kParse, "unknown z_schedule mode '" + mode + "'");
      }
    }
    if (j.contains("depth_margin")) c.depth_margin = j["depth_margin"].get<std::uint32_t>();
    if (j.contains("estimator")) {
      const auto e = j["estimator"].get<std::string>();
      if (e == "auto") {
        c.estimator = Estimator::kAuto;
      } else if (e == "exact") {
        c.estimator = Estimator::kExact;
      } else if (e == "walks") {
        c.estimator = Estimator::kWalks;
      } else {
        throw Error(ErrorKind::kParse, "unknown estimator '" + e + "'");
      }
    }
    if (j.contains("walks_per_tree")) c.walks_per_tree = j["walks_per_tree"].get<std::uint32_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<std::uint32_t>();
    if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad config field: ") + e.what());
  }
  return c;
}

}  // namespace gwhk
