#include "gwhk/tree.hpp"

#include <charconv>
#include <string>

#include "gwhk/error.hpp"

namespace gwhk {

RootedTree RootedTree::from_parents(std::span<const VertexId> parents, std::span<const std::uint32_t> frontier) {
  if (parents.empty()) throw Error(ErrorKind::kInvalidArgument, "tree needs a root");
  if (parents.size() != frontier.size()) throw Error(ErrorKind::kInvalidArgument, "parent/frontier length mismatch");
  if (parents[0] != kNoVertex) throw Error(ErrorKind::kInvalidArgument, "vertex 0 must be the root");

  RootedTree t;
  const std::size_t n = parents.size();
  t.parent_.assign(parents.begin(), parents.end());
  t.frontier_.assign(frontier.begin(), frontier.end());
  t.depth_.assign(n, 0);
  t.child_offset_.assign(n + 1, 0);
  for (std::size_t v = 1; v < n; ++v) {
    const VertexId p = parents[v];
    if (p == kNoVertex) throw Error(ErrorKind::kInvalidArgument, "second root at vertex " + std::to_string(v));
    if (p >= v) {
      throw Error(ErrorKind::kInvalidArgument,
                  "parent " + std::to_string(p) + " of vertex " + std::to_string(v) + " does not precede it");
    }
    t.depth_[v] = t.depth_[p] + 1;
    t.max_depth_ = std::max(t.max_depth_, t.depth_[v]);
    ++t.child_offset_[p + 1];
  }
  for (std::size_t v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  t.child_list_.resize(n - 1);
  std::vector<std::uint32_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
  for (std::size_t v = 1; v < n; ++v) t.child_list_[fill[parents[v]]++] = static_cast<VertexId>(v);
  for (std::size_t v = 0; v < n; ++v) {
    if (t.frontier_[v] > 0 && (!t.depth_cap_ || t.depth_[v] < *t.depth_cap_)) t.depth_cap_ = t.depth_[v];
  }
  return t;
}

bool RootedTree::frontier_at_cap() const {
  for (std::size_t v = 0; v < size(); ++v) {
    if (frontier_[v] > 0 && depth_[v] != max_depth_) return false;
  }
  return true;
}

void RootedTree::check_vertex(VertexId v) const {
  if (v >= size()) throw Error(ErrorKind::kUnknownVertex, "unknown vertex " + std::to_string(v));
}

VertexId TreeBuilder::add_child(VertexId parent, std::uint32_t frontier) {
  if (parent >= parents_.size()) throw Error(ErrorKind::kUnknownVertex, "unknown parent " + std::to_string(parent));
  parents_.push_back(parent);
  frontier_.push_back(frontier);
  return static_cast<VertexId>(parents_.size() - 1);
}

RootedTree regular_tree(std::uint32_t branching, std::uint32_t depth) {
  std::vector<VertexId> parents{kNoVertex};
  std::vector<std::uint32_t> frontier{depth == 0 ? branching : 0u};
  std::size_t level_begin = 0;
  for (std::uint32_t d = 1; d <= depth; ++d) {
    const std::size_t level_end = parents.size();
    for (std::size_t p = level_begin; p < level_end; ++p) {
      for (std::uint32_t c = 0; c < branching; ++c) {
        parents.push_back(static_cast<VertexId>(p));
        frontier.push_back(d == depth ? branching : 0u);
      }
    }
    level_begin = level_end;
  }
  return RootedTree::from_parents(parents, frontier);
}

RootedTree truncate(const RootedTree& tree, std::uint32_t t) {
  if (auto cap = tree.depth_cap(); cap && t > *cap) {
    throw Error(ErrorKind::kDepthExceeded,
                "truncation depth " + std::to_string(t) + " exceeds depth cap " + std::to_string(*cap));
  }
  std::vector<VertexId> remap(tree.size(), kNoVertex);
  std::vector<VertexId> parents;
  std::vector<std::uint32_t> frontier;
  for (VertexId v = 0; v < tree.size(); ++v) {
    if (tree.depth(v) > t) continue;
    remap[v] = static_cast<VertexId>(parents.size());
    parents.push_back(v == 0 ? kNoVertex : remap[tree.parent(v)]);
    frontier.push_back(tree.depth(v) == t ? tree.offspring(v) : tree.frontier_extra(v));
  }
  return RootedTree::from_parents(parents, frontier);
}

std::string serialize_tree(const RootedTree& tree) {
  std::string out = "gwtree v1\n";
  for (VertexId v = 0; v < tree.size(); ++v) {
    out += std::to_string(v);
    out += ' ';
    out += v == 0 ? std::string("-1") : std::to_string(tree.parent(v));
    out += ' ';
    out += std::to_string(tree.frontier_extra(v));
    out += '\n';
  }
  return out;
}

namespace {

std::int64_t parse_field(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

RootedTree parse_tree(std::string_view text) {
  std::vector<VertexId> parents;
  std::vector<std::uint32_t> frontier;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "gwtree v1") throw Error(ErrorKind::kParse, "missing 'gwtree v1' header");
      header_seen = true;
      continue;
    }
    std::string_view fields[3];
    std::size_t count = 0;
    while (!line.empty()) {
      while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      if (line.empty()) break;
      auto sp = line.find(' ');
      if (count == 3) throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": too many fields");
      fields[count++] = line.substr(0, sp);
      line.remove_prefix(sp == std::string_view::npos ? line.size() : sp);
    }
    if (count != 3) throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected 3 fields");
    const std::int64_t id = parse_field(fields[0], line_no);
    const std::int64_t parent = parse_field(fields[1], line_no);
    const std::int64_t extra = parse_field(fields[2], line_no);
    if (id != static_cast<std::int64_t>(parents.size())) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": non-contiguous id " + std::to_string(id));
    }
    if (extra < 0 || extra > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad frontier degree");
    }
    if (id == 0) {
      if (parent != -1) throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": root must have parent -1");
      parents.push_back(kNoVertex);
    } else {
      if (parent < 0 || parent >= id) {
        throw Error(ErrorKind::kParse,
                    "line " + std::to_string(line_no) + ": parent " + std::to_string(parent) + " not before child");
      }
      parents.push_back(static_cast<VertexId>(parent));
    }
    frontier.push_back(static_cast<std::uint32_t>(extra));
  }
  if (!header_seen) throw Error(ErrorKind::kParse, "missing 'gwtree v1' header");
  if (parents.empty()) throw Error(ErrorKind::kParse, "tree has no vertices");
  return RootedTree::from_parents(parents, frontier);
}

}  // namespace gwhk
