#include "treecut/systems.hpp"

#include <algorithm>
#include <charconv>

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;
using U128 = unsigned __int128;

constexpr U128 kSaturation = (~U128{0}) >> 1;

}  // namespace

PartitionSystem PartitionSystem::make(std::vector<Partition> members) {
  if (members.empty()) {
    throw Error(errc::empty_system,
                "an empty system needs an explicit ground set");
  }
  LabelSet ground = members.front().ground();
  return make(std::move(members), std::move(ground));
}

PartitionSystem PartitionSystem::make(std::vector<Partition> members,
                                      LabelSet ground) {
  PartitionSystem ps;
  ps.ground_ = std::move(ground);
  for (const Partition& p : members) {
    if (p.ground() != ps.ground_) {
      throw Error(errc::ground_set_mismatch,
                  "system members live on different ground sets");
    }
  }
  ps.members_ = std::move(members);
  return ps;
}

SystemVerdict system_compatible_fixed(const RootedTree& t,
                                      const PartitionSystem& ps) {
  if (!ps.empty() && t.leaves() != ps.ground()) {
    throw Error(errc::ground_set_mismatch,
                "tree leaves and system ground set differ");
  }
  SystemVerdict verdict;
  verdict.compatible = true;
  verdict.members.reserve(ps.size());
  for (const Partition& p : ps.members()) {
    verdict.members.push_back(is_compatible(t, p));
    verdict.compatible = verdict.compatible && verdict.members.back().compatible();
  }
  return verdict;
}

Partition meet_system(const PartitionSystem& ps) {
  if (ps.empty()) {
    throw Error(errc::empty_system, "meet of an empty system");
  }
  return meet_all(ps.members(), ps.ground());
}

ResolutionStats resolution_stats(const RootedTree& t) {
  if (t.leaf_count() < 3) {
    throw Error(errc::too_few_leaves, "resolution needs at least three leaves");
  }
  ResolutionStats stats;
  stats.vertices = t.vertex_count();
  stats.leaves = t.leaf_count();
  stats.res_num = static_cast<unsigned>(stats.vertices - stats.leaves - 1);
  stats.res_den = static_cast<unsigned>(stats.leaves - 2);
  stats.h = static_cast<unsigned>(2 * stats.leaves - t.edge_count() - 2);
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    std::size_t d = t.children(v).size();
    if (d > 2) stats.excess.emplace_back(v, static_cast<unsigned>(d - 2));
  }
  return stats;
}

std::string RefinementCount::to_string() const {
  if (saturated) return "more than 1e38";
  U128 v = value;
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out += static_cast<char>('0' + static_cast<unsigned>(v % 10));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

RefinementCount count_binary_refinements(const RootedTree& t) {
  RefinementCount count;
  count.value = 1;
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    std::size_t d = t.children(v).size();
    for (std::size_t factor = 3; factor + 3 <= 2 * d; factor += 2) {
      if (count.value > kSaturation / factor) {
        count.saturated = true;
        return count;
      }
      count.value *= factor;
    }
  }
  return count;
}

namespace {

// Enumeration of rooted binary trees over d labeled slots by stepwise leaf
// insertion. Nodes 0..d-1 are the slots, d..2d-2 the inner nodes; the
// callback sees the parent array and the root id.
struct LocalEnumerator {
  std::size_t slots;
  std::vector<std::uint32_t> parent;
  std::function<bool(const std::vector<std::uint32_t>&, std::uint32_t)> emit;

  bool run() {
    parent.assign(2 * slots - 1, 0);
    std::uint32_t root = static_cast<std::uint32_t>(slots);
    parent[0] = root;
    parent[1] = root;
    return insert(2, root);
  }

  bool insert(std::size_t k, std::uint32_t root) {
    if (k == slots) return emit(parent, root);
    const std::uint32_t fresh =
        static_cast<std::uint32_t>(slots + k - 1);
    const std::uint32_t leaf = static_cast<std::uint32_t>(k);
    // Subdivide the edge above each active node.
    for (std::uint32_t u = 0; u < slots + k - 1; ++u) {
      if (u >= k && u < slots) continue;  // slot not yet inserted
      if (u == root) continue;
      std::uint32_t up = parent[u];
      parent[u] = fresh;
      parent[fresh] = up;
      parent[leaf] = fresh;
      if (!insert(k + 1, root)) return false;
      parent[u] = up;
    }
    // New root above the old one.
    parent[root] = fresh;
    parent[leaf] = fresh;
    if (!insert(k + 1, fresh)) return false;
    return true;
  }
};

struct RefinementEnumerator {
  const RootedTree& t;
  const std::function<bool(const RootedTree&)>& fn;
  std::vector<Vertex> multifurcating;
  // Current local choice per multifurcating vertex.
  std::vector<std::vector<std::uint32_t>> chosen_parent;
  std::vector<std::uint32_t> chosen_root;

  bool descend(std::size_t i) {
    if (i == multifurcating.size()) return fn(materialize());
    LocalEnumerator local;
    local.slots = t.children(multifurcating[i]).size();
    local.emit = [&](const std::vector<std::uint32_t>& parent,
                     std::uint32_t root) {
      chosen_parent[i] = parent;
      chosen_root[i] = root;
      return descend(i + 1);
    };
    return local.run();
  }

  RootedTree materialize() const {
    const std::size_t n = t.vertex_count();
    std::vector<std::vector<Vertex>> children(n);
    std::vector<Label> labels(n);
    for (Vertex v = 0; v < n; ++v) {
      if (t.is_leaf(v)) {
        labels[v] = t.leaf_label(v);
        continue;
      }
      auto kids = t.children(v);
      if (kids.size() <= 2) {
        children[v].assign(kids.begin(), kids.end());
      }
    }
    std::vector<Vertex> fresh_base(multifurcating.size());
    std::size_t total = n;
    for (std::size_t i = 0; i < multifurcating.size(); ++i) {
      fresh_base[i] = static_cast<Vertex>(total);
      total += t.children(multifurcating[i]).size() - 2;  // d-2 new inners
      // local inner ids are d..2d-2; the local root maps onto the vertex
      // itself, the rest onto fresh vertices.
    }
    children.resize(total);
    labels.resize(total);
    for (std::size_t i = 0; i < multifurcating.size(); ++i) {
      Vertex v = multifurcating[i];
      auto kids = t.children(v);
      const std::size_t d = kids.size();
      const std::uint32_t local_root = chosen_root[i];
      auto map_node = [&](std::uint32_t node) -> Vertex {
        if (node < d) return kids[node];
        if (node == local_root) return v;
        std::uint32_t rank = node - static_cast<std::uint32_t>(d);
        // ranks skip the local root slot
        if (node > local_root) --rank;
        return fresh_base[i] + rank;
      };
      for (std::uint32_t node = 0; node < 2 * d - 1; ++node) {
        if (node == local_root) continue;
        children[map_node(chosen_parent[i][node])].push_back(map_node(node));
      }
    }
    return RootedTree::build(t.root(), children, labels);
  }
};

}  // namespace

void for_each_binary_refinement(
    const RootedTree& t, const std::function<bool(const RootedTree&)>& fn) {
  RefinementEnumerator e{t, fn, {}, {}, {}};
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (t.children(v).size() > 2) e.multifurcating.push_back(v);
  }
  if (e.multifurcating.empty()) {
    fn(t);
    return;
  }
  e.chosen_parent.resize(e.multifurcating.size());
  e.chosen_root.resize(e.multifurcating.size());
  e.descend(0);
}

std::vector<RootedTree> enumerate_binary_refinements(const RootedTree& t) {
  std::vector<RootedTree> out;
  for_each_binary_refinement(t, [&](const RootedTree& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

std::optional<RootedTree> compat_tp(const RootedTree& t,
                                    const PartitionSystem& ps,
                                    const SolverOptions& options) {
  if (!ps.empty() && t.leaves() != ps.ground()) {
    throw Error(errc::ground_set_mismatch,
                "tree leaves and system ground set differ");
  }
  RefinementCount count = count_binary_refinements(t);
  if (count.exceeds(options.budget)) {
    throw BudgetError(count.to_string(), options.budget);
  }
  // Every tree is a refinement of itself.
  if (system_compatible_fixed(t, ps).compatible) return t;
  if (options.prune) {
    // A refinement of t compatible with P makes t r-compatible with P.
    for (const Partition& p : ps.members()) {
      if (!is_r_compatible(t, p).r_compatible()) return std::nullopt;
    }
  }
  std::optional<RootedTree> found;
  for_each_binary_refinement(t, [&](const RootedTree& candidate) {
    for (const Partition& p : ps.members()) {
      if (!is_compatible(candidate, p).compatible()) return true;
    }
    found = candidate;
    return false;
  });
  return found;
}

std::optional<RootedTree> exist_tp(const PartitionSystem& ps,
                                   const SolverOptions& options) {
  return compat_tp(star_tree(ps.ground()), ps, options);
}

FitchMap::FitchMap(LabelSet ground, unsigned color_count)
    : ground_(std::move(ground)), colors_(color_count) {
  if (!is_label_set(ground_) || ground_.size() < 2) {
    throw Error(errc::ground_set_too_small,
                "a Fitch map needs at least two labels");
  }
  if (colors_ > 64) {
    throw Error(errc::too_many_colors, "at most 64 colors are supported");
  }
  table_.assign(ground_.size() * (ground_.size() - 1) / 2, 0);
}

std::size_t FitchMap::index_of(const Label& x) const {
  auto it = std::lower_bound(ground_.begin(), ground_.end(), x);
  if (it == ground_.end() || *it != x) {
    throw Error(errc::unknown_label, "label '" + x + "' not in ground set");
  }
  return static_cast<std::size_t>(it - ground_.begin());
}

std::size_t FitchMap::cell(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  // upper triangle, row-major
  return i * (2 * ground_.size() - i - 1) / 2 + (j - i - 1);
}

std::uint64_t FitchMap::at(std::size_t i, std::size_t j) const {
  if (i == j) {
    throw Error(errc::empty_argument, "Fitch maps are irreflexive");
  }
  return table_[cell(i, j)];
}

std::uint64_t FitchMap::at(const Label& x, const Label& y) const {
  return at(index_of(x), index_of(y));
}

void FitchMap::add(std::size_t i, std::size_t j, std::uint64_t mask) {
  if (i == j) {
    throw Error(errc::empty_argument, "Fitch maps are irreflexive");
  }
  table_[cell(i, j)] |= mask;
}

void FitchMap::add(const Label& x, const Label& y, std::uint64_t mask) {
  add(index_of(x), index_of(y), mask);
}

bool FitchMap::operator==(const FitchMap& other) const {
  return ground_ == other.ground_ && colors_ == other.colors_ &&
         table_ == other.table_;
}

namespace {

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

unsigned parse_color(std::string_view token, std::size_t line_no) {
  token = trim_view(token);
  unsigned color = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), color);
  if (ec != std::errc() || ptr != token.data() + token.size() || color < 1 ||
      color > 64) {
    throw Error(errc::unknown_color, "line " + std::to_string(line_no) +
                                         ": bad color '" + std::string(token) +
                                         "'");
  }
  return color;
}

}  // namespace

FitchMap parse_fitch_map(std::string_view text) {
  struct Entry {
    Label x, y;
    std::uint64_t mask;
  };
  std::vector<Entry> entries;
  std::vector<Label> seen;
  LabelSet declared_ground;
  unsigned declared_colors = 0;
  unsigned max_color = 0;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = trim_view(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("ground:")) {
      std::string_view rest = line.substr(7);
      std::size_t at = 0;
      while (at <= rest.size()) {
        std::size_t comma = rest.find(',', at);
        if (comma == std::string_view::npos) comma = rest.size();
        std::string_view token = trim_view(rest.substr(at, comma - at));
        if (token.empty()) {
          throw Error(errc::syntax_error,
                      "line " + std::to_string(line_no) + ": empty label");
        }
        declared_ground.emplace_back(token);
        at = comma + 1;
      }
      declared_ground = make_label_set(std::move(declared_ground));
      continue;
    }
    if (line.starts_with("colors:")) {
      declared_colors = parse_color(line.substr(7), line_no);
      continue;
    }
    std::size_t colon = line.find(':');
    std::size_t comma = line.find(',');
    if (colon == std::string_view::npos || comma == std::string_view::npos ||
        comma > colon) {
      throw Error(errc::syntax_error, "line " + std::to_string(line_no) +
                                          ": expected 'x,y: colors'");
    }
    Entry e;
    e.x = std::string(trim_view(line.substr(0, comma)));
    e.y = std::string(trim_view(line.substr(comma + 1, colon - comma - 1)));
    if (e.x.empty() || e.y.empty() || e.x == e.y) {
      throw Error(errc::syntax_error, "line " + std::to_string(line_no) +
                                          ": need two distinct labels");
    }
    e.mask = 0;
    std::string_view rest = trim_view(line.substr(colon + 1));
    if (!rest.empty()) {
      std::size_t at = 0;
      while (at <= rest.size()) {
        std::size_t next = rest.find(',', at);
        if (next == std::string_view::npos) next = rest.size();
        unsigned color = parse_color(rest.substr(at, next - at), line_no);
        max_color = std::max(max_color, color);
        e.mask |= std::uint64_t{1} << (color - 1);
        at = next + 1;
      }
    }
    seen.push_back(e.x);
    seen.push_back(e.y);
    entries.push_back(std::move(e));
  }

  LabelSet ground = declared_ground.empty() ? make_label_set(std::move(seen))
                                            : declared_ground;
  unsigned colors = declared_colors ? declared_colors : max_color;
  FitchMap eps(std::move(ground), colors);
  for (const Entry& e : entries) {
    if (declared_colors && declared_colors < 64 &&
        (e.mask >> declared_colors) != 0) {
      throw Error(errc::unknown_color, "color above the declared count");
    }
    eps.add(e.x, e.y, e.mask);
  }
  return eps;
}

std::string fitch_map_to_text(const FitchMap& eps) {
  std::string out;
  const LabelSet& ground = eps.ground();
  for (std::size_t i = 0; i < ground.size(); ++i) {
    for (std::size_t j = i + 1; j < ground.size(); ++j) {
      std::uint64_t mask = eps.at(i, j);
      if (!mask) continue;
      out += ground[i] + "," + ground[j] + ":";
      bool first = true;
      for (unsigned m = 1; m <= eps.color_count(); ++m) {
        if (mask & (std::uint64_t{1} << (m - 1))) {
          out += first ? " " : ",";
          out += std::to_string(m);
          first = false;
        }
      }
      out += '\n';
    }
  }
  return out;
}

FitchMap fitch_map_of(const EdgeColoredTree& tc) {
  const RootedTree& t = tc.tree;
  if (tc.lambda.size() != t.vertex_count()) {
    throw Error(errc::invalid_tree, "lambda does not index the tree edges");
  }
  FitchMap eps(t.leaves(), tc.colors);
  const LabelSet& ground = t.leaves();
  for (unsigned m = 1; m <= tc.colors; ++m) {
    const std::uint64_t bit = std::uint64_t{1} << (m - 1);
    std::vector<Vertex> cut;
    for (Vertex v = 1; v < t.vertex_count(); ++v) {
      if (tc.lambda[v] & bit) cut.push_back(v);
    }
    Partition components = forest_partition(t, cut);
    std::vector<BlockId> block_of(ground.size());
    for (std::size_t i = 0; i < ground.size(); ++i) {
      block_of[i] = components.block_of(ground[i]);
    }
    for (std::size_t i = 0; i < ground.size(); ++i) {
      for (std::size_t j = i + 1; j < ground.size(); ++j) {
        if (block_of[i] != block_of[j]) eps.add(i, j, bit);
      }
    }
  }
  return eps;
}

std::optional<Partition> monochromatic_partition(const FitchMap& eps,
                                                 unsigned color) {
  if (color < 1 || color > 64) {
    throw Error(errc::unknown_color, "colors are numbered 1..64");
  }
  const LabelSet& ground = eps.ground();
  const std::size_t n = ground.size();
  const std::uint64_t bit = std::uint64_t{1} << (color - 1);
  std::vector<std::size_t> up(n);
  for (std::size_t i = 0; i < n; ++i) up[i] = i;
  auto find = [&](std::size_t v) {
    while (up[v] != v) {
      up[v] = up[up[v]];
      v = up[v];
    }
    return v;
  };
  // Components of the non-edge graph.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(eps.at(i, j) & bit)) up[find(i)] = find(j);
    }
  }
  // Complete multipartite iff each component is fully non-adjacent.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((eps.at(i, j) & bit) && find(i) == find(j)) return std::nullopt;
    }
  }
  std::vector<LabelSet> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[find(i)].push_back(ground[i]);
  std::erase_if(blocks, [](const LabelSet& b) { return b.empty(); });
  return Partition::validate(std::move(blocks), ground);
}

namespace {

std::vector<Partition> monochromatic_partitions(const FitchMap& eps) {
  std::vector<Partition> out;
  out.reserve(eps.color_count());
  for (unsigned m = 1; m <= eps.color_count(); ++m) {
    std::optional<Partition> p = monochromatic_partition(eps, m);
    if (!p) throw FitchColorError(m);
    out.push_back(std::move(*p));
  }
  return out;
}

// lambda from the canonical separating sets, one color at a time.
EdgeColoredTree color_by_canonical_sets(RootedTree tree,
                                        std::span<const Partition> parts,
                                        unsigned colors) {
  EdgeColoredTree tc;
  tc.lambda.assign(tree.vertex_count(), 0);
  tc.colors = colors;
  for (unsigned m = 1; m <= colors; ++m) {
    SeparatingEdgeSet set = canonical_separating_edges(tree, parts[m - 1]);
    for (Vertex v : set.edges) {
      tc.lambda[v] |= std::uint64_t{1} << (m - 1);
    }
  }
  tc.tree = std::move(tree);
  return tc;
}

}  // namespace

std::optional<EdgeColoredTree> explainable(const FitchMap& eps,
                                           const UnrootedTree& t) {
  if (eps.ground() != t.leaves()) {
    throw Error(errc::leaf_set_mismatch,
                "map ground set and tree leaves differ");
  }
  std::vector<Partition> parts = monochromatic_partitions(eps);
  RootedTree rooted = root_default(t);
  for (const Partition& p : parts) {
    if (!is_compatible(rooted, p).compatible()) return std::nullopt;
  }
  return color_by_canonical_sets(std::move(rooted), parts, eps.color_count());
}

std::optional<EdgeColoredTree> symm_fitch_recognition(
    const FitchMap& eps, const SolverOptions& options) {
  std::vector<Partition> parts = monochromatic_partitions(eps);
  PartitionSystem ps = PartitionSystem::make(parts, eps.ground());
  std::optional<RootedTree> tree = exist_tp(ps, options);
  if (!tree) return std::nullopt;
  return color_by_canonical_sets(std::move(*tree), parts, eps.color_count());
}

}  // namespace treecut
