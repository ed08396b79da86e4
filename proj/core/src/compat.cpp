#include "treecut/compat.hpp"

#include <algorithm>
#include <numeric>

#include "treecut/refine.hpp"

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;

struct DisjointSets {
  std::vector<Vertex> up;
  explicit DisjointSets(std::size_t n) : up(n) {
    std::iota(up.begin(), up.end(), 0);
  }
  Vertex find(Vertex v) {
    while (up[v] != v) {
      up[v] = up[up[v]];
      v = up[v];
    }
    return v;
  }
  void unite(Vertex a, Vertex b) { up[find(a)] = find(b); }
};

Partition blocks_by_component(DisjointSets& sets, const RootedTree& t) {
  std::vector<std::vector<Label>> by_root(t.vertex_count());
  for (Vertex leaf : t.leaves_below(t.root())) {
    by_root[sets.find(leaf)].push_back(t.leaf_label(leaf));
  }
  std::vector<LabelSet> blocks;
  for (auto& labels : by_root) {
    if (!labels.empty()) blocks.push_back(std::move(labels));
  }
  return Partition::validate(std::move(blocks), t.leaves());
}

}  // namespace

Partition forest_partition(const RootedTree& t,
                           std::span<const RootedTree::Vertex> separating) {
  std::vector<char> cut(t.vertex_count(), 0);
  for (Vertex v : separating) {
    if (v >= t.vertex_count() || v == t.root()) {
      throw Error(errc::foreign_edge, "not an edge of the tree");
    }
    cut[v] = 1;
  }
  DisjointSets sets(t.vertex_count());
  for (Vertex v = 1; v < t.vertex_count(); ++v) {
    if (!cut[v]) sets.unite(v, t.parent(v));
  }
  return blocks_by_component(sets, t);
}

Partition forest_partition(const UnrootedTree& t,
                           std::span<const UnrootedTree::Edge> separating) {
  std::vector<UnrootedTree::Edge> cut;
  cut.reserve(separating.size());
  for (UnrootedTree::Edge e : separating) {
    UnrootedTree::Edge norm{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!t.has_edge(norm)) {
      throw Error(errc::foreign_edge, "not an edge of the tree");
    }
    cut.push_back(norm);
  }
  std::sort(cut.begin(), cut.end());
  DisjointSets sets(t.vertex_count());
  for (UnrootedTree::Vertex v = 0; v < t.vertex_count(); ++v) {
    for (UnrootedTree::Vertex w : t.neighbors(v)) {
      if (v >= w) continue;
      if (std::binary_search(cut.begin(), cut.end(),
                             UnrootedTree::Edge{v, w})) {
        continue;
      }
      sets.unite(v, w);
    }
  }
  std::vector<std::vector<Label>> by_root(t.vertex_count());
  for (UnrootedTree::Vertex v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) by_root[sets.find(v)].push_back(t.leaf_label(v));
  }
  std::vector<LabelSet> blocks;
  for (auto& labels : by_root) {
    if (!labels.empty()) blocks.push_back(std::move(labels));
  }
  return Partition::validate(std::move(blocks), t.leaves());
}

namespace {

CompatVerdict check_rooted(const RootedTree& t, const Partition& p) {
  LcaIndex index(t);
  ColoringResult run = color_edges(t, p, index);
  CompatVerdict verdict;
  if (!run.ok()) {
    verdict.status = Compat::incompatible;
    verdict.conflict = run.conflict;
    return verdict;
  }
  const EdgeColoring& gamma = *run.coloring;

  Vertex violating = RootedTree::kNoVertex;
  for (Vertex u = 0; u < t.vertex_count() && violating == RootedTree::kNoVertex;
       ++u) {
    if (t.is_leaf(u)) continue;
    BlockId seen = kNoBlock;
    for (Vertex c : t.children(u)) {
      BlockId b = gamma.color(c);
      if (b == kNoBlock) continue;
      if (seen == kNoBlock) {
        seen = b;
      } else if (b != seen) {
        violating = u;
        break;
      }
    }
  }

  if (violating == RootedTree::kNoVertex) {
    verdict.status = Compat::compatible;
    SeparatingEdgeSet set;
    set.tree = &t;
    for (Vertex v : run.block_root) {
      if (v != t.root()) set.edges.push_back(v);
    }
    std::sort(set.edges.begin(), set.edges.end());
    verdict.separating_edges = std::move(set);
  } else {
    verdict.status = Compat::r_compatible_only;
    verdict.violating_vertex = violating;
    verdict.refinement = build_refinement(t, p, gamma);
  }
  return verdict;
}

}  // namespace

CompatVerdict is_compatible(const RootedTree& t, const Partition& p) {
  return check_rooted(t, p);
}

CompatVerdict is_r_compatible(const RootedTree& t, const Partition& p) {
  return check_rooted(t, p);
}

UnrootedVerdict is_compatible_unrooted(const UnrootedTree& t,
                                       const Partition& p) {
  if (t.leaves() != p.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "tree leaves and partition ground set differ");
  }
  // root_default reproduces the unrooted tree's canonical vertex ids, so
  // rooted edges translate back as {parent(v), v}.
  RootedTree rooted = root_default(t);
  CompatVerdict inner = check_rooted(rooted, p);
  UnrootedVerdict verdict;
  verdict.status = inner.status;
  switch (inner.status) {
    case Compat::compatible:
      for (Vertex v : inner.separating_edges->edges) {
        Vertex u = rooted.parent(v);
        verdict.separating_edges.push_back({std::min(u, v), std::max(u, v)});
      }
      std::sort(verdict.separating_edges.begin(),
                verdict.separating_edges.end());
      break;
    case Compat::r_compatible_only:
      verdict.refinement = unroot(*inner.refinement);
      break;
    case Compat::incompatible: {
      Vertex v = inner.conflict->edge_child;
      Vertex u = rooted.parent(v);
      verdict.conflict_edge = UnrootedTree::Edge{std::min(u, v), std::max(u, v)};
      verdict.conflict_a = inner.conflict->existing;
      verdict.conflict_b = inner.conflict->incoming;
      break;
    }
  }
  return verdict;
}

bool is_compatible_via_thm2(const Hierarchy& h, const Partition& p) {
  if (h.ground() != p.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "hierarchy and partition ground sets differ");
  }
  std::vector<LabelSet> closures;
  closures.reserve(p.size());
  for (const LabelSet& block : p.blocks()) closures.push_back(h.closure(block));
  // (i) each closure is a union of blocks
  for (const LabelSet& ah : closures) {
    for (const LabelSet& block : p.blocks()) {
      if (intersects(block, ah) && !is_subset(block, ah)) return false;
    }
  }
  // (ii) distinct blocks have distinct closures
  for (std::size_t i = 0; i < closures.size(); ++i) {
    for (std::size_t j = i + 1; j < closures.size(); ++j) {
      if (closures[i] == closures[j]) return false;
    }
  }
  return true;
}

SeparatingEdgeSet canonical_separating_edges(const RootedTree& t,
                                             const Partition& p) {
  require_matching_leaves(t, p);
  LcaIndex index(t);
  SeparatingEdgeSet set;
  set.tree = &t;
  for (const LabelSet& block : p.blocks()) {
    Vertex v = index.lca_of(block);
    if (v != t.root()) set.edges.push_back(v);
  }
  std::sort(set.edges.begin(), set.edges.end());
  set.edges.erase(std::unique(set.edges.begin(), set.edges.end()),
                  set.edges.end());
  if (forest_partition(t, set.edges) != p) {
    throw Error(errc::not_compatible,
                "partition is not compatible with the tree");
  }
  return set;
}

SeparatingEdgeSet minimum_separating_edges(const RootedTree& t,
                                           const Partition& p) {
  SeparatingEdgeSet canonical = canonical_separating_edges(t, p);
  if (canonical.edges.size() == p.size() - 1) return canonical;

  // No block closes to X here, so the canonical set carries one edge per
  // block. Drop the edge of an inclusion-maximal closure; the leaf ranges of
  // a preorder tree turn containment into interval containment.
  LcaIndex index(t);
  struct Candidate {
    Vertex v;
    std::uint32_t begin, end;
    BlockId block;
  };
  std::vector<Candidate> cands;
  cands.reserve(p.size());
  for (BlockId b = 0; b < p.size(); ++b) {
    Vertex v = index.lca_of(p.block(b));
    auto below = t.leaves_below(v);
    cands.push_back({v, below.empty() ? 0 : below.front(),
                     static_cast<std::uint32_t>(below.back() + 1), b});
  }
  BlockId drop = kNoBlock;
  for (const Candidate& c : cands) {
    bool maximal = true;
    for (const Candidate& other : cands) {
      if (other.v == c.v) continue;
      if (other.begin <= c.begin && c.end <= other.end) {
        maximal = false;
        break;
      }
    }
    // Blocks are in canonical order, so the first maximal candidate is the
    // one whose smallest label is lexicographically least.
    if (maximal) {
      drop = c.block;
      break;
    }
  }
  Vertex dropped_edge = cands[drop].v;
  std::erase(canonical.edges, dropped_edge);
  if (forest_partition(t, canonical.edges) != p) {
    throw Error(errc::not_compatible, "minimum separating set verification");
  }
  return canonical;
}

SeparatingEdgeSet maximum_separating_edges(const RootedTree& t,
                                           const Partition& p,
                                           const EdgeColoring& gamma) {
  require_matching_leaves(t, p);
  SeparatingEdgeSet set;
  set.tree = &t;
  for (Vertex v = 1; v < t.vertex_count(); ++v) {
    if (gamma.color(v) == kNoBlock) set.edges.push_back(v);
  }
  if (forest_partition(t, set.edges) != p) {
    throw Error(errc::not_compatible,
                "partition is not compatible with the tree");
  }
  return set;
}

bool verify_separating_set(const RootedTree& t, const Partition& p,
                           std::span<const RootedTree::Vertex> edges) {
  return forest_partition(t, edges) == p;
}

}  // namespace treecut
