#include "treecut/refine.hpp"

#include <algorithm>

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;

}  // namespace

std::vector<UnresolvedBlock> unresolved_blocks(const RootedTree& t,
                                               const Partition& p,
                                               const EdgeColoring& gamma) {
  std::vector<UnresolvedBlock> out;
  for (auto [vertex, block] : local_unresolved_vertices(t, p, gamma)) {
    out.push_back({block, vertex});
  }
  return out;
}

RootedTree build_refinement(const RootedTree& t, const Partition& p,
                            const EdgeColoring& gamma) {
  auto pairs = local_unresolved_vertices(t, p, gamma);
  if (pairs.empty()) return t;

  const std::size_t n = t.vertex_count();
  std::vector<std::vector<Vertex>> children(n);
  std::vector<Label> labels(n);
  for (Vertex v = 0; v < n; ++v) {
    auto kids = t.children(v);
    children[v].assign(kids.begin(), kids.end());
    if (t.is_leaf(v)) labels[v] = t.leaf_label(v);
  }
  for (auto [u, block] : pairs) {
    Vertex fresh = static_cast<Vertex>(children.size());
    children.emplace_back();
    labels.emplace_back();
    auto& at_u = children[u];
    // Vertices created for earlier blocks at the same u carry other colors.
    auto moved = std::partition(at_u.begin(), at_u.end(), [&](Vertex c) {
      return c >= n || gamma.color(c) != block;
    });
    children[fresh].assign(moved, at_u.end());
    at_u.erase(moved, at_u.end());
    at_u.push_back(fresh);
  }
  return RootedTree::build(t.root(), children, labels);
}

RootedTree build_refinement(const RootedTree& t, const Partition& p) {
  ColoringResult run = color_edges(t, p);
  if (!run.ok()) {
    const ColorConflict& c = *run.conflict;
    throw Error(errc::not_r_compatible,
                "edge above vertex " + std::to_string(c.edge_child) +
                    " is colored by blocks " + std::to_string(c.existing) +
                    " and " + std::to_string(c.incoming));
  }
  return build_refinement(t, p, *run.coloring);
}

OverlapError::OverlapError(LabelSet cluster, LabelSet block_a, LabelSet block_b)
    : Error(errc::overlap_violation,
            "cluster " + label_set_text(cluster) + " overlaps blocks " +
                label_set_text(block_a) + " and " + label_set_text(block_b)),
      cluster_(std::move(cluster)),
      a_(std::move(block_a)),
      b_(std::move(block_b)) {}

Hierarchy refine_hierarchy(const Hierarchy& h, const Partition& p) {
  if (h.ground() != p.ground()) {
    throw Error(errc::ground_set_mismatch,
                "hierarchy and partition ground sets differ");
  }
  for (const LabelSet& y : h.clusters()) {
    const LabelSet* first = nullptr;
    for (const LabelSet& block : p.blocks()) {
      if (!overlaps(y, block)) continue;
      if (first) throw OverlapError(y, *first, block);
      first = &block;
    }
  }

  std::vector<LabelSet> closures;
  closures.reserve(p.size());
  for (const LabelSet& block : p.blocks()) closures.push_back(h.closure(block));

  std::vector<LabelSet> clusters(h.clusters().begin(), h.clusters().end());
  for (BlockId a = 0; a < p.size(); ++a) {
    bool unresolved = false;
    for (BlockId b = 0; b < p.size() && !unresolved; ++b) {
      if (b == a) continue;
      unresolved = intersects(p.block(b), closures[a]) &&
                   is_subset(closures[a], closures[b]);
    }
    if (!unresolved) continue;
    // Y_A: the union of the child clusters of A_H that meet A.
    LabelSet grouped;
    for (const LabelSet& w : h.clusters()) {
      if (w.size() >= closures[a].size() || !is_subset(w, closures[a])) continue;
      bool maximal = true;
      for (const LabelSet& mid : h.clusters()) {
        if (mid.size() <= w.size() || mid.size() >= closures[a].size()) continue;
        if (is_subset(w, mid) && is_subset(mid, closures[a]) && mid != w) {
          maximal = false;
          break;
        }
      }
      if (maximal && intersects(w, p.block(a))) grouped = set_union(grouped, w);
    }
    clusters.push_back(std::move(grouped));
  }
  return Hierarchy::validate(std::move(clusters), h.ground());
}

}  // namespace treecut
