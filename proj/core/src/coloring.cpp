#include "treecut/coloring.hpp"

#include <algorithm>

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;

}  // namespace

void require_matching_leaves(const RootedTree& t, const Partition& p) {
  if (t.leaves() != p.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "tree leaves and partition ground set differ");
  }
}

ColoringResult color_edges(const RootedTree& t, const Partition& p,
                           const LcaIndex& lca) {
  require_matching_leaves(t, p);
  ColoringResult res;
  EdgeColoring gamma(t.vertex_count());
  res.block_root.resize(p.size(), RootedTree::kNoVertex);

  for (BlockId b = 0; b < p.size(); ++b) {
    std::span<const std::uint32_t> block = p.block_ranks(b);
    Vertex cur_lca = t.leaf_by_rank(block.front());

    // Paints the path from v up to stop (exclusive). An edge already painted
    // with b marks the subtree as visited; a different color aborts.
    auto walk_up = [&](Vertex v, Vertex stop) -> bool {
      while (true) {
        Vertex up = t.parent(v);
        ++res.paint_ops;
        BlockId clash = kNoBlock;
        if (!gamma.paint(v, b, clash)) {
          res.conflict = ColorConflict{v, clash, b};
          return false;
        }
        if (up == stop || gamma.color(up) == b) return true;
        v = up;
      }
    };

    for (std::size_t i = 1; i < block.size(); ++i) {
      Vertex x = t.leaf_by_rank(block[i]);
      Vertex new_lca = lca.lca(x, cur_lca);
      if (!walk_up(x, new_lca)) return res;
      if (cur_lca != new_lca) {
        if (!walk_up(cur_lca, new_lca)) return res;
      }
      cur_lca = new_lca;
    }
    res.block_root[b] = cur_lca;
  }
  res.coloring = std::move(gamma);
  return res;
}

ColoringResult color_edges(const RootedTree& t, const Partition& p) {
  LcaIndex index(t);
  return color_edges(t, p, index);
}

std::vector<BlockId> color_of_edge_naive(const RootedTree& t,
                                         const Partition& p,
                                         RootedTree::Vertex edge_child) {
  if (edge_child == t.root() || edge_child >= t.vertex_count()) {
    throw Error(errc::foreign_edge, "not an edge of the tree");
  }
  require_matching_leaves(t, p);
  LabelSet below = t.cluster(edge_child);
  std::vector<BlockId> out;
  for (BlockId b = 0; b < p.size(); ++b) {
    const LabelSet& block = p.block(b);
    if (intersects(block, below) && !is_subset(block, below)) {
      out.push_back(b);
    }
  }
  return out;
}

std::vector<std::pair<RootedTree::Vertex, BlockId>> local_unresolved_vertices(
    const RootedTree& t, const Partition& p, const EdgeColoring& gamma) {
  require_matching_leaves(t, p);
  std::vector<std::pair<Vertex, BlockId>> out;
  std::vector<BlockId> seen;
  for (Vertex u = 0; u < t.vertex_count(); ++u) {
    if (t.is_leaf(u)) continue;
    seen.clear();
    for (Vertex c : t.children(u)) {
      BlockId b = gamma.color(c);
      if (b != kNoBlock) seen.push_back(b);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (seen.size() < 2) continue;
    BlockId above = (u == t.root()) ? kNoBlock : gamma.color(u);
    for (BlockId b : seen) {
      if (b != above) out.emplace_back(u, b);
    }
  }
  return out;
}

}  // namespace treecut
