#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "treecut/tree.hpp"

namespace treecut {

// The partition-induced edge coloring gamma_{T,P}: per edge an inline cell
// that is empty, one block, or the overfull sentinel. An edge is identified
// by its child endpoint; the root cell stays unused.
class EdgeColoring {
 public:
  static constexpr BlockId kOverfull = kNoBlock - 1;

  EdgeColoring() = default;
  explicit EdgeColoring(std::size_t vertex_count)
      : cells_(vertex_count, kNoBlock) {}

  std::size_t vertex_count() const noexcept { return cells_.size(); }
  bool empty(RootedTree::Vertex child) const {
    return cells_[child] == kNoBlock;
  }
  bool overfull(RootedTree::Vertex child) const {
    return cells_[child] == kOverfull;
  }
  BlockId color(RootedTree::Vertex child) const { return cells_[child]; }

  // False when the edge already carries a different block; the previous
  // color lands in `clash` and the cell becomes the overfull sentinel.
  bool paint(RootedTree::Vertex child, BlockId block, BlockId& clash) {
    BlockId& c = cells_[child];
    if (c == kNoBlock || c == block) {
      c = block;
      return true;
    }
    clash = c;
    c = kOverfull;
    return false;
  }

 private:
  std::vector<BlockId> cells_;
};

struct ColorConflict {
  RootedTree::Vertex edge_child = RootedTree::kNoVertex;
  BlockId existing = kNoBlock;
  BlockId incoming = kNoBlock;
};

struct ColoringResult {
  std::optional<EdgeColoring> coloring;  // engaged iff conflict is empty
  std::optional<ColorConflict> conflict;
  std::vector<RootedTree::Vertex> block_root;  // lca per block, on success
  std::size_t paint_ops = 0;

  bool ok() const { return coloring.has_value(); }
};

// Builds gamma_{T,P} in O(|X|) by processing each block with incremental lca
// maintenance and bottom-up edge painting; aborts on the first edge that
// would receive a second color.
ColoringResult color_edges(const RootedTree& t, const Partition& p,
                           const LcaIndex& lca);
ColoringResult color_edges(const RootedTree& t, const Partition& p);

// Exact gamma for a single edge with no cardinality cap; the independent
// oracle for color_edges.
std::vector<BlockId> color_of_edge_naive(const RootedTree& t,
                                         const Partition& p,
                                         RootedTree::Vertex edge_child);

// All (vertex, block) pairs where the block colors a child edge but not the
// parent edge and some other child edge carries a different block. These are
// exactly the spots where the tree is not resolved enough.
std::vector<std::pair<RootedTree::Vertex, BlockId>> local_unresolved_vertices(
    const RootedTree& t, const Partition& p, const EdgeColoring& gamma);

void require_matching_leaves(const RootedTree& t, const Partition& p);

}  // namespace treecut
