#pragma once

#include <vector>

#include "treecut/coloring.hpp"

namespace treecut {

struct UnresolvedBlock {
  BlockId block;
  RootedTree::Vertex vertex;  // lca of the block's minimal cluster
};

// The blocks whose minimal cluster is not resolved enough; empty iff the
// pair is compatible. Requires a conflict-free coloring.
std::vector<UnresolvedBlock> unresolved_blocks(const RootedTree& t,
                                               const Partition& p,
                                               const EdgeColoring& gamma);

// Construct the canonical compatible refinement: at each unresolved vertex
// the children whose edges carry the block are regrouped under a new vertex.
// Returns the input tree unchanged when it is already compatible; throws
// not_r_compatible (with the witness edge in the message) otherwise.
RootedTree build_refinement(const RootedTree& t, const Partition& p);
RootedTree build_refinement(const RootedTree& t, const Partition& p,
                            const EdgeColoring& gamma);

class OverlapError : public Error {
 public:
  OverlapError(LabelSet cluster, LabelSet block_a, LabelSet block_b);
  const LabelSet& cluster() const noexcept { return cluster_; }
  const LabelSet& block_a() const noexcept { return a_; }
  const LabelSet& block_b() const noexcept { return b_; }

 private:
  LabelSet cluster_, a_, b_;
};

// Hierarchy view of the same construction. Requires that no cluster overlaps
// two distinct blocks; throws OverlapError with the witness otherwise.
Hierarchy refine_hierarchy(const Hierarchy& h, const Partition& p);

}  // namespace treecut
