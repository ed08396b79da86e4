#pragma once

#include <optional>
#include <span>

#include "treecut/coloring.hpp"

namespace treecut {

enum class Compat { compatible, r_compatible_only, incompatible };

// A set of separating edges of a rooted tree, each named by its child
// endpoint. `tree` is a non-owning back-reference to the tree the set was
// computed for; it must outlive the set.
struct SeparatingEdgeSet {
  const RootedTree* tree = nullptr;
  std::vector<RootedTree::Vertex> edges;  // sorted
};

struct CompatVerdict {
  Compat status = Compat::incompatible;
  // compatible: the canonical separating set.
  std::optional<SeparatingEdgeSet> separating_edges;
  // r-compatible only: a compatible refinement and a violating vertex.
  std::optional<RootedTree> refinement;
  std::optional<RootedTree::Vertex> violating_vertex;
  // incompatible: the doubly colored edge.
  std::optional<ColorConflict> conflict;

  bool compatible() const { return status == Compat::compatible; }
  bool r_compatible() const { return status != Compat::incompatible; }
};

struct UnrootedVerdict {
  Compat status = Compat::incompatible;
  std::vector<UnrootedTree::Edge> separating_edges;  // compatible
  std::optional<UnrootedTree> refinement;            // r-compatible only
  std::optional<UnrootedTree::Edge> conflict_edge;   // incompatible
  BlockId conflict_a = kNoBlock;
  BlockId conflict_b = kNoBlock;

  bool compatible() const { return status == Compat::compatible; }
  bool r_compatible() const { return status != Compat::incompatible; }
};

// The partition F(T,H) induced on the leaf set by deleting the edges in H.
// Components without leaves contribute nothing.
Partition forest_partition(const RootedTree& t,
                           std::span<const RootedTree::Vertex> separating);
Partition forest_partition(const UnrootedTree& t,
                           std::span<const UnrootedTree::Edge> separating);

// Full three-way verdict with a machine-checkable witness for each outcome.
CompatVerdict is_compatible(const RootedTree& t, const Partition& p);
CompatVerdict is_r_compatible(const RootedTree& t, const Partition& p);
UnrootedVerdict is_compatible_unrooted(const UnrootedTree& t,
                                       const Partition& p);

// Reference implementation straight from the two closure conditions:
// every A_H is a union of blocks, and distinct blocks have distinct closures.
bool is_compatible_via_thm2(const Hierarchy& h, const Partition& p);

// The per-block closure-edge set; check-and-construct, so it throws
// not_compatible when F(T,H) != P.
SeparatingEdgeSet canonical_separating_edges(const RootedTree& t,
                                             const Partition& p);

// A minimum-sized set: always |P|-1 edges.
SeparatingEdgeSet minimum_separating_edges(const RootedTree& t,
                                           const Partition& p);

// The unique maximum-sized set: all uncolored edges.
SeparatingEdgeSet maximum_separating_edges(const RootedTree& t,
                                           const Partition& p,
                                           const EdgeColoring& gamma);

bool verify_separating_set(const RootedTree& t, const Partition& p,
                           std::span<const RootedTree::Vertex> edges);

}  // namespace treecut
