#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "treecut/core.hpp"

namespace treecut {

// A rooted phylogenetic tree: every inner vertex has at least two children,
// leaves carry the labels of X. Vertices are re-indexed at construction into
// a canonical preorder (children sorted by the smallest label below them), so
// two trees are isomorphic as leaf-labeled trees iff they compare equal.
class RootedTree {
 public:
  using Vertex = std::uint32_t;
  static constexpr Vertex kNoVertex = 0xffffffffu;

  RootedTree() = default;

  // `children[v]` lists the children of raw vertex v, `labels[v]` is the leaf
  // label (empty for inner vertices). Throws on structural violations.
  // If `old_to_new` is given it receives the raw-id -> canonical-id map.
  static RootedTree build(Vertex root,
                          const std::vector<std::vector<Vertex>>& children,
                          const std::vector<Label>& labels,
                          std::vector<Vertex>* old_to_new = nullptr);

  Vertex root() const noexcept { return 0; }
  std::size_t vertex_count() const noexcept { return parent_.size(); }
  std::size_t edge_count() const noexcept { return parent_.size() - 1; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }

  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> children(Vertex v) const {
    return {child_.data() + child_off_[v], child_off_[v + 1] - child_off_[v]};
  }
  bool is_leaf(Vertex v) const { return child_off_[v] == child_off_[v + 1]; }
  bool is_inner(Vertex v) const { return !is_leaf(v); }

  const Label& leaf_label(Vertex v) const { return label_[v]; }
  Vertex leaf(const Label& x) const;     // throws unknown_label
  bool has_leaf(const Label& x) const { return leaf_index_.count(x) != 0; }
  const LabelSet& leaves() const noexcept { return leaves_; }
  // Leaf vertex of the rank-th smallest label.
  Vertex leaf_by_rank(std::size_t rank) const { return leaf_by_rank_[rank]; }

  // Leaves below v, in preorder (a contiguous range by construction).
  std::span<const Vertex> leaves_below(Vertex v) const {
    return {dfs_leaves_.data() + leaf_begin_[v], leaf_end_[v] - leaf_begin_[v]};
  }
  std::size_t cluster_size(Vertex v) const {
    return leaf_end_[v] - leaf_begin_[v];
  }
  LabelSet cluster(Vertex v) const;  // L(T(v)), sorted

  bool operator==(const RootedTree& other) const;

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint32_t> child_off_;
  std::vector<Vertex> child_;
  std::vector<Label> label_;
  std::vector<Vertex> dfs_leaves_;
  std::vector<std::uint32_t> leaf_begin_;
  std::vector<std::uint32_t> leaf_end_;
  LabelSet leaves_;
  std::vector<Vertex> leaf_by_rank_;
  std::unordered_map<Label, Vertex> leaf_index_;
};

// An unrooted phylogenetic tree: non-leaf vertices have degree >= 3 and
// |X| >= 3. Vertex ids are canonical (preorder of the rooted view anchored at
// the inner vertex next to the smallest leaf).
class UnrootedTree {
 public:
  using Vertex = std::uint32_t;
  struct Edge {
    Vertex u, v;  // u < v
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
  };

  UnrootedTree() = default;

  static UnrootedTree build(const std::vector<std::vector<Vertex>>& adjacency,
                            const std::vector<Label>& labels);

  std::size_t vertex_count() const noexcept { return nbr_off_.size() - 1; }
  std::size_t edge_count() const noexcept { return vertex_count() - 1; }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {nbr_.data() + nbr_off_[v], nbr_off_[v + 1] - nbr_off_[v]};
  }
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  bool is_leaf(Vertex v) const { return degree(v) == 1; }

  const Label& leaf_label(Vertex v) const { return label_[v]; }
  Vertex leaf(const Label& x) const;
  const LabelSet& leaves() const noexcept { return leaves_; }

  std::vector<Edge> edges() const;  // sorted
  bool has_edge(Edge e) const;

  bool operator==(const UnrootedTree& other) const;

 private:
  std::vector<std::uint32_t> nbr_off_;
  std::vector<Vertex> nbr_;
  std::vector<Label> label_;
  LabelSet leaves_;
  std::unordered_map<Label, Vertex> leaf_index_;
};

// Hierarchy <-> rooted tree correspondence.
Hierarchy hierarchy_of(const RootedTree& t);
RootedTree tree_of(const Hierarchy& h);

// True iff t is obtainable from t_star by contracting inner edges, i.e. the
// cluster set of t is contained in the cluster set of t_star.
bool is_refinement(const RootedTree& t_star, const RootedTree& t);

// Contract the edge above `child` (an inner, non-root vertex).
RootedTree contract_edge(const RootedTree& t, RootedTree::Vertex child);

RootedTree star_tree(const LabelSet& ground);

// Rooting and unrooting transforms.
RootedTree root_at(const UnrootedTree& t, UnrootedTree::Vertex inner);
RootedTree root_default(const UnrootedTree& t);  // at the canonical anchor
RootedTree root_on_edge(const UnrootedTree& t, UnrootedTree::Edge e);
UnrootedTree unroot(const RootedTree& t);  // too_few_leaves if |X| < 3

// Euler tour + sparse table range-minimum index for lca queries. The table
// is kept over fixed-size tour blocks (queries scan at most two blocks), so
// the index stays cache-resident even for million-leaf trees.
class LcaIndex {
 public:
  using Vertex = RootedTree::Vertex;

  explicit LcaIndex(const RootedTree& t);

  Vertex lca(Vertex a, Vertex b) const;
  Vertex lca_of(const LabelSet& labels) const;  // empty_argument if empty
  const RootedTree& tree() const noexcept { return *tree_; }

 private:
  static constexpr std::uint32_t kBlock = 32;

  std::uint32_t scan(std::uint32_t lo, std::uint32_t hi) const;
  std::uint32_t argmin(std::uint32_t lo, std::uint32_t hi) const;

  const RootedTree* tree_ = nullptr;
  std::vector<Vertex> tour_;
  std::vector<std::uint32_t> tour_depth_;
  std::vector<std::uint32_t> first_;
  std::vector<std::uint8_t> log2_;
  std::vector<std::vector<std::uint32_t>> table_;  // over block minima
};

LcaIndex build_lca_index(const RootedTree& t);

}  // namespace treecut
