#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "treecut/errors.hpp"

namespace treecut {

// Labels are plain text; every canonical order in the library derives from
// their lexicographic order.
using Label = std::string;

// A sorted, duplicate-free vector of labels. All set-valued arguments and
// results use this representation.
using LabelSet = std::vector<Label>;

using BlockId = std::uint32_t;
inline constexpr BlockId kNoBlock = std::numeric_limits<BlockId>::max();

LabelSet make_label_set(std::vector<Label> labels);
bool is_label_set(const LabelSet& s);
bool set_contains(const LabelSet& s, const Label& x);
bool is_subset(const LabelSet& a, const LabelSet& b);
LabelSet set_union(const LabelSet& a, const LabelSet& b);
LabelSet set_intersection(const LabelSet& a, const LabelSet& b);
LabelSet set_difference(const LabelSet& a, const LabelSet& b);
bool intersects(const LabelSet& a, const LabelSet& b);

// True iff a and b overlap: they intersect and neither contains the other.
bool overlaps(const LabelSet& a, const LabelSet& b);

std::string label_set_text(const LabelSet& s);  // "{a,b,c}"

// A partition of a ground set X: disjoint non-empty blocks covering X.
// Canonical form: each block sorted, blocks ordered by their smallest label.
class Partition {
 public:
  Partition() = default;

  // Validates (P0) no empty block, (P1) blocks cover `ground`,
  // (P2) blocks pairwise disjoint. Throws Error on violation.
  static Partition validate(std::vector<LabelSet> blocks, LabelSet ground);

  const LabelSet& ground() const noexcept { return ground_; }
  std::size_t size() const noexcept { return blocks_.size(); }
  const LabelSet& block(BlockId b) const { return blocks_[b]; }
  std::span<const LabelSet> blocks() const noexcept { return blocks_; }
  BlockId block_of(const Label& x) const;  // throws unknown_label

  // Block members as positions in the sorted ground set; lets the hot paths
  // work on integers instead of label lookups.
  std::span<const std::uint32_t> block_ranks(BlockId b) const {
    return block_ranks_[b];
  }

  bool operator==(const Partition& other) const;

  std::string to_text() const;  // "a|b,c|d,e"

 private:
  LabelSet ground_;
  std::vector<LabelSet> blocks_;
  std::vector<std::vector<std::uint32_t>> block_ranks_;
  std::unordered_map<Label, BlockId> index_;
};

Partition validate_partition(std::vector<LabelSet> blocks, LabelSet ground);
Partition singleton_partition(const LabelSet& ground);
Partition trivial_partition(const LabelSet& ground);  // {X}

// A hierarchy on X: a laminar cluster family containing X and all singletons.
// Clusters are kept sorted lexicographically as label vectors.
class Hierarchy {
 public:
  Hierarchy() = default;

  // Validates (H0)-(H3). With autocomplete == true, X and missing singletons
  // are added instead of being reported as errors.
  static Hierarchy validate(std::vector<LabelSet> clusters, LabelSet ground,
                            bool autocomplete = false);

  const LabelSet& ground() const noexcept { return ground_; }
  std::span<const LabelSet> clusters() const noexcept { return clusters_; }
  std::size_t size() const noexcept { return clusters_.size(); }
  bool contains_cluster(const LabelSet& c) const;

  // cl(a): the inclusion-minimal cluster containing a. Throws empty_argument
  // for a == {} and unknown_label if a is not a subset of the ground set.
  LabelSet closure(const LabelSet& a) const;

  bool operator==(const Hierarchy& other) const;

 private:
  LabelSet ground_;
  std::vector<LabelSet> clusters_;
};

Hierarchy validate_hierarchy(std::vector<LabelSet> clusters, LabelSet ground,
                             bool autocomplete = false);
LabelSet closure(const Hierarchy& h, const LabelSet& a);

// Partition lattice operations. Both arguments must share the ground set.
Partition meet(const Partition& p1, const Partition& p2);
Partition join(const Partition& p1, const Partition& p2);
Partition meet_all(std::span<const Partition> ps, const LabelSet& ground);
bool locally_comparable(const Partition& p1, const Partition& p2);

// True iff every block of `fine` is contained in a block of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

}  // namespace treecut
