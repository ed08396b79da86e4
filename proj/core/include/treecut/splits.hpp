#pragma once

#include <compare>
#include <optional>

#include "treecut/compat.hpp"

namespace treecut {

// A split A|(X\A). The stored first side is the one containing the smallest
// label of X, which also fixes the serialized form.
class Split {
 public:
  Split() = default;
  Split(LabelSet side, const LabelSet& ground);

  const LabelSet& first() const noexcept { return a_; }
  const LabelSet& second() const noexcept { return b_; }
  bool separates(const Label& x, const Label& y) const;

  std::string to_text() const;  // "a,b|c,d,e"

  bool operator==(const Split& other) const = default;
  auto operator<=>(const Split& other) const = default;

 private:
  LabelSet a_, b_;
};

class SplitSystem {
 public:
  SplitSystem() = default;

  static SplitSystem make(std::vector<Split> splits, LabelSet ground);

  const LabelSet& ground() const noexcept { return ground_; }
  std::span<const Split> splits() const noexcept { return splits_; }
  std::size_t size() const noexcept { return splits_.size(); }
  bool contains(const Split& s) const;
  bool tree_like() const;  // cached Buneman verdict

 private:
  LabelSet ground_;
  std::vector<Split> splits_;
  mutable std::optional<bool> tree_like_;
};

// One split per edge of the unrooted tree.
SplitSystem splits_of(const UnrootedTree& t);

// Buneman test: every pair of splits has an empty small intersection.
bool pairwise_compatible(const SplitSystem& s);

// The unique unrooted tree displaying a tree-like split system that contains
// all singleton splits.
UnrootedTree tree_of_splits(const SplitSystem& s);

// The split system of a partition, with all singleton splits added. A block
// equal to X contributes no split.
SplitSystem split_system_of_partition(const Partition& p);

// Some subset of s whose common refinement is p, if one exists.
std::optional<std::vector<Split>> is_compatible_splits(const SplitSystem& s,
                                                       const Partition& p);

// The restriction of t to the leaves in y, with degree-two vertices
// suppressed. Requires |y| >= 3 so the result stays phylogenetic.
UnrootedTree restrict_to(const UnrootedTree& t, const LabelSet& y);

// Reference procedures that peel one block-split at a time.
bool is_compatible_recursive(const UnrootedTree& t, const Partition& p);
bool is_r_compatible_recursive(const UnrootedTree& t, const Partition& p);

}  // namespace treecut
