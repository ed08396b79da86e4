#include "treecut/splits.hpp"

#include <algorithm>

namespace treecut {

Split::Split(LabelSet side, const LabelSet& ground) {
  if (!is_label_set(side)) side = make_label_set(std::move(side));
  if (side.empty()) {
    throw Error(errc::empty_subset, "a split side must be non-empty");
  }
  if (!is_subset(side, ground)) {
    throw Error(errc::unknown_label, "split side outside the ground set");
  }
  LabelSet rest = set_difference(ground, side);
  if (rest.empty()) {
    throw Error(errc::empty_subset, "a split needs two non-empty sides");
  }
  if (set_contains(side, ground.front())) {
    a_ = std::move(side);
    b_ = std::move(rest);
  } else {
    a_ = std::move(rest);
    b_ = std::move(side);
  }
}

bool Split::separates(const Label& x, const Label& y) const {
  return set_contains(a_, x) != set_contains(a_, y);
}

std::string Split::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (i) out += ',';
    out += a_[i];
  }
  out += '|';
  for (std::size_t i = 0; i < b_.size(); ++i) {
    if (i) out += ',';
    out += b_[i];
  }
  return out;
}

SplitSystem SplitSystem::make(std::vector<Split> splits, LabelSet ground) {
  SplitSystem s;
  s.ground_ = std::move(ground);
  for (const Split& split : splits) {
    if (set_union(split.first(), split.second()) != s.ground_) {
      throw Error(errc::ground_set_mismatch,
                  "split " + split.to_text() + " is not on the ground set");
    }
  }
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  s.splits_ = std::move(splits);
  return s;
}

bool SplitSystem::contains(const Split& s) const {
  return std::binary_search(splits_.begin(), splits_.end(), s);
}

bool SplitSystem::tree_like() const {
  if (!tree_like_) tree_like_ = pairwise_compatible(*this);
  return *tree_like_;
}

SplitSystem splits_of(const UnrootedTree& t) {
  // root_default keeps the unrooted tree's canonical vertex ids, so every
  // non-root vertex contributes the split below its parent edge.
  RootedTree rooted = root_default(t);
  std::vector<Split> splits;
  splits.reserve(rooted.edge_count());
  for (RootedTree::Vertex v = 1; v < rooted.vertex_count(); ++v) {
    splits.emplace_back(rooted.cluster(v), t.leaves());
  }
  return SplitSystem::make(std::move(splits), t.leaves());
}

bool pairwise_compatible(const SplitSystem& s) {
  const auto splits = s.splits();
  for (std::size_t i = 0; i < splits.size(); ++i) {
    for (std::size_t j = i + 1; j < splits.size(); ++j) {
      const Split& x = splits[i];
      const Split& y = splits[j];
      if (intersects(x.first(), y.first()) &&
          intersects(x.first(), y.second()) &&
          intersects(x.second(), y.first()) &&
          intersects(x.second(), y.second())) {
        return false;
      }
    }
  }
  return true;
}

UnrootedTree tree_of_splits(const SplitSystem& s) {
  const LabelSet& ground = s.ground();
  if (ground.size() < 3) {
    throw Error(errc::too_few_leaves,
                "an unrooted tree needs at least three leaves");
  }
  for (const Label& x : ground) {
    if (!s.contains(Split{{x}, ground})) {
      throw Error(errc::missing_singleton_splits,
                  "missing singleton split for '" + x + "'");
    }
  }
  if (!s.tree_like()) {
    throw Error(errc::not_tree_like, "split system is not pairwise compatible");
  }
  // The sides avoiding the smallest label form a laminar family; together
  // with X and the singletons they are the hierarchy of the rooted view.
  const Label& pivot = ground.front();
  std::vector<LabelSet> clusters;
  clusters.reserve(s.size() + 2);
  for (const Split& split : s.splits()) {
    clusters.push_back(split.second());  // the side without the smallest label
  }
  clusters.push_back(ground);
  clusters.push_back({pivot});
  Hierarchy h = Hierarchy::validate(std::move(clusters), ground);
  return unroot(tree_of(h));
}

SplitSystem split_system_of_partition(const Partition& p) {
  std::vector<Split> splits;
  for (const LabelSet& block : p.blocks()) {
    if (block.size() == p.ground().size()) continue;  // X itself: no split
    splits.emplace_back(block, p.ground());
  }
  for (const Label& x : p.ground()) {
    splits.emplace_back(LabelSet{x}, p.ground());
  }
  return SplitSystem::make(std::move(splits), p.ground());
}

std::optional<std::vector<Split>> is_compatible_splits(const SplitSystem& s,
                                                       const Partition& p) {
  if (s.ground() != p.ground()) {
    throw Error(errc::ground_set_mismatch,
                "split system and partition ground sets differ");
  }
  if (!s.tree_like()) {
    throw Error(errc::not_tree_like, "split system is not tree-like");
  }
  if (p.size() == 1) return std::vector<Split>{};
  UnrootedTree tree = tree_of_splits(s);
  RootedTree rooted = root_default(tree);
  CompatVerdict verdict = is_compatible(rooted, p);
  if (!verdict.compatible()) return std::nullopt;
  std::vector<Split> subset;
  subset.reserve(verdict.separating_edges->edges.size());
  for (RootedTree::Vertex v : verdict.separating_edges->edges) {
    subset.emplace_back(rooted.cluster(v), p.ground());
  }
  std::sort(subset.begin(), subset.end());
  return subset;
}

UnrootedTree restrict_to(const UnrootedTree& t, const LabelSet& y) {
  if (y.empty()) throw Error(errc::empty_subset, "restriction to nothing");
  if (!is_subset(y, t.leaves())) {
    throw Error(errc::unknown_label, "restriction set outside the leaf set");
  }
  if (y == t.leaves()) return t;
  if (y.size() < 3) {
    throw Error(errc::too_few_leaves,
                "restriction below three leaves is not phylogenetic");
  }
  std::vector<Split> restricted;
  SplitSystem system = splits_of(t);
  for (const Split& split : system.splits()) {
    LabelSet inside = set_intersection(split.first(), y);
    LabelSet outside = set_difference(y, split.first());
    if (inside.empty() || outside.empty()) continue;
    restricted.emplace_back(std::move(inside), y);
  }
  return tree_of_splits(SplitSystem::make(std::move(restricted), y));
}

namespace {

Partition drop_block(const Partition& p, BlockId removed, const LabelSet& rest) {
  std::vector<LabelSet> blocks;
  blocks.reserve(p.size() - 1);
  for (BlockId b = 0; b < p.size(); ++b) {
    if (b != removed) blocks.push_back(p.block(b));
  }
  return Partition::validate(std::move(blocks), rest);
}

void require_same_leaves(const UnrootedTree& t, const Partition& p) {
  if (t.leaves() != p.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "tree leaves and partition ground set differ");
  }
}

}  // namespace

bool is_compatible_recursive(const UnrootedTree& t, const Partition& p) {
  require_same_leaves(t, p);
  if (p.size() == 1) return true;
  SplitSystem system = splits_of(t);
  for (BlockId b = 0; b < p.size(); ++b) {
    const LabelSet& block = p.block(b);
    if (!system.contains(Split{block, p.ground()})) continue;
    LabelSet rest = set_difference(p.ground(), block);
    // Restrictions below three leaves stay compatible with any partition of
    // the remainder, so they end the recursion.
    if (rest.size() <= 2) return true;
    Partition remainder = drop_block(p, b, rest);
    if (remainder.size() == 1) return true;
    if (is_compatible_recursive(restrict_to(t, rest), remainder)) return true;
  }
  return false;
}

bool is_r_compatible_recursive(const UnrootedTree& t, const Partition& p) {
  require_same_leaves(t, p);
  if (p.size() == 1) return true;
  SplitSystem system = splits_of(t);
  for (BlockId b = 0; b < p.size(); ++b) {
    const LabelSet& block = p.block(b);
    bool insertable = true;
    for (const Split& split : system.splits()) {
      if (!(is_subset(block, split.first()) ||
            is_subset(block, split.second()) ||
            is_subset(split.first(), block) ||
            is_subset(split.second(), block))) {
        insertable = false;
        break;
      }
    }
    if (!insertable) continue;
    LabelSet rest = set_difference(p.ground(), block);
    if (rest.size() <= 2) return true;
    Partition remainder = drop_block(p, b, rest);
    if (remainder.size() == 1) return true;
    if (is_r_compatible_recursive(restrict_to(t, rest), remainder)) return true;
  }
  return false;
}

}  // namespace treecut
