#include "treecut/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace treecut {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::empty_block: return "EmptyBlock";
    case errc::coverage_gap: return "CoverageGap";
    case errc::block_overlap: return "BlockOverlap";
    case errc::unknown_label: return "UnknownLabel";
    case errc::empty_cluster: return "EmptyCluster";
    case errc::missing_ground_set: return "MissingGroundSet";
    case errc::missing_singleton: return "MissingSingleton";
    case errc::overlapping_clusters: return "OverlappingClusters";
    case errc::ground_set_too_small: return "GroundSetTooSmall";
    case errc::empty_argument: return "EmptyArgument";
    case errc::ground_set_mismatch: return "GroundSetMismatch";
    case errc::leaf_set_mismatch: return "LeafSetMismatch";
    case errc::not_inner_vertex: return "NotInnerVertex";
    case errc::too_few_leaves: return "TooFewLeaves";
    case errc::unary_inner_vertex: return "UnaryInnerVertex";
    case errc::invalid_tree: return "InvalidTree";
    case errc::syntax_error: return "SyntaxError";
    case errc::duplicate_leaf: return "DuplicateLeaf";
    case errc::empty_tree: return "EmptyTree";
    case errc::unknown_vertex: return "UnknownVertex";
    case errc::unknown_color: return "UnknownColor";
    case errc::foreign_edge: return "ForeignEdge";
    case errc::not_compatible: return "NotCompatible";
    case errc::not_r_compatible: return "NotRCompatible";
    case errc::overlap_violation: return "OverlapViolation";
    case errc::not_tree_like: return "NotTreeLike";
    case errc::missing_singleton_splits: return "MissingSingletonSplits";
    case errc::empty_subset: return "EmptySubset";
    case errc::empty_system: return "EmptySystem";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_monochromatic_fitch: return "NotMonochromaticFitch";
    case errc::too_many_colors: return "TooManyColors";
    case errc::too_large: return "TooLarge";
  }
  return "UnknownError";
}

Error::Error(errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

BudgetError::BudgetError(std::string candidate_count, unsigned long long budget)
    : Error(errc::budget_exceeded,
            candidate_count + " candidate trees exceed the budget of " +
                std::to_string(budget)),
      count_(std::move(candidate_count)) {}

FitchColorError::FitchColorError(unsigned color)
    : Error(errc::not_monochromatic_fitch,
            "monochromatic map for color " + std::to_string(color) +
                " is not a symmetrized Fitch map"),
      color_(color) {}

LabelSet make_label_set(std::vector<Label> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

bool is_label_set(const LabelSet& s) {
  return std::is_sorted(s.begin(), s.end()) &&
         std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool set_contains(const LabelSet& s, const Label& x) {
  return std::binary_search(s.begin(), s.end(), x);
}

bool is_subset(const LabelSet& a, const LabelSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

LabelSet set_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

LabelSet set_intersection(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

LabelSet set_difference(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool intersects(const LabelSet& a, const LabelSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return false;
}

bool overlaps(const LabelSet& a, const LabelSet& b) {
  return intersects(a, b) && !is_subset(a, b) && !is_subset(b, a);
}

std::string label_set_text(const LabelSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i];
  }
  out += '}';
  return out;
}

namespace {

void check_ground(const LabelSet& ground) {
  if (!is_label_set(ground)) {
    throw Error(errc::unknown_label, "ground set is not sorted and unique");
  }
  for (const Label& x : ground) {
    if (x.empty()) throw Error(errc::unknown_label, "empty label in ground set");
  }
  if (ground.size() < 2) {
    throw Error(errc::ground_set_too_small,
                "a ground set needs at least two labels, got " +
                    std::to_string(ground.size()));
  }
}

void sort_blocks_canonically(std::vector<LabelSet>& blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const LabelSet& a, const LabelSet& b) {
              return a.front() < b.front();
            });
}

}  // namespace

Partition Partition::validate(std::vector<LabelSet> blocks, LabelSet ground) {
  check_ground(ground);
  Partition p;
  p.ground_ = std::move(ground);
  std::size_t covered = 0;
  for (LabelSet& block : blocks) {
    if (block.empty()) throw Error(errc::empty_block, "partition contains an empty block");
    std::sort(block.begin(), block.end());
    if (std::adjacent_find(block.begin(), block.end()) != block.end()) {
      throw Error(errc::block_overlap, "duplicate label inside a block");
    }
    for (const Label& x : block) {
      if (!set_contains(p.ground_, x)) {
        throw Error(errc::unknown_label, "label '" + x + "' not in ground set");
      }
    }
    covered += block.size();
  }
  sort_blocks_canonically(blocks);
  p.blocks_ = std::move(blocks);
  for (BlockId b = 0; b < p.blocks_.size(); ++b) {
    for (const Label& x : p.blocks_[b]) {
      auto [it, inserted] = p.index_.emplace(x, b);
      if (!inserted) {
        throw Error(errc::block_overlap,
                    "label '" + x + "' appears in two blocks");
      }
    }
  }
  if (covered < p.ground_.size()) {
    LabelSet all;
    for (const auto& b : p.blocks_) all = set_union(all, b);
    throw Error(errc::coverage_gap,
                "blocks do not cover " +
                    label_set_text(set_difference(p.ground_, all)));
  }
  p.block_ranks_.resize(p.blocks_.size());
  for (BlockId b = 0; b < p.blocks_.size(); ++b) {
    p.block_ranks_[b].reserve(p.blocks_[b].size());
    for (const Label& x : p.blocks_[b]) {
      auto at = std::lower_bound(p.ground_.begin(), p.ground_.end(), x);
      p.block_ranks_[b].push_back(
          static_cast<std::uint32_t>(at - p.ground_.begin()));
    }
  }
  return p;
}

BlockId Partition::block_of(const Label& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) {
    throw Error(errc::unknown_label, "label '" + x + "' not in ground set");
  }
  return it->second;
}

bool Partition::operator==(const Partition& other) const {
  return ground_ == other.ground_ && blocks_ == other.blocks_;
}

std::string Partition::to_text() const {
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += '|';
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      if (j) out += ',';
      out += blocks_[i][j];
    }
  }
  return out;
}

Partition validate_partition(std::vector<LabelSet> blocks, LabelSet ground) {
  return Partition::validate(std::move(blocks), std::move(ground));
}

Partition singleton_partition(const LabelSet& ground) {
  std::vector<LabelSet> blocks;
  blocks.reserve(ground.size());
  for (const Label& x : ground) blocks.push_back({x});
  return Partition::validate(std::move(blocks), ground);
}

Partition trivial_partition(const LabelSet& ground) {
  return Partition::validate({ground}, ground);
}

Hierarchy Hierarchy::validate(std::vector<LabelSet> clusters, LabelSet ground,
                              bool autocomplete) {
  check_ground(ground);
  Hierarchy h;
  h.ground_ = std::move(ground);
  for (LabelSet& c : clusters) {
    if (c.empty()) throw Error(errc::empty_cluster, "hierarchy contains the empty set");
    c = make_label_set(std::move(c));
    for (const Label& x : c) {
      if (!set_contains(h.ground_, x)) {
        throw Error(errc::unknown_label, "label '" + x + "' not in ground set");
      }
    }
  }
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

  auto has = [&clusters](const LabelSet& c) {
    return std::binary_search(clusters.begin(), clusters.end(), c);
  };
  bool needs_resort = false;
  if (!has(h.ground_)) {
    if (!autocomplete) {
      throw Error(errc::missing_ground_set, "X itself must be a cluster");
    }
    clusters.push_back(h.ground_);
    needs_resort = true;
  }
  for (const Label& x : h.ground_) {
    LabelSet single{x};
    if (!has(single)) {
      if (!autocomplete) {
        throw Error(errc::missing_singleton, "missing singleton {" + x + "}");
      }
      clusters.push_back(std::move(single));
      needs_resort = true;
    }
  }
  if (needs_resort) std::sort(clusters.begin(), clusters.end());

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      if (overlaps(clusters[i], clusters[j])) {
        throw Error(errc::overlapping_clusters,
                    label_set_text(clusters[i]) + " overlaps " +
                        label_set_text(clusters[j]));
      }
    }
  }
  h.clusters_ = std::move(clusters);
  return h;
}

bool Hierarchy::contains_cluster(const LabelSet& c) const {
  return std::binary_search(clusters_.begin(), clusters_.end(), c);
}

LabelSet Hierarchy::closure(const LabelSet& a) const {
  if (a.empty()) throw Error(errc::empty_argument, "closure of the empty set");
  for (const Label& x : a) {
    if (!set_contains(ground_, x)) {
      throw Error(errc::unknown_label, "label '" + x + "' not in ground set");
    }
  }
  const LabelSet* best = nullptr;
  for (const LabelSet& c : clusters_) {
    if (c.size() < a.size()) continue;
    if (best && c.size() >= best->size()) continue;
    if (is_subset(a, c)) best = &c;
  }
  // X is always a candidate, so best is never null here.
  return *best;
}

bool Hierarchy::operator==(const Hierarchy& other) const {
  return ground_ == other.ground_ && clusters_ == other.clusters_;
}

Hierarchy validate_hierarchy(std::vector<LabelSet> clusters, LabelSet ground,
                             bool autocomplete) {
  return Hierarchy::validate(std::move(clusters), std::move(ground), autocomplete);
}

LabelSet closure(const Hierarchy& h, const LabelSet& a) { return h.closure(a); }

namespace {

void check_same_ground(const Partition& p1, const Partition& p2) {
  if (p1.ground() != p2.ground()) {
    throw Error(errc::ground_set_mismatch,
                "partitions live on different ground sets");
  }
}

}  // namespace

Partition meet(const Partition& p1, const Partition& p2) {
  check_same_ground(p1, p2);
  std::vector<LabelSet> blocks;
  for (const LabelSet& a : p1.blocks()) {
    for (const LabelSet& b : p2.blocks()) {
      LabelSet cut = set_intersection(a, b);
      if (!cut.empty()) blocks.push_back(std::move(cut));
    }
  }
  return Partition::validate(std::move(blocks), p1.ground());
}

Partition join(const Partition& p1, const Partition& p2) {
  check_same_ground(p1, p2);
  // Union-find over the blocks of both partitions; two blocks are merged
  // whenever they share an element.
  const std::size_t n1 = p1.size();
  const std::size_t total = n1 + p2.size();
  std::vector<std::size_t> up(total);
  std::iota(up.begin(), up.end(), 0);
  auto find = [&up](std::size_t v) {
    while (up[v] != v) {
      up[v] = up[up[v]];
      v = up[v];
    }
    return v;
  };
  auto unite = [&](std::size_t a, std::size_t b) { up[find(a)] = find(b); };
  for (const Label& x : p1.ground()) {
    unite(p1.block_of(x), n1 + p2.block_of(x));
  }
  std::unordered_map<std::size_t, LabelSet> groups;
  for (const Label& x : p1.ground()) {
    groups[find(p1.block_of(x))].push_back(x);
  }
  std::vector<LabelSet> blocks;
  blocks.reserve(groups.size());
  for (auto& [root, labels] : groups) blocks.push_back(std::move(labels));
  return Partition::validate(std::move(blocks), p1.ground());
}

Partition meet_all(std::span<const Partition> ps, const LabelSet& ground) {
  Partition acc = trivial_partition(ground);
  for (const Partition& p : ps) acc = meet(acc, p);
  return acc;
}

bool locally_comparable(const Partition& p1, const Partition& p2) {
  check_same_ground(p1, p2);
  for (const LabelSet& a : p1.blocks()) {
    for (const LabelSet& b : p2.blocks()) {
      if (overlaps(a, b)) return false;
    }
  }
  return true;
}

bool refines(const Partition& fine, const Partition& coarse) {
  check_same_ground(fine, coarse);
  for (const LabelSet& a : fine.blocks()) {
    if (!is_subset(a, coarse.block(coarse.block_of(a.front())))) return false;
  }
  return true;
}

}  // namespace treecut
