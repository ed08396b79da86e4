#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "treecut/compat.hpp"

namespace treecut {

// An ordered collection of partitions over a common ground set.
class PartitionSystem {
 public:
  PartitionSystem() = default;

  static PartitionSystem make(std::vector<Partition> members);
  static PartitionSystem make(std::vector<Partition> members, LabelSet ground);

  const LabelSet& ground() const noexcept { return ground_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const Partition> members() const noexcept { return members_; }
  const Partition& member(std::size_t i) const { return members_[i]; }

 private:
  LabelSet ground_;
  std::vector<Partition> members_;
};

struct SystemVerdict {
  bool compatible = false;
  std::vector<CompatVerdict> members;
};

// True iff every member is individually compatible with the fixed tree.
SystemVerdict system_compatible_fixed(const RootedTree& t,
                                      const PartitionSystem& ps);

// n-ary common refinement of the members.
Partition meet_system(const PartitionSystem& ps);

// Resolution of a tree: res in [0,1] as an exact fraction, the binarity
// deficit h, and the per-vertex excess child counts.
struct ResolutionStats {
  std::size_t vertices = 0;
  std::size_t leaves = 0;
  unsigned h = 0;
  unsigned res_num = 0;
  unsigned res_den = 1;
  std::vector<std::pair<RootedTree::Vertex, unsigned>> excess;
  double res() const { return static_cast<double>(res_num) / res_den; }
};

ResolutionStats resolution_stats(const RootedTree& t);

// Number of binary refinements: the product of (2h_v+1)!! over non-binary
// vertices. Saturates instead of overflowing.
struct RefinementCount {
  unsigned __int128 value = 0;
  bool saturated = false;
  std::string to_string() const;
  bool exceeds(std::uint64_t budget) const {
    return saturated || value > budget;
  }
};

RefinementCount count_binary_refinements(const RootedTree& t);

// Streams every binary refinement in a deterministic order; the visitor
// returns false to stop early.
void for_each_binary_refinement(
    const RootedTree& t, const std::function<bool(const RootedTree&)>& fn);

std::vector<RootedTree> enumerate_binary_refinements(const RootedTree& t);

struct SolverOptions {
  std::uint64_t budget = 1'000'000;
  bool prune = true;
};

// Exact search for a binary refinement of t compatible with every member.
// Throws BudgetError when the candidate count exceeds the budget.
std::optional<RootedTree> compat_tp(const RootedTree& t,
                                    const PartitionSystem& ps,
                                    const SolverOptions& options = {});

// compat_tp from the star tree: is there any tree compatible with ps?
std::optional<RootedTree> exist_tp(const PartitionSystem& ps,
                                   const SolverOptions& options = {});

// A symmetric map on ordered leaf pairs into subsets of {1..k}, stored as an
// upper-triangular table of 64-bit color masks.
class FitchMap {
 public:
  FitchMap() = default;
  FitchMap(LabelSet ground, unsigned color_count);

  const LabelSet& ground() const noexcept { return ground_; }
  unsigned color_count() const noexcept { return colors_; }

  std::size_t index_of(const Label& x) const;  // throws unknown_label
  std::uint64_t at(std::size_t i, std::size_t j) const;
  std::uint64_t at(const Label& x, const Label& y) const;
  void add(const Label& x, const Label& y, std::uint64_t mask);
  void add(std::size_t i, std::size_t j, std::uint64_t mask);

  bool operator==(const FitchMap& other) const;

 private:
  std::size_t cell(std::size_t i, std::size_t j) const;

  LabelSet ground_;
  unsigned colors_ = 0;
  std::vector<std::uint64_t> table_;
};

// Lines "x,y: m1,m2"; omitted pairs mean the empty set; symmetric entries
// are merged. Optional "ground:" and "colors:" headers.
FitchMap parse_fitch_map(std::string_view text);
std::string fitch_map_to_text(const FitchMap& eps);

// A tree with an arbitrary edge coloring into subsets of {1..k}; lambda is
// indexed by child vertex, bit m-1 encodes color m.
struct EdgeColoredTree {
  RootedTree tree;
  std::vector<std::uint64_t> lambda;
  unsigned colors = 0;
};

// The map explained by (T, lambda): colors on the connecting path.
FitchMap fitch_map_of(const EdgeColoredTree& tc);

// Maximal independent sets of the color-m graph, if it is complete
// multipartite; nullopt otherwise.
std::optional<Partition> monochromatic_partition(const FitchMap& eps,
                                                 unsigned color);

// An edge coloring of (a rooted version of) the tree explaining eps, if one
// exists. Throws FitchColorError when a monochromatic map is not a
// symmetrized Fitch map.
std::optional<EdgeColoredTree> explainable(const FitchMap& eps,
                                           const UnrootedTree& t);

// Full recognition: find any edge-colored tree explaining eps.
std::optional<EdgeColoredTree> symm_fitch_recognition(
    const FitchMap& eps, const SolverOptions& options = {});

}  // namespace treecut
