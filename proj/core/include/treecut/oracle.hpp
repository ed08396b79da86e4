#pragma once

#include <functional>
#include <optional>

#include "treecut/systems.hpp"

// Brute-force reference implementations. They back the tests and the CLI's
// --oracle self-check and are never on the fast path; hard size guards raise
// too_large instead of running forever.
namespace treecut::oracle {

inline constexpr std::size_t kMaxBruteEdges = 20;
inline constexpr std::size_t kMaxEnumLeaves = 6;
inline constexpr std::size_t kMaxExistLeaves = 5;
inline constexpr std::size_t kMaxPartitionLeaves = 10;

// Exhausts all 2^|E| edge subsets.
bool brute_compatible(const RootedTree& t, const Partition& p);

// All rooted phylogenetic trees on x, up to isomorphism, deterministic order.
// The visitor returns false to stop early.
void for_each_rooted_tree(const LabelSet& x,
                          const std::function<bool(const RootedTree&)>& fn);
std::vector<RootedTree> enumerate_rooted_trees(const LabelSet& x);

// Some enumerated refinement of t is brute-compatible with p.
bool brute_r_compatible(const RootedTree& t, const Partition& p);

// Scan all trees for one compatible with every member.
std::optional<RootedTree> brute_exist_tp(const PartitionSystem& ps);

// All partitions of x, deterministic order.
std::vector<Partition> enumerate_partitions(const LabelSet& x);

}  // namespace treecut::oracle
