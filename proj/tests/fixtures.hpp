#pragma once

#include "helpers.hpp"

// Shared fixtures reconstructed from the worked examples: trees, partitions
// and their expected separating sets used across the unit and acceptance
// suites.
namespace treecut::testing {

// Seven-leaf tree with clusters {a,b,c}, {b,c}, {d,e,f}, {e,f}.
inline RootedTree fig_cut_tree() {
  return parse_newick("((a,(b,c)),(d,(e,f)),g);");
}

// The hierarchy H_P tree for P = a | b,c | d,e and its two minimally
// resolved companions, all compatible with P.
inline RootedTree fig_hp_tree() { return parse_newick("(a,(b,c),(d,e));"); }
inline RootedTree fig_hp_tree2() { return parse_newick("((b,c),a,d,e);"); }
inline RootedTree fig_hp_tree3() { return parse_newick("((d,e),a,b,c);"); }
inline Partition fig_hp_partition() {
  return partition_of("a|b,c|d,e", letters(5));
}

// Star on four leaves with the two-block partition it cannot explain without
// refinement, the refinement that works, and the binary tree that cannot.
inline RootedTree fig_star4() { return parse_newick("(a,b,c,d);"); }
inline RootedTree fig_star4_refined() { return parse_newick("((a,b),(c,d));"); }
inline RootedTree fig_star4_crossing() { return parse_newick("((a,c),(b,d));"); }
inline Partition fig_pair_partition() {
  return partition_of("a,b|c,d", letters(4));
}

// Five-leaf tree admitting refinements for two conflicting partitions and a
// common refinement for both.
inline RootedTree fig_conflict_tree() { return parse_newick("((a,b,c,d),e);"); }
inline Partition fig_conflict_p1() {
  return partition_of("a,b|c|d,e", letters(5));
}
inline Partition fig_conflict_p2() {
  return partition_of("a|b,c|d,e", letters(5));
}
inline RootedTree fig_conflict_common() {
  return parse_newick("(((a,b,c),d),e);");
}

// Nine-leaf compatible instance whose closure of one block is strictly
// larger than the block.
inline RootedTree fig_closure_tree() {
  return parse_newick("((a1,a2),(b1,b2),(c1,c2,(c3,d)),e);");
}
inline LabelSet fig_closure_ground() {
  return {"a1", "a2", "b1", "b2", "c1", "c2", "c3", "d", "e"};
}
inline Partition fig_closure_partition() {
  return partition_of("a1,a2|b1,b2|c1,c2,c3|d|e", fig_closure_ground());
}

// Instance whose canonical separating set is neither minimum nor maximum and
// whose minimum set is not unique.
inline RootedTree fig_minmax_tree() { return parse_newick("((a,b),(c,d));"); }
inline Partition fig_minmax_partition() {
  return partition_of("a,b|c|d", letters(4));
}

// The four-leaf system with no common refinement.
inline Partition fig_crossing_p1() {
  return partition_of("a,b|c,d", letters(4));
}
inline Partition fig_crossing_p2() {
  return partition_of("a,c|b,d", letters(4));
}

// Five-leaf unrooted instance with its split subset.
inline UnrootedTree fig_unrooted_tree() {
  return unroot(parse_newick("((a,b),c,(d,e));"));
}
inline Partition fig_unrooted_partition() {
  return partition_of("a,b,c|d,e", letters(5));
}

// The join counterexample: tree with clusters {a,b} and {a',b'} where both
// partitions are compatible but their join is not.
inline LabelSet primed_ground() { return {"a", "a'", "b", "b'"}; }
inline RootedTree join_counterexample_tree() {
  using V = RootedTree::Vertex;
  std::vector<std::vector<V>> children{{1, 4}, {2, 3}, {}, {}, {5, 6}, {}, {}};
  std::vector<Label> labels{"", "", "a", "b", "", "a'", "b'"};
  return RootedTree::build(0, children, labels);
}
inline Partition join_p1() {
  return partition_of("a,a'|b|b'", primed_ground());
}
inline Partition join_p2() {
  return partition_of("a|a'|b,b'", primed_ground());
}

// The r-compatibility counterexample: Y = {a,a',b} overlaps one block yet a
// compatible refinement exists.
inline Hierarchy overlap_hierarchy() {
  std::vector<LabelSet> clusters{{"a", "a'", "b"}};
  return Hierarchy::validate(std::move(clusters), primed_ground(), true);
}
inline Partition overlap_partition() {
  return partition_of("a,a'|b,b'", primed_ground());
}

}  // namespace treecut::testing
