#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treecut/tree.hpp"

namespace treecut {

// A parsed Newick tree. Branch lengths are accepted and discarded; inner
// vertex names are kept so edge annotations can address inner edges.
struct NewickDocument {
  std::string text;
  RootedTree tree;
  std::vector<std::string> vertex_name;  // per canonical vertex; "" if unnamed
  std::unordered_map<std::string, RootedTree::Vertex> name_index;
};

NewickDocument parse_newick_document(std::string_view text);
RootedTree parse_newick(std::string_view text);

// Canonical Newick: children ordered by smallest descendant label, no branch
// lengths, no inner names. parse(serialize(t)) == t.
std::string serialize_newick(const RootedTree& t);

// One partition per line, blocks separated by '|', labels by ','.
Partition parse_partition_line(std::string_view line, const LabelSet& ground);

// Non-comment lines become partitions, order preserved. Errors carry the
// 1-based line number.
std::vector<Partition> parse_partition_system_text(std::string_view text,
                                                   const LabelSet& ground);

struct PartitionDocument {
  LabelSet ground;
  bool declared_ground = false;  // "ground: a,b,c" header present
  std::vector<Partition> partitions;
};

// Ground set comes from a "ground:" header if present, otherwise it is the
// union of all labels in the file.
PartitionDocument parse_partition_document(std::string_view text);

// Edge annotations "vertex: c1,c2", one edge per line. A vertex is addressed
// by its leaf label, its Newick inner name, or its canonical id "v<k>"; the
// annotated edge is the one above it. Missing edges get the empty set.
// Returns one color bitmask per vertex (bit m-1 encodes color m in 1..k).
std::vector<std::uint64_t> parse_edge_colors(std::string_view text,
                                             const NewickDocument& doc,
                                             unsigned color_count);

// Resolve a vertex reference as used by parse_edge_colors and the CLI.
RootedTree::Vertex resolve_vertex(const NewickDocument& doc,
                                  std::string_view ref);

// Canonical display id for a vertex: the leaf label, or "v<k>".
std::string vertex_display(const RootedTree& t, RootedTree::Vertex v);

}  // namespace treecut
