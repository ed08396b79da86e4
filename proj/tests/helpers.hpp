#pragma once

#include <random>
#include <string>
#include <vector>

#include "treecut/compat.hpp"
#include "treecut/io.hpp"
#include "treecut/tree.hpp"

namespace treecut::testing {

using Rng = std::mt19937_64;

inline LabelSet letters(std::size_t n) {
  LabelSet out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (n <= 26) {
      out.push_back(std::string(1, static_cast<char>('a' + i)));
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "t%05zu", i);
      out.emplace_back(buf);
    }
  }
  return out;
}

inline Partition random_partition(const LabelSet& ground, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick_count(1, ground.size());
  std::size_t max_blocks = pick_count(rng);
  std::vector<LabelSet> blocks(max_blocks);
  for (const Label& x : ground) {
    blocks[std::uniform_int_distribution<std::size_t>(0, max_blocks - 1)(rng)]
        .push_back(x);
  }
  std::erase_if(blocks, [](const LabelSet& b) { return b.empty(); });
  return Partition::validate(std::move(blocks), ground);
}

inline RootedTree random_binary_tree(const LabelSet& ground, Rng& rng) {
  using Vertex = RootedTree::Vertex;
  std::vector<std::vector<Vertex>> children(1);
  std::vector<Label> labels(1);
  labels.reserve(2 * ground.size());
  // vertex 0 starts as a lone leaf, then leaves are attached one at a time
  labels[0] = ground[0];
  Vertex root = 0;
  std::vector<Vertex> non_root;  // vertices with a parent
  std::vector<Vertex> parent{RootedTree::kNoVertex};
  for (std::size_t i = 1; i < ground.size(); ++i) {
    Vertex leaf = static_cast<Vertex>(children.size());
    children.emplace_back();
    labels.push_back(ground[i]);
    parent.push_back(RootedTree::kNoVertex);
    Vertex inner = static_cast<Vertex>(children.size());
    children.emplace_back();
    labels.emplace_back();
    parent.push_back(RootedTree::kNoVertex);
    std::uniform_int_distribution<std::size_t> pick(0, non_root.size());
    std::size_t at = pick(rng);
    if (at == non_root.size()) {
      // new root above the old one
      children[inner] = {root, leaf};
      parent[root] = inner;
      parent[leaf] = inner;
      non_root.push_back(root);
      non_root.push_back(leaf);
      root = inner;
    } else {
      Vertex u = non_root[at];
      Vertex up = parent[u];
      auto& kids = children[up];
      *std::find(kids.begin(), kids.end(), u) = inner;
      children[inner] = {u, leaf};
      parent[u] = inner;
      parent[inner] = up;
      parent[leaf] = inner;
      non_root.push_back(leaf);
      non_root.push_back(inner);
    }
  }
  if (ground.size() == 1) throw Error(errc::ground_set_too_small, "test tree");
  return RootedTree::build(root, children, labels);
}

// A random phylogenetic tree: random binary shape with random contractions.
inline RootedTree random_tree(const LabelSet& ground, Rng& rng) {
  RootedTree t = random_binary_tree(ground, rng);
  std::bernoulli_distribution contract(0.35);
  bool changed = true;
  while (changed) {
    changed = false;
    for (RootedTree::Vertex v = 1; v < t.vertex_count(); ++v) {
      if (!t.is_leaf(v) && contract(rng)) {
        t = contract_edge(t, v);
        changed = true;
        break;
      }
    }
  }
  return t;
}

inline Hierarchy random_hierarchy(const LabelSet& ground, Rng& rng) {
  return hierarchy_of(random_tree(ground, rng));
}

inline Partition partition_of(const std::string& text, const LabelSet& ground) {
  return parse_partition_line(text, ground);
}

}  // namespace treecut::testing
