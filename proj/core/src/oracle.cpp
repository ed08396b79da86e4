#include "treecut/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace treecut::oracle {

namespace {

using Vertex = RootedTree::Vertex;

void guard(bool ok, const std::string& what) {
  if (!ok) throw Error(errc::too_large, what);
}

}  // namespace

bool brute_compatible(const RootedTree& t, const Partition& p) {
  require_matching_leaves(t, p);
  const std::size_t edges = t.edge_count();
  guard(edges <= kMaxBruteEdges, "brute force is capped at 20 edges");

  const auto leaves = t.leaves_below(t.root());
  std::vector<BlockId> target(t.vertex_count(), kNoBlock);
  for (Vertex leaf : leaves) target[leaf] = p.block_of(t.leaf_label(leaf));

  const std::size_t n = t.vertex_count();
  std::vector<Vertex> up(n);
  std::vector<BlockId> comp_block(n);
  std::vector<std::int32_t> block_comp(p.size());
  auto find = [&up](Vertex v) {
    while (up[v] != v) {
      up[v] = up[up[v]];
      v = up[v];
    }
    return v;
  };

  for (std::uint32_t mask = 0; mask < (1u << edges); ++mask) {
    std::iota(up.begin(), up.end(), 0);
    for (Vertex v = 1; v < n; ++v) {
      if (!(mask & (1u << (v - 1)))) up[find(v)] = find(t.parent(v));
    }
    std::fill(comp_block.begin(), comp_block.end(), kNoBlock);
    std::fill(block_comp.begin(), block_comp.end(), -1);
    bool ok = true;
    for (Vertex leaf : leaves) {
      Vertex root = find(leaf);
      BlockId b = target[leaf];
      if (comp_block[root] == kNoBlock) {
        if (block_comp[b] != -1) {
          ok = false;
          break;
        }
        comp_block[root] = b;
        block_comp[b] = static_cast<std::int32_t>(root);
      } else if (comp_block[root] != b) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

namespace {

// Streaming enumeration of rooted phylogenetic trees: a tree on S is a set
// partition of S into >= 2 parts, each part carrying a leaf or a tree.
struct TreeEnumerator {
  std::vector<std::vector<Vertex>> children;
  std::vector<Label> labels;
  std::function<bool(Vertex)> sink;  // called with the root node

  Vertex push_leaf(const Label& x) {
    children.emplace_back();
    labels.push_back(x);
    return static_cast<Vertex>(children.size() - 1);
  }

  void pop_to(std::size_t size) {
    children.resize(size);
    labels.resize(size);
  }

  bool subtrees_on(const std::vector<LabelSet>& parts, std::size_t i,
                   std::vector<Vertex>& chosen,
                   const std::function<bool()>& done) {
    if (i == parts.size()) return done();
    return subtree_on(parts[i], [&](Vertex node) {
      chosen[i] = node;
      return subtrees_on(parts, i + 1, chosen, done);
    });
  }

  bool subtree_on(const LabelSet& s, const std::function<bool(Vertex)>& fn) {
    if (s.size() == 1) {
      const std::size_t mark = children.size();
      Vertex leaf = push_leaf(s.front());
      bool keep_going = fn(leaf);
      pop_to(mark);
      return keep_going;
    }
    bool keep_going = true;
    for_each_set_partition(s, 2, [&](const std::vector<LabelSet>& parts) {
      std::vector<Vertex> chosen(parts.size());
      const std::size_t mark = children.size();
      keep_going = subtrees_on(parts, 0, chosen, [&]() {
        const std::size_t inner_mark = children.size();
        children.push_back(chosen);
        labels.emplace_back();
        bool more = fn(static_cast<Vertex>(inner_mark));
        pop_to(inner_mark);
        return more;
      });
      pop_to(mark);
      return keep_going;
    });
    return keep_going;
  }

  static void for_each_set_partition(
      const LabelSet& s, std::size_t min_parts,
      const std::function<bool(const std::vector<LabelSet>&)>& fn) {
    std::vector<LabelSet> parts;
    assign(s, 0, parts, min_parts, fn);
  }

  static bool assign(const LabelSet& s, std::size_t i,
                     std::vector<LabelSet>& parts, std::size_t min_parts,
                     const std::function<bool(const std::vector<LabelSet>&)>& fn) {
    if (i == s.size()) {
      if (parts.size() < min_parts) return true;
      return fn(parts);
    }
    for (std::size_t j = 0; j < parts.size(); ++j) {
      parts[j].push_back(s[i]);
      if (!assign(s, i + 1, parts, min_parts, fn)) return false;
      parts[j].pop_back();
    }
    parts.push_back({s[i]});
    bool keep_going = assign(s, i + 1, parts, min_parts, fn);
    parts.pop_back();
    return keep_going;
  }
};

}  // namespace

void for_each_rooted_tree(const LabelSet& x,
                          const std::function<bool(const RootedTree&)>& fn) {
  guard(x.size() <= kMaxEnumLeaves, "tree enumeration is capped at 6 leaves");
  if (x.size() < 2) {
    throw Error(errc::ground_set_too_small, "need at least two labels");
  }
  TreeEnumerator e;
  e.subtree_on(x, [&](Vertex root) {
    if (e.children[root].empty()) return true;  // a bare leaf is not a tree
    return fn(RootedTree::build(root, e.children, e.labels));
  });
}

std::vector<RootedTree> enumerate_rooted_trees(const LabelSet& x) {
  std::vector<RootedTree> out;
  for_each_rooted_tree(x, [&](const RootedTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

namespace {

std::vector<LabelSet> sorted_clusters(const RootedTree& t) {
  std::vector<LabelSet> out;
  out.reserve(t.vertex_count());
  for (Vertex v = 0; v < t.vertex_count(); ++v) out.push_back(t.cluster(v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool brute_r_compatible(const RootedTree& t, const Partition& p) {
  guard(t.leaf_count() <= kMaxEnumLeaves,
        "refinement enumeration is capped at 6 leaves");
  require_matching_leaves(t, p);
  std::vector<LabelSet> base = sorted_clusters(t);
  bool found = false;
  for_each_rooted_tree(t.leaves(), [&](const RootedTree& candidate) {
    std::vector<LabelSet> clusters = sorted_clusters(candidate);
    if (!std::includes(clusters.begin(), clusters.end(), base.begin(),
                       base.end())) {
      return true;
    }
    if (brute_compatible(candidate, p)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::optional<RootedTree> brute_exist_tp(const PartitionSystem& ps) {
  guard(ps.ground().size() <= kMaxExistLeaves,
        "tree scan is capped at 5 leaves");
  if (ps.empty()) return star_tree(ps.ground());
  std::optional<RootedTree> found;
  for_each_rooted_tree(ps.ground(), [&](const RootedTree& candidate) {
    for (const Partition& p : ps.members()) {
      if (!brute_compatible(candidate, p)) return true;
    }
    found = candidate;
    return false;
  });
  return found;
}

std::vector<Partition> enumerate_partitions(const LabelSet& x) {
  guard(x.size() <= kMaxPartitionLeaves,
        "partition enumeration is capped at 10 labels");
  std::vector<Partition> out;
  std::vector<LabelSet> parts;
  TreeEnumerator::for_each_set_partition(
      x, 1, [&](const std::vector<LabelSet>& blocks) {
        std::vector<LabelSet> copy(blocks);
        out.push_back(Partition::validate(std::move(copy), x));
        return true;
      });
  return out;
}

}  // namespace treecut::oracle
