#include "treecut/tree.hpp"

#include <algorithm>

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;
constexpr Vertex kNo = RootedTree::kNoVertex;

}  // namespace

RootedTree RootedTree::build(Vertex root,
                             const std::vector<std::vector<Vertex>>& children,
                             const std::vector<Label>& labels,
                             std::vector<Vertex>* old_to_new) {
  const std::size_t n = children.size();
  if (n == 0) throw Error(errc::empty_tree, "tree has no vertices");
  if (labels.size() != n) {
    throw Error(errc::invalid_tree, "children/labels size mismatch");
  }
  if (root >= n) throw Error(errc::invalid_tree, "root index out of range");

  std::vector<Vertex> parent(n, kNo);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex c : children[v]) {
      if (c >= n) throw Error(errc::invalid_tree, "child index out of range");
      if (c == root) throw Error(errc::invalid_tree, "root has a parent");
      if (parent[c] != kNo) {
        throw Error(errc::invalid_tree, "vertex has two parents");
      }
      parent[c] = v;
    }
  }
  std::vector<Vertex> order;
  order.reserve(n);
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex c : children[order[i]]) order.push_back(c);
  }
  if (order.size() != n) {
    throw Error(errc::invalid_tree, "tree is not connected");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (children[v].empty()) {
      if (labels[v].empty()) throw Error(errc::invalid_tree, "unlabeled leaf");
    } else {
      if (children[v].size() == 1) {
        throw Error(errc::unary_inner_vertex,
                    "inner vertex with a single child");
      }
      if (!labels[v].empty()) {
        throw Error(errc::invalid_tree,
                    "label '" + labels[v] + "' on an inner vertex");
      }
    }
  }

  // Smallest descendant label per vertex, bottom-up.
  std::vector<const Label*> min_label(n, nullptr);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    if (children[v].empty()) {
      min_label[v] = &labels[v];
      continue;
    }
    const Label* m = nullptr;
    for (Vertex c : children[v]) {
      if (!m || *min_label[c] < *m) m = min_label[c];
    }
    min_label[v] = m;
  }

  std::vector<std::vector<Vertex>> kids(children);
  for (Vertex v = 0; v < n; ++v) {
    std::sort(kids[v].begin(), kids[v].end(), [&](Vertex a, Vertex b) {
      if (*min_label[a] != *min_label[b]) return *min_label[a] < *min_label[b];
      return a < b;
    });
  }

  // Canonical preorder.
  std::vector<Vertex> new_id(n, kNo);
  std::vector<Vertex> pre;
  pre.reserve(n);
  std::vector<Vertex> stack{root};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    new_id[v] = static_cast<Vertex>(pre.size());
    pre.push_back(v);
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) {
      stack.push_back(*it);
    }
  }

  RootedTree t;
  t.parent_.resize(n);
  t.label_.resize(n);
  t.child_off_.assign(n + 1, 0);
  t.child_.reserve(n - 1);
  for (Vertex i = 0; i < n; ++i) {
    Vertex v = pre[i];
    t.child_off_[i + 1] =
        t.child_off_[i] + static_cast<std::uint32_t>(kids[v].size());
    for (Vertex c : kids[v]) t.child_.push_back(new_id[c]);
    t.parent_[i] = (v == root) ? kNo : new_id[parent[v]];
    t.label_[i] = labels[v];
  }

  // Subtrees are contiguous preorder ranges [v, v + size).
  std::vector<std::uint32_t> size(n, 1);
  for (Vertex i = static_cast<Vertex>(n); i-- > 1;) size[t.parent_[i]] += size[i];
  std::vector<std::uint32_t> leaves_before(n + 1, 0);
  for (Vertex i = 0; i < n; ++i) {
    bool leaf = t.child_off_[i] == t.child_off_[i + 1];
    leaves_before[i + 1] = leaves_before[i] + (leaf ? 1 : 0);
    if (leaf) t.dfs_leaves_.push_back(i);
  }
  t.leaf_begin_.resize(n);
  t.leaf_end_.resize(n);
  for (Vertex i = 0; i < n; ++i) {
    t.leaf_begin_[i] = leaves_before[i];
    t.leaf_end_[i] = leaves_before[i + size[i]];
  }

  t.leaves_.reserve(t.dfs_leaves_.size());
  for (Vertex v : t.dfs_leaves_) {
    if (!t.leaf_index_.emplace(t.label_[v], v).second) {
      throw Error(errc::duplicate_leaf, "duplicate leaf '" + t.label_[v] + "'");
    }
    t.leaves_.push_back(t.label_[v]);
  }
  std::sort(t.leaves_.begin(), t.leaves_.end());
  if (t.leaves_.size() < 2) {
    throw Error(errc::ground_set_too_small,
                "a phylogenetic tree needs at least two leaves");
  }
  t.leaf_by_rank_.reserve(t.leaves_.size());
  for (const Label& x : t.leaves_) {
    t.leaf_by_rank_.push_back(t.leaf_index_.at(x));
  }

  if (old_to_new) *old_to_new = std::move(new_id);
  return t;
}

RootedTree::Vertex RootedTree::leaf(const Label& x) const {
  auto it = leaf_index_.find(x);
  if (it == leaf_index_.end()) {
    throw Error(errc::unknown_label, "no leaf '" + x + "'");
  }
  return it->second;
}

LabelSet RootedTree::cluster(Vertex v) const {
  LabelSet out;
  auto below = leaves_below(v);
  out.reserve(below.size());
  for (Vertex leaf : below) out.push_back(label_[leaf]);
  std::sort(out.begin(), out.end());
  return out;
}

bool RootedTree::operator==(const RootedTree& other) const {
  return parent_ == other.parent_ && child_off_ == other.child_off_ &&
         child_ == other.child_ && label_ == other.label_;
}

namespace {

// Orientation of an unrooted adjacency structure away from `start`:
// preorder over raw ids with children sorted by smallest descendant label.
struct Orientation {
  std::vector<Vertex> parent;                // raw ids
  std::vector<std::vector<Vertex>> children; // raw ids, sorted canonically
};

Orientation orient(const std::vector<std::vector<Vertex>>& adjacency,
                   const std::vector<Label>& labels, Vertex start) {
  const std::size_t n = adjacency.size();
  Orientation o;
  o.parent.assign(n, kNo);
  o.children.resize(n);
  std::vector<Vertex> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  order.push_back(start);
  seen[start] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    Vertex v = order[i];
    for (Vertex w : adjacency[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      o.parent[w] = v;
      o.children[v].push_back(w);
      order.push_back(w);
    }
  }
  if (order.size() != n) {
    throw Error(errc::invalid_tree, "tree is not connected");
  }
  std::vector<const Label*> min_label(n, nullptr);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    const Label* m = labels[v].empty() ? nullptr : &labels[v];
    for (Vertex c : o.children[v]) {
      if (!m || *min_label[c] < *m) m = min_label[c];
    }
    min_label[v] = m;
  }
  for (Vertex v = 0; v < n; ++v) {
    std::sort(o.children[v].begin(), o.children[v].end(),
              [&](Vertex a, Vertex b) {
                if (*min_label[a] != *min_label[b]) {
                  return *min_label[a] < *min_label[b];
                }
                return a < b;
              });
  }
  return o;
}

}  // namespace

UnrootedTree UnrootedTree::build(
    const std::vector<std::vector<Vertex>>& adjacency,
    const std::vector<Label>& labels) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw Error(errc::empty_tree, "tree has no vertices");
  if (labels.size() != n) {
    throw Error(errc::invalid_tree, "adjacency/labels size mismatch");
  }
  std::size_t ends = 0;
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : adjacency[v]) {
      if (w >= n || w == v) throw Error(errc::invalid_tree, "bad adjacency");
      if (std::find(adjacency[w].begin(), adjacency[w].end(), v) ==
          adjacency[w].end()) {
        throw Error(errc::invalid_tree, "adjacency is not symmetric");
      }
    }
    ends += adjacency[v].size();
  }
  if (ends != 2 * (n - 1)) {
    throw Error(errc::invalid_tree, "edge count is not |V|-1");
  }
  const Label* smallest = nullptr;
  Vertex smallest_leaf = kNo;
  std::size_t leaf_count = 0;
  for (Vertex v = 0; v < n; ++v) {
    std::size_t deg = adjacency[v].size();
    if (deg == 1) {
      if (labels[v].empty()) throw Error(errc::invalid_tree, "unlabeled leaf");
      ++leaf_count;
      if (!smallest || labels[v] < *smallest) {
        smallest = &labels[v];
        smallest_leaf = v;
      }
    } else {
      if (deg == 2) {
        throw Error(errc::unary_inner_vertex, "inner vertex of degree two");
      }
      if (deg == 0) throw Error(errc::invalid_tree, "isolated vertex");
      if (!labels[v].empty()) {
        throw Error(errc::invalid_tree,
                    "label '" + labels[v] + "' on an inner vertex");
      }
    }
  }
  if (leaf_count < 3) {
    throw Error(errc::too_few_leaves,
                "an unrooted phylogenetic tree needs at least three leaves");
  }

  Vertex anchor = adjacency[smallest_leaf][0];
  Orientation o = orient(adjacency, labels, anchor);

  std::vector<Vertex> new_id(n, kNo);
  std::vector<Vertex> pre;
  pre.reserve(n);
  std::vector<Vertex> stack{anchor};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    new_id[v] = static_cast<Vertex>(pre.size());
    pre.push_back(v);
    for (auto it = o.children[v].rbegin(); it != o.children[v].rend(); ++it) {
      stack.push_back(*it);
    }
  }

  UnrootedTree t;
  t.nbr_off_.assign(n + 1, 0);
  t.nbr_.reserve(2 * (n - 1));
  t.label_.resize(n);
  for (Vertex i = 0; i < n; ++i) {
    Vertex v = pre[i];
    std::vector<Vertex> nbrs;
    nbrs.reserve(adjacency[v].size());
    for (Vertex w : adjacency[v]) nbrs.push_back(new_id[w]);
    std::sort(nbrs.begin(), nbrs.end());
    t.nbr_off_[i + 1] = t.nbr_off_[i] + static_cast<std::uint32_t>(nbrs.size());
    for (Vertex w : nbrs) t.nbr_.push_back(w);
    t.label_[i] = labels[v];
  }
  for (Vertex i = 0; i < n; ++i) {
    if (t.degree(i) == 1) {
      t.leaf_index_.emplace(t.label_[i], i);
      t.leaves_.push_back(t.label_[i]);
    }
  }
  std::sort(t.leaves_.begin(), t.leaves_.end());
  if (std::adjacent_find(t.leaves_.begin(), t.leaves_.end()) !=
      t.leaves_.end()) {
    throw Error(errc::duplicate_leaf, "duplicate leaf label");
  }
  return t;
}

UnrootedTree::Vertex UnrootedTree::leaf(const Label& x) const {
  auto it = leaf_index_.find(x);
  if (it == leaf_index_.end()) {
    throw Error(errc::unknown_label, "no leaf '" + x + "'");
  }
  return it->second;
}

std::vector<UnrootedTree::Edge> UnrootedTree::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Vertex v = 0; v < vertex_count(); ++v) {
    for (Vertex w : neighbors(v)) {
      if (v < w) out.push_back({v, w});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool UnrootedTree::has_edge(Edge e) const {
  if (e.u >= vertex_count() || e.v >= vertex_count()) return false;
  auto ns = neighbors(e.u);
  return std::binary_search(ns.begin(), ns.end(), e.v);
}

bool UnrootedTree::operator==(const UnrootedTree& other) const {
  return nbr_off_ == other.nbr_off_ && nbr_ == other.nbr_ &&
         label_ == other.label_;
}

Hierarchy hierarchy_of(const RootedTree& t) {
  std::vector<LabelSet> clusters;
  clusters.reserve(t.vertex_count());
  for (RootedTree::Vertex v = 0; v < t.vertex_count(); ++v) {
    clusters.push_back(t.cluster(v));
  }
  return Hierarchy::validate(std::move(clusters), t.leaves());
}

RootedTree tree_of(const Hierarchy& h) {
  const auto clusters = h.clusters();
  const std::size_t k = clusters.size();
  std::vector<std::vector<Vertex>> children(k);
  std::vector<Label> labels(k);
  Vertex root = kNo;
  for (Vertex i = 0; i < k; ++i) {
    if (clusters[i].size() == 1) labels[i] = clusters[i].front();
    if (clusters[i].size() == h.ground().size()) root = i;
    // Parent: the strict superset of minimal size.
    Vertex best = kNo;
    for (Vertex j = 0; j < k; ++j) {
      if (clusters[j].size() <= clusters[i].size()) continue;
      if (best != kNo && clusters[j].size() >= clusters[best].size()) continue;
      if (is_subset(clusters[i], clusters[j])) best = j;
    }
    if (best != kNo) children[best].push_back(i);
  }
  return RootedTree::build(root, children, labels);
}

bool is_refinement(const RootedTree& t_star, const RootedTree& t) {
  if (t_star.leaves() != t.leaves()) {
    throw Error(errc::leaf_set_mismatch, "trees have different leaf sets");
  }
  std::vector<LabelSet> big, small;
  big.reserve(t_star.vertex_count());
  small.reserve(t.vertex_count());
  for (Vertex v = 0; v < t_star.vertex_count(); ++v) big.push_back(t_star.cluster(v));
  for (Vertex v = 0; v < t.vertex_count(); ++v) small.push_back(t.cluster(v));
  std::sort(big.begin(), big.end());
  std::sort(small.begin(), small.end());
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

RootedTree contract_edge(const RootedTree& t, RootedTree::Vertex child) {
  if (child >= t.vertex_count() || child == t.root() || t.is_leaf(child)) {
    throw Error(errc::not_inner_vertex, "only inner non-root edges contract");
  }
  const std::size_t n = t.vertex_count();
  std::vector<std::vector<Vertex>> children(n);
  std::vector<Label> labels(n);
  for (Vertex v = 0; v < n; ++v) {
    if (t.is_leaf(v)) labels[v] = t.leaf_label(v);
    if (v == child) continue;
    Vertex target = v;
    for (Vertex c : t.children(v)) {
      if (c == child) {
        for (Vertex cc : t.children(child)) children[target].push_back(cc);
      } else {
        children[target].push_back(c);
      }
    }
  }
  // `child` keeps an empty slot; splice it out by rebuilding without it.
  std::vector<std::vector<Vertex>> compact;
  std::vector<Label> compact_labels;
  std::vector<Vertex> remap(n, kNo);
  for (Vertex v = 0; v < n; ++v) {
    if (v == child) continue;
    remap[v] = static_cast<Vertex>(compact.size());
    compact.emplace_back();
    compact_labels.push_back(labels[v]);
  }
  for (Vertex v = 0; v < n; ++v) {
    if (v == child) continue;
    for (Vertex c : children[v]) compact[remap[v]].push_back(remap[c]);
  }
  return RootedTree::build(remap[t.root()], compact, compact_labels);
}

RootedTree star_tree(const LabelSet& ground) {
  std::vector<std::vector<Vertex>> children(ground.size() + 1);
  std::vector<Label> labels(ground.size() + 1);
  for (Vertex i = 0; i < ground.size(); ++i) {
    children[0].push_back(i + 1);
    labels[i + 1] = ground[i];
  }
  return RootedTree::build(0, children, labels);
}

namespace {

std::vector<std::vector<Vertex>> adjacency_of(const UnrootedTree& t) {
  std::vector<std::vector<Vertex>> adj(t.vertex_count());
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    auto ns = t.neighbors(v);
    adj[v].assign(ns.begin(), ns.end());
  }
  return adj;
}

std::vector<Label> labels_of(const UnrootedTree& t) {
  std::vector<Label> labels(t.vertex_count());
  for (Vertex v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) labels[v] = t.leaf_label(v);
  }
  return labels;
}

}  // namespace

RootedTree root_at(const UnrootedTree& t, UnrootedTree::Vertex inner) {
  if (inner >= t.vertex_count() || t.is_leaf(inner)) {
    throw Error(errc::not_inner_vertex, "rooting vertex must be inner");
  }
  auto adj = adjacency_of(t);
  auto labels = labels_of(t);
  Orientation o = orient(adj, labels, inner);
  return RootedTree::build(inner, o.children, labels);
}

RootedTree root_default(const UnrootedTree& t) {
  Vertex leaf = t.leaf(t.leaves().front());
  return root_at(t, t.neighbors(leaf)[0]);
}

RootedTree root_on_edge(const UnrootedTree& t, UnrootedTree::Edge e) {
  if (!t.has_edge({std::min(e.u, e.v), std::max(e.u, e.v)})) {
    throw Error(errc::foreign_edge, "no such edge");
  }
  auto adj = adjacency_of(t);
  auto labels = labels_of(t);
  // Subdivide e with a fresh root vertex.
  const Vertex root = static_cast<Vertex>(adj.size());
  std::erase(adj[e.u], e.v);
  std::erase(adj[e.v], e.u);
  adj[e.u].push_back(root);
  adj[e.v].push_back(root);
  adj.push_back({e.u, e.v});
  labels.emplace_back();
  Orientation o = orient(adj, labels, root);
  return RootedTree::build(root, o.children, labels);
}

UnrootedTree unroot(const RootedTree& t) {
  if (t.leaf_count() < 3) {
    throw Error(errc::too_few_leaves, "unrooting needs at least three leaves");
  }
  const std::size_t n = t.vertex_count();
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 1; v < n; ++v) {
    adj[v].push_back(t.parent(v));
    adj[t.parent(v)].push_back(v);
  }
  std::vector<Label> labels(n);
  for (Vertex v = 0; v < n; ++v) {
    if (t.is_leaf(v)) labels[v] = t.leaf_label(v);
  }
  auto root_children = t.children(t.root());
  if (root_children.size() == 2) {
    // Suppress the degree-two root: merge its two incident edges.
    Vertex a = root_children[0];
    Vertex b = root_children[1];
    std::erase(adj[a], t.root());
    std::erase(adj[b], t.root());
    adj[a].push_back(b);
    adj[b].push_back(a);
    adj[t.root()].clear();
    // Rebuild without the root vertex.
    std::vector<std::vector<Vertex>> compact(n - 1);
    std::vector<Label> compact_labels(n - 1);
    for (Vertex v = 1; v < n; ++v) {
      for (Vertex w : adj[v]) {
        if (w == t.root()) continue;
        compact[v - 1].push_back(w - 1);
      }
      compact_labels[v - 1] = labels[v];
    }
    return UnrootedTree::build(compact, compact_labels);
  }
  return UnrootedTree::build(adj, labels);
}

LcaIndex::LcaIndex(const RootedTree& t) : tree_(&t) {
  const std::size_t n = t.vertex_count();
  tour_.reserve(2 * n - 1);
  tour_depth_.reserve(2 * n - 1);
  first_.assign(n, 0);
  struct Frame {
    Vertex v;
    std::uint32_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({t.root(), 0});
  first_[t.root()] = 0;
  tour_.push_back(t.root());
  tour_depth_.push_back(0);
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto kids = t.children(f.v);
    if (f.next < kids.size()) {
      Vertex c = kids[f.next++];
      first_[c] = static_cast<std::uint32_t>(tour_.size());
      tour_.push_back(c);
      tour_depth_.push_back(static_cast<std::uint32_t>(stack.size()));
      stack.push_back({c, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        tour_.push_back(stack.back().v);
        tour_depth_.push_back(static_cast<std::uint32_t>(stack.size() - 1));
      }
    }
  }

  const std::size_t len = tour_.size();

  const std::size_t blocks = (len + kBlock - 1) / kBlock;
  log2_.resize(blocks + 1);
  log2_[1] = 0;
  for (std::size_t i = 2; i <= blocks; ++i) log2_[i] = log2_[i / 2] + 1;

  const unsigned levels = log2_[blocks] + 1;
  table_.resize(levels);
  table_[0].resize(blocks);
  for (std::uint32_t b = 0; b < blocks; ++b) {
    std::uint32_t lo = b * kBlock;
    std::uint32_t hi =
        std::min<std::uint32_t>(lo + kBlock, static_cast<std::uint32_t>(len)) - 1;
    table_[0][b] = scan(lo, hi);
  }
  for (unsigned k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    table_[k].resize(blocks - span + 1);
    for (std::uint32_t b = 0; b + span <= blocks; ++b) {
      std::uint32_t x = table_[k - 1][b];
      std::uint32_t y = table_[k - 1][b + span / 2];
      table_[k][b] = tour_depth_[x] <= tour_depth_[y] ? x : y;
    }
  }
}

std::uint32_t LcaIndex::scan(std::uint32_t lo, std::uint32_t hi) const {
  std::uint32_t best = lo;
  for (std::uint32_t i = lo + 1; i <= hi; ++i) {
    if (tour_depth_[i] < tour_depth_[best]) best = i;
  }
  return best;
}

std::uint32_t LcaIndex::argmin(std::uint32_t lo, std::uint32_t hi) const {
  const std::uint32_t bl = lo / kBlock;
  const std::uint32_t bh = hi / kBlock;
  if (bl == bh) return scan(lo, hi);
  std::uint32_t best = scan(lo, (bl + 1) * kBlock - 1);
  std::uint32_t right = scan(bh * kBlock, hi);
  if (tour_depth_[right] < tour_depth_[best]) best = right;
  if (bl + 1 <= bh - 1) {
    const unsigned k = log2_[bh - bl - 1];
    std::uint32_t x = table_[k][bl + 1];
    std::uint32_t y = table_[k][bh - (1u << k)];
    std::uint32_t mid = tour_depth_[x] <= tour_depth_[y] ? x : y;
    if (tour_depth_[mid] < tour_depth_[best]) best = mid;
  }
  return best;
}

LcaIndex::Vertex LcaIndex::lca(Vertex a, Vertex b) const {
  std::uint32_t fa = first_[a];
  std::uint32_t fb = first_[b];
  if (fa > fb) std::swap(fa, fb);
  return tour_[argmin(fa, fb)];
}

LcaIndex::Vertex LcaIndex::lca_of(const LabelSet& labels) const {
  if (labels.empty()) {
    throw Error(errc::empty_argument, "lca of the empty set");
  }
  Vertex v = tree_->leaf(labels.front());
  for (std::size_t i = 1; i < labels.size(); ++i) {
    v = lca(v, tree_->leaf(labels[i]));
  }
  return v;
}

LcaIndex build_lca_index(const RootedTree& t) { return LcaIndex(t); }

}  // namespace treecut
