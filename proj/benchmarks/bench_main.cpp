#include <benchmark/benchmark.h>

#include <random>

#include "treecut/compat.hpp"
#include "treecut/systems.hpp"

namespace {

using namespace treecut;
using Vertex = RootedTree::Vertex;

LabelSet numbered_labels(std::size_t n) {
  LabelSet out;
  out.reserve(n);
  char buf[32];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "t%07zu", i);
    out.emplace_back(buf);
  }
  return out;
}

RootedTree random_binary_tree(std::size_t n, std::mt19937_64& rng) {
  LabelSet ground = numbered_labels(n);
  std::vector<std::vector<Vertex>> children(1);
  std::vector<Label> labels{ground[0]};
  std::vector<Vertex> parent{RootedTree::kNoVertex};
  Vertex root = 0;
  std::vector<Vertex> non_root;
  for (std::size_t i = 1; i < n; ++i) {
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
      children[inner] = {root, leaf};
      parent[root] = parent[leaf] = inner;
      non_root.push_back(root);
      non_root.push_back(leaf);
      root = inner;
    } else {
      Vertex u = non_root[at];
      Vertex up = parent[u];
      for (Vertex& c : children[up]) {
        if (c == u) c = inner;
      }
      children[inner] = {u, leaf};
      parent[u] = parent[leaf] = inner;
      parent[inner] = up;
      non_root.push_back(leaf);
      non_root.push_back(inner);
    }
  }
  return RootedTree::build(root, children, labels);
}

Partition compatible_partition(const RootedTree& t, std::mt19937_64& rng,
                               int cuts) {
  std::vector<Vertex> cut;
  std::uniform_int_distribution<Vertex> pick(
      1, static_cast<Vertex>(t.vertex_count() - 1));
  for (int i = 0; i < cuts; ++i) cut.push_back(pick(rng));
  std::sort(cut.begin(), cut.end());
  cut.erase(std::unique(cut.begin(), cut.end()), cut.end());
  return forest_partition(t, cut);
}

void BM_ColorEdges(benchmark::State& state) {
  std::mt19937_64 rng(1);
  RootedTree t = random_binary_tree(state.range(0), rng);
  Partition p = compatible_partition(t, rng, 64);
  LcaIndex index(t);
  for (auto _ : state) {
    ColoringResult run = color_edges(t, p, index);
    benchmark::DoNotOptimize(run);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ColorEdges)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_IsCompatible(benchmark::State& state) {
  std::mt19937_64 rng(2);
  RootedTree t = random_binary_tree(state.range(0), rng);
  Partition p = compatible_partition(t, rng, 64);
  for (auto _ : state) {
    CompatVerdict verdict = is_compatible(t, p);
    benchmark::DoNotOptimize(verdict);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IsCompatible)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_LcaBuild(benchmark::State& state) {
  std::mt19937_64 rng(3);
  RootedTree t = random_binary_tree(state.range(0), rng);
  for (auto _ : state) {
    LcaIndex index(t);
    benchmark::DoNotOptimize(index);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LcaBuild)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_LcaQuery(benchmark::State& state) {
  std::mt19937_64 rng(4);
  RootedTree t = random_binary_tree(1 << 16, rng);
  LcaIndex index(t);
  std::uniform_int_distribution<Vertex> pick(
      0, static_cast<Vertex>(t.vertex_count() - 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.lca(pick(rng), pick(rng)));
  }
}
BENCHMARK(BM_LcaQuery);

void BM_Meet(benchmark::State& state) {
  std::mt19937_64 rng(5);
  RootedTree t = random_binary_tree(state.range(0), rng);
  Partition p = compatible_partition(t, rng, 200);
  Partition q = compatible_partition(t, rng, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(meet(p, q));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Meet)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Join(benchmark::State& state) {
  std::mt19937_64 rng(6);
  RootedTree t = random_binary_tree(state.range(0), rng);
  Partition p = compatible_partition(t, rng, 200);
  Partition q = compatible_partition(t, rng, 200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(join(p, q));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Join)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_BinaryRefinements(benchmark::State& state) {
  LabelSet ground;
  for (int i = 0; i < state.range(0); ++i) {
    ground.push_back(std::string(1, static_cast<char>('a' + i)));
  }
  RootedTree star = star_tree(ground);
  for (auto _ : state) {
    std::size_t count = 0;
    for_each_binary_refinement(star, [&](const RootedTree& r) {
      benchmark::DoNotOptimize(r);
      ++count;
      return true;
    });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_BinaryRefinements)->DenseRange(4, 7);

}  // namespace

BENCHMARK_MAIN();
