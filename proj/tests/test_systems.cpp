#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "treecut/oracle.hpp"
#include "treecut/systems.hpp"

using namespace treecut;
using namespace treecut::testing;

namespace {

using Vertex = RootedTree::Vertex;

PartitionSystem crossing_system() {
  return PartitionSystem::make({fig_crossing_p1(), fig_crossing_p2()});
}

std::uint64_t random_lambda_mask(Rng& rng, unsigned colors) {
  std::uniform_int_distribution<std::uint64_t> dist(0, (1u << colors) - 1);
  return dist(rng);
}

EdgeColoredTree random_colored_tree(const LabelSet& ground, unsigned colors,
                                    Rng& rng) {
  EdgeColoredTree tc;
  tc.tree = random_tree(ground, rng);
  tc.colors = colors;
  tc.lambda.assign(tc.tree.vertex_count(), 0);
  for (Vertex v = 1; v < tc.tree.vertex_count(); ++v) {
    tc.lambda[v] = random_lambda_mask(rng, colors);
  }
  return tc;
}

}  // namespace

TEST_CASE("fixed-tree system compatibility") {
  PartitionSystem both =
      PartitionSystem::make({fig_conflict_p1(), fig_conflict_p2()});
  CHECK(system_compatible_fixed(fig_conflict_common(), both).compatible);
  CHECK_FALSE(system_compatible_fixed(fig_conflict_tree(), both).compatible);

  CHECK_FALSE(system_compatible_fixed(fig_star4(), crossing_system()).compatible);

  PartitionSystem empty = PartitionSystem::make({}, letters(4));
  CHECK(system_compatible_fixed(fig_star4(), empty).compatible);
}

TEST_CASE("system meet") {
  CHECK(meet_system(crossing_system()) == singleton_partition(letters(4)));
  PartitionSystem single = PartitionSystem::make({fig_hp_partition()});
  CHECK(meet_system(single) == fig_hp_partition());
  PartitionSystem with_bottom = PartitionSystem::make(
      {fig_hp_partition(), singleton_partition(letters(5))});
  CHECK(meet_system(with_bottom) == singleton_partition(letters(5)));
  CHECK_THROWS_AS(meet_system(PartitionSystem::make({}, letters(3))), Error);
}

TEST_CASE("resolution statistics") {
  ResolutionStats binary = resolution_stats(parse_newick("((a,b),(c,d));"));
  CHECK(binary.res() == doctest::Approx(1.0));
  CHECK(binary.h == 0);
  CHECK(binary.excess.empty());

  ResolutionStats star = resolution_stats(star_tree(letters(6)));
  CHECK(star.res() == doctest::Approx(0.0));
  CHECK(star.h == 4);
  REQUIRE(star.excess.size() == 1);
  CHECK(star.excess[0].second == 4);

  ResolutionStats mixed = resolution_stats(parse_newick("((a,b,c,d),(e,f));"));
  CHECK(mixed.h == 2);

  CHECK_THROWS_AS(resolution_stats(star_tree(letters(2))), Error);

  Rng rng(20240914);
  for (int iter = 0; iter < 50; ++iter) {
    RootedTree t = random_tree(letters(3 + iter % 10), rng);
    ResolutionStats stats = resolution_stats(t);
    unsigned sum = 0;
    for (auto [v, h] : stats.excess) sum += h;
    CHECK(sum == stats.h);
  }
}

TEST_CASE("binary refinement enumeration counts") {
  CHECK(enumerate_binary_refinements(star_tree(letters(3))).size() == 3);
  CHECK(enumerate_binary_refinements(star_tree(letters(4))).size() == 15);

  RootedTree binary = parse_newick("((a,b),(c,d));");
  auto self = enumerate_binary_refinements(binary);
  REQUIRE(self.size() == 1);
  CHECK(self[0] == binary);

  CHECK(count_binary_refinements(star_tree(letters(6))).to_string() == "945");
  CHECK(count_binary_refinements(star_tree(letters(12))).to_string() ==
        "13749310575");  // 21!!
}

TEST_CASE("binary refinements are distinct refinements, count matches") {
  Rng rng(20240915);
  for (int iter = 0; iter < 25; ++iter) {
    RootedTree t = random_tree(letters(3 + iter % 5), rng);
    RefinementCount count = count_binary_refinements(t);
    std::set<std::string> seen;
    std::size_t produced = 0;
    for_each_binary_refinement(t, [&](const RootedTree& r) {
      ++produced;
      CHECK(is_refinement(r, t));
      for (Vertex v = 0; v < r.vertex_count(); ++v) {
        CHECK(r.children(v).size() <= 2);
      }
      CHECK(seen.insert(serialize_newick(r)).second);
      return true;
    });
    CHECK(produced == static_cast<std::size_t>(count.value));
  }
}

TEST_CASE("compat_tp on the worked instances") {
  PartitionSystem both =
      PartitionSystem::make({fig_conflict_p1(), fig_conflict_p2()});
  std::optional<RootedTree> found = compat_tp(fig_conflict_tree(), both);
  REQUIRE(found.has_value());
  CHECK(is_refinement(*found, fig_conflict_tree()));
  CHECK(system_compatible_fixed(*found, both).compatible);

  CHECK_FALSE(compat_tp(fig_star4(), crossing_system()).has_value());

  // single-member systems reduce to r-compatibility
  PartitionSystem single = PartitionSystem::make({fig_pair_partition()});
  std::optional<RootedTree> refined = compat_tp(fig_star4(), single);
  REQUIRE(refined.has_value());
  CHECK(is_compatible(*refined, fig_pair_partition()).compatible());
  PartitionSystem impossible = PartitionSystem::make({fig_pair_partition()});
  CHECK_FALSE(compat_tp(fig_star4_crossing(), impossible).has_value());
}

TEST_CASE("budget refusal reports the exact count") {
  PartitionSystem ps = PartitionSystem::make({fig_pair_partition()});
  // star on 12 leaves: (2*12-3)!! candidates
  LabelSet ground = letters(12);
  PartitionSystem wide = PartitionSystem::make(
      {Partition::validate({{ground[0], ground[1]},
                            LabelSet(ground.begin() + 2, ground.end())},
                           ground)});
  SolverOptions tiny;
  tiny.budget = 10;
  try {
    compat_tp(star_tree(ground), wide, tiny);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.candidate_count() == "13749310575");
  }
}

TEST_CASE("compat_tp agrees with brute enumeration") {
  Rng rng(20240916);
  for (int iter = 0; iter < 60; ++iter) {
    LabelSet ground = letters(3 + iter % 3);  // up to 5 leaves
    RootedTree t = random_tree(ground, rng);
    std::vector<Partition> members;
    std::uniform_int_distribution<int> count(1, 3);
    for (int i = count(rng); i > 0; --i) {
      members.push_back(random_partition(ground, rng));
    }
    PartitionSystem ps = PartitionSystem::make(members);

    bool brute_found = false;
    oracle::for_each_rooted_tree(ground, [&](const RootedTree& cand) {
      if (!is_refinement(cand, t)) return true;
      for (const Partition& p : ps.members()) {
        if (!oracle::brute_compatible(cand, p)) return true;
      }
      brute_found = true;
      return false;
    });

    std::optional<RootedTree> fast = compat_tp(t, ps);
    CHECK(fast.has_value() == brute_found);
    if (fast) {
      CHECK(is_refinement(*fast, t));
      CHECK(system_compatible_fixed(*fast, ps).compatible);
    }

    SolverOptions unpruned;
    unpruned.prune = false;
    std::optional<RootedTree> slow = compat_tp(t, ps, unpruned);
    CHECK(fast.has_value() == slow.has_value());
    if (fast && slow) CHECK(*fast == *slow);
  }
}

TEST_CASE("exist_tp") {
  CHECK_FALSE(exist_tp(crossing_system()).has_value());

  PartitionSystem single = PartitionSystem::make({fig_hp_partition()});
  std::optional<RootedTree> tree = exist_tp(single);
  REQUIRE(tree.has_value());
  CHECK(is_compatible(*tree, fig_hp_partition()).compatible());

  PartitionSystem whole =
      PartitionSystem::make({trivial_partition(letters(4))});
  std::optional<RootedTree> star = exist_tp(whole);
  REQUIRE(star.has_value());
  CHECK(*star == star_tree(letters(4)));
}

TEST_CASE("join of compatible partitions can lose compatibility") {
  RootedTree t = join_counterexample_tree();
  CHECK(is_compatible(t, join_p1()).compatible());
  CHECK(is_compatible(t, join_p2()).compatible());
  Partition joined = join(join_p1(), join_p2());
  CHECK_FALSE(is_compatible(t, joined).compatible());
  // while the meet of the crossing pair is compatible though neither member is
  RootedTree star = fig_star4();
  CHECK_FALSE(is_compatible(star, fig_crossing_p1()).compatible());
  CHECK_FALSE(is_compatible(star, fig_crossing_p2()).compatible());
  CHECK(is_compatible(star, meet_system(crossing_system())).compatible());
}

TEST_CASE("fitch map construction") {
  RootedTree t = fig_hp_tree();
  EdgeColoredTree plain{t, std::vector<std::uint64_t>(t.vertex_count(), 0), 2};
  FitchMap empty = fitch_map_of(plain);
  for (std::size_t i = 0; i < t.leaves().size(); ++i) {
    for (std::size_t j = i + 1; j < t.leaves().size(); ++j) {
      CHECK(empty.at(i, j) == 0);
    }
  }

  EdgeColoredTree one = plain;
  one.lambda[t.leaf("a")] = 0b1;
  FitchMap eps = fitch_map_of(one);
  for (const Label& y : t.leaves()) {
    if (y == "a") continue;
    CHECK(eps.at("a", y) == 0b1);
  }
  CHECK(eps.at("b", "c") == 0);

  // canonical separating edges of a compatible pair separate exactly blocks
  Partition p = fig_hp_partition();
  SeparatingEdgeSet set = canonical_separating_edges(t, p);
  EdgeColoredTree canon = plain;
  for (Vertex v : set.edges) canon.lambda[v] = 0b1;
  FitchMap sep = fitch_map_of(canon);
  for (const Label& x : t.leaves()) {
    for (const Label& y : t.leaves()) {
      if (x >= y) continue;
      bool different = p.block_of(x) != p.block_of(y);
      CHECK((sep.at(x, y) == 0b1) == different);
    }
  }
}

TEST_CASE("monochromatic partition recognition") {
  LabelSet ground = letters(3);
  FitchMap complete(ground, 1);
  complete.add("a", "b", 1);
  complete.add("a", "c", 1);
  complete.add("b", "c", 1);
  auto singles = monochromatic_partition(complete, 1);
  REQUIRE(singles.has_value());
  CHECK(*singles == singleton_partition(ground));

  FitchMap none(ground, 1);
  auto whole = monochromatic_partition(none, 1);
  REQUIRE(whole.has_value());
  CHECK(*whole == trivial_partition(ground));

  // P3 is K_{1,2}, hence complete multipartite with parts {a,c} and {b}
  FitchMap path(ground, 1);
  path.add("a", "b", 1);
  path.add("b", "c", 1);
  auto p3 = monochromatic_partition(path, 1);
  REQUIRE(p3.has_value());
  CHECK(*p3 == Partition::validate({{"a", "c"}, {"b"}}, ground));

  // an edge plus an isolated vertex is not: non-adjacency fails transitivity
  FitchMap lone(ground, 1);
  lone.add("a", "b", 1);
  CHECK_FALSE(monochromatic_partition(lone, 1).has_value());
}

TEST_CASE("explainability round trips") {
  Rng rng(20240917);
  for (int iter = 0; iter < 150; ++iter) {
    LabelSet ground = letters(3 + iter % 3);
    EdgeColoredTree tc = random_colored_tree(ground, 1 + iter % 3, rng);
    FitchMap eps = fitch_map_of(tc);
    auto back = explainable(eps, unroot(tc.tree));
    REQUIRE(back.has_value());
    CHECK(fitch_map_of(*back) == eps);
  }

  // the empty map is explained by the empty coloring
  RootedTree t = star_tree(letters(4));
  FitchMap empty(letters(4), 2);
  auto lambda = explainable(empty, unroot(t));
  REQUIRE(lambda.has_value());
  for (Vertex v = 1; v < lambda->tree.vertex_count(); ++v) {
    CHECK(lambda->lambda[v] == 0);
  }
}

namespace {

FitchMap crossing_fitch_map() {
  LabelSet ground = letters(4);
  FitchMap eps(ground, 2);
  Partition p1 = fig_crossing_p1();
  Partition p2 = fig_crossing_p2();
  for (const Label& x : ground) {
    for (const Label& y : ground) {
      if (x >= y) continue;
      if (p1.block_of(x) != p1.block_of(y)) eps.add(x, y, 0b01);
      if (p2.block_of(x) != p2.block_of(y)) eps.add(x, y, 0b10);
    }
  }
  return eps;
}

}  // namespace

TEST_CASE("the crossing two-color map is rejected on every tree") {
  FitchMap eps = crossing_fitch_map();
  // both monochromatic maps are fine on their own
  CHECK(monochromatic_partition(eps, 1).has_value());
  CHECK(monochromatic_partition(eps, 2).has_value());
  oracle::for_each_rooted_tree(letters(4), [&](const RootedTree& t) {
    CHECK_FALSE(explainable(eps, unroot(t)).has_value());
    return true;
  });
  CHECK_FALSE(symm_fitch_recognition(eps).has_value());
}

TEST_CASE("recognition finds explaining trees") {
  Rng rng(20240918);
  for (int iter = 0; iter < 60; ++iter) {
    LabelSet ground = letters(3 + iter % 3);
    EdgeColoredTree tc = random_colored_tree(ground, 1 + iter % 3, rng);
    FitchMap eps = fitch_map_of(tc);
    auto found = symm_fitch_recognition(eps);
    REQUIRE(found.has_value());
    CHECK(fitch_map_of(*found) == eps);
  }

  // a single complete multipartite color is always explainable
  FitchMap eps(letters(4), 1);
  Partition p = fig_pair_partition();
  for (const Label& x : letters(4)) {
    for (const Label& y : letters(4)) {
      if (x < y && p.block_of(x) != p.block_of(y)) eps.add(x, y, 1);
    }
  }
  auto found = symm_fitch_recognition(eps);
  REQUIRE(found.has_value());
  CHECK(fitch_map_of(*found) == eps);
}

TEST_CASE("fitch map text round trip") {
  FitchMap eps = crossing_fitch_map();
  FitchMap back = parse_fitch_map(fitch_map_to_text(eps));
  CHECK(back == eps);

  FitchMap parsed = parse_fitch_map("a,b: 1,2\nb,a: 3\n# comment\nc,d:\n");
  CHECK(parsed.at("a", "b") == 0b111);
  CHECK(parsed.at("c", "d") == 0);
  CHECK(parsed.color_count() == 3);

  FitchMap with_header =
      parse_fitch_map("ground: a,b,c\ncolors: 4\na,b: 1\n");
  CHECK(with_header.ground() == letters(3));
  CHECK(with_header.color_count() == 4);

  CHECK_THROWS_AS(parse_fitch_map("a,a: 1\n"), Error);
  CHECK_THROWS_AS(parse_fitch_map("a,b: 0\n"), Error);
  CHECK_THROWS_AS(parse_fitch_map("colors: 1\na,b: 2\n"), Error);
}
