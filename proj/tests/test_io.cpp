#include <doctest.h>

#include "fixtures.hpp"
#include "treecut/io.hpp"

using namespace treecut;
using namespace treecut::testing;

namespace {

errc parse_fails(const std::string& text) {
  try {
    parse_newick(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for: ", text);
  return errc::too_large;
}

}  // namespace

TEST_CASE("newick parsing") {
  CHECK(parse_newick("((b,c),(d,e),a);") == fig_hp_tree());
  CHECK(parse_newick("(a,b,c);") == star_tree(letters(3)));
  CHECK(parse_fails("((a));") == errc::unary_inner_vertex);
  CHECK(parse_fails("(a);") == errc::unary_inner_vertex);
  CHECK(parse_fails("a;") == errc::ground_set_too_small);
  CHECK(parse_fails("();") == errc::empty_tree);
  CHECK(parse_fails(";") == errc::empty_tree);
  CHECK(parse_fails("") == errc::empty_tree);
  CHECK(parse_fails("(a,b") == errc::syntax_error);
  CHECK(parse_fails("(a,,b);") == errc::syntax_error);
  CHECK(parse_fails("(a,b);x") == errc::syntax_error);
  CHECK(parse_fails("(a,a);") == errc::duplicate_leaf);
  CHECK(parse_fails("(a,'bc);") == errc::syntax_error);
}

TEST_CASE("newick accepts and discards branch lengths") {
  RootedTree t = parse_newick(" (a:0.1, (b:1e-3, c:7)x:2, (d,e):0.5) root ; ");
  CHECK(t == fig_hp_tree());
}

TEST_CASE("quoted labels") {
  RootedTree t = parse_newick("('x y',b,c);");
  CHECK(t.has_leaf("x y"));
  CHECK(serialize_newick(t) == "(b,c,'x y');");
}

TEST_CASE("inner vertex names are kept for addressing") {
  NewickDocument doc = parse_newick_document("((a,b)ab,(c,d)cd);");
  REQUIRE(doc.name_index.count("ab") == 1);
  REQUIRE(doc.name_index.count("cd") == 1);
  CHECK(doc.tree.cluster(doc.name_index.at("ab")) == LabelSet{"a", "b"});
  CHECK(doc.tree.cluster(doc.name_index.at("cd")) == LabelSet{"c", "d"});
  CHECK(resolve_vertex(doc, "ab") == doc.name_index.at("ab"));
  CHECK(resolve_vertex(doc, "a") == doc.tree.leaf("a"));
  CHECK(resolve_vertex(doc, "v0") == doc.tree.root());
  CHECK_THROWS_AS(resolve_vertex(doc, "nope"), Error);
  CHECK_THROWS_AS(parse_newick_document("((a,b)x,(c,d)x);"), Error);
  CHECK_THROWS_AS(parse_newick_document("((a,b)a,c);"), Error);
}

TEST_CASE("serialization is canonical and round trips") {
  CHECK(serialize_newick(star_tree(letters(3))) == "(a,b,c);");
  CHECK(serialize_newick(fig_hp_tree()) == "(a,(b,c),(d,e));");
  Rng rng(20240906);
  for (int iter = 0; iter < 50; ++iter) {
    RootedTree t = random_tree(letters(2 + iter % 12), rng);
    CHECK(parse_newick(serialize_newick(t)) == t);
  }
}

TEST_CASE("parser fuzzing never crashes") {
  Rng rng(20240907);
  const char alphabet[] = "(),;:ab'c 1.xy";
  for (int iter = 0; iter < 3000; ++iter) {
    std::uniform_int_distribution<std::size_t> len(0, 24);
    std::uniform_int_distribution<std::size_t> pick(0, sizeof(alphabet) - 2);
    std::string text;
    for (std::size_t i = len(rng); i > 0; --i) text += alphabet[pick(rng)];
    try {
      parse_newick(text);
    } catch (const Error&) {
      // every rejection is a typed, positioned error
    }
  }
}

TEST_CASE("partition line parsing") {
  LabelSet ground = letters(5);
  CHECK(parse_partition_line("a | b,c | d,e", ground) == fig_hp_partition());
  CHECK_THROWS_AS(parse_partition_line("a,b|b,c", letters(3)), Error);
  CHECK(parse_partition_line(" a ,b | c ", letters(3)) ==
        partition_of("a,b|c", letters(3)));
  CHECK_THROWS_AS(parse_partition_line("a||b", letters(2)), Error);
}

TEST_CASE("partition system parsing") {
  LabelSet ground = letters(4);
  auto system = parse_partition_system_text("a,b|c,d\na,c|b,d\n", ground);
  REQUIRE(system.size() == 2);
  CHECK(system[0] == fig_crossing_p1());
  CHECK(system[1] == fig_crossing_p2());

  CHECK(parse_partition_system_text("", ground).empty());
  CHECK(parse_partition_system_text("# comment only\n", ground).empty());

  try {
    parse_partition_system_text("a,b|c,d\na,b|b,c,d\n", ground);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("partition document ground handling") {
  PartitionDocument inferred = parse_partition_document("a,b|c\n# x\na|b,c\n");
  CHECK(inferred.ground == letters(3));
  CHECK_FALSE(inferred.declared_ground);
  REQUIRE(inferred.partitions.size() == 2);

  PartitionDocument declared =
      parse_partition_document("ground: a,b,c,d\na,b|c,d\n");
  CHECK(declared.declared_ground);
  CHECK(declared.ground == letters(4));

  // a label outside the declared ground set is an error
  CHECK_THROWS_AS(parse_partition_document("ground: a,b\na|b,c\n"), Error);
}

TEST_CASE("edge color annotations") {
  NewickDocument doc = parse_newick_document("(a,(b,c)bc,(d,e));");
  auto lambda = parse_edge_colors("bc: 1,2\na: 2\nv5:\n", doc, 2);
  CHECK(lambda[doc.name_index.at("bc")] == 0b11);
  CHECK(lambda[doc.tree.leaf("a")] == 0b10);
  CHECK(lambda[5] == 0);
  CHECK(lambda[doc.tree.leaf("d")] == 0);

  CHECK_THROWS_AS(parse_edge_colors("zz: 1\n", doc, 2), Error);
  CHECK_THROWS_AS(parse_edge_colors("a: 3\n", doc, 2), Error);
  CHECK_THROWS_AS(parse_edge_colors("v0: 1\n", doc, 2), Error);
}
