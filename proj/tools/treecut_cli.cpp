#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "treecut/io.hpp"
#include "treecut/oracle.hpp"
#include "treecut/refine.hpp"
#include "treecut/splits.hpp"
#include "treecut/systems.hpp"

namespace {

using nlohmann::json;
using namespace treecut;

// 0 compatible/success, 1 r-compatible only, 2 incompatible/none,
// 3 input error, 4 budget exceeded, 5 failed internal self-check.
enum ExitCode {
  kOk = 0,
  kRCompatibleOnly = 1,
  kNegative = 2,
  kInputError = 3,
  kBudget = 4,
  kSelfCheck = 5,
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::syntax_error, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Report {
  bool json_mode = false;
  json doc;
  std::ostringstream text;

  void field(const std::string& key, json value) { doc[key] = std::move(value); }
  template <typename... Args>
  void line(Args&&... args) {
    (text << ... << args) << '\n';
  }
  int finish(int code) {
    doc["exit"] = code;
    if (json_mode) {
      std::cout << doc.dump(2) << '\n';
    } else {
      std::cout << text.str();
    }
    return code;
  }
};

json edge_json(const RootedTree& t, RootedTree::Vertex child) {
  return json{{"child", vertex_display(t, child)},
              {"cluster", t.cluster(child)}};
}

std::string edge_text(const RootedTree& t, RootedTree::Vertex child) {
  return vertex_display(t, child) + " " + label_set_text(t.cluster(child));
}

std::uint64_t budget_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("TREECUT_BUDGET");
  if (!env) return fallback;
  return std::strtoull(env, nullptr, 10);
}

const char* status_name(Compat status) {
  switch (status) {
    case Compat::compatible: return "compatible";
    case Compat::r_compatible_only: return "r-compatible";
    case Compat::incompatible: return "incompatible";
  }
  return "?";
}

// ---------------------------------------------------------------- check ---

struct CheckArgs {
  std::string tree_file, partition_file;
  bool unrooted = false;
  bool refine = false;
  bool oracle = false;
  std::string edges = "canonical";
};

int run_check(const CheckArgs& args, Report& report) {
  NewickDocument doc = parse_newick_document(read_file(args.tree_file));
  PartitionDocument pdoc = parse_partition_document(read_file(args.partition_file));
  if (pdoc.partitions.size() != 1) {
    throw Error(errc::syntax_error,
                "check expects exactly one partition, got " +
                    std::to_string(pdoc.partitions.size()));
  }
  Partition p = pdoc.partitions.front();
  if (p.ground() != doc.tree.leaves()) {
    throw Error(errc::leaf_set_mismatch,
                "tree leaves " + label_set_text(doc.tree.leaves()) +
                    " differ from partition ground set " +
                    label_set_text(p.ground()));
  }

  Compat status;
  if (args.unrooted) {
    UnrootedTree unrooted = unroot(doc.tree);
    UnrootedVerdict verdict = is_compatible_unrooted(unrooted, p);
    status = verdict.status;
    report.field("status", status_name(status));
    report.line(status_name(status));
    if (verdict.compatible()) {
      json edges = json::array();
      report.line("separating edges:");
      RootedTree rooted = root_default(unrooted);
      for (UnrootedTree::Edge e : verdict.separating_edges) {
        Split split{rooted.cluster(std::max(e.u, e.v)), p.ground()};
        edges.push_back(split.to_text());
        report.line("  ", split.to_text());
      }
      report.field("edges", edges);
    } else if (verdict.status == Compat::r_compatible_only) {
      RootedTree refined = root_default(*verdict.refinement);
      report.field("refined_tree", serialize_newick(refined));
      report.line("refined tree: ", serialize_newick(refined));
    } else {
      Split split{root_default(unrooted).cluster(
                      std::max(verdict.conflict_edge->u, verdict.conflict_edge->v)),
                  p.ground()};
      report.field("witness_edge", split.to_text());
      report.field("witness_blocks",
                   json::array({p.block(verdict.conflict_a), p.block(verdict.conflict_b)}));
      report.line("witness edge ", split.to_text(), " is colored by blocks ",
                  label_set_text(p.block(verdict.conflict_a)), " and ",
                  label_set_text(p.block(verdict.conflict_b)));
    }
  } else {
    const RootedTree& t = doc.tree;
    CompatVerdict verdict = is_compatible(t, p);
    status = verdict.status;
    report.field("status", status_name(status));
    report.line(status_name(status));
    if (verdict.compatible()) {
      SeparatingEdgeSet set = *verdict.separating_edges;
      if (args.edges == "min") {
        set = minimum_separating_edges(t, p);
      } else if (args.edges == "max") {
        ColoringResult run = color_edges(t, p);
        set = maximum_separating_edges(t, p, *run.coloring);
      }
      json edges = json::array();
      report.line("separating edges (", args.edges, "):");
      for (RootedTree::Vertex v : set.edges) {
        edges.push_back(edge_json(t, v));
        report.line("  ", edge_text(t, v));
      }
      report.field("edges", edges);
      if (args.refine) {
        report.field("refined_tree", serialize_newick(t));
        report.line("refined tree: ", serialize_newick(t));
      }
    } else if (verdict.status == Compat::r_compatible_only) {
      report.field("violating_vertex",
                   vertex_display(t, *verdict.violating_vertex));
      report.field("refined_tree", serialize_newick(*verdict.refinement));
      report.line("refined tree: ", serialize_newick(*verdict.refinement));
    } else {
      const ColorConflict& c = *verdict.conflict;
      report.field("witness_edge", edge_json(t, c.edge_child));
      report.field("witness_blocks",
                   json::array({p.block(c.existing), p.block(c.incoming)}));
      report.line("witness edge ", edge_text(t, c.edge_child),
                  " is colored by blocks ", label_set_text(p.block(c.existing)),
                  " and ", label_set_text(p.block(c.incoming)));
    }

    if (args.oracle && t.leaf_count() <= oracle::kMaxEnumLeaves &&
        t.edge_count() <= oracle::kMaxBruteEdges) {
      bool brute_c = oracle::brute_compatible(t, p);
      bool brute_r = oracle::brute_r_compatible(t, p);
      bool agree = (brute_c == verdict.compatible()) &&
                   (brute_r == verdict.r_compatible());
      report.field("oracle", agree ? "agrees" : "DISAGREES");
      if (!agree) {
        report.line("oracle disagrees with the verdict");
        return report.finish(kSelfCheck);
      }
      report.line("oracle agrees");
    }
  }

  switch (status) {
    case Compat::compatible: return report.finish(kOk);
    case Compat::r_compatible_only: return report.finish(kRCompatibleOnly);
    case Compat::incompatible: return report.finish(kNegative);
  }
  return report.finish(kInputError);
}

// ------------------------------------------------------------------ cut ---

int run_cut(const std::string& tree_file, const std::vector<std::string>& refs,
            Report& report) {
  NewickDocument doc = parse_newick_document(read_file(tree_file));
  std::vector<RootedTree::Vertex> edges;
  edges.reserve(refs.size());
  for (const std::string& ref : refs) {
    RootedTree::Vertex v = resolve_vertex(doc, ref);
    if (v == doc.tree.root()) {
      throw Error(errc::foreign_edge, "the root has no edge above it");
    }
    edges.push_back(v);
  }
  Partition cut = forest_partition(doc.tree, edges);
  report.field("partition", cut.to_text());
  report.line(cut.to_text());
  return report.finish(kOk);
}

// --------------------------------------------------------------- splits ---

struct SplitsArgs {
  std::string tree_file, splits_file, partition_file;
  bool check_treelike = false;
};

SplitSystem load_split_system(const SplitsArgs& args) {
  if (!args.tree_file.empty()) {
    RootedTree t = parse_newick(read_file(args.tree_file));
    return splits_of(unroot(t));
  }
  std::string text = read_file(args.splits_file);
  // Each non-comment line is one split "a,b|c,d,e"; the ground set is the
  // union of each line's sides (every line must name all of X).
  std::vector<LabelSet> sides;
  LabelSet ground;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    std::erase(trimmed, ' ');
    if (trimmed.empty() || trimmed.front() == '#') continue;
    Partition two = [&] {
      try {
        LabelSet local;
        // a split line is a 2-block partition of its own labels
        std::vector<LabelSet> blocks;
        std::size_t bar = trimmed.find('|');
        if (bar == std::string::npos) {
          throw Error(errc::syntax_error, "expected 'side|side'");
        }
        auto parse_side = [](const std::string& s) {
          LabelSet side;
          std::size_t start = 0;
          while (start <= s.size()) {
            std::size_t comma = s.find(',', start);
            if (comma == std::string::npos) comma = s.size();
            std::string token = s.substr(start, comma - start);
            if (!token.empty()) side.push_back(token);
            start = comma + 1;
          }
          return make_label_set(std::move(side));
        };
        blocks.push_back(parse_side(trimmed.substr(0, bar)));
        blocks.push_back(parse_side(trimmed.substr(bar + 1)));
        for (const LabelSet& b : blocks) local = set_union(local, b);
        return Partition::validate(std::move(blocks), local);
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
      }
    }();
    if (ground.empty()) {
      ground = two.ground();
    } else if (ground != two.ground()) {
      throw Error(errc::ground_set_mismatch,
                  "line " + std::to_string(line_no) +
                      ": split is not on the common ground set");
    }
    sides.push_back(two.block(0));
  }
  if (sides.empty()) throw Error(errc::empty_tree, "no splits in input");
  std::vector<Split> splits;
  splits.reserve(sides.size());
  for (LabelSet& side : sides) splits.emplace_back(std::move(side), ground);
  return SplitSystem::make(std::move(splits), ground);
}

int run_splits(const SplitsArgs& args, Report& report) {
  SplitSystem system = load_split_system(args);
  if (args.check_treelike) {
    bool ok = system.tree_like();
    report.field("tree_like", ok);
    report.line(ok ? "tree-like" : "not tree-like");
    if (args.partition_file.empty()) return report.finish(ok ? kOk : kNegative);
  }
  if (args.partition_file.empty()) {
    json all = json::array();
    for (const Split& s : system.splits()) all.push_back(s.to_text());
    report.field("splits", all);
    for (const Split& s : system.splits()) report.line(s.to_text());
    return report.finish(kOk);
  }
  PartitionDocument pdoc = parse_partition_document(read_file(args.partition_file));
  if (pdoc.partitions.size() != 1) {
    throw Error(errc::syntax_error, "splits expects exactly one partition");
  }
  Partition p = pdoc.partitions.front();
  if (p.ground() != system.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "split system and partition ground sets differ");
  }
  std::optional<std::vector<Split>> subset = is_compatible_splits(system, p);
  if (!subset) {
    report.field("status", "incompatible");
    report.line("incompatible");
    return report.finish(kNegative);
  }
  report.field("status", "compatible");
  report.line("compatible");
  json chosen = json::array();
  for (const Split& s : *subset) {
    chosen.push_back(s.to_text());
    report.line("  ", s.to_text());
  }
  report.field("subset", chosen);
  return report.finish(kOk);
}

// --------------------------------------------------------------- system ---

struct SystemArgs {
  std::string tree_file, system_file;
  std::uint64_t budget = 0;
  bool oracle = false;
};

int run_system(const SystemArgs& args, Report& report) {
  PartitionDocument pdoc = parse_partition_document(read_file(args.system_file));
  if (pdoc.partitions.empty() && !pdoc.declared_ground) {
    throw Error(errc::empty_system, "system file declares no partitions");
  }
  PartitionSystem ps =
      pdoc.partitions.empty()
          ? PartitionSystem::make({}, pdoc.ground)
          : PartitionSystem::make(pdoc.partitions);
  RootedTree base = args.tree_file.empty()
                        ? star_tree(ps.ground())
                        : parse_newick(read_file(args.tree_file));
  if (base.leaves() != ps.ground()) {
    throw Error(errc::leaf_set_mismatch,
                "tree leaves and system ground set differ");
  }
  SolverOptions options;
  options.budget = args.budget;

  std::optional<RootedTree> refined;
  try {
    refined = compat_tp(base, ps, options);
  } catch (const BudgetError& e) {
    report.field("status", "budget-exceeded");
    report.field("candidates", e.candidate_count());
    report.line("budget exceeded: ", e.candidate_count(),
                " candidate trees (budget ", options.budget, ")");
    return report.finish(kBudget);
  }

  if (args.oracle && ps.ground().size() <= oracle::kMaxExistLeaves) {
    bool brute_found = false;
    std::vector<LabelSet> base_clusters;
    for (RootedTree::Vertex v = 0; v < base.vertex_count(); ++v) {
      base_clusters.push_back(base.cluster(v));
    }
    std::sort(base_clusters.begin(), base_clusters.end());
    oracle::for_each_rooted_tree(ps.ground(), [&](const RootedTree& cand) {
      std::vector<LabelSet> clusters;
      for (RootedTree::Vertex v = 0; v < cand.vertex_count(); ++v) {
        clusters.push_back(cand.cluster(v));
      }
      std::sort(clusters.begin(), clusters.end());
      if (!std::includes(clusters.begin(), clusters.end(),
                         base_clusters.begin(), base_clusters.end())) {
        return true;
      }
      for (const Partition& p : ps.members()) {
        if (!oracle::brute_compatible(cand, p)) return true;
      }
      brute_found = true;
      return false;
    });
    if (brute_found != refined.has_value()) {
      report.field("oracle", "DISAGREES");
      report.line("oracle disagrees with the verdict");
      return report.finish(kSelfCheck);
    }
    report.field("oracle", "agrees");
    report.line("oracle agrees");
  }

  if (!refined) {
    report.field("status", "no-refinement");
    report.line("no refinement exists");
    return report.finish(kNegative);
  }
  report.field("status", "compatible");
  report.field("tree", serialize_newick(*refined));
  report.line("compatible refinement: ", serialize_newick(*refined));
  return report.finish(kOk);
}

// ---------------------------------------------------------------- fitch ---

struct FitchArgs {
  std::string map_file, tree_file;
  std::uint64_t budget = 0;
};

void report_lambda(const EdgeColoredTree& tc, Report& report) {
  report.field("tree", serialize_newick(tc.tree));
  report.line("tree: ", serialize_newick(tc.tree));
  json lambda = json::array();
  report.line("lambda:");
  for (RootedTree::Vertex v = 1; v < tc.tree.vertex_count(); ++v) {
    if (!tc.lambda[v]) continue;
    std::string colors;
    for (unsigned m = 1; m <= tc.colors; ++m) {
      if (tc.lambda[v] & (std::uint64_t{1} << (m - 1))) {
        if (!colors.empty()) colors += ',';
        colors += std::to_string(m);
      }
    }
    lambda.push_back(json{{"edge", vertex_display(tc.tree, v)}, {"colors", colors}});
    report.line("  ", vertex_display(tc.tree, v), ": ", colors);
  }
  report.field("lambda", lambda);
}

int run_fitch(const FitchArgs& args, Report& report) {
  FitchMap eps = parse_fitch_map(read_file(args.map_file));
  SolverOptions options;
  options.budget = args.budget;

  std::optional<EdgeColoredTree> explained;
  try {
    if (args.tree_file.empty()) {
      explained = symm_fitch_recognition(eps, options);
      if (!explained) {
        report.field("status", "no-tree");
        report.line("no tree explains the map");
        return report.finish(kNegative);
      }
    } else {
      RootedTree t = parse_newick(read_file(args.tree_file));
      if (t.leaves() != eps.ground()) {
        throw Error(errc::leaf_set_mismatch,
                    "tree leaves and map ground set differ");
      }
      if (t.leaf_count() == 2) {
        // The two-leaf tree is unique, so recognition answers for it.
        explained = symm_fitch_recognition(eps, options);
      } else {
        explained = explainable(eps, unroot(t));
      }
      if (!explained) {
        report.field("status", "not-explainable");
        report.line("the map is not explainable on this tree");
        return report.finish(kNegative);
      }
    }
  } catch (const FitchColorError& e) {
    report.field("status", "not-monochromatic-fitch");
    report.field("color", e.color());
    report.line("color ", e.color(), " is not a symmetrized Fitch map");
    return report.finish(kNegative);
  } catch (const BudgetError& e) {
    report.field("status", "budget-exceeded");
    report.field("candidates", e.candidate_count());
    report.line("budget exceeded: ", e.candidate_count(), " candidate trees");
    return report.finish(kBudget);
  }

  if (fitch_map_of(*explained) != eps) {
    report.line("self-check failed: reconstructed map differs");
    return report.finish(kSelfCheck);
  }
  report.field("status", "explainable");
  report.line("explainable");
  report_lambda(*explained, report);
  return report.finish(kOk);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compatibility of partitions with rooted and unrooted trees"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "decide compatibility of a tree and a partition");
  check->add_option("--tree", check_args.tree_file, "Newick tree file")->required();
  check->add_option("--partition", check_args.partition_file, "partition file")->required();
  check->add_flag("--unrooted", check_args.unrooted, "treat the tree as unrooted");
  check->add_flag("--refine", check_args.refine, "always print a compatible refinement");
  check->add_flag("--oracle", check_args.oracle, "re-verify with the brute-force oracle");
  check->add_option("--edges", check_args.edges, "which separating set to report")
      ->check(CLI::IsMember({"canonical", "min", "max"}));

  std::string cut_tree;
  std::vector<std::string> cut_edges;
  CLI::App* cut = app.add_subcommand("cut", "partition induced by removing edges");
  cut->add_option("--tree", cut_tree, "Newick tree file")->required();
  cut->add_option("edges", cut_edges, "edges, each named by its child vertex");

  SplitsArgs splits_args;
  CLI::App* splits = app.add_subcommand("splits", "split-system view of compatibility");
  splits->add_option("--tree", splits_args.tree_file, "Newick tree file");
  splits->add_option("--splits", splits_args.splits_file, "split system file");
  splits->add_option("--partition", splits_args.partition_file, "partition file");
  splits->add_flag("--check-treelike", splits_args.check_treelike,
                   "report the Buneman pairwise-compatibility verdict");

  SystemArgs system_args;
  CLI::App* system = app.add_subcommand("system", "search a refinement compatible with a partition system");
  system->add_option("--tree", system_args.tree_file,
                     "Newick tree file (defaults to the star tree)");
  system->add_option("--system", system_args.system_file, "partition system file")->required();
  system->add_option("--budget", system_args.budget, "candidate budget");
  system->add_flag("--oracle", system_args.oracle, "re-verify with the brute-force oracle");

  FitchArgs fitch_args;
  CLI::App* fitch = app.add_subcommand("fitch", "explain a symmetrized Fitch map");
  fitch->add_option("--map", fitch_args.map_file, "Fitch map file")->required();
  fitch->add_option("--tree", fitch_args.tree_file, "Newick tree file");
  fitch->add_option("--budget", fitch_args.budget, "candidate budget");

  CLI11_PARSE(app, argc, argv);

  Report report;
  report.json_mode = (format == "json");

  const std::uint64_t default_budget = budget_from_env(1'000'000);
  if (system_args.budget == 0) system_args.budget = default_budget;
  if (fitch_args.budget == 0) fitch_args.budget = default_budget;

  try {
    if (check->parsed()) {
      report.field("command", "check");
      return run_check(check_args, report);
    }
    if (cut->parsed()) {
      report.field("command", "cut");
      return run_cut(cut_tree, cut_edges, report);
    }
    if (splits->parsed()) {
      report.field("command", "splits");
      if (splits_args.tree_file.empty() == splits_args.splits_file.empty()) {
        throw Error(errc::syntax_error, "need exactly one of --tree/--splits");
      }
      return run_splits(splits_args, report);
    }
    if (system->parsed()) {
      report.field("command", "system");
      return run_system(system_args, report);
    }
    if (fitch->parsed()) {
      report.field("command", "fitch");
      return run_fitch(fitch_args, report);
    }
  } catch (const Error& e) {
    report.field("status", "error");
    report.field("error", e.what());
    report.line("error: ", e.what());
    return report.finish(kInputError);
  } catch (const std::exception& e) {
    report.field("status", "error");
    report.field("error", e.what());
    report.line("error: ", e.what());
    return report.finish(kInputError);
  }
  return kInputError;
}
