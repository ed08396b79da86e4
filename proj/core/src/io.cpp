#include "treecut/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace treecut {

namespace {

using Vertex = RootedTree::Vertex;

[[noreturn]] void syntax(std::size_t pos, const std::string& what) {
  throw Error(errc::syntax_error,
              what + " at position " + std::to_string(pos));
}

struct NewickParser {
  std::string_view text;
  std::size_t pos = 0;

  // raw tree under construction
  std::vector<std::vector<Vertex>> children;
  std::vector<Label> labels;  // leaf labels
  std::vector<std::string> names;  // inner names ("" for unnamed/leaves)

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool at_end() const { return pos >= text.size(); }

  Vertex new_vertex() {
    children.emplace_back();
    labels.emplace_back();
    names.emplace_back();
    return static_cast<Vertex>(children.size() - 1);
  }

  static bool is_name_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    switch (c) {
      case '(': case ')': case ',': case ';': case ':': case '\'':
        return false;
      default:
        return true;
    }
  }

  std::string parse_name() {
    skip_ws();
    if (peek() == '\'') {
      std::size_t start = pos++;
      std::string out;
      while (!at_end() && text[pos] != '\'') out += text[pos++];
      if (at_end()) syntax(start, "unterminated quoted label");
      ++pos;
      if (out.empty()) syntax(start, "empty quoted label");
      return out;
    }
    std::string out;
    while (!at_end() && is_name_char(text[pos])) out += text[pos++];
    return out;
  }

  void parse_branch_length() {
    skip_ws();
    if (peek() != ':') return;
    ++pos;
    skip_ws();
    std::size_t start = pos;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                         text[pos] == '.' || text[pos] == '-' ||
                         text[pos] == '+' || text[pos] == 'e' ||
                         text[pos] == 'E')) {
      ++pos;
    }
    if (pos == start) syntax(pos, "expected branch length after ':'");
    std::string num(text.substr(start, pos - start));
    char* end = nullptr;
    std::strtod(num.c_str(), &end);
    if (end != num.c_str() + num.size()) syntax(start, "bad branch length");
    // topology only: the value is discarded
  }

  Vertex parse_subtree() {
    skip_ws();
    if (peek() == '(') {
      std::size_t open = pos++;
      Vertex v = new_vertex();
      while (true) {
        Vertex c = parse_subtree();
        children[v].push_back(c);
        skip_ws();
        if (peek() == ',') {
          ++pos;
          continue;
        }
        if (peek() == ')') {
          ++pos;
          break;
        }
        syntax(at_end() ? open : pos, "expected ',' or ')'");
      }
      std::string name = parse_name();
      names[v] = name;
      parse_branch_length();
      return v;
    }
    std::size_t start = pos;
    std::string name = parse_name();
    if (name.empty()) syntax(start, "expected a leaf label");
    Vertex v = new_vertex();
    labels[v] = name;
    parse_branch_length();
    return v;
  }

  Vertex parse_document() {
    skip_ws();
    if (at_end() || peek() == ';') {
      throw Error(errc::empty_tree, "no tree in input");
    }
    if (peek() == '(') {
      // "()" would produce an empty inner vertex; catch it up front.
      std::size_t probe = pos + 1;
      while (probe < text.size() &&
             std::isspace(static_cast<unsigned char>(text[probe]))) {
        ++probe;
      }
      if (probe < text.size() && text[probe] == ')') {
        throw Error(errc::empty_tree, "empty tree '()'");
      }
    }
    Vertex root = parse_subtree();
    skip_ws();
    if (peek() != ';') syntax(pos, "expected ';'");
    ++pos;
    skip_ws();
    if (!at_end()) syntax(pos, "trailing characters after ';'");
    return root;
  }
};

}  // namespace

NewickDocument parse_newick_document(std::string_view text) {
  NewickParser parser;
  parser.text = text;
  Vertex raw_root = parser.parse_document();

  std::vector<Vertex> old_to_new;
  NewickDocument doc;
  doc.text.assign(text);
  doc.tree = RootedTree::build(raw_root, parser.children, parser.labels,
                               &old_to_new);
  doc.vertex_name.assign(doc.tree.vertex_count(), "");
  for (Vertex raw = 0; raw < parser.names.size(); ++raw) {
    if (parser.names[raw].empty()) continue;
    doc.vertex_name[old_to_new[raw]] = parser.names[raw];
  }
  for (Vertex v = 0; v < doc.tree.vertex_count(); ++v) {
    const std::string& name = doc.vertex_name[v];
    if (name.empty()) continue;
    if (doc.tree.has_leaf(name) || !doc.name_index.emplace(name, v).second) {
      throw Error(errc::syntax_error,
                  "ambiguous inner vertex name '" + name + "'");
    }
  }
  return doc;
}

RootedTree parse_newick(std::string_view text) {
  return parse_newick_document(text).tree;
}

namespace {

std::string quoted_if_needed(const Label& label) {
  bool plain = !label.empty();
  for (char c : label) {
    if (!NewickParser::is_name_char(c)) {
      plain = false;
      break;
    }
  }
  if (plain) return label;
  if (label.find('\'') != std::string::npos) {
    throw Error(errc::syntax_error,
                "label '" + label + "' contains a quote and cannot be written");
  }
  return "'" + label + "'";
}

void write_subtree(const RootedTree& t, Vertex v, std::string& out) {
  if (t.is_leaf(v)) {
    out += quoted_if_needed(t.leaf_label(v));
    return;
  }
  out += '(';
  bool first = true;
  for (Vertex c : t.children(v)) {
    if (!first) out += ',';
    first = false;
    write_subtree(t, c, out);
  }
  out += ')';
}

}  // namespace

std::string serialize_newick(const RootedTree& t) {
  std::string out;
  write_subtree(t, t.root(), out);
  out += ';';
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t at = s.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  return lines;
}

bool is_comment_or_blank(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::vector<LabelSet> parse_blocks(std::string_view line) {
  std::vector<LabelSet> blocks;
  for (std::string_view block_text : split(line, '|')) {
    LabelSet block;
    for (std::string_view token : split(block_text, ',')) {
      token = trim(token);
      if (token.empty()) {
        if (trim(block_text).empty()) break;  // wholly empty block: (P0) error
        throw Error(errc::syntax_error, "empty label in '" +
                                            std::string(block_text) + "'");
      }
      block.emplace_back(token);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace

Partition parse_partition_line(std::string_view line, const LabelSet& ground) {
  return Partition::validate(parse_blocks(line), ground);
}

std::vector<Partition> parse_partition_system_text(std::string_view text,
                                                   const LabelSet& ground) {
  std::vector<Partition> out;
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    try {
      out.push_back(parse_partition_line(lines[i], ground));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

PartitionDocument parse_partition_document(std::string_view text) {
  PartitionDocument doc;
  auto lines = lines_of(text);
  std::size_t first_data = 0;
  for (; first_data < lines.size(); ++first_data) {
    if (!is_comment_or_blank(lines[first_data])) break;
  }
  if (first_data < lines.size()) {
    std::string_view head = trim(lines[first_data]);
    if (head.starts_with("ground:")) {
      doc.declared_ground = true;
      for (std::string_view token : split(head.substr(7), ',')) {
        token = trim(token);
        if (token.empty()) {
          throw Error(errc::syntax_error, "empty label in ground header");
        }
        doc.ground.emplace_back(token);
      }
      doc.ground = make_label_set(std::move(doc.ground));
      lines[first_data] = std::string_view{};
    }
  }
  if (!doc.declared_ground) {
    std::vector<Label> seen;
    for (auto line : lines) {
      if (is_comment_or_blank(line)) continue;
      for (const LabelSet& block : parse_blocks(line)) {
        for (const Label& x : block) seen.push_back(x);
      }
    }
    doc.ground = make_label_set(std::move(seen));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    try {
      doc.partitions.push_back(parse_partition_line(lines[i], doc.ground));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return doc;
}

RootedTree::Vertex resolve_vertex(const NewickDocument& doc,
                                  std::string_view ref) {
  std::string key(trim(ref));
  if (doc.tree.has_leaf(key)) return doc.tree.leaf(key);
  auto named = doc.name_index.find(key);
  if (named != doc.name_index.end()) return named->second;
  if (key.size() >= 2 && key[0] == 'v') {
    Vertex v = 0;
    auto [ptr, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), v);
    if (ec == std::errc() && ptr == key.data() + key.size() &&
        v < doc.tree.vertex_count()) {
      return v;
    }
  }
  throw Error(errc::unknown_vertex, "no vertex '" + key + "'");
}

std::string vertex_display(const RootedTree& t, RootedTree::Vertex v) {
  if (t.is_leaf(v)) return t.leaf_label(v);
  return "v" + std::to_string(v);
}

std::vector<std::uint64_t> parse_edge_colors(std::string_view text,
                                             const NewickDocument& doc,
                                             unsigned color_count) {
  if (color_count > 64) {
    throw Error(errc::too_many_colors, "at most 64 colors are supported");
  }
  std::vector<std::uint64_t> lambda(doc.tree.vertex_count(), 0);
  auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    std::string_view line = lines[i];
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(errc::syntax_error,
                  "line " + std::to_string(i + 1) + ": expected 'vertex: colors'");
    }
    Vertex v = resolve_vertex(doc, line.substr(0, colon));
    if (v == doc.tree.root()) {
      throw Error(errc::unknown_vertex,
                  "line " + std::to_string(i + 1) + ": the root has no edge above it");
    }
    std::string_view rest = trim(line.substr(colon + 1));
    if (rest.empty()) continue;
    for (std::string_view token : split(rest, ',')) {
      token = trim(token);
      unsigned color = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), color);
      if (ec != std::errc() || ptr != token.data() + token.size() ||
          color < 1 || color > color_count) {
        throw Error(errc::unknown_color,
                    "line " + std::to_string(i + 1) + ": color '" +
                        std::string(token) + "' outside 1.." +
                        std::to_string(color_count));
      }
      lambda[v] |= std::uint64_t{1} << (color - 1);
    }
  }
  return lambda;
}

}  // namespace treecut
