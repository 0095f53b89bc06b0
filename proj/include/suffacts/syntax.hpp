#pragma once

// Bracketed constituency trees aligned to their surface sentence.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "suffacts/dates.hpp"
#include "suffacts/error.hpp"
#include "suffacts/jsonl.hpp"
#include "suffacts/span.hpp"

namespace suffacts {

using NodeId = std::size_t;

struct ConstNode {
  NodeId id = 0;
  std::string label;  // phrase label, or the PoS tag for leaves
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  Span span;
  std::string token;  // surface text of a leaf; empty for phrases

  bool is_leaf() const { return children.empty(); }
};

struct Leaf {
  std::string token;
  std::string pos_tag;
  Span span;
};

// "NP-SBJ" -> "NP", "PP=2" -> "PP"; labels starting with '-' are kept whole.
inline std::string_view base_label(std::string_view label) {
  if (label.empty() || label[0] == '-') return label;
  auto cut = label.find_first_of("-=");
  return cut == std::string_view::npos ? label : label.substr(0, cut);
}

class ConstTree {
 public:
  const std::string& surface() const { return surface_; }
  const std::vector<ConstNode>& nodes() const { return nodes_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  const ConstNode& node(NodeId id) const { return nodes_.at(id); }

  // Topmost node after stripping unary ROOT/TOP/unlabeled wrappers.
  const ConstNode& root() const { return nodes_.at(root_); }

  const ConstNode* parent(const ConstNode& n) const { return n.parent ? &nodes_[*n.parent] : nullptr; }

  // True when some strict ancestor of `n` has base label `label`.
  bool dominated_by(const ConstNode& n, std::string_view label) const {
    for (auto p = n.parent; p; p = nodes_[*p].parent)
      if (base_label(nodes_[*p].label) == label) return true;
    return false;
  }

  bool is_root_child(const ConstNode& n) const { return n.parent && *n.parent == root_; }

  // Leaves of the subtree rooted at `n`, left to right.
  std::vector<const ConstNode*> leaves_of(const ConstNode& n) const {
    std::vector<const ConstNode*> out;
    std::vector<NodeId> stack{n.id};
    while (!stack.empty()) {
      const ConstNode& cur = nodes_[stack.back()];
      stack.pop_back();
      if (cur.is_leaf()) out.push_back(&cur);
      for (auto it = cur.children.rbegin(); it != cur.children.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  // True when some node covers exactly `span`.
  bool is_node_span(Span span) const {
    return std::any_of(nodes_.begin(), nodes_.end(), [&](const ConstNode& n) { return n.span == span; });
  }

  // True when `span` is covered exactly by consecutive children of one node,
  // as a multi-word modifier run ("studio drama" in "a studio drama film") is.
  bool is_sibling_run(Span span) const {
    for (const auto& n : nodes_) {
      if (!n.span.contains(span)) continue;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (nodes_[n.children[i]].span.start != span.start) continue;
        for (std::size_t j = i; j < n.children.size(); ++j)
          if (nodes_[n.children[j]].span.end == span.end) return true;
      }
    }
    return false;
  }

 private:
  friend ConstTree parse_bracketed(std::string_view tree_text, std::string_view surface);

  std::string surface_;
  std::vector<ConstNode> nodes_;
  std::vector<Leaf> leaves_;
  NodeId root_ = 0;
};

namespace detail {

// PTB escapes a parser may emit for characters that clash with brackets.
inline std::vector<std::string> surface_forms(const std::string& token) {
  static const std::unordered_map<std::string, std::vector<std::string>> kEscapes = {
      {"-LRB-", {"("}}, {"-RRB-", {")"}}, {"-LSB-", {"["}}, {"-RSB-", {"]"}},
      {"-LCB-", {"{"}}, {"-RCB-", {"}"}}, {"``", {"\"", "``"}}, {"''", {"\"", "''"}}};
  std::vector<std::string> forms{token};
  if (auto it = kEscapes.find(token); it != kEscapes.end())
    forms.insert(forms.end(), it->second.begin(), it->second.end());
  return forms;
}

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  struct RawNode {
    std::string label;
    std::string token;  // set for preterminals
    std::vector<std::unique_ptr<RawNode>> children;
  };

  std::unique_ptr<RawNode> parse() {
    skip_ws();
    auto root = parse_node();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected text after tree at offset " + std::to_string(pos_), pos_);
    return root;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string atom() {
    std::size_t b = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  void expect_more() {
    if (pos_ >= text_.size())
      throw ParseError("unbalanced brackets: input ends at offset " + std::to_string(pos_), pos_);
  }

  std::unique_ptr<RawNode> parse_node() {
    expect_more();
    if (text_[pos_] != '(') throw ParseError("expected '(' at offset " + std::to_string(pos_), pos_);
    ++pos_;
    auto node = std::make_unique<RawNode>();
    skip_ws();
    expect_more();
    if (text_[pos_] != '(' && text_[pos_] != ')') node->label = atom();
    skip_ws();
    expect_more();
    if (text_[pos_] != '(' && text_[pos_] != ')') {
      node->token = atom();
      skip_ws();
      expect_more();
      if (text_[pos_] != ')')
        throw ParseError("preterminal has more than one token at offset " + std::to_string(pos_), pos_);
    } else {
      while (true) {
        skip_ws();
        expect_more();
        if (text_[pos_] == ')') break;
        if (text_[pos_] != '(')
          throw ParseError("bare token among phrase children at offset " + std::to_string(pos_), pos_);
        node->children.push_back(parse_node());
      }
      if (node->children.empty()) throw ParseError("empty constituent at offset " + std::to_string(pos_), pos_);
    }
    ++pos_;  // ')'
    if (node->label.empty() && node->token.empty() && node->children.size() != 1)
      throw ParseError("unlabeled constituent at offset " + std::to_string(pos_), pos_);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a bracketed tree such as "(S (NP (NNP Paris)) (VP ...) (. .))" and
// aligns its leaves, in order, to `surface`. Leaves may abut without
// whitespace ("Dempster."), and PTB bracket escapes are accepted.
inline ConstTree parse_bracketed(std::string_view tree_text, std::string_view surface) {
  auto raw = detail::BracketParser(tree_text).parse();

  ConstTree tree;
  tree.surface_ = std::string(surface);
  std::size_t cursor = 0;

  auto skip_space = [&] {
    while (cursor < surface.size() && std::isspace(static_cast<unsigned char>(surface[cursor]))) ++cursor;
  };

  std::function<NodeId(const detail::BracketParser::RawNode&, std::optional<NodeId>)> build =
      [&](const detail::BracketParser::RawNode& r, std::optional<NodeId> parent) -> NodeId {
    NodeId id = tree.nodes_.size();
    tree.nodes_.push_back(ConstNode{id, r.label, {}, parent, {}, {}});
    if (r.children.empty()) {
      if (r.label.empty()) throw ParseError("leaf without PoS tag: " + r.token, 0);
      skip_space();
      std::optional<std::string> matched;
      for (const auto& form : detail::surface_forms(r.token)) {
        if (surface.substr(cursor, form.size()) == form) {
          matched = form;
          break;
        }
      }
      if (!matched) {
        auto end = surface.find(' ', cursor);
        auto found = surface.substr(cursor, end == std::string_view::npos ? std::string_view::npos : end - cursor);
        throw AlignmentError("leaf \"" + r.token + "\" does not match surface text \"" + std::string(found) +
                                 "\" at offset " + std::to_string(cursor),
                             r.token);
      }
      Span sp{cursor, cursor + matched->size()};
      cursor = sp.end;
      tree.nodes_[id].span = sp;
      tree.nodes_[id].token = *matched;
      tree.leaves_.push_back(Leaf{*matched, r.label, sp});
      return id;
    }
    std::vector<NodeId> kids;
    for (const auto& c : r.children) kids.push_back(build(*c, id));
    tree.nodes_[id].children = kids;
    tree.nodes_[id].span = {tree.nodes_[kids.front()].span.start, tree.nodes_[kids.back()].span.end};
    return id;
  };
  build(*raw, std::nullopt);

  skip_space();
  if (cursor != surface.size()) {
    auto end = surface.find(' ', cursor);
    std::string rest(surface.substr(cursor, end == std::string_view::npos ? std::string_view::npos : end - cursor));
    throw AlignmentError("surface token \"" + rest + "\" has no matching leaf", rest);
  }

  NodeId root = 0;
  while (true) {
    const auto& n = tree.nodes_[root];
    const auto bl = base_label(n.label);
    if (n.children.size() == 1 && (bl.empty() || bl == "ROOT" || bl == "TOP"))
      root = n.children.front();
    else
      break;
  }
  tree.root_ = root;
  return tree;
}

// ---------------------------------------------------------------------------
// Node predicates, composable with &&, || and !.

class NodePredicate {
 public:
  using Fn = std::function<bool(const ConstTree&, const ConstNode&)>;
  explicit NodePredicate(Fn fn) : fn_(std::move(fn)) {}
  bool operator()(const ConstTree& t, const ConstNode& n) const { return fn_(t, n); }

  friend NodePredicate operator&&(NodePredicate a, NodePredicate b) {
    return NodePredicate([a = std::move(a), b = std::move(b)](const ConstTree& t, const ConstNode& n) {
      return a(t, n) && b(t, n);
    });
  }
  friend NodePredicate operator||(NodePredicate a, NodePredicate b) {
    return NodePredicate([a = std::move(a), b = std::move(b)](const ConstTree& t, const ConstNode& n) {
      return a(t, n) || b(t, n);
    });
  }
  friend NodePredicate operator!(NodePredicate a) {
    return NodePredicate([a = std::move(a)](const ConstTree& t, const ConstNode& n) { return !a(t, n); });
  }

 private:
  Fn fn_;
};

namespace pred {

inline NodePredicate label_is(std::string label) {
  return NodePredicate([label = std::move(label)](const ConstTree&, const ConstNode& n) {
    return !n.is_leaf() && base_label(n.label) == label;
  });
}

// Immediate child of the root clause.
inline NodePredicate child_of_root() {
  return NodePredicate([](const ConstTree& t, const ConstNode& n) { return t.is_root_child(n); });
}

inline NodePredicate dominated_by(std::string label) {
  return NodePredicate([label = std::move(label)](const ConstTree& t, const ConstNode& n) {
    return t.dominated_by(n, label);
  });
}

inline NodePredicate leaf_pos_in(std::initializer_list<std::string_view> tags) {
  std::vector<std::string> v(tags.begin(), tags.end());
  return NodePredicate([v = std::move(v)](const ConstTree&, const ConstNode& n) {
    return n.is_leaf() && std::find(v.begin(), v.end(), n.label) != v.end();
  });
}

inline NodePredicate is_leaf() {
  return NodePredicate([](const ConstTree&, const ConstNode& n) { return n.is_leaf(); });
}

}  // namespace pred

// Nodes satisfying `p`, in pre-order (left to right, outer before inner).
inline std::vector<const ConstNode*> find_nodes(const ConstTree& tree, const NodePredicate& p) {
  std::vector<const ConstNode*> out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    const ConstNode& n = tree.node(stack.back());
    stack.pop_back();
    if (p(tree, n)) out.push_back(&n);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

// Surface with `span` removed and the deletion's whitespace and punctuation
// repaired. `span` must cover a node or a run of sibling nodes, or be one of
// the date-template removals found in the surface.
inline std::string excise_span(const ConstTree& tree, Span span) {
  if (span.empty() || span.end > tree.surface().size())
    throw ValidationError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                          ") is outside the sentence");
  if (tree.is_node_span(span) || tree.is_sibling_run(span)) return remove_fluently(tree.surface(), span);
  for (const auto& d : dates::find_dates(tree.surface()))
    for (const auto& r : dates::removals(d))
      if (r.removed == span || r.excised == span) return remove_fluently(tree.surface(), r.excised);
  throw ValidationError("span [" + std::to_string(span.start) + "," + std::to_string(span.end) + ") \"" +
                        std::string(slice(tree.surface(), span)) +
                        "\" is neither a constituent nor a date-template part");
}

// ---------------------------------------------------------------------------
// Parse JSONL: {"id", "sent_index", "surface", "tree", "pos"}.

struct ParseRecord {
  std::string id;
  int sent_index = 0;
  std::string surface;
  std::string tree;
  std::vector<std::string> pos;
};

inline void to_json(Json& j, const ParseRecord& p) {
  j = Json{{"id", p.id}, {"sent_index", p.sent_index}, {"surface", p.surface}, {"tree", p.tree}, {"pos", p.pos}};
}

inline ParseRecord parse_record_from_json(const Json& j, const std::string& where) {
  using namespace detail;
  ParseRecord p;
  p.id = get_string(j, "id", where);
  p.sent_index = static_cast<int>(get_int(j, "sent_index", where));
  p.surface = get_string(j, "surface", where);
  p.tree = get_string(j, "tree", where);
  if (auto it = j.find("pos"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError(where + ": pos must be an array of strings");
    for (const auto& t : *it) {
      if (!t.is_string()) throw ValidationError(where + ": pos must be an array of strings");
      p.pos.push_back(t.get<std::string>());
    }
  }
  return p;
}

// Parses the record's tree against its surface and checks the optional PoS
// column against the tree's preterminals.
inline ConstTree tree_from_record(const ParseRecord& p) {
  ConstTree t = parse_bracketed(p.tree, p.surface);
  if (!p.pos.empty()) {
    if (p.pos.size() != t.leaves().size())
      throw ValidationError("parse " + p.id + "/" + std::to_string(p.sent_index) + ": " +
                            std::to_string(p.pos.size()) + " PoS tags for " + std::to_string(t.leaves().size()) +
                            " leaves");
    for (std::size_t i = 0; i < p.pos.size(); ++i)
      if (p.pos[i] != t.leaves()[i].pos_tag)
        throw ValidationError("parse " + p.id + "/" + std::to_string(p.sent_index) + ": PoS column disagrees with tree at leaf " +
                              std::to_string(i) + " (\"" + t.leaves()[i].token + "\")");
  }
  return t;
}

// Parse records grouped by instance id, then by evidence position.
using ParseIndex = std::unordered_map<std::string, std::unordered_map<int, ParseRecord>>;

inline ParseIndex read_parses(const std::string& path) {
  JsonlReader r(path);
  ParseIndex index;
  while (auto j = r.next()) {
    auto p = parse_record_from_json(*j, detail::where(r));
    auto& slot = index[p.id];
    const int k = p.sent_index;
    if (!slot.emplace(k, std::move(p)).second)
      throw ValidationError(detail::where(r) + ": duplicate parse for sentence " + std::to_string(k));
  }
  return index;
}

}  // namespace suffacts
