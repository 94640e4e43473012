#ifndef MDLOG_TREES_HPP
#define MDLOG_TREES_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdlog {

/// Thrown on malformed textual input; carries a 1-based source position.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, int line, int col)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ")"),
        line(line), col(col) {}
  int line;
  int col;
};

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Finite non-empty set of node labels, kept in declaration order.
struct Alphabet {
  std::vector<std::string> symbols;

  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> syms) : symbols(std::move(syms)) {
    if (symbols.empty()) throw std::invalid_argument("alphabet must be non-empty");
    std::set<std::string> seen;
    for (const auto& s : symbols) {
      if (!is_identifier(s)) throw std::invalid_argument("invalid label identifier: " + s);
      if (!seen.insert(s).second) throw std::invalid_argument("duplicate label: " + s);
    }
  }

  bool contains(const std::string& s) const {
    return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
  }
};

/// Alphabet whose symbols carry a fixed arity; at least one symbol has arity 0.
struct RankedAlphabet {
  std::vector<std::pair<std::string, int>> entries;

  RankedAlphabet() = default;
  explicit RankedAlphabet(std::vector<std::pair<std::string, int>> es)
      : entries(std::move(es)) {
    if (entries.empty()) throw std::invalid_argument("ranked alphabet must be non-empty");
    std::set<std::string> seen;
    bool has_nullary = false;
    for (const auto& [sym, ar] : entries) {
      if (!is_identifier(sym)) throw std::invalid_argument("invalid label identifier: " + sym);
      if (ar < 0) throw std::invalid_argument("negative arity for " + sym);
      if (!seen.insert(sym).second) throw std::invalid_argument("duplicate label: " + sym);
      if (ar == 0) has_nullary = true;
    }
    if (!has_nullary)
      throw std::invalid_argument("ranked alphabet needs a symbol of arity 0");
  }

  std::optional<int> arity(const std::string& sym) const {
    for (const auto& [s, a] : entries)
      if (s == sym) return a;
    return std::nullopt;
  }

  Alphabet unranked() const {
    std::vector<std::string> syms;
    for (const auto& [s, a] : entries) syms.push_back(s);
    return Alphabet(std::move(syms));
  }
};

using Node = int;

/// Convenience recursive term used to assemble trees programmatically.
struct Term {
  std::string label;
  std::vector<Term> kids;
  Term(std::string l = "", std::vector<Term> k = {})
      : label(std::move(l)), kids(std::move(k)) {}
};

/// Finite rooted tree with per-node labels. Node ids are dense, 1..N, assigned
/// in preorder. Child lists carry an order which ordered-mode consumers read
/// and unordered-mode consumers ignore.
struct LabeledTree {
  // index 0 unused so that node ids are their own indices
  std::vector<std::string> labels{""};
  std::vector<std::vector<Node>> children{{}};

  Node root() const { return 1; }
  int size() const { return static_cast<int>(labels.size()) - 1; }
  const std::string& label(Node v) const { return labels[v]; }
  const std::vector<Node>& kids(Node v) const { return children[v]; }

  Node add_node(const std::string& lab) {
    labels.push_back(lab);
    children.emplace_back();
    return static_cast<Node>(labels.size()) - 1;
  }
};

inline Node build_from_term(LabeledTree& t, const Term& term) {
  Node v = t.add_node(term.label);
  for (const Term& kid : term.kids) {
    Node c = build_from_term(t, kid);
    t.children[v].push_back(c);
  }
  return v;
}

inline LabeledTree tree_from_term(const Term& term) {
  LabeledTree t;
  build_from_term(t, term);
  return t;
}

inline Term term_from_tree(const LabeledTree& t, Node v) {
  Term out(t.label(v));
  for (Node c : t.kids(v)) out.kids.push_back(term_from_tree(t, c));
  return out;
}

/// Extracts the subtree rooted at v as a standalone tree (ids renumbered).
inline LabeledTree subtree(const LabeledTree& t, Node v) {
  return tree_from_term(term_from_tree(t, v));
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

class TreeLexer {
public:
  explicit TreeLexer(const std::string& text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip_ws();
    if (pos_ >= text_.size() ||
        !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      fail("expected identifier");
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out.push_back(text_[pos_]);
      advance();
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, line_, col_); }

private:
  void advance() {
    ++col_;
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline Term parse_term(TreeLexer& lex, const Alphabet* alphabet) {
  Term t(lex.identifier());
  if (alphabet && !alphabet->contains(t.label)) lex.fail("unknown symbol: " + t.label);
  if (lex.accept('(')) {
    t.kids.push_back(parse_term(lex, alphabet));
    while (lex.accept(',')) t.kids.push_back(parse_term(lex, alphabet));
    lex.expect(')');
  }
  return t;
}

}  // namespace detail

/// Parses the term grammar: node := label | label "(" node ("," node)* ")".
/// Whitespace between tokens is ignored and '%' starts a line comment.
inline LabeledTree parse_tree(const std::string& text, const Alphabet* alphabet = nullptr) {
  detail::TreeLexer lex(text);
  Term t = detail::parse_term(lex, alphabet);
  if (!lex.eof()) lex.fail("trailing input after tree");
  return tree_from_term(t);
}

namespace detail {
inline void render_node(const LabeledTree& t, Node v, std::string& out) {
  out += t.label(v);
  const auto& ks = t.kids(v);
  if (!ks.empty()) {
    out += '(';
    for (size_t i = 0; i < ks.size(); ++i) {
      if (i) out += ',';
      render_node(t, ks[i], out);
    }
    out += ')';
  }
}
}  // namespace detail

/// Canonical rendering: no whitespace, children in stored order.
inline std::string render_tree(const LabeledTree& t) {
  std::string out;
  detail::render_node(t, t.root(), out);
  return out;
}

enum class TreeMode { Ordered, Unordered };

enum class SchemaPred { Child, Desc, Fc, Ns, Root, Leaf, Ls };

inline std::string schema_pred_name(SchemaPred p) {
  switch (p) {
    case SchemaPred::Child: return "child";
    case SchemaPred::Desc: return "desc";
    case SchemaPred::Fc: return "fc";
    case SchemaPred::Ns: return "ns";
    case SchemaPred::Root: return "root";
    case SchemaPred::Leaf: return "leaf";
    case SchemaPred::Ls: return "ls";
  }
  return "";
}

inline int schema_pred_arity(SchemaPred p) {
  switch (p) {
    case SchemaPred::Child:
    case SchemaPred::Desc:
    case SchemaPred::Fc:
    case SchemaPred::Ns: return 2;
    default: return 1;
  }
}

/// A set of tree predicates; label predicates are implicitly always included.
struct Schema {
  std::set<SchemaPred> preds;

  bool contains(SchemaPred p) const { return preds.count(p) != 0; }

  std::optional<SchemaPred> find(const std::string& name) const {
    for (SchemaPred p : preds)
      if (schema_pred_name(p) == name) return p;
    return std::nullopt;
  }

  bool has_ordered_preds() const {
    return contains(SchemaPred::Fc) || contains(SchemaPred::Ns) || contains(SchemaPred::Ls);
  }

  static Schema tau_u() { return Schema{{SchemaPred::Child}}; }
  static Schema tau_u_desc() { return Schema{{SchemaPred::Child, SchemaPred::Desc}}; }
  static Schema tau_u_root_leaf_desc() {
    return Schema{{SchemaPred::Child, SchemaPred::Desc, SchemaPred::Root, SchemaPred::Leaf}};
  }
  static Schema tau_o() { return Schema{{SchemaPred::Fc, SchemaPred::Ns}}; }
  static Schema tau_gk() {
    return Schema{{SchemaPred::Fc, SchemaPred::Ns, SchemaPred::Root, SchemaPred::Leaf,
                   SchemaPred::Ls}};
  }
  static Schema tau_gk_child() {
    Schema s = tau_gk();
    s.preds.insert(SchemaPred::Child);
    return s;
  }
  static Schema tau_gk_child_desc() {
    Schema s = tau_gk_child();
    s.preds.insert(SchemaPred::Desc);
    return s;
  }

  static std::optional<Schema> by_name(const std::string& name) {
    if (name == "tau_u") return tau_u();
    if (name == "tau_u_desc") return tau_u_desc();
    if (name == "tau_u_root_leaf_desc") return tau_u_root_leaf_desc();
    if (name == "tau_o") return tau_o();
    if (name == "tau_gk") return tau_gk();
    if (name == "tau_gk_child_desc") return tau_gk_child_desc();
    return std::nullopt;
  }
};

inline const char* kLabelPredPrefix = "label_";

inline bool is_label_pred(const std::string& pred) {
  return pred.rfind(kLabelPredPrefix, 0) == 0 &&
         pred.size() > std::string(kLabelPredPrefix).size();
}

inline std::string label_pred(const std::string& sym) {
  return std::string(kLabelPredPrefix) + sym;
}

/// Set of ground atoms over a tree's nodes. Unary and binary relations are
/// kept separately, keyed by predicate name.
struct FactSet {
  std::map<std::string, std::set<Node>> unary;
  std::map<std::string, std::set<std::pair<Node, Node>>> binary;

  bool has(const std::string& pred, Node a) const {
    auto it = unary.find(pred);
    return it != unary.end() && it->second.count(a);
  }
  bool has(const std::string& pred, Node a, Node b) const {
    auto it = binary.find(pred);
    return it != binary.end() && it->second.count({a, b});
  }
  void add(const std::string& pred, Node a) { unary[pred].insert(a); }
  void add(const std::string& pred, Node a, Node b) { binary[pred].insert({a, b}); }

  size_t atom_count() const {
    size_t n = 0;
    for (const auto& [p, s] : unary) n += s.size();
    for (const auto& [p, s] : binary) n += s.size();
    return n;
  }

  bool operator==(const FactSet& other) const {
    return unary == other.unary && binary == other.binary;
  }

  /// True iff every atom of this set is contained in other.
  bool subset_of(const FactSet& other) const {
    for (const auto& [p, s] : unary) {
      auto it = other.unary.find(p);
      for (Node a : s)
        if (it == other.unary.end() || !it->second.count(a)) return false;
    }
    for (const auto& [p, s] : binary) {
      auto it = other.binary.find(p);
      for (const auto& pr : s)
        if (it == other.binary.end() || !it->second.count(pr)) return false;
    }
    return true;
  }
};

/// Projects a tree to its extensional facts under the given schema.
/// Ordered predicates (fc/ns/ls) may only be requested in ordered mode.
inline FactSet extract_facts(const LabeledTree& t, const Schema& schema, TreeMode mode) {
  if (mode == TreeMode::Unordered && schema.has_ordered_preds())
    throw std::invalid_argument("schema requests ordered predicates in unordered mode");

  FactSet fs;
  for (Node v = 1; v <= t.size(); ++v) fs.add(label_pred(t.label(v)), v);

  if (schema.contains(SchemaPred::Child))
    for (Node v = 1; v <= t.size(); ++v)
      for (Node c : t.kids(v)) fs.add("child", v, c);

  if (schema.contains(SchemaPred::Desc)) {
    // proper descendants: depth-first accumulation
    std::vector<Node> stack;
    auto walk = [&](auto&& self, Node v) -> std::vector<Node> {
      std::vector<Node> below;
      for (Node c : t.kids(v)) {
        auto sub = self(self, c);
        below.push_back(c);
        below.insert(below.end(), sub.begin(), sub.end());
      }
      for (Node d : below) fs.add("desc", v, d);
      return below;
    };
    walk(walk, t.root());
  }

  if (schema.contains(SchemaPred::Root)) fs.add("root", t.root());

  if (schema.contains(SchemaPred::Leaf))
    for (Node v = 1; v <= t.size(); ++v)
      if (t.kids(v).empty()) fs.add("leaf", v);

  if (schema.contains(SchemaPred::Fc))
    for (Node v = 1; v <= t.size(); ++v)
      if (!t.kids(v).empty()) fs.add("fc", v, t.kids(v).front());

  if (schema.contains(SchemaPred::Ns))
    for (Node v = 1; v <= t.size(); ++v) {
      const auto& ks = t.kids(v);
      for (size_t i = 0; i + 1 < ks.size(); ++i) fs.add("ns", ks[i], ks[i + 1]);
    }

  if (schema.contains(SchemaPred::Ls)) {
    // the root counts as a (vacuously) rightmost sibling
    fs.add("ls", t.root());
    for (Node v = 1; v <= t.size(); ++v)
      if (!t.kids(v).empty()) fs.add("ls", t.kids(v).back());
  }

  return fs;
}

/// True iff every node labeled α has exactly ar(α) children.
inline bool check_ranked(const LabeledTree& t, const RankedAlphabet& ranked) {
  for (Node v = 1; v <= t.size(); ++v) {
    auto ar = ranked.arity(t.label(v));
    if (!ar) throw std::invalid_argument("undeclared label: " + t.label(v));
    if (static_cast<int>(t.kids(v).size()) != *ar) return false;
  }
  return true;
}

namespace detail {
inline std::string canonical_key(const LabeledTree& t, Node v) {
  std::vector<std::string> ks;
  for (Node c : t.kids(v)) ks.push_back(canonical_key(t, c));
  std::sort(ks.begin(), ks.end());
  std::string out = t.label(v);
  out += '(';
  for (const auto& k : ks) out += k;
  out += ')';
  return out;
}
}  // namespace detail

/// Canonical form for unordered comparison: recursive encoding with children
/// keys sorted at every node.
inline std::string canonical_form(const LabeledTree& t) {
  return detail::canonical_key(t, t.root());
}

/// Isomorphism of unordered labeled trees.
inline bool trees_equal_unordered(const LabeledTree& a, const LabeledTree& b) {
  return canonical_form(a) == canonical_form(b);
}

}  // namespace mdlog

#endif  // MDLOG_TREES_HPP
