#ifndef MDLOG_DATALOG_HPP
#define MDLOG_DATALOG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdlog/trees.hpp"

namespace mdlog {

/// Relational atom: predicate applied to a nonempty list of variables.
struct Atom {
  std::string pred;
  std::vector<std::string> args;

  Atom() = default;
  Atom(std::string p, std::vector<std::string> a) : pred(std::move(p)), args(std::move(a)) {}

  bool operator==(const Atom& o) const { return pred == o.pred && args == o.args; }
};

/// head :- body. The body is always nonempty; facts are supplied only by the
/// extensional tree encoding.
struct Rule {
  Atom head;
  std::vector<Atom> body;
};

struct Program {
  std::vector<Rule> rules;

  /// Predicates occurring in some rule head.
  std::set<std::string> idb() const {
    std::set<std::string> out;
    for (const auto& r : rules) out.insert(r.head.pred);
    return out;
  }

  /// Predicates occurring only in rule bodies.
  std::set<std::string> edb() const {
    std::set<std::string> heads = idb();
    std::set<std::string> out;
    for (const auto& r : rules)
      for (const auto& a : r.body)
        if (!heads.count(a.pred)) out.insert(a.pred);
    return out;
  }

  /// First arity seen per predicate, in rule order (head first).
  std::map<std::string, int> arities() const {
    std::map<std::string, int> out;
    for (const auto& r : rules) {
      out.emplace(r.head.pred, static_cast<int>(r.head.args.size()));
      for (const auto& a : r.body) out.emplace(a.pred, static_cast<int>(a.args.size()));
    }
    return out;
  }
};

/// A monadic datalog query: program plus distinguished query predicate.
struct Query {
  Program program;
  std::string query_pred;
};

namespace detail {

inline Atom parse_atom(TreeLexer& lex) {
  Atom a;
  a.pred = lex.identifier();
  lex.expect('(');
  if (lex.peek() == ')') lex.fail("zero-arity atom: " + a.pred);
  a.args.push_back(lex.identifier());
  while (lex.accept(',')) a.args.push_back(lex.identifier());
  lex.expect(')');
  return a;
}

}  // namespace detail

/// Parses the datalog grammar: rules `head :- a1, ..., an.` and exactly one
/// `query P.` directive. '%' starts a line comment.
inline Query parse_program(const std::string& text) {
  detail::TreeLexer lex(text);
  Query q;
  bool have_query = false;
  while (!lex.eof()) {
    // lookahead: "query" keyword vs. rule head predicate
    std::string first = lex.identifier();
    if (first == "query") {
      if (have_query) lex.fail("duplicate query directive");
      q.query_pred = lex.identifier();
      lex.expect('.');
      have_query = true;
      continue;
    }
    Rule r;
    r.head.pred = first;
    lex.expect('(');
    if (lex.peek() == ')') lex.fail("zero-arity atom: " + first);
    r.head.args.push_back(lex.identifier());
    while (lex.accept(',')) r.head.args.push_back(lex.identifier());
    lex.expect(')');
    lex.expect(':');
    lex.expect('-');
    r.body.push_back(detail::parse_atom(lex));
    while (lex.accept(',')) r.body.push_back(detail::parse_atom(lex));
    lex.expect('.');
    q.program.rules.push_back(std::move(r));
  }
  if (!have_query) throw parse_error("missing query directive", 1, 1);
  return q;
}

inline std::string render_atom(const Atom& a) {
  std::string out = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += a.args[i];
  }
  out += ")";
  return out;
}

/// Renders a query; parse_program(render_program(q)) preserves rule order.
inline std::string render_program(const Query& q) {
  std::string out;
  for (const auto& r : q.program.rules) {
    out += render_atom(r.head) + " :- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += render_atom(r.body[i]);
    }
    out += ".\n";
  }
  out += "query " + q.query_pred + ".\n";
  return out;
}

struct Diagnostic {
  std::string message;
  int rule_index;  // -1 when not attached to a rule
};

namespace detail {

// The seven tree-predicate names are extensional by nature, as are label
// predicates. Any other name is intensional, whether or not the program
// defines rules for it (an undefined intensional predicate is simply empty).
inline std::optional<SchemaPred> builtin_schema_pred(const std::string& pred) {
  for (SchemaPred p : {SchemaPred::Child, SchemaPred::Desc, SchemaPred::Fc, SchemaPred::Ns,
                       SchemaPred::Root, SchemaPred::Leaf, SchemaPred::Ls})
    if (schema_pred_name(p) == pred) return p;
  return std::nullopt;
}

inline bool is_extensional_name(const std::string& pred) {
  return is_label_pred(pred) || builtin_schema_pred(pred).has_value();
}

}  // namespace detail

/// Checks a query against a schema. Empty result iff all heads are unary
/// intensional predicates, all head variables are bound in the body, every
/// extensional body predicate belongs to the schema (labels always do), and
/// extensional predicates are used at their arity.
inline std::vector<Diagnostic> validate(const Query& q, const Schema& schema) {
  std::vector<Diagnostic> out;
  std::set<std::string> idb = q.program.idb();
  idb.insert(q.query_pred);

  if (detail::is_extensional_name(q.query_pred))
    out.push_back({"extensional query predicate: " + q.query_pred, -1});

  for (size_t i = 0; i < q.program.rules.size(); ++i) {
    const Rule& r = q.program.rules[i];
    int idx = static_cast<int>(i);
    if (detail::is_extensional_name(r.head.pred))
      out.push_back({"extensional head: " + r.head.pred, idx});
    if (r.head.args.size() != 1)
      out.push_back({"non-monadic head: " + r.head.pred, idx});

    std::set<std::string> body_vars;
    for (const auto& a : r.body)
      for (const auto& v : a.args) body_vars.insert(v);
    for (const auto& v : r.head.args)
      if (!body_vars.count(v))
        out.push_back({"head variable not bound in body: " + v, idx});

    for (const auto& a : r.body) {
      if (is_label_pred(a.pred)) {
        if (a.args.size() != 1)
          out.push_back({"label predicate used with arity " +
                             std::to_string(a.args.size()) + ": " + a.pred,
                         idx});
        continue;
      }
      auto bp = detail::builtin_schema_pred(a.pred);
      if (!bp) {
        // intensional; monadic programs use such predicates with arity 1
        if (a.args.size() != 1)
          out.push_back({"intensional predicate used with arity " +
                             std::to_string(a.args.size()) + ": " + a.pred,
                         idx});
        continue;
      }
      if (!schema.contains(*bp)) {
        out.push_back({"predicate outside schema: " + a.pred, idx});
        continue;
      }
      if (static_cast<int>(a.args.size()) != schema_pred_arity(*bp))
        out.push_back({"schema predicate " + a.pred + " used with arity " +
                           std::to_string(a.args.size()),
                       idx});
    }
  }
  return out;
}

}  // namespace mdlog

#endif  // MDLOG_DATALOG_HPP
