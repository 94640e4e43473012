#ifndef MDLOG_COMPILERS_HPP
#define MDLOG_COMPILERS_HPP

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "mdlog/automata.hpp"
#include "mdlog/datalog.hpp"

namespace mdlog {

/// Boolean conjunctive query over child/desc/label predicates.
struct Cq {
  std::vector<Atom> atoms;

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& a : atoms)
      for (const auto& v : a.args)
        if (seen.insert(v).second) out.push_back(v);
    return out;
  }
};

/// Parses `ans :- atom, ..., atom.` where atoms range over child, desc and
/// label predicates only.
inline Cq parse_cq(const std::string& text) {
  detail::TreeLexer lex(text);
  std::string head = lex.identifier();
  if (head != "ans") lex.fail("conjunctive query must start with 'ans'");
  lex.expect(':');
  lex.expect('-');
  Cq cq;
  cq.atoms.push_back(detail::parse_atom(lex));
  while (lex.accept(',')) cq.atoms.push_back(detail::parse_atom(lex));
  lex.expect('.');
  if (!lex.eof()) lex.fail("trailing input after conjunctive query");
  for (const auto& a : cq.atoms) {
    bool ok = (a.pred == "child" && a.args.size() == 2) ||
              (a.pred == "desc" && a.args.size() == 2) ||
              (is_label_pred(a.pred) && a.args.size() == 1);
    if (!ok)
      throw std::invalid_argument("predicate outside CQ schema {child,desc,labels}: " +
                                  render_atom(a));
  }
  return cq;
}

inline std::string render_cq(const Cq& cq) {
  std::string out = "ans :- ";
  for (size_t i = 0; i < cq.atoms.size(); ++i) {
    if (i) out += ", ";
    out += render_atom(cq.atoms[i]);
  }
  out += ".";
  return out;
}

/// Translates a Boolean CQ into the two-rule monadic datalog query:
///   P(x) :- <all CQ atoms>.
///   P(x) :- child(x,y), P(y).
/// x is the lexicographically least CQ variable unless another is requested.
inline Query translate_cq(const Cq& cq, const std::string& chosen_var = "") {
  if (cq.atoms.empty()) throw std::invalid_argument("empty conjunctive query");
  auto vars = cq.variables();
  std::string x;
  if (chosen_var.empty()) {
    x = *std::min_element(vars.begin(), vars.end());
  } else {
    if (std::find(vars.begin(), vars.end(), chosen_var) == vars.end())
      throw std::invalid_argument("chosen variable does not occur in the CQ: " + chosen_var);
    x = chosen_var;
  }
  Query q;
  q.query_pred = "P";
  Rule base;
  base.head = Atom("P", {x});
  base.body = cq.atoms;
  q.program.rules.push_back(base);
  // propagation lifts a hit anywhere in the tree to the root
  std::string px = "x", py = "y";
  Rule prop;
  prop.head = Atom("P", {px});
  prop.body = {Atom("child", {px, py}), Atom("P", {py})};
  q.program.rules.push_back(prop);
  return q;
}

/// Languages actually referenced by transition rules, sorted by name.
inline std::set<std::string> used_languages(const Nta& a) {
  std::set<std::string> out;
  for (const auto& r : a.rules) out.insert(r.language);
  return out;
}

/// Exact rule count of compile_nta for a given automaton.
inline size_t compile_nta_rule_count(const Nta& a) {
  size_t n = 0;
  for (const auto& name : used_languages(a)) {
    const Nfa& nfa = a.nfas.at(name);
    size_t init = 0;
    for (const auto& [q, s, q2] : nfa.trans)
      if (q == nfa.initial) ++init;
    n += init + nfa.trans.size() + nfa.accepting.size() + 1;  // +1 transfer rule
  }
  size_t eps = 0;
  for (const auto& r : a.rules) {
    const Nfa& nfa = a.nfas.at(r.language);
    if (nfa.accepting.count(nfa.initial)) ++eps;
  }
  return n + eps + a.rules.size() + a.accepting.size();
}

/// Compiles an NTA to an equivalent Boolean query over fc/ns/root/leaf/ls/child
/// plus labels: a generalized powerset construction run by the fixpoint.
/// Predicate naming: st_<state>, q_<nfa>_<state>, acc_<L>, chacc_<L>, query P.
inline Query compile_nta(const Nta& a) {
  validate_nta(a);
  Query out;
  out.query_pred = "P";
  auto& rules = out.program.rules;

  auto st = [](const std::string& s) { return "st_" + s; };
  auto qp = [](const Nfa& nfa, const std::string& q) { return "q_" + nfa.name + "_" + q; };

  std::set<std::string> langs = used_languages(a);

  std::set<std::string> emitted;
  auto declare = [&](const std::string& pred) {
    if (!emitted.insert(pred).second)
      throw std::runtime_error("predicate name collision after prefixing: " + pred);
  };
  for (const auto& s : a.states) declare(st(s));
  for (const auto& name : langs) {
    const Nfa& nfa = a.nfas.at(name);
    for (const auto& q : nfa.states) declare(qp(nfa, q));
    declare("acc_" + name);
    declare("chacc_" + name);
  }

  // per-language powerset programs
  for (const auto& name : langs) {
    const Nfa& nfa = a.nfas.at(name);
    for (const auto& [q, s, q2] : nfa.trans)
      if (q == nfa.initial)
        rules.push_back({Atom(qp(nfa, q2), {"x"}),
                         {Atom("fc", {"y", "x"}), Atom(st(s), {"x"})}});
    for (const auto& [q, s, q2] : nfa.trans)
      rules.push_back({Atom(qp(nfa, q2), {"x2"}),
                       {Atom(qp(nfa, q), {"x"}), Atom("ns", {"x", "x2"}),
                        Atom(st(s), {"x2"})}});
    for (const auto& q : nfa.accepting)
      rules.push_back({Atom("acc_" + name, {"x"}),
                       {Atom("ls", {"x"}), Atom(qp(nfa, q), {"x"})}});
  }

  // leaves: rules whose language contains the empty string
  for (const auto& r : a.rules) {
    const Nfa& nfa = a.nfas.at(r.language);
    if (nfa.accepting.count(nfa.initial))
      rules.push_back({Atom(st(r.state), {"x"}),
                       {Atom(label_pred(r.symbol), {"x"}), Atom("leaf", {"x"})}});
  }

  // transfer the last sibling's verdict to the parent
  for (const auto& name : langs)
    rules.push_back({Atom("chacc_" + name, {"y"}),
                     {Atom("child", {"y", "x"}), Atom("ls", {"x"}),
                      Atom("acc_" + name, {"x"})}});

  for (const auto& r : a.rules)
    rules.push_back({Atom(st(r.state), {"x"}),
                     {Atom("chacc_" + r.language, {"x"}),
                      Atom(label_pred(r.symbol), {"x"})}});

  for (const auto& s : a.accepting)
    rules.push_back({Atom("P", {"x"}), {Atom("root", {"x"}), Atom(st(s), {"x"})}});

  if (rules.size() != compile_nta_rule_count(a))
    throw std::runtime_error("compile_nta rule count mismatch");
  return out;
}

}  // namespace mdlog

#endif  // MDLOG_COMPILERS_HPP
