#ifndef MDLOG_TESTS_SUPPORT_HPP
#define MDLOG_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "mdlog/automata.hpp"
#include "mdlog/compilers.hpp"
#include "mdlog/datalog.hpp"
#include "mdlog/trees.hpp"

namespace testsupport {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& xs) {
  return xs[pick(rng, 0, static_cast<int>(xs.size()) - 1)];
}

// Random ordered tree with exactly n nodes over the alphabet.
inline mdlog::Term random_term(Rng& rng, const mdlog::Alphabet& alphabet, int n) {
  mdlog::Term t(choose(rng, alphabet.symbols));
  int rest = n - 1;
  while (rest > 0) {
    int sz = pick(rng, 1, rest);
    t.kids.push_back(random_term(rng, alphabet, sz));
    rest -= sz;
  }
  // shuffle child blocks a little so shapes are not left-heavy
  std::shuffle(t.kids.begin(), t.kids.end(), rng);
  return t;
}

inline mdlog::LabeledTree random_tree(Rng& rng, const mdlog::Alphabet& alphabet, int max_nodes) {
  return mdlog::tree_from_term(random_term(rng, alphabet, pick(rng, 1, max_nodes)));
}

// Random monadic datalog program over the given schema predicates and labels.
// Body idb atoms only reference predicates that some rule defines, so the
// result always validates against {child, desc} plus labels.
inline mdlog::Query random_query(Rng& rng, const std::vector<std::string>& labels,
                                 int max_rules) {
  std::vector<std::string> idbs = {"P", "Q0", "Q1"};
  std::vector<std::string> vars = {"x", "y", "z"};
  mdlog::Query q;
  q.query_pred = "P";
  std::vector<std::string> defined;
  int rules = pick(rng, 1, max_rules);
  for (int i = 0; i < rules; ++i) {
    mdlog::Rule r;
    std::string headvar = choose(rng, vars);
    std::string head = choose(rng, idbs);
    r.head = mdlog::Atom(head, {headvar});
    if (std::find(defined.begin(), defined.end(), head) == defined.end())
      defined.push_back(head);
    int atoms = pick(rng, 1, 3);
    bool head_bound = false;
    for (int j = 0; j < atoms; ++j) {
      int kind = pick(rng, 0, 3);
      if (kind == 0) {
        std::string v = choose(rng, vars);
        r.body.push_back(mdlog::Atom(mdlog::label_pred(choose(rng, labels)), {v}));
        head_bound |= v == headvar;
      } else if (kind == 1) {
        std::string v1 = choose(rng, vars), v2 = choose(rng, vars);
        r.body.push_back(mdlog::Atom(pick(rng, 0, 1) ? "child" : "desc", {v1, v2}));
        head_bound |= v1 == headvar || v2 == headvar;
      } else {
        std::string v = choose(rng, vars);
        r.body.push_back(mdlog::Atom(choose(rng, defined), {v}));
        head_bound |= v == headvar;
      }
    }
    if (!head_bound)
      r.body.push_back(mdlog::Atom(mdlog::label_pred(choose(rng, labels)), {headvar}));
    q.program.rules.push_back(r);
  }
  return q;
}

// Random small NTA: up to max_states states, NFAs with up to 3 states.
inline mdlog::Nta random_nta(Rng& rng, const std::vector<std::string>& alphabet,
                             int max_states) {
  mdlog::Nta a;
  a.alphabet = mdlog::Alphabet(alphabet);
  int ns = pick(rng, 1, max_states);
  for (int i = 0; i < ns; ++i) a.states.push_back("s" + std::to_string(i));
  for (const auto& s : a.states)
    if (pick(rng, 0, 2) == 0) a.accepting.insert(s);
  if (a.accepting.empty() && pick(rng, 0, 1) == 0) a.accepting.insert(a.states[0]);

  int nlang = pick(rng, 1, 2);
  std::vector<std::string> lang_names;
  for (int li = 0; li < nlang; ++li) {
    std::string name = "L" + std::to_string(li);
    lang_names.push_back(name);
    mdlog::Nfa nfa;
    nfa.name = name;
    int nq = pick(rng, 1, 3);
    for (int i = 0; i < nq; ++i) nfa.states.push_back("q" + name + "_" + std::to_string(i));
    nfa.initial = nfa.states[0];
    for (const auto& q : nfa.states)
      if (pick(rng, 0, 1) == 0) nfa.accepting.insert(q);
    int nt = pick(rng, 0, 4);
    for (int i = 0; i < nt; ++i)
      nfa.trans.insert({testsupport::choose(rng, nfa.states), testsupport::choose(rng, a.states),
                        testsupport::choose(rng, nfa.states)});
    a.nfas[name] = nfa;
  }
  int nrules = pick(rng, 1, 2 * ns);
  for (int i = 0; i < nrules; ++i)
    a.rules.push_back({choose(rng, a.states), choose(rng, alphabet), choose(rng, lang_names)});
  // dedupe rule triples to keep the size measure honest
  std::sort(a.rules.begin(), a.rules.end(), [](const auto& x, const auto& y) {
    return std::tie(x.state, x.symbol, x.language) < std::tie(y.state, y.symbol, y.language);
  });
  a.rules.erase(std::unique(a.rules.begin(), a.rules.end(),
                            [](const auto& x, const auto& y) {
                              return x.state == y.state && x.symbol == y.symbol &&
                                     x.language == y.language;
                            }),
                a.rules.end());
  return a;
}

// Random Boolean CQ over child/desc/labels.
inline mdlog::Cq random_cq(Rng& rng, const std::vector<std::string>& labels, int max_atoms,
                           int max_vars) {
  std::vector<std::string> vars;
  for (int i = 0; i < max_vars; ++i) vars.push_back("v" + std::to_string(i));
  mdlog::Cq cq;
  int atoms = pick(rng, 1, max_atoms);
  for (int i = 0; i < atoms; ++i) {
    int kind = pick(rng, 0, 2);
    if (kind == 0)
      cq.atoms.push_back(mdlog::Atom(mdlog::label_pred(choose(rng, labels)), {choose(rng, vars)}));
    else
      cq.atoms.push_back(
          mdlog::Atom(kind == 1 ? "child" : "desc", {choose(rng, vars), choose(rng, vars)}));
  }
  return cq;
}

}  // namespace testsupport

#endif
