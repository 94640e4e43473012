#ifndef MDLOG_AUTOMATA_HPP
#define MDLOG_AUTOMATA_HPP

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mdlog/trees.hpp"

namespace mdlog {

/// NFA over an NTA's state set, used as a horizontal-language specifier.
struct Nfa {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::set<std::string> accepting;
  std::set<std::tuple<std::string, std::string, std::string>> trans;  // (q, input, q')

  bool has_state(const std::string& q) const {
    return std::find(states.begin(), states.end(), q) != states.end();
  }

  size_t size() const { return states.size() + trans.size(); }
};

/// Nondeterministic unranked tree automaton. Each transition rule constrains
/// the children's state string by a regular language given as an NFA.
struct Nta {
  Alphabet alphabet;
  std::vector<std::string> states;
  std::set<std::string> accepting;

  struct TransRule {
    std::string state;
    std::string symbol;
    std::string language;  // name of an NFA block
  };
  std::vector<TransRule> rules;
  std::map<std::string, Nfa> nfas;

  bool has_state(const std::string& s) const {
    return std::find(states.begin(), states.end(), s) != states.end();
  }
};

/// |Sigma| + |S| + |Delta| + sum over languages of (|Q_L| + |delta_L|).
inline size_t nta_size(const Nta& a) {
  size_t n = a.alphabet.symbols.size() + a.states.size() + a.rules.size();
  for (const auto& [name, nfa] : a.nfas) n += nfa.size();
  return n;
}

inline void validate_nta(const Nta& a) {
  for (const auto& s : a.accepting)
    if (!a.has_state(s)) throw std::invalid_argument("undeclared accepting state: " + s);
  std::set<std::string> seen_names(a.states.begin(), a.states.end());
  if (seen_names.size() != a.states.size())
    throw std::invalid_argument("duplicate NTA state");
  for (const auto& [name, nfa] : a.nfas) {
    for (const auto& q : nfa.states)
      if (!seen_names.insert(q).second)
        throw std::invalid_argument("state name not globally unique: " + q);
    if (!nfa.has_state(nfa.initial))
      throw std::invalid_argument("nfa " + name + ": undeclared initial state");
    for (const auto& q : nfa.accepting)
      if (!nfa.has_state(q))
        throw std::invalid_argument("nfa " + name + ": undeclared accepting state " + q);
    for (const auto& [q, s, q2] : nfa.trans) {
      if (!nfa.has_state(q) || !nfa.has_state(q2))
        throw std::invalid_argument("nfa " + name + ": transition uses undeclared state");
      if (!a.has_state(s))
        throw std::invalid_argument("nfa " + name + ": input symbol " + s +
                                    " is not an NTA state");
    }
  }
  for (const auto& r : a.rules) {
    if (!a.has_state(r.state)) throw std::invalid_argument("rule uses undeclared state: " + r.state);
    if (!a.alphabet.contains(r.symbol))
      throw std::invalid_argument("rule uses undeclared symbol: " + r.symbol);
    if (!a.nfas.count(r.language))
      throw std::invalid_argument("rule references undeclared NFA: " + r.language);
  }
}

/// Line-oriented NTA format:
///   alphabet a b
///   states s0 s1
///   accepting s1
///   rule s0 a L1
///   nfa L1
///   states q0 q1
///   initial q0
///   accepting q1
///   trans q0 s0 q1
///   end
inline Nta parse_nta(const std::string& text) {
  Nta a;
  Nfa* open = nullptr;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_alphabet = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('%');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    auto rest = std::vector<std::string>(toks.begin() + 1, toks.end());
    auto need = [&](size_t n) {
      if (rest.size() != n)
        throw parse_error("directive '" + kw + "' expects " + std::to_string(n) + " arguments",
                          lineno, 1);
    };
    if (kw == "nfa") {
      need(1);
      if (open) throw parse_error("nested nfa block", lineno, 1);
      if (a.nfas.count(rest[0])) throw parse_error("duplicate nfa: " + rest[0], lineno, 1);
      open = &a.nfas[rest[0]];
      open->name = rest[0];
    } else if (kw == "end") {
      need(0);
      if (!open) throw parse_error("'end' outside nfa block", lineno, 1);
      open = nullptr;
    } else if (kw == "states") {
      if (rest.empty()) throw parse_error("empty states line", lineno, 1);
      auto& target = open ? open->states : a.states;
      target.insert(target.end(), rest.begin(), rest.end());
    } else if (kw == "accepting") {
      if (open)
        open->accepting.insert(rest.begin(), rest.end());
      else
        a.accepting.insert(rest.begin(), rest.end());
    } else if (kw == "initial") {
      need(1);
      if (!open) throw parse_error("'initial' outside nfa block", lineno, 1);
      open->initial = rest[0];
    } else if (kw == "trans") {
      need(3);
      if (!open) throw parse_error("'trans' outside nfa block", lineno, 1);
      open->trans.insert({rest[0], rest[1], rest[2]});
    } else if (kw == "alphabet") {
      if (rest.empty()) throw parse_error("empty alphabet", lineno, 1);
      a.alphabet = Alphabet(rest);
      saw_alphabet = true;
    } else if (kw == "rule") {
      need(3);
      a.rules.push_back({rest[0], rest[1], rest[2]});
    } else {
      throw parse_error("unknown directive: " + kw, lineno, 1);
    }
  }
  if (open) throw parse_error("unterminated nfa block", lineno, 1);
  if (!saw_alphabet) throw parse_error("missing alphabet line", lineno, 1);
  validate_nta(a);
  return a;
}

inline std::string render_nta(const Nta& a) {
  std::ostringstream out;
  out << "alphabet";
  for (const auto& s : a.alphabet.symbols) out << ' ' << s;
  out << "\nstates";
  for (const auto& s : a.states) out << ' ' << s;
  out << "\n";
  if (!a.accepting.empty()) {
    out << "accepting";
    for (const auto& s : a.accepting) out << ' ' << s;
    out << "\n";
  }
  for (const auto& r : a.rules) out << "rule " << r.state << ' ' << r.symbol << ' ' << r.language << "\n";
  for (const auto& [name, nfa] : a.nfas) {
    out << "nfa " << name << "\nstates";
    for (const auto& q : nfa.states) out << ' ' << q;
    out << "\ninitial " << nfa.initial << "\n";
    if (!nfa.accepting.empty()) {
      out << "accepting";
      for (const auto& q : nfa.accepting) out << ' ' << q;
      out << "\n";
    }
    for (const auto& [q, s, q2] : nfa.trans) out << "trans " << q << ' ' << s << ' ' << q2 << "\n";
    out << "end\n";
  }
  return out.str();
}

/// Standard NFA word acceptance; the empty word is accepted iff the initial
/// state is accepting.
inline bool nfa_accepts(const Nfa& nfa, const std::vector<std::string>& word) {
  std::set<std::string> cur{nfa.initial};
  for (const auto& sym : word) {
    std::set<std::string> next;
    for (const auto& [q, s, q2] : nfa.trans)
      if (s == sym && cur.count(q)) next.insert(q2);
    cur = std::move(next);
    if (cur.empty()) return false;
  }
  for (const auto& q : cur)
    if (nfa.accepting.count(q)) return true;
  return false;
}

namespace detail {

// Membership of the set-labeled children word in L: product of the NFA with
// the per-child state-set sequence, never enumerating single state strings.
inline bool horizontal_language_hit(const Nfa& nfa,
                                    const std::vector<std::set<std::string>>& child_sets) {
  std::set<std::string> reach{nfa.initial};
  for (const auto& options : child_sets) {
    std::set<std::string> next;
    for (const auto& [q, s, q2] : nfa.trans)
      if (reach.count(q) && options.count(s)) next.insert(q2);
    reach = std::move(next);
    if (reach.empty()) return false;
  }
  for (const auto& q : reach)
    if (nfa.accepting.count(q)) return true;
  return false;
}

}  // namespace detail

/// For each node the states the NTA can assume there, computed bottom-up over
/// the children in written order.
inline std::vector<std::set<std::string>> nta_state_sets(const Nta& a, const LabeledTree& t) {
  std::vector<std::set<std::string>> sets(t.size() + 1);
  auto walk = [&](auto&& self, Node v) -> void {
    for (Node c : t.kids(v)) self(self, c);
    const std::string& lab = t.label(v);
    if (!a.alphabet.contains(lab)) throw std::invalid_argument("unknown label: " + lab);
    std::vector<std::set<std::string>> child_sets;
    for (Node c : t.kids(v)) child_sets.push_back(sets[c]);
    for (const auto& r : a.rules) {
      if (r.symbol != lab) continue;
      if (sets[v].count(r.state)) continue;
      if (detail::horizontal_language_hit(a.nfas.at(r.language), child_sets))
        sets[v].insert(r.state);
    }
    return;
  };
  walk(walk, t.root());
  return sets;
}

/// True iff some accepting run exists, i.e. the root's state set meets F.
inline bool nta_accepts(const Nta& a, const LabeledTree& t) {
  auto sets = nta_state_sets(a, t);
  for (const auto& s : sets[t.root()])
    if (a.accepting.count(s)) return true;
  return false;
}

}  // namespace mdlog

#endif  // MDLOG_AUTOMATA_HPP
