#ifndef MDLOG_ATM_HPP
#define MDLOG_ATM_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mdlog/trees.hpp"

namespace mdlog {

/// Alternating Turing machine. States are partitioned into existential and
/// universal states plus the accepting and rejecting halting states; no
/// transition may leave a halting state.
struct Atm {
  std::vector<std::string> exist_states;
  std::vector<std::string> univ_states;
  std::string accept_state;
  std::string reject_state;
  std::string initial_state;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> tape_alphabet;
  std::string blank;

  struct Trans {
    std::string from_state;
    std::string read;
    std::string to_state;
    std::string write;
    char move;  // 'L', 'R' or 'S'

    bool operator==(const Trans& o) const {
      return from_state == o.from_state && read == o.read && to_state == o.to_state &&
             write == o.write && move == o.move;
    }
    bool operator<(const Trans& o) const {
      return std::tie(from_state, read, to_state, write, move) <
             std::tie(o.from_state, o.read, o.to_state, o.write, o.move);
    }
  };
  std::vector<Trans> transitions;

  bool is_halting(const std::string& q) const { return q == accept_state || q == reject_state; }
  bool is_exist(const std::string& q) const {
    return std::find(exist_states.begin(), exist_states.end(), q) != exist_states.end();
  }
  bool is_univ(const std::string& q) const {
    return std::find(univ_states.begin(), univ_states.end(), q) != univ_states.end();
  }
  bool has_state(const std::string& q) const {
    return is_halting(q) || is_exist(q) || is_univ(q);
  }
  bool has_tape_symbol(const std::string& g) const {
    return std::find(tape_alphabet.begin(), tape_alphabet.end(), g) != tape_alphabet.end();
  }

  std::vector<Trans> row(const std::string& q, const std::string& g) const {
    std::vector<Trans> out;
    for (const auto& t : transitions)
      if (t.from_state == q && t.read == g) out.push_back(t);
    return out;
  }
};

inline void validate_atm(const Atm& a) {
  std::set<std::string> seen;
  for (const auto& q : a.exist_states)
    if (!seen.insert(q).second) throw std::invalid_argument("duplicate state: " + q);
  for (const auto& q : a.univ_states)
    if (!seen.insert(q).second) throw std::invalid_argument("duplicate state: " + q);
  if (!seen.insert(a.accept_state).second)
    throw std::invalid_argument("accept state clashes with another state");
  if (!seen.insert(a.reject_state).second)
    throw std::invalid_argument("reject state clashes with another state");
  if (!a.has_state(a.initial_state))
    throw std::invalid_argument("undeclared initial state: " + a.initial_state);
  if (!a.has_tape_symbol(a.blank)) throw std::invalid_argument("blank not in tape alphabet");
  for (const auto& s : a.input_alphabet) {
    if (!a.has_tape_symbol(s))
      throw std::invalid_argument("input symbol outside tape alphabet: " + s);
    if (s == a.blank) throw std::invalid_argument("blank may not be an input symbol");
  }
  std::set<Atm::Trans> tset;
  for (const auto& t : a.transitions) {
    if (a.is_halting(t.from_state))
      throw std::invalid_argument("transition from halting state " + t.from_state);
    if (!a.has_state(t.from_state) || !a.has_state(t.to_state))
      throw std::invalid_argument("transition uses undeclared state");
    if (!a.has_tape_symbol(t.read) || !a.has_tape_symbol(t.write))
      throw std::invalid_argument("transition uses undeclared tape symbol");
    if (t.move != 'L' && t.move != 'R' && t.move != 'S')
      throw std::invalid_argument("bad move direction");
    if (!tset.insert(t).second) throw std::invalid_argument("duplicate transition");
  }
}

/// Line-oriented ATM format:
///   states_exist q0 q1
///   states_univ u0
///   accept qa
///   reject qr
///   initial q0
///   input_alphabet a b
///   tape_alphabet a b bl blank bl
///   trans q0 a q1 b R
inline Atm parse_atm(const std::string& text) {
  Atm a;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('%');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    std::vector<std::string> rest(toks.begin() + 1, toks.end());
    if (kw == "states_exist") {
      a.exist_states.insert(a.exist_states.end(), rest.begin(), rest.end());
    } else if (kw == "states_univ") {
      a.univ_states.insert(a.univ_states.end(), rest.begin(), rest.end());
    } else if (kw == "accept" && rest.size() == 1) {
      a.accept_state = rest[0];
    } else if (kw == "reject" && rest.size() == 1) {
      a.reject_state = rest[0];
    } else if (kw == "initial" && rest.size() == 1) {
      a.initial_state = rest[0];
    } else if (kw == "input_alphabet") {
      a.input_alphabet.insert(a.input_alphabet.end(), rest.begin(), rest.end());
    } else if (kw == "tape_alphabet") {
      auto bl = std::find(rest.begin(), rest.end(), "blank");
      if (bl == rest.end() || bl + 2 != rest.end())
        throw parse_error("tape_alphabet must end with: blank <symbol>", lineno, 1);
      a.tape_alphabet.assign(rest.begin(), bl);
      a.blank = *(bl + 1);
    } else if (kw == "trans" && rest.size() == 5 && rest[4].size() == 1) {
      a.transitions.push_back({rest[0], rest[1], rest[2], rest[3], rest[4][0]});
    } else {
      throw parse_error("unknown or malformed directive: " + kw, lineno, 1);
    }
  }
  validate_atm(a);
  return a;
}

inline std::string render_atm(const Atm& a) {
  std::ostringstream out;
  auto list = [&](const char* kw, const std::vector<std::string>& xs) {
    if (xs.empty()) return;
    out << kw;
    for (const auto& x : xs) out << ' ' << x;
    out << '\n';
  };
  list("states_exist", a.exist_states);
  list("states_univ", a.univ_states);
  out << "accept " << a.accept_state << "\nreject " << a.reject_state << "\ninitial "
      << a.initial_state << '\n';
  list("input_alphabet", a.input_alphabet);
  out << "tape_alphabet";
  for (const auto& x : a.tape_alphabet) out << ' ' << x;
  out << " blank " << a.blank << '\n';
  for (const auto& t : a.transitions)
    out << "trans " << t.from_state << ' ' << t.read << ' ' << t.to_state << ' ' << t.write
        << ' ' << t.move << '\n';
  return out.str();
}

/// Tape snapshot w1 q w2: tape holds w1 w2 followed by blanks, the head is on
/// the first letter of w2. Trailing blanks of w2 are normalized away.
struct Configuration {
  std::vector<std::string> left;
  std::string state;
  std::vector<std::string> right;

  bool operator==(const Configuration& o) const {
    return left == o.left && state == o.state && right == o.right;
  }
  bool operator<(const Configuration& o) const {
    return std::tie(left, state, right) < std::tie(o.left, o.state, o.right);
  }

  int head() const { return static_cast<int>(left.size()); }
  int width() const { return static_cast<int>(left.size() + std::max<size_t>(right.size(), 1)); }

  std::string to_string() const {
    std::string out;
    for (const auto& g : left) out += g + " ";
    out += "[" + state + "] ";
    for (const auto& g : right) out += g + " ";
    return out;
  }
};

inline Configuration initial_configuration(const Atm& a, const std::vector<std::string>& word) {
  Configuration c;
  c.state = a.initial_state;
  c.right = word;
  while (!c.right.empty() && c.right.back() == a.blank) c.right.pop_back();
  return c;
}

inline std::string content_at(const Configuration& c, int pos, const std::string& blank) {
  if (pos < c.head()) return c.left[pos];
  int r = pos - c.head();
  if (r < static_cast<int>(c.right.size())) return c.right[r];
  return blank;
}

/// Applies one transition to a configuration. The head letter is blank when
/// w2 is empty; moving left at the leftmost cell is an error.
inline Configuration apply_transition(const Atm& a, const Configuration& c,
                                      const Atm::Trans& t) {
  Configuration out = c;
  out.state = t.to_state;
  std::vector<std::string>& right = out.right;
  if (right.empty()) right.push_back(a.blank);
  right[0] = t.write;
  if (t.move == 'R') {
    out.left.push_back(right[0]);
    right.erase(right.begin());
  } else if (t.move == 'L') {
    if (out.left.empty())
      throw std::invalid_argument("left move at the leftmost tape cell");
    right.insert(right.begin(), out.left.back());
    out.left.pop_back();
  }
  while (!right.empty() && right.back() == a.blank) right.pop_back();
  return out;
}

/// Successor configurations, one per applicable transition in declaration order.
inline std::vector<Configuration> successors(const Atm& a, const Configuration& c) {
  if (a.is_halting(c.state))
    throw std::invalid_argument("halting configuration has no successors");
  std::string head_letter = c.right.empty() ? a.blank : c.right[0];
  std::vector<Configuration> out;
  for (const auto& t : a.transitions)
    if (t.from_state == c.state && t.read == head_letter)
      out.push_back(apply_transition(a, c, t));
  return out;
}

/// The unique transition turning `from` into `to`, if any.
inline std::optional<Atm::Trans> find_transition(const Atm& a, const Configuration& from,
                                                 const Configuration& to) {
  std::string head_letter = from.right.empty() ? a.blank : from.right[0];
  for (const auto& t : a.transitions)
    if (t.from_state == from.state && t.read == head_letter &&
        apply_transition(a, from, t) == to)
      return t;
  return std::nullopt;
}

/// Tree of configurations: existential nodes carry one child, universal nodes
/// one child per successor (left then right for normalized machines), halting
/// nodes are leaves.
struct ComputationTree {
  Configuration config;
  std::vector<ComputationTree> children;

  int depth() const {
    int d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
  }
};

namespace detail {

inline void check_space(const Configuration& c, int space_bits) {
  if (c.width() > (1 << space_bits))
    throw std::runtime_error("space bound exceeded during search: configuration needs " +
                             std::to_string(c.width()) + " cells");
}

}  // namespace detail

/// Bounded AND-OR search for an accepting computation tree: existential nodes
/// need one accepting successor subtree, universal nodes need all of them.
/// depth_bound counts tree levels. Returns the tree found, if any.
inline std::optional<ComputationTree> search_accepting_tree(const Atm& a, int depth_bound,
                                                            int space_bits) {
  std::map<std::pair<std::string, int>, bool> memo;
  auto key = [](const Configuration& c, int d) {
    return std::pair<std::string, int>(c.to_string(), d);
  };
  auto rec = [&](auto&& self, const Configuration& c, int levels) -> std::optional<ComputationTree> {
    detail::check_space(c, space_bits);
    if (a.is_halting(c.state)) {
      if (c.state == a.accept_state) return ComputationTree{c, {}};
      return std::nullopt;
    }
    if (levels <= 1) return std::nullopt;
    auto mk = key(c, levels);
    auto mit = memo.find(mk);
    if (mit != memo.end() && !mit->second) return std::nullopt;
    auto succs = successors(a, c);
    if (a.is_exist(c.state)) {
      for (const auto& s : succs) {
        auto sub = self(self, s, levels - 1);
        if (sub) return ComputationTree{c, {std::move(*sub)}};
      }
      memo[mk] = false;
      return std::nullopt;
    }
    // universal: every successor must accept
    if (succs.empty()) {
      memo[mk] = false;
      return std::nullopt;
    }
    ComputationTree node{c, {}};
    for (const auto& s : succs) {
      auto sub = self(self, s, levels - 1);
      if (!sub) {
        memo[mk] = false;
        return std::nullopt;
      }
      node.children.push_back(std::move(*sub));
    }
    return node;
  };
  return rec(rec, initial_configuration(a, {}), depth_bound);
}

/// True for machines in the normalized shape: every non-halting (state,letter)
/// row has exactly two transitions, universal rows only switch state, and
/// non-halting steps alternate between the existential and universal classes.
inline bool is_normalized(const Atm& a) {
  std::vector<std::string> nonhalting = a.exist_states;
  nonhalting.insert(nonhalting.end(), a.univ_states.begin(), a.univ_states.end());
  for (const auto& q : nonhalting)
    for (const auto& g : a.tape_alphabet) {
      auto row = a.row(q, g);
      if (row.size() != 2) return false;
      for (const auto& t : row) {
        if (a.is_univ(q)) {
          if (t.write != g || t.move != 'S') return false;
          if (!a.is_exist(t.to_state) && !a.is_halting(t.to_state)) return false;
        } else {
          if (!a.is_univ(t.to_state) && !a.is_halting(t.to_state)) return false;
        }
      }
    }
  return true;
}

namespace detail {

// Fresh-name allocator over the machine's state namespace.
class NamePool {
public:
  explicit NamePool(const Atm& a) {
    used_.insert(a.exist_states.begin(), a.exist_states.end());
    used_.insert(a.univ_states.begin(), a.univ_states.end());
    used_.insert(a.accept_state);
    used_.insert(a.reject_state);
  }
  std::string fresh(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int i = 2;; ++i) {
      std::string cand = base + "_" + std::to_string(i);
      if (used_.insert(cand).second) return cand;
    }
  }

private:
  std::set<std::string> used_;
};

}  // namespace detail

/// Rewrites a machine into the normalized shape while preserving its language:
/// lone successors are duplicated through twin states, universal write/move
/// steps are compressed into a state change followed by a fresh existential
/// state performing the effect, and strict alternation is restored with fresh
/// universal relay states carrying identical twin branches. The halting-form
/// assumption (head leftmost on halting) is not rewritten; see
/// check_leftmost_halting for the bounded flag.
inline Atm normalize(const Atm& in) {
  validate_atm(in);
  Atm a = in;
  detail::NamePool names(a);

  using Row = std::vector<Atm::Trans>;
  std::map<std::pair<std::string, std::string>, Row> rows;
  for (const auto& t : a.transitions) rows[{t.from_state, t.read}].push_back(t);

  std::vector<std::string> work = a.exist_states;
  work.insert(work.end(), a.univ_states.begin(), a.univ_states.end());

  std::map<std::string, std::string> twin_of;    // original -> twin (rows copied last)
  std::map<std::string, std::string> buf_univ;   // existential target -> universal buffer
  std::string accept_relay, reject_relay;

  auto add_exist = [&](const std::string& q) {
    a.exist_states.push_back(q);
    work.push_back(q);
  };
  auto add_univ = [&](const std::string& q) {
    a.univ_states.push_back(q);
    work.push_back(q);
  };

  auto twin = [&](const std::string& q) -> std::string {
    auto it = twin_of.find(q);
    if (it != twin_of.end()) return it->second;
    std::string tw = names.fresh(q + "_tw");
    if (a.is_univ(q))
      a.univ_states.push_back(tw);  // rows are copied verbatim at the end
    else
      a.exist_states.push_back(tw);
    twin_of[q] = tw;
    return tw;
  };

  // immediate-accept / immediate-reject existential relays, created on demand
  auto relay = [&](bool accepting) -> std::string {
    std::string& slot = accepting ? accept_relay : reject_relay;
    if (!slot.empty()) return slot;
    slot = names.fresh(accepting ? "h_acc" : "h_rej");
    add_exist(slot);
    std::string target = accepting ? a.accept_state : a.reject_state;
    for (const auto& g : a.tape_alphabet) {
      rows[{slot, g}].push_back({slot, g, target, g, 'S'});
      // second branch: rejecting either way keeps the relay's verdict intact
      rows[{slot, g}].push_back({slot, g, a.reject_state, g, accepting ? 'S' : 'R'});
    }
    return slot;
  };

  // entry point used by existential steps: must land on a universal or
  // halting state, buffering through a fresh universal state if needed
  auto to_universal = [&](const std::string& p) -> std::string {
    if (a.is_halting(p) || a.is_univ(p)) return p;
    auto it = buf_univ.find(p);
    if (it != buf_univ.end()) return it->second;
    std::string b = names.fresh("u_" + p);
    add_univ(b);
    std::string tw = twin(p);
    for (const auto& g : a.tape_alphabet) {
      rows[{b, g}].push_back({b, g, p, g, 'S'});
      rows[{b, g}].push_back({b, g, tw, g, 'S'});
    }
    buf_univ[p] = b;
    return b;
  };

  for (size_t wi = 0; wi < work.size(); ++wi) {
    std::string q = work[wi];
    for (const auto& g : a.tape_alphabet) {
      Row& row = rows[{q, g}];

      if (a.is_univ(q)) {
        // universal steps may only switch state and must land existentially
        for (auto& t : row) {
          if (t.write != g || t.move != 'S' || a.is_univ(t.to_state)) {
            std::string w = names.fresh("x_" + q + "_" + g);
            add_exist(w);
            rows[{w, g}].push_back({w, g, to_universal(t.to_state), t.write, t.move});
            t = {q, g, w, g, 'S'};
          }
        }
      } else {
        for (auto& t : row)
          if (a.is_exist(t.to_state)) t = {q, g, to_universal(t.to_state), t.write, t.move};
      }

      // fan-out: exactly two transitions per non-halting row
      if (row.size() > 2) {
        Row resting(row.begin() + 1, row.end());
        std::string q2 = names.fresh(q + "_alt");
        if (a.is_univ(q)) {
          // relay through an existential state whose only real option is q2
          add_univ(q2);
          rows[{q2, g}] = resting;
          for (auto& t : rows[{q2, g}]) t.from_state = q2;
          std::string e = names.fresh("e_" + q2);
          add_exist(e);
          rows[{e, g}].push_back({e, g, q2, g, 'S'});
          rows[{e, g}].push_back({e, g, a.reject_state, g, 'S'});
          row = {row[0], {q, g, e, g, 'S'}};
        } else {
          add_exist(q2);
          rows[{q2, g}] = resting;
          for (auto& t : rows[{q2, g}]) t.from_state = q2;
          row = {row[0], {q, g, to_universal(q2), g, 'S'}};
        }
      } else if (row.size() == 1) {
        Atm::Trans t = row[0];
        if (a.is_halting(t.to_state)) {
          if (a.is_univ(q)) {
            // a write/move variant would break the state-only shape, so pad
            // through a relay that repeats the verdict
            row.push_back({q, g, relay(t.to_state == a.accept_state), g, 'S'});
          } else {
            Atm::Trans pad{q, g, a.reject_state, g, 'S'};
            if (pad == t) pad.move = 'R';
            row.push_back(pad);
          }
        } else {
          row.push_back({q, g, twin(t.to_state), t.write, t.move});
        }
      } else if (row.empty()) {
        // dead end: two distinct rejecting options
        if (a.is_univ(q)) {
          std::string hr = relay(false);
          row.push_back({q, g, hr, g, 'S'});
          row.push_back({q, g, twin(hr), g, 'S'});
        } else {
          row.push_back({q, g, a.reject_state, g, 'S'});
          row.push_back({q, g, a.reject_state, g, 'R'});
        }
      }
    }
  }

  // twins mirror their original's final rows
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [orig, tw] : twin_of)
      for (const auto& g : a.tape_alphabet) {
        Row& dst = rows[{tw, g}];
        const Row& src = rows[{orig, g}];
        if (dst.size() != src.size()) {
          dst = src;
          for (auto& t : dst) t.from_state = tw;
          changed = true;
        }
      }
  }

  a.transitions.clear();
  std::vector<std::string> all = a.exist_states;
  all.insert(all.end(), a.univ_states.begin(), a.univ_states.end());
  for (const auto& q : all)
    for (const auto& g : a.tape_alphabet)
      for (const auto& t : rows[{q, g}]) a.transitions.push_back(t);

  validate_atm(a);
  return a;
}

/// Builds the input-folding machine: fresh deterministic prefix states write
/// the word on the empty tape, walk back to the leftmost cell and enter the
/// original initial state. The result accepts the empty word iff the original
/// machine accepts the word.
inline Atm build_input_machine(const Atm& in, const std::vector<std::string>& word) {
  validate_atm(in);
  for (const auto& s : word)
    if (std::find(in.input_alphabet.begin(), in.input_alphabet.end(), s) ==
        in.input_alphabet.end())
      throw std::invalid_argument("word symbol outside input alphabet: " + s);
  if (word.empty()) return in;

  Atm a = in;
  detail::NamePool names(a);
  int n = static_cast<int>(word.size());

  std::vector<std::string> writers, walkers;
  for (int i = 0; i < n; ++i) writers.push_back(names.fresh("wr" + std::to_string(i)));
  for (int i = 0; i <= n; ++i) walkers.push_back(names.fresh("bk" + std::to_string(i)));

  a.exist_states.insert(a.exist_states.end(), writers.begin(), writers.end());
  a.exist_states.insert(a.exist_states.end(), walkers.begin(), walkers.end());

  std::vector<Atm::Trans> prefix;
  for (int i = 0; i < n; ++i) {
    std::string next = (i + 1 < n) ? writers[i + 1] : walkers[n];
    prefix.push_back({writers[i], a.blank, next, word[i], 'R'});
  }
  // after the last write the head sits on the blank right of the word
  prefix.push_back({walkers[n], a.blank, walkers[n - 1], a.blank, 'L'});
  for (int j = n - 1; j >= 1; --j)
    prefix.push_back({walkers[j], word[j], walkers[j - 1], word[j], 'L'});
  prefix.push_back({walkers[0], word[0], a.initial_state, word[0], 'S'});

  a.transitions.insert(a.transitions.end(), prefix.begin(), prefix.end());
  a.initial_state = writers[0];
  validate_atm(a);
  return a;
}

/// Bounded check of the halting-form assumption: collects halting
/// configurations reachable within the given bounds whose head is not on the
/// leftmost cell. Machines flagged here encode computation trees that the
/// reduction's condition on halting cells will reject.
inline std::vector<Configuration> check_leftmost_halting(const Atm& a, int depth_bound,
                                                         int space_bits) {
  std::vector<Configuration> bad;
  std::set<std::string> seen;
  auto rec = [&](auto&& self, const Configuration& c, int depth) -> void {
    if (!seen.insert(c.to_string()).second) return;
    detail::check_space(c, space_bits);
    if (a.is_halting(c.state)) {
      if (!c.left.empty()) bad.push_back(c);
      return;
    }
    if (depth <= 1) return;
    for (const auto& s : successors(a, c)) self(self, s, depth - 1);
  };
  rec(rec, initial_configuration(a, {}), depth_bound);
  return bad;
}

}  // namespace mdlog

#endif  // MDLOG_ATM_HPP
