#ifndef MDLOG_ENCODING_HPP
#define MDLOG_ENCODING_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mdlog/atm.hpp"
#include "mdlog/trees.hpp"

namespace mdlog {

/// One symbol of an encoded tape: a plain letter (BCell), the current head
/// position tagged with the transition that produced the configuration
/// (CCell), or the previous head position tagged with the predecessor's state
/// and letter (PCell).
struct Cell {
  enum class Kind { B, C, P };
  Kind kind;
  std::string content;
  Atm::Trans trans;          // CCells only
  std::string prev_state;    // PCells only
  std::string prev_content;  // PCells only

  static Cell B(std::string a) { return {Kind::B, std::move(a), {}, "", ""}; }
  static Cell C(std::string a, Atm::Trans t) { return {Kind::C, std::move(a), std::move(t), "", ""}; }
  static Cell P(std::string a, std::string q, std::string b) {
    return {Kind::P, std::move(a), {}, std::move(q), std::move(b)};
  }

  std::tuple<int, std::string, Atm::Trans, std::string, std::string> key() const {
    return {static_cast<int>(kind), content, trans, prev_state, prev_content};
  }
  bool operator==(const Cell& o) const { return key() == o.key(); }
  bool operator<(const Cell& o) const { return key() < o.key(); }

  std::string to_string() const {
    switch (kind) {
      case Kind::B: return "B(" + content + ")";
      case Kind::C:
        return "C(" + content + ",((" + trans.from_state + "," + trans.read + "),(" +
               trans.to_state + "," + trans.write + "," + std::string(1, trans.move) + ")))";
      case Kind::P: return "P(" + content + ",(" + prev_state + "," + prev_content + "))";
    }
    return "";
  }
};

/// The k possible configuration cells of a machine, in the canonical order
/// BCells, CCells, PCells with lexicographic ties. Indices are 1-based.
/// Carries the (normalized) machine so downstream constructions are
/// self-contained.
struct CellAlphabet {
  Atm machine;
  Atm::Trans start_trans;  // ((q0,blank),(q0,blank,S)), a pseudo-transition if absent from delta
  std::vector<Cell> cells;
  std::map<std::string, int> index_by_repr;

  int k() const { return static_cast<int>(cells.size()); }

  const Cell& at(int i) const { return cells.at(i - 1); }

  int index_of(const Cell& c) const {
    auto it = index_by_repr.find(c.to_string());
    if (it == index_by_repr.end())
      throw std::invalid_argument("cell outside alphabet: " + c.to_string());
    return it->second;
  }

  int start_cell_index() const {
    return index_of(Cell::C(machine.blank, start_trans));
  }

  bool is_ccell(int i) const { return at(i).kind == Cell::Kind::C; }

  /// Current state of a CCell: the target of the transition that produced it.
  const std::string& ccell_state(int i) const { return at(i).trans.to_state; }

  bool is_accepting_ccell(int i) const {
    return is_ccell(i) && ccell_state(i) == machine.accept_state;
  }
  bool is_exist_ccell(int i) const { return is_ccell(i) && machine.is_exist(ccell_state(i)); }
  bool is_univ_ccell(int i) const { return is_ccell(i) && machine.is_univ(ccell_state(i)); }

  std::vector<int> ccell_indices() const {
    std::vector<int> out;
    for (int i = 1; i <= k(); ++i)
      if (is_ccell(i)) out.push_back(i);
    return out;
  }
};

/// Builds the cell alphabet of a normalized machine: BCells = Gamma, CCells =
/// Gamma x (delta plus the start pseudo-transition), PCells = Gamma x (Q x Gamma).
inline CellAlphabet cell_alphabet(const Atm& atm) {
  CellAlphabet ca;
  ca.machine = atm;
  ca.start_trans = {atm.initial_state, atm.blank, atm.initial_state, atm.blank, 'S'};

  std::set<Atm::Trans> delta(atm.transitions.begin(), atm.transitions.end());
  delta.insert(ca.start_trans);

  std::vector<std::string> states = atm.exist_states;
  states.insert(states.end(), atm.univ_states.begin(), atm.univ_states.end());
  states.push_back(atm.accept_state);
  states.push_back(atm.reject_state);

  std::vector<Cell> b, c, p;
  for (const auto& g : atm.tape_alphabet) b.push_back(Cell::B(g));
  for (const auto& g : atm.tape_alphabet)
    for (const auto& t : delta) c.push_back(Cell::C(g, t));
  for (const auto& g : atm.tape_alphabet)
    for (const auto& q : states)
      for (const auto& g2 : atm.tape_alphabet) p.push_back(Cell::P(g, q, g2));

  auto push_sorted = [&](std::vector<Cell>& v) {
    std::sort(v.begin(), v.end());
    for (auto& cell : v) ca.cells.push_back(std::move(cell));
  };
  push_sorted(b);
  push_sorted(c);
  push_sorted(p);
  for (int i = 0; i < ca.k(); ++i) ca.index_by_repr[ca.cells[i].to_string()] = i + 1;
  return ca;
}

/// Horizontal constraints H1-H3: false exactly when a rule forbids cell i
/// immediately left of cell j within one configuration.
inline bool horizontal_allowed(const CellAlphabet& ca, int i, int j) {
  const Cell& l = ca.at(i);
  const Cell& r = ca.at(j);
  // H1: left of an R-moving CCell only its matching PCell
  if (r.kind == Cell::Kind::C && r.trans.move == 'R') {
    if (!(l.kind == Cell::Kind::P && l.content == r.trans.write &&
          l.prev_state == r.trans.from_state && l.prev_content == r.trans.read))
      return false;
  }
  // H2: right of an L-moving CCell only its matching PCell
  if (l.kind == Cell::Kind::C && l.trans.move == 'L') {
    if (!(r.kind == Cell::Kind::P && r.content == l.trans.write &&
          r.prev_state == l.trans.from_state && r.prev_content == l.trans.read))
      return false;
  }
  // H3: right of the blank BCell only blank itself
  if (l.kind == Cell::Kind::B && l.content == ca.machine.blank) {
    if (!(r.kind == Cell::Kind::B && r.content == ca.machine.blank)) return false;
  }
  return true;
}

/// Vertical constraints V1-V3: true iff cell j may sit at the same tape
/// position as cell i in the successor configuration.
inline bool vertical_allowed(const CellAlphabet& ca, int i, int j) {
  const Cell& u = ca.at(i);
  const Cell& l = ca.at(j);
  auto is_moving_ccell_with_content = [&](const Cell& c, const std::string& a) {
    return c.kind == Cell::Kind::C && c.content == a &&
           (c.trans.move == 'L' || c.trans.move == 'R');
  };
  switch (u.kind) {
    case Cell::Kind::B:
      // stays untouched, or the head just arrived from a neighbor
      return (l.kind == Cell::Kind::B && l.content == u.content) ||
             is_moving_ccell_with_content(l, u.content);
    case Cell::Kind::C:
      // head moves away leaving a PCell, or stays via an S-transition
      if (l.kind == Cell::Kind::P)
        return l.prev_state == u.trans.to_state && l.prev_content == u.content;
      if (l.kind == Cell::Kind::C)
        return l.trans.from_state == u.trans.to_state && l.trans.read == u.content &&
               l.trans.move == 'S' && l.trans.write == l.content;
      return false;
    case Cell::Kind::P:
      return (l.kind == Cell::Kind::B && l.content == u.content) ||
             is_moving_ccell_with_content(l, u.content);
  }
  return false;
}

/// Allowed-pair tables, enumerated from the constraint predicates.
struct ConstraintTables {
  std::set<std::pair<int, int>> H;
  std::set<std::pair<int, int>> V;
};

inline ConstraintTables constraint_tables(const CellAlphabet& ca) {
  ConstraintTables t;
  for (int i = 1; i <= ca.k(); ++i)
    for (int j = 1; j <= ca.k(); ++j) {
      if (horizontal_allowed(ca, i, j)) t.H.insert({i, j});
      if (vertical_allowed(ca, i, j)) t.V.insert({i, j});
    }
  return t;
}

// ---------------------------------------------------------------------------
// The fixed ranked alphabet of encoded computation trees.

inline RankedAlphabet sigma_prime() {
  return RankedAlphabet({{"top", 1},
                         {"ctA", 3},
                         {"haltA", 1},
                         {"ctEL", 2},
                         {"ctER", 2},
                         {"haltEL", 1},
                         {"haltER", 1},
                         {"r", 2},
                         {"s", 3},
                         {"sleaf", 2},
                         {"p", 1},
                         {"m", 1},
                         {"d0", 1},
                         {"d1", 1},
                         {"bot", 0}});
}

/// The unranked twin of sigma_prime, used by the containment reduction.
inline Alphabet sigma_ur() { return sigma_prime().unranked(); }

namespace detail {

inline Term nav_gadget(bool is_left) {
  // left children read p-0-1-bot, right children p-1-0-bot
  std::string first = is_left ? "d0" : "d1";
  std::string second = is_left ? "d1" : "d0";
  return Term("p", {Term(first, {Term(second, {Term("bot")})})});
}

inline Term cell_gadget(int index, int k) {
  Term path("bot");
  for (int i = k; i >= 1; --i) path = Term(i == index ? "d1" : "d0", {path});
  return Term("m", {path});
}

/// Cell indices of one encoded configuration, leftmost first.
inline std::vector<int> config_cells(const Configuration& c,
                                     const std::optional<Configuration>& prev,
                                     const Atm::Trans& incoming, int n,
                                     const CellAlphabet& ca) {
  int width = 1 << n;
  if (c.width() > width)
    throw std::invalid_argument("space overflow: configuration needs " +
                                std::to_string(c.width()) + " cells, 2^n = " +
                                std::to_string(width));
  const std::string& blank = ca.machine.blank;
  int head = c.head();
  int prev_head = prev ? prev->head() : head;
  std::vector<int> out;
  for (int pos = 0; pos < width; ++pos) {
    std::string content = content_at(c, pos, blank);
    Cell cell = Cell::B(content);
    if (pos == head)
      cell = Cell::C(content, incoming);
    else if (prev && pos == prev_head)
      cell = Cell::P(content, prev->state, content_at(*prev, pos, blank));
    out.push_back(ca.index_of(cell));
  }
  return out;
}

inline Term skeleton(const std::vector<int>& cells, int level, int n, int addr, bool is_left,
                     int k) {
  if (level == n) {
    return Term("sleaf", {nav_gadget(is_left), cell_gadget(cells[addr], k)});
  }
  Term left = skeleton(cells, level + 1, n, addr << 1, true, k);
  Term right = skeleton(cells, level + 1, n, (addr << 1) | 1, false, k);
  return Term("s", {std::move(left), std::move(right), nav_gadget(is_left)});
}

inline Term config_subtree(const std::vector<int>& cells, int n, int k) {
  Term left = skeleton(cells, 1, n, 0, true, k);
  Term right = skeleton(cells, 1, n, 1, false, k);
  return Term("r", {std::move(left), std::move(right)});
}

}  // namespace detail

/// enc(.): replaces every computation-tree node by its configuration gadget
/// tree and hangs encoded children below it, with a top-labeled root above
/// the initial configuration node.
inline LabeledTree encode(const ComputationTree& ct, int n, const CellAlphabet& ca) {
  if (n < 2) throw std::invalid_argument("address bits n must be >= 2");
  const Atm& m = ca.machine;

  enum class Role { Root, OfExist, LeftOfUniv, RightOfUniv };
  auto walk = [&](auto&& self, const ComputationTree& node,
                  const std::optional<Configuration>& prev, const Atm::Trans& incoming,
                  Role role) -> Term {
    const Configuration& c = node.config;
    bool halting = m.is_halting(c.state);
    std::string label;
    if (halting) {
      if (!node.children.empty())
        throw std::invalid_argument("non-normalized shape: halting node has children");
      label = role == Role::OfExist ? "haltA"
              : role == Role::RightOfUniv ? "haltER"
                                          : "haltEL";
    } else if (m.is_univ(c.state)) {
      if (node.children.size() != 2)
        throw std::invalid_argument("non-normalized shape: universal node without two children");
      label = "ctA";
    } else {
      if (node.children.size() != 1)
        throw std::invalid_argument("non-normalized shape: existential node without one child");
      label = role == Role::RightOfUniv ? "ctER" : "ctEL";
    }

    Term out(label);
    out.kids.push_back(detail::config_subtree(detail::config_cells(c, prev, incoming, n, ca),
                                              n, ca.k()));
    for (size_t i = 0; i < node.children.size(); ++i) {
      const ComputationTree& child = node.children[i];
      auto t = find_transition(m, c, child.config);
      if (!t)
        throw std::invalid_argument("computation tree edge is not a machine transition");
      Role child_role = halting ? Role::Root
                        : m.is_univ(c.state)
                            ? (i == 0 ? Role::LeftOfUniv : Role::RightOfUniv)
                            : Role::OfExist;
      out.kids.push_back(self(self, child, c, *t, child_role));
    }
    return out;
  };

  Term top("top", {walk(walk, ct, std::nullopt, ca.start_trans, Role::Root)});
  return tree_from_term(top);
}

/// Reads the cell indices off an r-rooted configuration subtree, leftmost
/// address first. Used by decode_config and by test oracles that compare
/// whole cell sequences.
inline std::vector<int> decode_cells(const LabeledTree& r_subtree, int n,
                                     const CellAlphabet& ca) {
  if (r_subtree.label(r_subtree.root()) != "r")
    throw std::invalid_argument("subtree root is not labeled r");

  auto gadget_digits = [&](Node start) {
    // digits below a p or m node down to bot
    std::vector<int> out;
    Node cur = start;
    for (;;) {
      const auto& ks = r_subtree.kids(cur);
      if (ks.size() != 1) throw std::invalid_argument("malformed gadget path");
      cur = ks[0];
      const std::string& lab = r_subtree.label(cur);
      if (lab == "bot") {
        if (!r_subtree.kids(cur).empty()) throw std::invalid_argument("bot with children");
        return out;
      }
      if (lab == "d0")
        out.push_back(0);
      else if (lab == "d1")
        out.push_back(1);
      else
        throw std::invalid_argument("malformed gadget label: " + lab);
    }
  };

  auto nav_is_left = [&](Node skel) -> bool {
    for (Node c : r_subtree.kids(skel))
      if (r_subtree.label(c) == "p") {
        auto digits = gadget_digits(c);
        if (digits.size() != 2 || digits[0] + digits[1] != 1)
          throw std::invalid_argument("malformed navigation gadget");
        return digits[0] == 0;
      }
    throw std::invalid_argument("skeleton node without navigation gadget");
  };

  auto cell_of_leaf = [&](Node leaf) -> int {
    for (Node c : r_subtree.kids(leaf))
      if (r_subtree.label(c) == "m") {
        auto digits = gadget_digits(c);
        if (static_cast<int>(digits.size()) != ca.k())
          throw std::invalid_argument("cell gadget has wrong length");
        int idx = 0, ones = 0;
        for (int i = 0; i < ca.k(); ++i)
          if (digits[i] == 1) {
            ++ones;
            idx = i + 1;
          }
        if (ones == 0) throw std::invalid_argument("cell gadget missing d1");
        if (ones > 1) throw std::invalid_argument("cell gadget with duplicate d1");
        return idx;
      }
    throw std::invalid_argument("leaf skeleton node without cell gadget");
  };

  int width = 1 << n;
  std::vector<int> cells(width, 0);
  auto walk = [&](auto&& self, Node v, int level, int addr) -> void {
    if (level == n) {
      if (r_subtree.label(v) != "sleaf")
        throw std::invalid_argument("expected sleaf at depth n");
      cells[addr] = cell_of_leaf(v);
      return;
    }
    Node left = 0, right = 0;
    for (Node c : r_subtree.kids(v)) {
      const std::string& lab = r_subtree.label(c);
      if (lab != "s" && lab != "sleaf") continue;
      (nav_is_left(c) ? left : right) = c;
    }
    if (!left || !right) throw std::invalid_argument("incomplete skeleton at depth " +
                                                     std::to_string(level));
    self(self, left, level + 1, addr << 1);
    self(self, right, level + 1, (addr << 1) | 1);
  };
  walk(walk, r_subtree.root(), 0, 0);

  // rebuild the configuration: contents everywhere, head at the unique CCell
  int head = -1;
  std::vector<std::string> contents(width);
  std::string state;
  for (int pos = 0; pos < width; ++pos) {
    const Cell& cell = ca.at(cells[pos]);
    contents[pos] = cell.content;
    if (cell.kind == Cell::Kind::C) {
      if (head >= 0) throw std::invalid_argument("two head cells in one configuration");
      head = pos;
      state = cell.trans.to_state;
    }
  }
  if (head < 0) throw std::invalid_argument("configuration without a head cell");

  Configuration c;
  c.state = state;
  for (int pos = 0; pos < head; ++pos) c.left.push_back(contents[pos]);
  int last = width - 1;
  while (last >= head && contents[last] == ca.machine.blank) --last;
  for (int pos = head; pos <= last; ++pos) c.right.push_back(contents[pos]);
  return c;
}

}  // namespace mdlog

#endif  // MDLOG_ENCODING_HPP
