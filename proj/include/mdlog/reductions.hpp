#ifndef MDLOG_REDUCTIONS_HPP
#define MDLOG_REDUCTIONS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mdlog/datalog.hpp"
#include "mdlog/encoding.hpp"

namespace mdlog {

/// Atom accumulator for macro expansion. Fresh variables are suffixed _m<i>
/// with a per-rule counter so generated rules are reproducible.
struct MacroAtomSet {
  std::vector<Atom> atoms;
  int fresh_counter = 0;

  std::string fresh() { return "v_m" + std::to_string(++fresh_counter); }

  void add(const std::string& pred, std::vector<std::string> args) {
    atoms.emplace_back(pred, std::move(args));
  }

  /// child(x,v1), child(v1,v2), ..., child(v_{i-1},y): y is x's descendant in
  /// the i-th generation.
  void child_chain(const std::string& x, const std::string& y, int i) {
    if (i < 1) throw std::invalid_argument("child chain needs i >= 1");
    std::string cur = x;
    for (int step = 1; step < i; ++step) {
      std::string next = fresh();
      add("child", {cur, next});
      cur = next;
    }
    add("child", {cur, y});
  }
};

inline std::vector<Atom> expand_child_chain(const std::string& x, const std::string& y, int i) {
  MacroAtomSet m;
  m.child_chain(x, y, i);
  return m.atoms;
}

namespace detail {

inline std::string theta(int i) { return "g_theta_" + std::to_string(i); }
inline std::string cellp(int i) { return "g_cell_" + std::to_string(i); }
inline std::string kleaf(int i) { return "g_kleaf_" + std::to_string(i); }
inline std::string kleft(int i) { return "g_kleft_" + std::to_string(i); }
inline std::string kright(int i) { return "g_kright_" + std::to_string(i); }
inline std::string digitp(int i) { return "g_digit_" + std::to_string(i); }
inline std::string heightp(int i) { return "g_h_" + std::to_string(i); }

inline Rule mk(Atom head, std::vector<Atom> body) { return Rule{std::move(head), std::move(body)}; }

// Succ(x_r1,x_r2): root nodes of successive encoded configuration trees.
// The configuration-root and CT-node variables are shared across all levels
// of one SameCell expansion.
inline void succ_atoms(MacroAtomSet& m, const std::string& r1, const std::string& r2,
                       const std::string& c1, const std::string& c2) {
  m.add("g_r", {r1});
  m.add("g_r", {r2});
  m.add("g_ct", {c1});
  m.add("g_ct", {c2});
  m.add("child", {c1, c2});
  m.add("child", {c1, r1});
  m.add("child", {c2, r2});
}

// SameLevel^LR_i / EquiLevel^LR_i gadget comparison: both nodes carry a
// navigation gadget whose unique 1-digit sits at the same orientation depth
// below an existentially chosen ancestor z. For successive configurations the
// successor's digit is one level deeper (offset2 = i+5); for same-depth
// configurations both offsets are i+4.
inline void lr_atoms(MacroAtomSet& m, const std::string& xi, const std::string& yi, int off1,
                     int off2) {
  std::string p1 = m.fresh(), p2 = m.fresh(), t1 = m.fresh(), t2 = m.fresh(), z = m.fresh();
  m.add("child", {xi, p1});
  m.add("g_p", {p1});
  m.add("child", {yi, p2});
  m.add("g_p", {p2});
  m.add("desc", {p1, t1});
  m.add("g_d1", {t1});
  m.add("desc", {p2, t2});
  m.add("g_d1", {t2});
  m.child_chain(z, t1, off1);
  m.child_chain(z, t2, off2);
}

// SameCell(x_s1,x_s2): skeleton-leaf nodes reflecting the same tape cell of
// successive encoded configurations. Emits the level chains plus a per-level
// SameLevel^LR expansion.
inline void same_cell_atoms(MacroAtomSet& m, int n, const std::string& xs1,
                            const std::string& xs2) {
  std::string r1 = "x_r1", r2 = "x_r2", c1 = "x_c1", c2 = "x_c2";
  succ_atoms(m, r1, r2, c1, c2);
  std::vector<std::string> xs(n + 1), ys(n + 1);
  for (int i = 1; i < n; ++i) {
    xs[i] = "x_lv" + std::to_string(i);
    ys[i] = "y_lv" + std::to_string(i);
  }
  xs[n] = xs1;
  ys[n] = xs2;
  for (int i = 1; i < n; ++i) {
    m.add("child", {xs[i], xs[i + 1]});
    m.add("child", {ys[i], ys[i + 1]});
  }
  for (int i = 1; i <= n; ++i) {
    m.add("g_s", {xs[i]});
    m.add("g_s", {ys[i]});
    m.child_chain(r1, xs[i], i);
    m.child_chain(r2, ys[i], i);
    lr_atoms(m, xs[i], ys[i], i + 4, i + 5);
  }
}

// EquiCell(x_s1,x_s2): like SameCell but for two configuration trees hanging
// at equal depth below a shared anchor, per the containment construction.
inline void equi_cell_atoms(MacroAtomSet& m, int n, const std::string& xs1,
                            const std::string& xs2) {
  std::string anchor = "x_eq", r1 = "x_r1", r2 = "x_r2";
  m.child_chain(anchor, r1, 2);
  m.child_chain(anchor, r2, 2);
  m.add("g_r", {r1});
  m.add("g_r", {r2});
  std::vector<std::string> xs(n + 1), ys(n + 1);
  for (int i = 1; i < n; ++i) {
    xs[i] = "x_lv" + std::to_string(i);
    ys[i] = "y_lv" + std::to_string(i);
  }
  xs[n] = xs1;
  ys[n] = xs2;
  for (int i = 1; i < n; ++i) {
    m.add("child", {xs[i], xs[i + 1]});
    m.add("child", {ys[i], ys[i + 1]});
  }
  for (int i = 1; i <= n; ++i) {
    m.add("g_s", {xs[i]});
    m.add("g_s", {ys[i]});
    m.child_chain(r1, xs[i], i);
    m.child_chain(r2, ys[i], i);
    lr_atoms(m, xs[i], ys[i], i + 4, i + 4);
  }
}

}  // namespace detail

/// The structure program PP1: derives g_structure at the top node iff the
/// input tree is shaped like an encoded computation tree (conditions on
/// gadgets, skeleton completeness, horizontal constraints, CCell uniqueness,
/// alternation, accepting halting cells and the start cell).
inline Program gen_structure_program(int n, const CellAlphabet& ca,
                                     const ConstraintTables& tables) {
  using detail::cellp;
  using detail::digitp;
  using detail::heightp;
  using detail::kleaf;
  using detail::kleft;
  using detail::kright;
  using detail::mk;
  using detail::theta;

  if (n < 2) throw std::invalid_argument("address bits n must be >= 2");
  int k = ca.k();
  Program pp;
  auto& rules = pp.rules;
  auto A = [](const std::string& p, std::initializer_list<std::string> vs) {
    return Atom(p, std::vector<std::string>(vs));
  };

  // leaves and digit-path lengths
  rules.push_back(mk(A("g_leaf", {"x"}), {A("label_bot", {"x"})}));
  rules.push_back(mk(A("g_d0", {"x"}), {A("label_d0", {"x"})}));
  rules.push_back(mk(A("g_d1", {"x"}), {A("label_d1", {"x"})}));
  rules.push_back(mk(A("g_digit", {"x"}), {A("g_d0", {"x"})}));
  rules.push_back(mk(A("g_digit", {"x"}), {A("g_d1", {"x"})}));
  rules.push_back(mk(A(digitp(0), {"x"}), {A("g_leaf", {"x"})}));
  for (int i = 1; i <= k; ++i)
    rules.push_back(mk(A(digitp(i), {"x"}),
                       {A("g_digit", {"x"}), A("child", {"x", "y"}), A(digitp(i - 1), {"y"})}));

  // exactly one 1 on a digit path
  rules.push_back(mk(A("g_ones_lt1", {"x"}), {A("g_leaf", {"x"})}));
  rules.push_back(mk(A("g_ones_lt1", {"x"}),
                     {A("g_d0", {"x"}), A("child", {"x", "y"}), A("g_ones_lt1", {"y"})}));
  rules.push_back(mk(A("g_ones_eq1", {"x"}),
                     {A("g_d1", {"x"}), A("child", {"x", "y"}), A("g_ones_lt1", {"y"})}));
  rules.push_back(mk(A("g_ones_eq1", {"x"}),
                     {A("g_d0", {"x"}), A("child", {"x", "y"}), A("g_ones_eq1", {"y"})}));

  // gadget acceptance at p- and m-labeled roots
  rules.push_back(mk(A("g_ones_eq1", {"x"}),
                     {A("label_p", {"x"}), A("child", {"x", "y"}), A("g_ones_eq1", {"y"})}));
  rules.push_back(mk(A(digitp(2), {"x"}),
                     {A("label_p", {"x"}), A("child", {"x", "y"}), A(digitp(2), {"y"})}));
  rules.push_back(mk(A("g_p", {"x"}),
                     {A("label_p", {"x"}), A("g_ones_eq1", {"x"}), A(digitp(2), {"x"})}));
  rules.push_back(mk(A("g_ones_eq1", {"x"}),
                     {A("label_m", {"x"}), A("child", {"x", "y"}), A("g_ones_eq1", {"y"})}));
  rules.push_back(mk(A(digitp(k), {"x"}),
                     {A("label_m", {"x"}), A("child", {"x", "y"}), A(digitp(k), {"y"})}));
  rules.push_back(mk(A("g_m", {"x"}),
                     {A("label_m", {"x"}), A("g_ones_eq1", {"x"}), A(digitp(k), {"x"})}));

  // every accepted m gadget knows its encoded cell number
  for (int i = 1; i <= k; ++i) {
    MacroAtomSet body;
    body.add("g_m", {"x"});
    body.child_chain("x", "x_i", i);
    body.add("g_d1", {"x_i"});
    rules.push_back(mk(A(cellp(i), {"x"}), body.atoms));
  }

  // skeleton leaves and left/right marks
  rules.push_back(mk(A("g_sleaf", {"x"}),
                     {A("label_sleaf", {"x"}), A("child", {"x", "x_m"}), A("g_m", {"x_m"}),
                      A("child", {"x", "x_p"}), A("g_p", {"x_p"})}));
  for (const char* lab : {"label_sleaf", "label_s"}) {
    rules.push_back(mk(A("g_sl", {"x"}),
                       {A(lab, {"x"}), A("child", {"x", "x_p"}), A("g_p", {"x_p"}),
                        A("child", {"x_p", "x_n"}), A("g_d0", {"x_n"})}));
    rules.push_back(mk(A("g_sr", {"x"}),
                       {A(lab, {"x"}), A("child", {"x", "x_p"}), A("g_p", {"x_p"}),
                        A("child", {"x_p", "x_n"}), A("g_d1", {"x_n"})}));
  }

  // complete navigable skeleton
  rules.push_back(mk(A("g_s", {"x"}), {A("g_sleaf", {"x"})}));
  for (const char* own : {"g_sl", "g_sr"})
    rules.push_back(mk(A("g_s", {"x"}),
                       {A(own, {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A("g_s", {"x_l"}), A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                        A("g_s", {"x_r"})}));

  // height counting up to n-1
  rules.push_back(mk(A(heightp(0), {"x"}), {A("g_sleaf", {"x"})}));
  for (int h = 1; h <= n - 1; ++h)
    rules.push_back(mk(A(heightp(h), {"x"}),
                       {A("child", {"x", "x_l"}), A("g_sl", {"x_l"}), A(heightp(h - 1), {"x_l"}),
                        A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                        A(heightp(h - 1), {"x_r"})}));

  rules.push_back(mk(A("g_rnav", {"x"}),
                     {A("label_r", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                      A("g_s", {"x_l"}), A(heightp(n - 1), {"x_l"}), A("child", {"x", "x_r"}),
                      A("g_sr", {"x_r"}), A("g_s", {"x_r"}), A(heightp(n - 1), {"x_r"})}));

  // leftmost/rightmost cell propagation
  for (int i = 1; i <= k; ++i)
    rules.push_back(mk(A(kleaf(i), {"x"}),
                       {A("g_sleaf", {"x"}), A("child", {"x", "y"}), A(cellp(i), {"y"})}));
  for (int i = 1; i <= k; ++i) {
    rules.push_back(mk(A(kleft(i), {"x"}), {A("g_s", {"x"}), A(kleaf(i), {"x"})}));
    rules.push_back(mk(A(kright(i), {"x"}), {A("g_s", {"x"}), A(kleaf(i), {"x"})}));
    rules.push_back(mk(A(kleft(i), {"x"}),
                       {A("g_s", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A(kleft(i), {"x_l"})}));
    rules.push_back(mk(A(kright(i), {"x"}),
                       {A("g_s", {"x"}), A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                        A(kright(i), {"x_r"})}));
    // lift the leftmost cell onto the r node; the halting-cell rules read it there
    rules.push_back(mk(A(kleft(i), {"x"}),
                       {A("label_r", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A(kleft(i), {"x_l"})}));
  }

  // horizontal constraints: per allowed pair, junctions above leaves, above
  // inner nodes, and at the r node
  for (const auto& [i, j] : tables.H) {
    rules.push_back(mk(A("g_hok", {"x"}),
                       {A("g_s", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A("g_sleaf", {"x_l"}), A(kright(i), {"x_l"}), A("child", {"x", "x_r"}),
                        A("g_sr", {"x_r"}), A("g_sleaf", {"x_r"}), A(kleft(j), {"x_r"})}));
    rules.push_back(mk(A("g_hok", {"x"}),
                       {A("g_s", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A("g_hok", {"x_l"}), A(kright(i), {"x_l"}), A("child", {"x", "x_r"}),
                        A("g_sr", {"x_r"}), A("g_hok", {"x_r"}), A(kleft(j), {"x_r"})}));
    rules.push_back(mk(A("g_hok", {"x"}),
                       {A("label_r", {"x"}), A("child", {"x", "x_l"}), A("g_sl", {"x_l"}),
                        A("g_hok", {"x_l"}), A(kright(i), {"x_l"}), A("child", {"x", "x_r"}),
                        A("g_sr", {"x_r"}), A("g_hok", {"x_r"}), A(kleft(j), {"x_r"})}));
  }

  // exactly one CCell per configuration tree
  auto ccells = ca.ccell_indices();
  for (int i : ccells) rules.push_back(mk(A(theta(i), {"x"}), {A(kleaf(i), {"x"})}));
  for (int j = 1; j <= k; ++j)
    if (!ca.is_ccell(j))
      rules.push_back(mk(A("g_nontheta", {"x"}), {A(kleaf(j), {"x"})}));
  for (int i : ccells) {
    rules.push_back(mk(A(theta(i), {"x"}),
                       {A("child", {"x", "x_l"}), A("g_sl", {"x_l"}), A(theta(i), {"x_l"}),
                        A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                        A("g_nontheta", {"x_r"})}));
    rules.push_back(mk(A(theta(i), {"x"}),
                       {A("child", {"x", "x_l"}), A("g_sl", {"x_l"}), A("g_nontheta", {"x_l"}),
                        A("child", {"x", "x_r"}), A("g_sr", {"x_r"}), A(theta(i), {"x_r"})}));
  }
  rules.push_back(mk(A("g_nontheta", {"x"}),
                     {A("child", {"x", "x_l"}), A("g_sl", {"x_l"}), A("g_nontheta", {"x_l"}),
                      A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                      A("g_nontheta", {"x_r"})}));

  // configuration-tree roots satisfying all per-tree conditions
  for (int i : ccells)
    rules.push_back(mk(A("g_r", {"x"}),
                       {A("label_r", {"x"}), A("g_hok", {"x"}), A("g_rnav", {"x"}),
                        A(theta(i), {"x"})}));

  // halting configuration nodes: the accepting head cell is the leftmost cell
  for (int i : ccells) {
    if (!ca.is_accepting_ccell(i)) continue;
    for (auto [lab, pred] : std::initializer_list<std::pair<const char*, const char*>>{
             {"label_haltA", "g_haltcta"},
             {"label_haltEL", "g_haltctel"},
             {"label_haltER", "g_haltcter"}})
      rules.push_back(mk(A(pred, {"x"}),
                         {A(lab, {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                          A(theta(i), {"x_r"}), A(kleft(i), {"x_r"})}));
  }

  // the head cell's current state classifies the configuration
  for (int i : ccells)
    if (ca.is_exist_ccell(i))
      rules.push_back(mk(A("g_state_ex", {"x"}), {A("g_r", {"x"}), A(theta(i), {"x"})}));
  for (int i : ccells)
    if (ca.is_univ_ccell(i))
      rules.push_back(mk(A("g_state_univ", {"x"}), {A("g_r", {"x"}), A(theta(i), {"x"})}));

  // configuration nodes, bottom-up
  rules.push_back(mk(A("g_ctel", {"x"}), {A("g_haltctel", {"x"})}));
  rules.push_back(mk(A("g_ctel", {"x"}),
                     {A("label_ctEL", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                      A("g_state_ex", {"x_r"}), A("child", {"x", "x_a"}), A("g_cta", {"x_a"})}));
  rules.push_back(mk(A("g_cter", {"x"}), {A("g_haltcter", {"x"})}));
  rules.push_back(mk(A("g_cter", {"x"}),
                     {A("label_ctER", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                      A("g_state_ex", {"x_r"}), A("child", {"x", "x_a"}), A("g_cta", {"x_a"})}));
  rules.push_back(mk(A("g_cta", {"x"}), {A("g_haltcta", {"x"})}));
  // universal nodes need two successor configurations with different CCells
  for (int i : ccells)
    for (int j : ccells) {
      if (i == j) continue;
      rules.push_back(mk(A("g_cta", {"x"}),
                         {A("label_ctA", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                          A("g_state_univ", {"x_r"}), A("child", {"x", "x_1"}),
                          A("g_ctel", {"x_1"}), A("child", {"x_1", "x_1r"}), A("g_r", {"x_1r"}),
                          A(theta(i), {"x_1r"}), A("child", {"x", "x_2"}), A("g_cter", {"x_2"}),
                          A("child", {"x_2", "x_2r"}), A("g_r", {"x_2r"}),
                          A(theta(j), {"x_2r"})}));
    }

  // topmost configuration carries the start cell
  int start = ca.start_cell_index();
  rules.push_back(mk(A("g_startct", {"x"}),
                     {A("g_cta", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                      A(theta(start), {"x_r"})}));
  rules.push_back(mk(A("g_startct", {"x"}),
                     {A("g_ctel", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                      A(theta(start), {"x_r"})}));

  rules.push_back(mk(A("g_structure", {"x_top"}),
                     {A("label_top", {"x_top"}), A("child", {"x_top", "x_ct"}),
                      A("g_startct", {"x_ct"})}));

  return pp;
}

/// Closed-form rule count of gen_structure_program.
inline size_t structure_rule_count(int n, const CellAlphabet& ca,
                                   const ConstraintTables& tables) {
  size_t k = ca.k();
  size_t cc = ca.ccell_indices().size();
  size_t acc = 0, ex = 0, un = 0;
  for (int i : ca.ccell_indices()) {
    if (ca.is_accepting_ccell(i)) ++acc;
    if (ca.is_exist_ccell(i)) ++ex;
    if (ca.is_univ_ccell(i)) ++un;
  }
  return 1 + 2 + 2 + 1 + k      // leaf, digit wrappers, digit path
         + 4 + 6                // one-counting, gadget acceptance
         + k                    // cell numbers
         + 1 + 4 + 3            // sleaf, sl/sr, s
         + static_cast<size_t>(n) + 1  // heights, rnav
         + k + 5 * k            // kleaf + left/right families
         + 3 * tables.H.size()  // horizontal junctions
         + cc + (k - cc) + 2 * cc + 1  // theta/nontheta
         + cc                   // g_r
         + 3 * acc              // halting nodes
         + ex + un              // state classes
         + 5 + cc * (cc - 1)    // ct nodes
         + 2 + 1;               // startct, structure
}

/// Generated hardness instance: the emptiness query or the containment pair,
/// together with the alphabet and parameters.
struct ReductionInstance {
  int address_bits;
  CellAlphabet cells;
  ConstraintTables tables;
  RankedAlphabet sigma_ranked;
  Alphabet sigma_unranked;
  Schema schema;  // {child, desc} plus labels
  Query q1;                  // emptiness query, or the containment Q1
  std::optional<Query> q2;   // containment only
};

namespace detail {

inline void append_delta_rules(Program& pp, int n, const ConstraintTables& tables) {
  using detail::cellp;
  auto A = [](const std::string& p, std::initializer_list<std::string> vs) {
    return Atom(p, std::vector<std::string>(vs));
  };
  // umbrella predicates for configuration nodes
  for (const char* src : {"g_cta", "g_ctel", "g_cter"})
    pp.rules.push_back(mk(A("g_ct", {"x"}), {A(src, {"x"})}));
  for (const char* src : {"g_haltcta", "g_haltctel", "g_haltcter"})
    pp.rules.push_back(mk(A("g_haltct", {"x"}), {A(src, {"x"})}));

  // one rule per allowed vertical pair, matching the same cell of successive
  // configurations through the navigation gadgets
  for (const auto& [i, j] : tables.V) {
    MacroAtomSet m;
    same_cell_atoms(m, n, "x_s1", "x_s2");
    m.add("child", {"x_s1", "x_m1"});
    m.add("g_m", {"x_m1"});
    m.add(cellp(i), {"x_m1"});
    m.add("child", {"x_s2", "x_m2"});
    m.add("g_m", {"x_m2"});
    m.add(cellp(j), {"x_m2"});
    pp.rules.push_back(mk(A("g_delta", {"x_s2"}), m.atoms));
  }

  pp.rules.push_back(mk(A("g_delta", {"x"}),
                        {A("child", {"x", "x_l"}), A("g_sl", {"x_l"}), A("g_delta", {"x_l"}),
                         A("child", {"x", "x_r"}), A("g_sr", {"x_r"}),
                         A("g_delta", {"x_r"})}));
  pp.rules.push_back(mk(A("g_delta", {"x"}),
                        {A("g_ct", {"x"}), A("child", {"x", "x_r"}), A("g_r", {"x_r"}),
                         A("g_delta", {"x_r"})}));

  // suffixes of valid computations
  pp.rules.push_back(mk(A("g_acc", {"x"}), {A("g_haltct", {"x"})}));
  for (const char* src : {"g_ctel", "g_cter"})
    pp.rules.push_back(mk(A("g_acc", {"x"}),
                          {A(src, {"x"}), A("child", {"x", "x_a"}), A("g_cta", {"x_a"}),
                           A("g_acc", {"x_a"}), A("g_delta", {"x_a"})}));
  pp.rules.push_back(mk(A("g_acc", {"x"}),
                        {A("g_cta", {"x"}), A("child", {"x", "x_1"}), A("g_ctel", {"x_1"}),
                         A("g_acc", {"x_1"}), A("g_delta", {"x_1"}), A("child", {"x", "x_2"}),
                         A("g_cter", {"x_2"}), A("g_acc", {"x_2"}), A("g_delta", {"x_2"})}));

  pp.rules.push_back(mk(A("g_ans", {"x"}),
                        {A("g_structure", {"x"}), A("child", {"x", "x_ct"}),
                         A("g_acc", {"x_ct"})}));
}

}  // namespace detail

inline size_t emptiness_rule_count(int n, const CellAlphabet& ca,
                                   const ConstraintTables& tables) {
  return structure_rule_count(n, ca, tables) + 6 + tables.V.size() + 2 + 4 + 1;
}

/// Emptiness instance: Q = (PP, g_ans) over the ranked alphabet; for any tree
/// T, the Boolean answer is Yes iff T is a valid encoded accepting
/// computation tree of the machine.
inline ReductionInstance gen_emptiness_query(const Atm& atm, int n) {
  if (!is_normalized(atm)) throw std::invalid_argument("machine is not normalized");
  if (n < 2) throw std::invalid_argument("address bits n must be >= 2");
  ReductionInstance inst;
  inst.address_bits = n;
  inst.cells = cell_alphabet(atm);
  inst.tables = constraint_tables(inst.cells);
  inst.sigma_ranked = sigma_prime();
  inst.sigma_unranked = sigma_ur();
  inst.schema = Schema::tau_u_desc();

  Program pp = gen_structure_program(n, inst.cells, inst.tables);
  detail::append_delta_rules(pp, n, inst.tables);
  if (pp.rules.size() != emptiness_rule_count(n, inst.cells, inst.tables))
    throw std::runtime_error("emptiness rule count mismatch");
  inst.q1 = Query{std::move(pp), "g_ans"};
  return inst;
}

namespace detail {

inline void label_exclusion(Program& pp, const Alphabet& sigma, const std::string& parent_label,
                            const std::set<std::string>& allowed) {
  auto A = [](const std::string& p, std::initializer_list<std::string> vs) {
    return Atom(p, std::vector<std::string>(vs));
  };
  for (const auto& sym : sigma.symbols) {
    if (allowed.count(sym)) continue;
    pp.rules.push_back(mk(A("g_reject", {"x"}),
                          {A(label_pred(parent_label), {"x"}), A("child", {"x", "x_1"}),
                           A(label_pred(sym), {"x_1"})}));
  }
}

}  // namespace detail

inline size_t containment_q2_rule_count(int n, const CellAlphabet& ca,
                                        const ConstraintTables& tables) {
  size_t k = ca.k();
  size_t sigma = sigma_ur().symbols.size();
  size_t exclusions = (sigma - 3)        // under top
                      + 2 * (sigma - 3)  // under ctEL/ctER
                      + (sigma - 5)      // under ctA
                      + 3 * (sigma - 1)  // under halting nodes
                      + (sigma - 1)      // under r
                      + (sigma - 3)      // under s
                      + (sigma - 2)      // under sleaf
                      + 2 * (sigma - 2)  // under p/m
                      + 2 * (sigma - 3); // under digits
  return emptiness_rule_count(n, ca, tables)
         + 1                       // propagation
         + 1                       // non-root top
         + exclusions
         + 1                       // bot with a child
         + 4 + (k + 2)             // gadget lengths
         + static_cast<size_t>(n)  // configuration-tree height
         + 2 + k                   // sibling gadget conflicts
         + 6 * k * (k - 1);        // EquiCell conflicts
}

/// Containment pair: Q1 is the emptiness query over the unranked alphabet and
/// Q2 = (PP2, g_reject) detects every deviation from the ranked shape. Q1 is
/// not contained in Q2 iff the machine accepts the empty word.
inline ReductionInstance gen_containment_pair(const Atm& atm, int n) {
  using detail::cellp;
  using detail::mk;

  ReductionInstance inst = gen_emptiness_query(atm, n);
  int k = inst.cells.k();
  const Alphabet sigma = inst.sigma_unranked;
  auto A = [](const std::string& p, std::initializer_list<std::string> vs) {
    return Atom(p, std::vector<std::string>(vs));
  };

  Program pp2 = inst.q1.program;  // PP2 starts from all rules of PP
  auto& rules = pp2.rules;

  // any detected violation travels to the root
  rules.push_back(mk(A("g_reject", {"x"}),
                     {A("child", {"x", "x_1"}), A("g_reject", {"x_1"})}));

  // (1) a non-root node labeled top
  rules.push_back(mk(A("g_reject", {"x"}),
                     {A("child", {"x", "x_1"}), A("label_top", {"x_1"})}));

  // (2)-(10) label exclusions along the intended shape
  detail::label_exclusion(pp2, sigma, "top", {"ctA", "ctEL", "ctER"});
  detail::label_exclusion(pp2, sigma, "ctEL", {"r", "ctA", "haltA"});
  detail::label_exclusion(pp2, sigma, "ctER", {"r", "ctA", "haltA"});
  detail::label_exclusion(pp2, sigma, "ctA", {"r", "ctEL", "ctER", "haltEL", "haltER"});
  detail::label_exclusion(pp2, sigma, "haltA", {"r"});
  detail::label_exclusion(pp2, sigma, "haltEL", {"r"});
  detail::label_exclusion(pp2, sigma, "haltER", {"r"});
  detail::label_exclusion(pp2, sigma, "r", {"s"});
  detail::label_exclusion(pp2, sigma, "s", {"p", "s", "sleaf"});
  detail::label_exclusion(pp2, sigma, "sleaf", {"p", "m"});
  detail::label_exclusion(pp2, sigma, "p", {"d0", "d1"});
  detail::label_exclusion(pp2, sigma, "m", {"d0", "d1"});
  detail::label_exclusion(pp2, sigma, "d0", {"d0", "d1", "bot"});
  detail::label_exclusion(pp2, sigma, "d1", {"d0", "d1", "bot"});

  // (11) bot nodes are leaves
  rules.push_back(mk(A("g_reject", {"x"}),
                     {A("label_bot", {"x"}), A("child", {"x", "x_1"})}));

  // (12) gadget paths have exact lengths
  auto dist_rule = [&](const std::string& root_label, int dist, const std::string& leaf_label) {
    MacroAtomSet m;
    m.add(label_pred(root_label), {"x"});
    m.child_chain("x", "x_1", dist);
    m.add(label_pred(leaf_label), {"x_1"});
    rules.push_back(mk(A("g_reject", {"x"}), m.atoms));
  };
  dist_rule("p", 1, "bot");
  dist_rule("p", 2, "bot");
  dist_rule("p", 3, "d0");
  dist_rule("p", 3, "d1");
  for (int i = 1; i <= k; ++i) dist_rule("m", i, "bot");
  dist_rule("m", k + 1, "d0");
  dist_rule("m", k + 1, "d1");

  // (13) configuration trees have height exactly n
  for (int i = 1; i <= n - 1; ++i) dist_rule("r", i, "sleaf");
  dist_rule("r", n, "s");

  // (14a) sibling gadgets announcing conflicting digits
  auto gadget_conflict = [&](const std::string& gadget_label, int dist) {
    MacroAtomSet m;
    m.add("child", {"x_s", "x_p1"});
    m.add("child", {"x_s", "x_p2"});
    m.add(label_pred(gadget_label), {"x_p1"});
    m.add(label_pred(gadget_label), {"x_p2"});
    m.child_chain("x_p1", "x_1", dist);
    m.add("label_d1", {"x_1"});
    m.child_chain("x_p2", "x_0", dist);
    m.add("label_d0", {"x_0"});
    rules.push_back(mk(A("g_reject", {"x_s"}), m.atoms));
  };
  gadget_conflict("p", 1);
  gadget_conflict("p", 2);
  for (int i = 1; i <= k; ++i) gadget_conflict("m", i);

  // (14b) two configurations in the same role encoding different cells at the
  // same address
  for (const char* type : {"g_cta", "g_haltcta", "g_ctel", "g_haltctel", "g_cter",
                           "g_haltcter"})
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) {
        if (i == j) continue;
        MacroAtomSet m;
        m.add(type, {"x_ct1"});
        m.add(type, {"x_ct2"});
        m.child_chain("x_ct1", "x_s1", n + 1);
        m.child_chain("x_ct2", "x_s2", n + 1);
        detail::equi_cell_atoms(m, n, "x_s1", "x_s2");
        m.add("child", {"x_s1", "x_m1"});
        m.add("g_m", {"x_m1"});
        m.add(cellp(i), {"x_m1"});
        m.add("child", {"x_s2", "x_m2"});
        m.add("g_m", {"x_m2"});
        m.add(cellp(j), {"x_m2"});
        rules.push_back(mk(A("g_reject", {"x_ct1"}), m.atoms));
      }

  if (rules.size() != containment_q2_rule_count(n, inst.cells, inst.tables))
    throw std::runtime_error("containment rule count mismatch");
  inst.q2 = Query{std::move(pp2), "g_reject"};
  return inst;
}

}  // namespace mdlog

#endif  // MDLOG_REDUCTIONS_HPP
