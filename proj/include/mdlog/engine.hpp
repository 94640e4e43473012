#ifndef MDLOG_ENGINE_HPP
#define MDLOG_ENGINE_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdlog/datalog.hpp"
#include "mdlog/trees.hpp"

namespace mdlog {

enum class Strategy { Naive, SemiNaive };

struct EvalStats {
  int iterations = 0;
};

namespace detail {

// Indexed snapshot of a fact set, rebuilt per round. Relations stay small at
// the scales this engine targets, so rebuilding beats incremental upkeep.
struct Store {
  struct Bin {
    std::vector<std::pair<Node, Node>> all;
    std::map<Node, std::vector<Node>> by_first;
    std::map<Node, std::vector<Node>> by_second;
  };
  std::map<std::string, std::set<Node>> unary;
  std::map<std::string, Bin> binary;

  static Store from(const FactSet& fs) {
    Store s;
    s.unary = fs.unary;
    for (const auto& [pred, tuples] : fs.binary) {
      Bin& b = s.binary[pred];
      for (const auto& [x, y] : tuples) {
        b.all.push_back({x, y});
        b.by_first[x].push_back(y);
        b.by_second[y].push_back(x);
      }
    }
    return s;
  }

  size_t size_of(const std::string& pred) const {
    if (auto it = unary.find(pred); it != unary.end()) return it->second.size();
    if (auto it = binary.find(pred); it != binary.end()) return it->second.all.size();
    return 0;
  }
};

using Bindings = std::map<std::string, Node>;

// Greedy join order: atoms with more already-bound variables first, then
// smaller relations, preserving rule order as the tie-break.
inline std::vector<size_t> plan_order(const Rule& r,
                                      const std::function<size_t(const std::string&)>& size_of,
                                      std::optional<size_t> first_atom) {
  size_t n = r.body.size();
  std::vector<size_t> order;
  std::vector<bool> used(n, false);
  std::set<std::string> bound;
  auto take = [&](size_t i) {
    order.push_back(i);
    used[i] = true;
    for (const auto& v : r.body[i].args) bound.insert(v);
  };
  if (first_atom) take(*first_atom);
  while (order.size() < n) {
    size_t best = n;
    int best_bound = -1;
    size_t best_size = 0;
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      int nb = 0;
      for (const auto& v : r.body[i].args)
        if (bound.count(v)) ++nb;
      size_t sz = size_of(r.body[i].pred);
      if (best == n || nb > best_bound || (nb == best_bound && sz < best_size)) {
        best = i;
        best_bound = nb;
        best_size = sz;
      }
    }
    take(best);
  }
  return order;
}

template <typename Emit>
void match_from(const Rule& r, const std::vector<size_t>& order, size_t pos,
                const std::function<const Store&(size_t)>& store_for, Bindings& bind,
                Emit&& emit) {
  if (pos == order.size()) {
    emit(bind);
    return;
  }
  const Atom& a = r.body[order[pos]];
  const Store& st = store_for(order[pos]);
  if (a.args.size() == 1) {
    const std::string& var = a.args[0];
    auto rel = st.unary.find(a.pred);
    auto it = bind.find(var);
    if (it != bind.end()) {
      if (rel != st.unary.end() && rel->second.count(it->second))
        match_from(r, order, pos + 1, store_for, bind, emit);
    } else if (rel != st.unary.end()) {
      for (Node v : rel->second) {
        bind[var] = v;
        match_from(r, order, pos + 1, store_for, bind, emit);
      }
      bind.erase(var);
    }
    return;
  }
  if (a.args.size() != 2) throw std::runtime_error("atom arity > 2 in engine: " + a.pred);
  auto rel = st.binary.find(a.pred);
  if (rel == st.binary.end()) return;
  const Store::Bin& b = rel->second;
  const std::string& vx = a.args[0];
  const std::string& vy = a.args[1];
  auto ix = bind.find(vx);
  auto iy = bind.find(vy);
  bool bx = ix != bind.end();
  bool by = iy != bind.end();
  if (bx && by) {
    auto f = b.by_first.find(ix->second);
    if (f != b.by_first.end())
      for (Node y : f->second)
        if (y == iy->second) {
          match_from(r, order, pos + 1, store_for, bind, emit);
          break;
        }
  } else if (bx) {
    auto f = b.by_first.find(ix->second);
    if (f != b.by_first.end()) {
      if (vx == vy) {
        // same variable twice, already bound: need (v,v)
        for (Node y : f->second)
          if (y == ix->second) {
            match_from(r, order, pos + 1, store_for, bind, emit);
            break;
          }
      } else {
        for (Node y : f->second) {
          bind[vy] = y;
          match_from(r, order, pos + 1, store_for, bind, emit);
        }
        bind.erase(vy);
      }
    }
  } else if (by) {
    auto f = b.by_second.find(iy->second);
    if (f != b.by_second.end()) {
      for (Node x : f->second) {
        bind[vx] = x;
        match_from(r, order, pos + 1, store_for, bind, emit);
      }
      bind.erase(vx);
    }
  } else {
    if (vx == vy) {
      for (const auto& [x, y] : b.all)
        if (x == y) {
          bind[vx] = x;
          match_from(r, order, pos + 1, store_for, bind, emit);
          bind.erase(vx);
        }
    } else {
      for (const auto& [x, y] : b.all) {
        bind[vx] = x;
        bind[vy] = y;
        match_from(r, order, pos + 1, store_for, bind, emit);
        bind.erase(vy);
        bind.erase(vx);
      }
    }
  }
}

inline void check_facts_against_program(const Program& p, const FactSet& fs) {
  auto ar = p.arities();
  for (const auto& [pred, s] : fs.unary) {
    auto it = ar.find(pred);
    if (it != ar.end() && it->second != 1)
      throw std::invalid_argument("arity mismatch for " + pred +
                                  ": facts unary, program expects " +
                                  std::to_string(it->second));
    if (fs.binary.count(pred))
      throw std::invalid_argument("predicate " + pred + " used with mixed arities in facts");
  }
  for (const auto& [pred, s] : fs.binary) {
    auto it = ar.find(pred);
    if (it != ar.end() && it->second != 2)
      throw std::invalid_argument("arity mismatch for " + pred +
                                  ": facts binary, program expects " +
                                  std::to_string(it->second));
  }
  for (const auto& r : p.rules)
    if (r.head.args.size() != 1)
      throw std::invalid_argument("non-monadic head in engine: " + r.head.pred);
}

inline int domain_size(const FactSet& fs) {
  std::set<Node> nodes;
  for (const auto& [p, s] : fs.unary) nodes.insert(s.begin(), s.end());
  for (const auto& [p, s] : fs.binary)
    for (const auto& [x, y] : s) {
      nodes.insert(x);
      nodes.insert(y);
    }
  return static_cast<int>(nodes.size());
}

}  // namespace detail

/// One application of the immediate consequence operator: the input facts
/// plus every head instance derivable by a single rule firing.
inline FactSet apply_tp(const Program& p, const FactSet& facts) {
  detail::check_facts_against_program(p, facts);
  detail::Store store = detail::Store::from(facts);
  auto store_for = std::function<const detail::Store&(size_t)>(
      [&](size_t) -> const detail::Store& { return store; });
  auto size_of = std::function<size_t(const std::string&)>(
      [&](const std::string& pred) { return store.size_of(pred); });

  FactSet out = facts;
  for (const auto& r : p.rules) {
    bool dead = false;
    for (const auto& a : r.body) dead |= store.size_of(a.pred) == 0;
    if (dead) continue;
    auto order = detail::plan_order(r, size_of, std::nullopt);
    detail::Bindings bind;
    detail::match_from(r, order, 0, store_for, bind, [&](const detail::Bindings& b) {
      auto it = b.find(r.head.args[0]);
      if (it == b.end())
        throw std::runtime_error("unbound head variable in rule for " + r.head.pred);
      out.add(r.head.pred, it->second);
    });
  }
  return out;
}

/// Least fixpoint of T_P containing the given facts. Semi-naive evaluation is
/// the default; the naive strategy is kept as an internal oracle. Iteration
/// count is capped at |idb|*N + 1 — exceeding it means an engine bug.
inline FactSet fixpoint(const Program& p, const FactSet& facts,
                        Strategy strategy = Strategy::SemiNaive,
                        EvalStats* stats = nullptr) {
  detail::check_facts_against_program(p, facts);
  int cap = static_cast<int>(p.idb().size()) * detail::domain_size(facts) + 1;
  int iterations = 0;

  if (strategy == Strategy::Naive) {
    FactSet cur = facts;
    for (;;) {
      if (iterations > cap) throw std::runtime_error("fixpoint iteration cap exceeded");
      ++iterations;
      FactSet next = apply_tp(p, cur);
      if (next == cur) break;
      cur = std::move(next);
    }
    if (stats) stats->iterations = iterations;
    return cur;
  }

  std::set<std::string> idb = p.idb();
  FactSet total = facts;
  // round 1 is a full naive application; later rounds are delta-driven
  FactSet first = apply_tp(p, total);
  ++iterations;
  FactSet delta;
  for (const auto& [pred, s] : first.unary)
    for (Node v : s)
      if (!total.has(pred, v)) delta.add(pred, v);
  total = std::move(first);

  while (delta.atom_count() > 0) {
    if (iterations > cap) throw std::runtime_error("fixpoint iteration cap exceeded");
    ++iterations;
    detail::Store total_store = detail::Store::from(total);
    detail::Store delta_store = detail::Store::from(delta);
    auto size_of = std::function<size_t(const std::string&)>(
        [&](const std::string& pred) { return total_store.size_of(pred); });

    FactSet next_delta;
    for (const auto& r : p.rules) {
      bool dead = false;
      for (const auto& a : r.body) dead |= total_store.size_of(a.pred) == 0;
      if (dead) continue;
      for (size_t di = 0; di < r.body.size(); ++di) {
        if (!idb.count(r.body[di].pred)) continue;
        if (delta_store.size_of(r.body[di].pred) == 0) continue;
        auto store_for = std::function<const detail::Store&(size_t)>(
            [&, di](size_t atom_idx) -> const detail::Store& {
              return atom_idx == di ? delta_store : total_store;
            });
        auto order = detail::plan_order(r, size_of, di);
        detail::Bindings bind;
        detail::match_from(r, order, 0, store_for, bind, [&](const detail::Bindings& b) {
          Node v = b.at(r.head.args[0]);
          if (!total.has(r.head.pred, v)) next_delta.add(r.head.pred, v);
        });
      }
    }
    for (const auto& [pred, s] : next_delta.unary)
      for (Node v : s) total.add(pred, v);
    delta = std::move(next_delta);
  }
  if (stats) stats->iterations = iterations;
  return total;
}

/// Nodes v with query_pred(v) in the fixpoint over the tree's extensional facts.
inline std::set<Node> eval_unary(const Query& q, const LabeledTree& t, const Schema& schema,
                                 TreeMode mode, Strategy strategy = Strategy::SemiNaive) {
  auto diags = validate(q, schema);
  if (!diags.empty())
    throw std::invalid_argument("query does not validate: " + diags.front().message);
  FactSet facts = extract_facts(t, schema, mode);
  FactSet fp = fixpoint(q.program, facts, strategy);
  auto it = fp.unary.find(q.query_pred);
  if (it == fp.unary.end()) return {};
  return it->second;
}

/// True iff the tree's root is in the unary result.
inline bool eval_boolean(const Query& q, const LabeledTree& t, const Schema& schema,
                         TreeMode mode, Strategy strategy = Strategy::SemiNaive) {
  auto res = eval_unary(q, t, schema, mode, strategy);
  return res.count(t.root()) != 0;
}

}  // namespace mdlog

#endif  // MDLOG_ENGINE_HPP
