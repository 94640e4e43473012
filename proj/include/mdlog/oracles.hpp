#ifndef MDLOG_ORACLES_HPP
#define MDLOG_ORACLES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdlog/compilers.hpp"
#include "mdlog/engine.hpp"
#include "mdlog/trees.hpp"

namespace mdlog {

enum class VerdictStatus { HoldsUpToBound, Counterexample };

/// Result of a bounded exhaustive check. Counterexample witnesses re-verify:
/// re-running the two evaluations on the witness reproduces the violation.
struct Verdict {
  VerdictStatus status;
  std::optional<LabeledTree> witness;
  int bound;
};

namespace detail {

struct EnumKey {
  // total order used both for canonical child sorting and enumeration order
  static bool less(const std::pair<int, std::string>& a, const std::pair<int, std::string>& b) {
    return a < b;
  }
};

// All ordered trees with exactly n nodes, as terms. Memoized per (alphabet,
// ranked filter) inside TreeEnumerator.
class TermPool {
public:
  TermPool(const Alphabet& alphabet, TreeMode mode, std::optional<RankedAlphabet> ranked)
      : alphabet_(alphabet), mode_(mode), ranked_(std::move(ranked)) {}

  const std::vector<Term>& of_size(int n) {
    while (static_cast<int>(by_size_.size()) <= n) grow();
    return by_size_[n];
  }

private:
  void grow() {
    int n = static_cast<int>(by_size_.size());
    std::vector<Term> out;
    if (n >= 1) {
      for (const auto& sym : alphabet_.symbols) {
        std::optional<int> want_arity;
        if (ranked_) {
          want_arity = ranked_->arity(sym);
          if (!want_arity) continue;
        }
        std::vector<std::vector<Term>> kid_lists;
        if (mode_ == TreeMode::Ordered)
          kid_lists = ordered_child_lists(n - 1, want_arity);
        else
          kid_lists = canonical_child_lists(n - 1, want_arity);
        for (auto& kids : kid_lists) out.emplace_back(sym, std::move(kids));
      }
      std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
        return render_tree(tree_from_term(a)) < render_tree(tree_from_term(b));
      });
    }
    by_size_.push_back(std::move(out));
  }

  // sequences of subtrees with sizes summing to total (ordered mode)
  std::vector<std::vector<Term>> ordered_child_lists(int total, std::optional<int> arity) {
    std::vector<std::vector<Term>> out;
    std::vector<Term> cur;
    auto rec = [&](auto&& self, int rest) -> void {
      if (rest == 0) {
        if (!arity || static_cast<int>(cur.size()) == *arity) out.push_back(cur);
        return;
      }
      if (arity && static_cast<int>(cur.size()) >= *arity) return;
      for (int sz = 1; sz <= rest; ++sz)
        for (const Term& t : of_size(sz)) {
          cur.push_back(t);
          self(self, rest - sz);
          cur.pop_back();
        }
    };
    rec(rec, total);
    return out;
  }

  // non-decreasing sequences w.r.t. (size, canonical text): each unordered
  // multiset of subtrees generated exactly once
  std::vector<std::vector<Term>> canonical_child_lists(int total, std::optional<int> arity) {
    std::vector<std::vector<Term>> out;
    std::vector<Term> cur;
    auto key = [](const Term& t) {
      LabeledTree lt = tree_from_term(t);
      return std::pair<int, std::string>(lt.size(), canonical_form(lt));
    };
    auto rec = [&](auto&& self, int rest, std::pair<int, std::string> min_key) -> void {
      if (rest == 0) {
        if (!arity || static_cast<int>(cur.size()) == *arity) out.push_back(cur);
        return;
      }
      if (arity && static_cast<int>(cur.size()) >= *arity) return;
      for (int sz = min_key.first; sz <= rest; ++sz)
        for (const Term& t : of_size(sz)) {
          auto k = key(t);
          if (EnumKey::less(k, min_key)) continue;
          cur.push_back(t);
          self(self, rest - sz, k);
          cur.pop_back();
        }
    };
    rec(rec, total, {1, ""});
    return out;
  }

  Alphabet alphabet_;
  TreeMode mode_;
  std::optional<RankedAlphabet> ranked_;
  std::vector<std::vector<Term>> by_size_;
};

}  // namespace detail

/// Streams every tree with at most max_nodes nodes exactly once (up to
/// unordered isomorphism in unordered mode), ordered by node count and then
/// by canonical text. A ranked alphabet restricts node arities.
class TreeEnumerator {
public:
  TreeEnumerator(const Alphabet& alphabet, int max_nodes, TreeMode mode,
                 std::optional<RankedAlphabet> ranked = std::nullopt)
      : pool_(alphabet, mode, std::move(ranked)), max_nodes_(max_nodes) {
    if (max_nodes < 1) throw std::invalid_argument("max_nodes must be >= 1");
  }

  std::optional<LabeledTree> next() {
    while (size_ <= max_nodes_) {
      const auto& batch = pool_.of_size(size_);
      if (index_ < batch.size()) return tree_from_term(batch[index_++]);
      ++size_;
      index_ = 0;
    }
    return std::nullopt;
  }

private:
  detail::TermPool pool_;
  int max_nodes_;
  int size_ = 1;
  size_t index_ = 0;
};

/// Convenience: all trees with exactly n nodes.
inline std::vector<LabeledTree> trees_of_size(const Alphabet& alphabet, int n, TreeMode mode,
                                              std::optional<RankedAlphabet> ranked = std::nullopt) {
  detail::TermPool pool(alphabet, mode, std::move(ranked));
  std::vector<LabeledTree> out;
  for (const Term& t : pool.of_size(n)) out.push_back(tree_from_term(t));
  return out;
}

/// Bounded surrogate of the query containment problem: searches all trees up
/// to max_nodes for one where q1 says Yes and q2 says No.
inline Verdict check_containment_bounded(const Query& q1, const Query& q2,
                                         const Alphabet& alphabet, const Schema& schema,
                                         TreeMode mode, int max_nodes,
                                         std::optional<RankedAlphabet> ranked = std::nullopt) {
  for (const Query* q : {&q1, &q2}) {
    auto diags = validate(*q, schema);
    if (!diags.empty())
      throw std::invalid_argument("query does not validate: " + diags.front().message);
  }
  TreeEnumerator en(alphabet, max_nodes, mode, std::move(ranked));
  while (auto t = en.next()) {
    if (eval_boolean(q1, *t, schema, mode) && !eval_boolean(q2, *t, schema, mode))
      return {VerdictStatus::Counterexample, *t, max_nodes};
  }
  return {VerdictStatus::HoldsUpToBound, std::nullopt, max_nodes};
}

/// Bounded emptiness: searches for a tree the Boolean query accepts.
inline Verdict check_emptiness_bounded(const Query& q, const Alphabet& alphabet,
                                       const Schema& schema, TreeMode mode, int max_nodes,
                                       std::optional<RankedAlphabet> ranked = std::nullopt) {
  auto diags = validate(q, schema);
  if (!diags.empty())
    throw std::invalid_argument("query does not validate: " + diags.front().message);
  TreeEnumerator en(alphabet, max_nodes, mode, std::move(ranked));
  while (auto t = en.next()) {
    if (eval_boolean(q, *t, schema, mode))
      return {VerdictStatus::Counterexample, *t, max_nodes};
  }
  return {VerdictStatus::HoldsUpToBound, std::nullopt, max_nodes};
}

/// CQ satisfaction by exhaustive homomorphism search: true iff some variable
/// assignment into the tree's nodes satisfies every atom.
inline bool eval_cq(const Cq& cq, const LabeledTree& t) {
  FactSet facts = extract_facts(t, Schema::tau_u_desc(), TreeMode::Ordered);
  auto vars = cq.variables();
  std::map<std::string, Node> assign;
  auto ok = [&](const Atom& a) {
    if (a.args.size() == 1) return facts.has(a.pred, assign.at(a.args[0]));
    return facts.has(a.pred, assign.at(a.args[0]), assign.at(a.args[1]));
  };
  auto rec = [&](auto&& self, size_t i) -> bool {
    if (i == vars.size()) {
      for (const auto& a : cq.atoms)
        if (!ok(a)) return false;
      return true;
    }
    for (Node v = 1; v <= t.size(); ++v) {
      assign[vars[i]] = v;
      if (self(self, i + 1)) return true;
    }
    assign.erase(vars[i]);
    return false;
  };
  return rec(rec, 0);
}

}  // namespace mdlog

#endif  // MDLOG_ORACLES_HPP
