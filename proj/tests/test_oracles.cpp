#include <catch2/catch_amalgamated.hpp>

#include "mdlog/oracles.hpp"
#include "support.hpp"

using namespace mdlog;

namespace {

// Catalan-style recurrence: ordered rooted trees with n nodes and one label.
long long ordered_count_oracle(int n) {
  std::vector<long long> c(n + 1, 0);
  c[0] = 0;
  if (n >= 1) c[1] = 1;
  for (int m = 2; m <= n; ++m) {
    // root plus an ordered forest of total size m-1
    std::vector<long long> forest(m, 0);
    forest[0] = 1;
    for (int total = 1; total < m; ++total) {
      long long sum = 0;
      for (int first = 1; first <= total; ++first) sum += c[first] * forest[total - first];
      forest[total] = sum;
    }
    c[m] = forest[m - 1];
  }
  return c[n];
}

int count_of_size(const Alphabet& ab, int n, TreeMode mode) {
  return static_cast<int>(trees_of_size(ab, n, mode).size());
}

}  // namespace

TEST_CASE("ordered 1-symbol enumeration matches the Catalan recurrence") {
  Alphabet ab({"a"});
  std::vector<int> expect = {1, 1, 2, 5, 14};
  for (int n = 1; n <= 5; ++n) {
    REQUIRE(count_of_size(ab, n, TreeMode::Ordered) == expect[n - 1]);
    REQUIRE(static_cast<long long>(expect[n - 1]) == ordered_count_oracle(n));
  }
}

TEST_CASE("unordered 1-symbol enumeration matches brute canonical dedup") {
  Alphabet ab({"a"});
  std::vector<int> expect = {1, 1, 2, 4, 9};
  for (int n = 1; n <= 5; ++n) {
    REQUIRE(count_of_size(ab, n, TreeMode::Unordered) == expect[n - 1]);
    // oracle: dedupe the ordered enumeration by canonical form
    std::set<std::string> canon;
    for (const auto& t : trees_of_size(ab, n, TreeMode::Ordered)) canon.insert(canonical_form(t));
    REQUIRE(static_cast<int>(canon.size()) == expect[n - 1]);
  }
}

TEST_CASE("unordered enumeration yields canonical representatives exactly once") {
  Alphabet ab({"a", "b"});
  for (int n = 1; n <= 5; ++n) {
    std::set<std::string> seen;
    for (const auto& t : trees_of_size(ab, n, TreeMode::Unordered))
      REQUIRE(seen.insert(canonical_form(t)).second);
    std::set<std::string> all;
    for (const auto& t : trees_of_size(ab, n, TreeMode::Ordered)) all.insert(canonical_form(t));
    REQUIRE(seen == all);
  }
}

TEST_CASE("ranked filter forces full binary shapes") {
  Alphabet ab({"a", "bot"});
  RankedAlphabet ra({{"a", 2}, {"bot", 0}});
  TreeEnumerator en(ab, 7, TreeMode::Ordered, ra);
  int count = 0;
  while (auto t = en.next()) {
    ++count;
    REQUIRE(check_ranked(*t, ra));
  }
  // full binary trees with 0..3 internal nodes: 1 + 1 + 2 + 5
  REQUIRE(count == 9);
}

TEST_CASE("random trees appear in the enumeration") {
  testsupport::Rng rng(515);
  Alphabet ab({"a", "b"});
  for (int i = 0; i < 20; ++i) {
    auto t = testsupport::random_tree(rng, ab, 5);
    bool found = false;
    TreeEnumerator en(ab, 5, TreeMode::Ordered);
    while (auto u = en.next())
      if (render_tree(*u) == render_tree(t)) {
        found = true;
        break;
      }
    REQUIRE(found);
  }
}

TEST_CASE("enumeration order: node count first, then canonical text") {
  Alphabet ab({"a", "b"});
  TreeEnumerator en(ab, 3, TreeMode::Ordered);
  int last_size = 0;
  std::string last_text;
  while (auto t = en.next()) {
    if (t->size() != last_size) {
      REQUIRE(t->size() == last_size + 1);
      last_size = t->size();
      last_text.clear();
    }
    REQUIRE(last_text < render_tree(*t));
    last_text = render_tree(*t);
  }
}

TEST_CASE("check_containment_bounded reflexive and finds witnesses") {
  Alphabet ab({"a", "b"});
  auto q = parse_program("P(x) :- label_a(x). query P.");
  auto v = check_containment_bounded(q, q, ab, Schema::tau_u(), TreeMode::Ordered, 4);
  REQUIRE(v.status == VerdictStatus::HoldsUpToBound);

  // empty-program query is never Yes
  auto qe = parse_program("query P.");
  auto v2 = check_containment_bounded(qe, q, ab, Schema::tau_u(), TreeMode::Ordered, 4);
  REQUIRE(v2.status == VerdictStatus::HoldsUpToBound);

  // label_a vs label_b has the single-node witness "a"
  auto qa = parse_program("P(x) :- label_a(x). query P.");
  auto qb = parse_program("P(x) :- label_b(x). query P.");
  auto v3 = check_containment_bounded(qa, qb, ab, Schema::tau_u(), TreeMode::Ordered, 4);
  REQUIRE(v3.status == VerdictStatus::Counterexample);
  REQUIRE(render_tree(*v3.witness) == "a");

  // witnesses re-verify
  REQUIRE(eval_boolean(qa, *v3.witness, Schema::tau_u(), TreeMode::Ordered));
  REQUIRE(!eval_boolean(qb, *v3.witness, Schema::tau_u(), TreeMode::Ordered));
}

TEST_CASE("containment counterexamples persist at larger bounds") {
  Alphabet ab({"a", "b"});
  auto qa = parse_program("P(x) :- label_a(x), child(x,y), label_b(y). query P.");
  auto qb = parse_program("P(x) :- label_b(x). query P.");
  auto v3 = check_containment_bounded(qa, qb, ab, Schema::tau_u(), TreeMode::Ordered, 2);
  REQUIRE(v3.status == VerdictStatus::Counterexample);
  for (int bound = 3; bound <= 5; ++bound) {
    auto v = check_containment_bounded(qa, qb, ab, Schema::tau_u(), TreeMode::Ordered, bound);
    REQUIRE(v.status == VerdictStatus::Counterexample);
  }
}

TEST_CASE("check_emptiness_bounded") {
  Alphabet ab({"a", "b"});
  auto qfalse = parse_program("query P.");
  auto v = check_emptiness_bounded(qfalse, ab, Schema::tau_u(), TreeMode::Ordered, 4);
  REQUIRE(v.status == VerdictStatus::HoldsUpToBound);

  auto q = parse_program("P(x) :- root(x), leaf(x). query P.");
  auto v2 = check_emptiness_bounded(q, ab, Schema::tau_u_root_leaf_desc(), TreeMode::Ordered, 4);
  REQUIRE(v2.status == VerdictStatus::Counterexample);
  REQUIRE(v2.witness->size() == 1);
}

TEST_CASE("reflexivity on random queries") {
  testsupport::Rng rng(616);
  Alphabet ab({"a", "b"});
  for (int i = 0; i < 50; ++i) {
    auto q = testsupport::random_query(rng, {"a", "b"}, 4);
    auto v = check_containment_bounded(q, q, ab, Schema::tau_u_desc(), TreeMode::Ordered, 4);
    REQUIRE(v.status == VerdictStatus::HoldsUpToBound);
  }
}

TEST_CASE("eval_cq basics") {
  REQUIRE(eval_cq(parse_cq("ans :- label_a(x)."), parse_tree("b(a)")));
  // child is irreflexive
  Alphabet ab({"a", "b"});
  TreeEnumerator en(ab, 4, TreeMode::Ordered);
  auto self_loop = parse_cq("ans :- child(x,x).");
  while (auto t = en.next()) REQUIRE(!eval_cq(self_loop, *t));
}
