#include <catch2/catch_amalgamated.hpp>

#include "mdlog/compilers.hpp"
#include "mdlog/engine.hpp"
#include "mdlog/oracles.hpp"
#include "support.hpp"

using namespace mdlog;

TEST_CASE("parse_cq") {
  auto cq = parse_cq("ans :- label_a(x).");
  REQUIRE(cq.atoms.size() == 1);
  auto cq3 = parse_cq("ans :- child(x,y), desc(y,z), label_b(z).");
  REQUIRE(cq3.atoms.size() == 3);
  REQUIRE(cq3.variables() == std::vector<std::string>{"x", "y", "z"});
  REQUIRE_THROWS(parse_cq("ans :- fc(x,y)."));
  REQUIRE_THROWS(parse_cq("ans :- child(x)."));
}

TEST_CASE("translate_cq emits exactly two rules and hits on subtrees") {
  auto cq = parse_cq("ans :- label_a(x).");
  auto q = translate_cq(cq);
  REQUIRE(q.program.rules.size() == 2);
  REQUIRE(q.query_pred == "P");
  REQUIRE(validate(q, Schema::tau_u_desc()).empty());

  // a hit below the root propagates up: true on b(a)
  REQUIRE(eval_boolean(q, parse_tree("b(a)"), Schema::tau_u_desc(), TreeMode::Ordered));
  REQUIRE(!eval_boolean(q, parse_tree("b(b)"), Schema::tau_u_desc(), TreeMode::Ordered));
}

TEST_CASE("translated query agrees with the homomorphism oracle") {
  testsupport::Rng rng(808);
  Alphabet ab({"a", "b"});
  for (int trial = 0; trial < 20; ++trial) {
    auto cq = testsupport::random_cq(rng, {"a", "b"}, 4, 3);
    auto q = translate_cq(cq);
    TreeEnumerator en(ab, 5, TreeMode::Ordered);
    while (auto t = en.next())
      REQUIRE(eval_boolean(q, *t, Schema::tau_u_desc(), TreeMode::Ordered) == eval_cq(cq, *t));
  }
}

TEST_CASE("variable choice does not change the Boolean result") {
  testsupport::Rng rng(909);
  Alphabet ab({"a", "b"});
  for (int trial = 0; trial < 10; ++trial) {
    auto cq = testsupport::random_cq(rng, {"a", "b"}, 3, 3);
    auto vars = cq.variables();
    TreeEnumerator en(ab, 4, TreeMode::Ordered);
    while (auto t = en.next()) {
      bool base = eval_cq(cq, *t);
      for (const auto& v : vars) {
        auto q = translate_cq(cq, v);
        REQUIRE(eval_boolean(q, *t, Schema::tau_u_desc(), TreeMode::Ordered) == base);
      }
    }
  }
}

TEST_CASE("compile_nta output validates and counts rules exactly") {
  testsupport::Rng rng(111);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsupport::random_nta(rng, {"a", "b"}, 3);
    auto q = compile_nta(a);
    REQUIRE(q.program.rules.size() == compile_nta_rule_count(a));
    REQUIRE(validate(q, Schema::tau_gk_child()).empty());
  }
}

TEST_CASE("compile_nta: empty F compiles to the constant-false query") {
  auto a = parse_nta(
      "alphabet a\nstates s0\nrule s0 a L0\nnfa L0\nstates q0\ninitial q0\naccepting "
      "q0\ntrans q0 s0 q0\nend\n");
  auto q = compile_nta(a);
  Alphabet ab({"a"});
  TreeEnumerator en(ab, 6, TreeMode::Ordered);
  while (auto t = en.next())
    REQUIRE(!eval_boolean(q, *t, Schema::tau_gk_child(), TreeMode::Ordered));
}

TEST_CASE("compile_nta: universal one-state NTA accepts every tree") {
  auto a = parse_nta(
      "alphabet a\nstates s0\naccepting s0\nrule s0 a L0\nnfa L0\nstates q0\ninitial "
      "q0\naccepting q0\ntrans q0 s0 q0\nend\n");
  auto q = compile_nta(a);
  Alphabet ab({"a"});
  TreeEnumerator en(ab, 6, TreeMode::Ordered);
  while (auto t = en.next()) {
    REQUIRE(nta_accepts(a, *t));
    REQUIRE(eval_boolean(q, *t, Schema::tau_gk_child(), TreeMode::Ordered));
  }
}

TEST_CASE("compiled query equals direct NTA semantics on all small trees") {
  testsupport::Rng rng(222);
  Alphabet ab({"a", "b"});
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsupport::random_nta(rng, {"a", "b"}, 3);
    auto q = compile_nta(a);
    TreeEnumerator en(ab, 5, TreeMode::Ordered);
    while (auto t = en.next())
      REQUIRE(eval_boolean(q, *t, Schema::tau_gk_child(), TreeMode::Ordered) ==
              nta_accepts(a, *t));
  }
}

TEST_CASE("compiled program size is linear in the automaton size") {
  testsupport::Rng rng(333);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = testsupport::random_nta(rng, {"a", "b"}, 3);
    REQUIRE(compile_nta(a).program.rules.size() <= 3 * nta_size(a));
  }
}
