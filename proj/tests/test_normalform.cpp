// Counter instrumentation, the flat dispatch normal form, guard
// classification, and the bounded equivalence theorem instances.
#include "doctest.h"
#include "helpers.hpp"
#include "rvwb/normalform.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/semantics.hpp"
#include "rvwb/structure.hpp"

using namespace rvwb;
using rvwb::testing::load_fixture;
using rvwb::testing::ProgramGen;

namespace {

DomainBound var_bound(std::vector<std::string> vars, int64_t lo, int64_t hi) {
  DomainBound b;
  b.vars = std::move(vars);
  b.lo = lo;
  b.hi = hi;
  return b;
}

} // namespace

TEST_CASE("instrumentation keeps the counter ghost") {
  CommandPtr c0 = load_fixture("c0.gcl");
  CommandPtr inst = add_pc("pc", c0);
  CHECK(ghost("pc", inst));
  // the source labels survive instrumentation
  for (Label n : labs(c0)) CHECK(labs(inst).count(n) == 1);
  // erasing pc leaves a program with the same outcomes as c0
  CommandPtr erased = erase("pc", inst);
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = -1;
  b.hi = 2;
  for (const Store& s : b.enumerate()) {
    RunResult a = run(c0, s, b);
    RunResult e = run(erased, s, b);
    REQUIRE(a.complete());
    REQUIRE(e.complete());
    CHECK(a.outcomes == e.outcomes);
  }
}

TEST_CASE("the flat form of the countdown program has 7 dispatch guards") {
  CommandPtr c0 = load_fixture("c0.gcl");
  NormalForm nf = normalize(c0, 6, "pc");
  CHECK(nf.init == 1);
  CHECK(nf.fin == 6);
  CHECK(to_string(nf.init_assign) == "pc@0 := 1");
  REQUIRE(nf.body.size() == 7);
  const char* expected[] = {
      "pc = 1 -> x@1 := y ; pc@0 := 2",
      "pc = 2 && x > 0 -> pc@0 := 3",
      "pc = 2 && !(x > 0) -> pc@0 := 6",
      "pc = 3 && x mod 2 = 0 -> pc@0 := 4",
      "pc = 3 && x mod 2 != 0 -> pc@0 := 5",
      "pc = 4 -> x@4 := x - 1 ; pc@0 := 2",
      "pc = 5 -> x@5 := x - 2 ; pc@0 := 2",
  };
  for (size_t i = 0; i < nf.body.size(); ++i) {
    std::string got = to_string(nf.body[i].guard) + " -> " +
                      to_string(nf.body[i].body);
    CHECK(got == expected[i]);
  }
}

TEST_CASE("the flat forms of the two loop variants have 11 guards each") {
  for (const char* name : {"c4.gcl", "c5.gcl"}) {
    NormalForm nf = normalize(load_fixture(name), 0, "pc");
    CHECK(nf.body.size() == 11);
    CHECK(nf.init == 1);
    CHECK(nf.fin == 0);
  }
}

TEST_CASE("guard classification recovers each dispatch case") {
  CommandPtr c0 = load_fixture("c0.gcl");
  NormalForm nf = normalize(c0, 6, "pc");
  SymEdge::Kind expected[] = {
      SymEdge::Kind::Asgn,     SymEdge::Kind::DoEnter,
      SymEdge::Kind::DoExit,   SymEdge::Kind::IfBranch,
      SymEdge::Kind::IfBranch, SymEdge::Kind::Asgn,
      SymEdge::Kind::Asgn,
  };
  Label from[] = {1, 2, 2, 3, 3, 4, 5};
  Label to[] = {2, 3, 6, 4, 5, 2, 2};
  for (size_t i = 0; i < nf.body.size(); ++i) {
    GuardClass gc = classify_guard(nf.body[i], c0, 6, "pc");
    CHECK(gc.kind == expected[i]);
    CHECK(gc.k == from[i]);
    CHECK(gc.m == to[i]);
  }
  CHECK_THROWS_AS(
      classify_guard({parse_bool_expr("x > 0"), mk_skip(1)}, c0, 6, "pc"),
      std::invalid_argument);
}

TEST_CASE("normal-form equivalence holds for the fixture programs") {
  CHECK(verify_norm_equiv(load_fixture("c0.gcl"), 6, "pc",
                          var_bound({"x", "y"}, -2, 3))
            .valid());
  CHECK(verify_norm_equiv(load_fixture("c1.gcl"), 7, "pc",
                          var_bound({"x", "y", "z"}, -1, 3))
            .valid());
}

TEST_CASE("normal-form equivalence holds on random programs") {
  ProgramGen gen(43, {"x", "y"});
  DomainBound b = var_bound({"x", "y"}, -1, 1);
  for (int i = 0; i < 15; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(2, next);
    CHECK(verify_norm_equiv(c, next, "pc", b).valid());
  }
}

TEST_CASE("a perturbed dispatch successor changes the behavior") {
  CommandPtr c0 = load_fixture("c0.gcl");
  NormalForm nf = normalize(c0, 6, "pc");
  // redirect the loop-exit case back into the dispatcher instead of fin
  GuardedList body = nf.body;
  body[2].body = mk_assign(0, "pc", int_lit(3));
  CommandPtr wrong = mk_seq(nf.init_assign, mk_do(0, body));
  DomainBound b = var_bound({"x", "y", "pc"}, -1, 2);
  b.step_budget = 5000;
  Store s;
  s.vals = {{"x", 0}, {"y", 1}, {"pc", 0}};
  CHECK(run(mk_seq(add_pc("pc", c0), mk_assign(0, "pc", int_lit(6))), s, b)
            .complete());
  CHECK_FALSE(run(wrong, s, b).complete()); // now decrements x forever
}
