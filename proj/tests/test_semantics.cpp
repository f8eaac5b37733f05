// Small-step execution, the independent big-step evaluator, and the bounded
// unary/relational validity checks.
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "rvwb/semantics.hpp"
#include "rvwb/specfile.hpp"

using namespace rvwb;
using rvwb::testing::load_fixture;
using rvwb::testing::ProgramGen;

namespace {

Store mk_store(std::initializer_list<std::pair<std::string, int64_t>> kvs) {
  Store s;
  for (const auto& [k, v] : kvs) s.vals[k] = v;
  return s;
}

} // namespace

TEST_CASE("c0 runs to completion: x counts down past zero") {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b;
  b.vars = {"x", "y"};

  // y=3: 3 -> 1 -> 0 (odd subtracts 2, even subtracts 1)
  RunResult r = run(c0, mk_store({{"x", 0}, {"y", 3}}), b);
  REQUIRE(r.complete());
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes.begin()->to_string() == "x=-1 y=3");

  // y=4: 4 -> 3 -> 1 -> -1
  r = run(c0, mk_store({{"x", 0}, {"y", 4}}), b);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes.begin()->get("x") == -1);

  // y <= 0: loop never entered
  r = run(c0, mk_store({{"x", 7}, {"y", -2}}), b);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes.begin()->get("x") == -2);
}

TEST_CASE("overlapping guards produce every branch outcome") {
  CommandPtr c = parse_program(
      "if x >= 0 -> y := 1 [] x <= 0 -> y := 2 fi");
  DomainBound b;
  b.vars = {"x", "y"};
  RunResult r = run(c, mk_store({{"x", 0}, {"y", 0}}), b);
  REQUIRE(r.complete());
  std::set<int64_t> ys;
  for (const Store& s : r.outcomes) ys.insert(s.get("y"));
  CHECK(ys == std::set<int64_t>{1, 2});
}

TEST_CASE("a divergent loop exhausts the budget") {
  CommandPtr c = parse_program("do x = x -> skip od");
  DomainBound b;
  b.vars = {"x"};
  b.step_budget = 1000;
  RunResult r = run(c, mk_store({{"x", 0}}), b);
  CHECK_FALSE(r.complete());
  CHECK(r.outcomes.empty());
}

TEST_CASE("finished atoms are the only stuck configurations") {
  // A partial if is stuck when no guard is enabled.
  CommandPtr c = parse_program("if x > 0 -> skip fi");
  Config cfg{c, mk_store({{"x", -1}})};
  CHECK_FALSE(cfg.terminal());
  CHECK(step(cfg).empty());
}

TEST_CASE("big-step evaluator agrees with small-step run") {
  ProgramGen gen(11, {"x", "y", "z"});
  DomainBound b;
  b.vars = {"x", "y", "z"};
  b.lo = -2;
  b.hi = 2;
  b.step_budget = 20000;
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(2, next);
    for (const Store& s : b.enumerate()) {
      RunResult a = run(c, s, b);
      RunResult d = denote_bigstep(c, s, b);
      if (!a.complete() || !d.complete()) continue;
      CHECK(a.outcomes == d.outcomes);
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("check_unary validates the c0 postcondition") {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = -4;
  b.hi = 6;
  Verdict v = check_unary(c0, sf_true(),
                          parse_store_formula("x <= 0"), b);
  CHECK(v.valid());

  // A too-strong postcondition gets a counterexample.
  Verdict bad = check_unary(c0, sf_true(),
                            parse_store_formula("x = 0"), b);
  REQUIRE(bad.status == Verdict::Status::Counterexample);
  // odd y ends at -1
  CHECK_FALSE(bad.cex.empty());
}

TEST_CASE("check_rel validates the lockstep self-comparison") {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = -2;
  b.hi = 4;
  Verdict v = check_rel(c0, c0, parse_rel_formula("eq(y, y)"),
                        parse_rel_formula("eq(x, x)"), b);
  CHECK(v.valid());

  Verdict bad = check_rel(c0, c0, rf_true(),
                          parse_rel_formula("eq(x, x)"), b);
  CHECK(bad.status == Verdict::Status::Counterexample);
}
