// Assertion languages, substitution semantics, control patterns, the spec
// file reader, and the bounded entailment oracle.
#include "doctest.h"
#include "helpers.hpp"
#include "rvwb/formula.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/specfile.hpp"

using namespace rvwb;
using rvwb::testing::fixture_path;

namespace {

Store mk_store(std::initializer_list<std::pair<std::string, int64_t>> kvs) {
  Store s;
  for (const auto& [k, v] : kvs) s.vals[k] = v;
  return s;
}

DomainBound small_bound() {
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = -3;
  b.hi = 3;
  return b;
}

} // namespace

TEST_CASE("store substitution evaluates under the updated store") {
  // (x > 2)[x := x + y] at {x=1,y=2} is (1+2) > 2
  StoreFormulaPtr p = subst_store(parse_store_formula("x > 2"), "x",
                                  parse_int_expr("x + y"));
  CHECK(eval_store_formula(p, mk_store({{"x", 1}, {"y", 2}})));
  CHECK_FALSE(eval_store_formula(p, mk_store({{"x", 0}, {"y", 2}})));
}

TEST_CASE("substitution agrees with store update on random points") {
  DomainBound b = small_bound();
  StoreFormulaPtr f = parse_store_formula("x mod 2 = 0 && x > y");
  IntExprPtr e = parse_int_expr("y * 2 - x");
  StoreFormulaPtr fs = subst_store(f, "x", e);
  for (const Store& s : b.enumerate())
    CHECK(eval_store_formula(fs, s) ==
          eval_store_formula(f, s.with("x", eval_int(e, s))));
}

TEST_CASE("relational formulas read their designated side") {
  RelFormulaPtr p = parse_rel_formula("lhs(x > 0) && rhs(x < 0)");
  CHECK(eval_rel_formula(p, mk_store({{"x", 1}}), mk_store({{"x", -1}})));
  CHECK_FALSE(eval_rel_formula(p, mk_store({{"x", -1}}), mk_store({{"x", 1}})));

  RelFormulaPtr q = parse_rel_formula("gt(x, x + 1)");
  CHECK(eval_rel_formula(q, mk_store({{"x", 3}}), mk_store({{"x", 1}})));
  CHECK_FALSE(eval_rel_formula(q, mk_store({{"x", 2}}), mk_store({{"x", 1}})));
}

TEST_CASE("two-sided substitution applies per side") {
  RelFormulaPtr p = subst_rel(parse_rel_formula("eq(x, x)"),
                              {{"x", parse_int_expr("x + 1")}},
                              {{"x", parse_int_expr("x - 1")}});
  CHECK(eval_rel_formula(p, mk_store({{"x", 1}}), mk_store({{"x", 3}})));
  CHECK_FALSE(eval_rel_formula(p, mk_store({{"x", 1}}), mk_store({{"x", 1}})));
}

TEST_CASE("extensional atoms test projected membership") {
  auto set = std::make_shared<StoreSet>();
  set->vars = {"x"};
  set->members.insert(mk_store({{"x", 2}}));
  StoreFormulaPtr p = sf_ext(set);
  CHECK(eval_store_formula(p, mk_store({{"x", 2}, {"y", 9}})));
  CHECK_FALSE(eval_store_formula(p, mk_store({{"x", 1}, {"y", 9}})));
}

TEST_CASE("entailment finds counterexamples and validities") {
  DomainBound b = small_bound();
  CHECK(entails(parse_store_formula("x > 1"),
                parse_store_formula("x > 0"), b)
            .valid());
  Verdict v = entails(parse_store_formula("x > 0"),
                      parse_store_formula("x > 1"), b);
  REQUIRE(v.status == Verdict::Status::Counterexample);
  CHECK(v.cex[0].left.get("x") == 1);
}

TEST_CASE("relational entailment with pinned and cross conjuncts") {
  DomainBound b = small_bound();
  CHECK(entails(parse_rel_formula("eq(x, x) && lhs(x > 0)"),
                parse_rel_formula("rhs(x > 0)"), b)
            .valid());
  CHECK(entails(parse_rel_formula("lhs(x = 2) && rhs(x = 2)"),
                parse_rel_formula("eq(x, x)"), b)
            .valid());
  Verdict v = entails(parse_rel_formula("eq(x, x)"),
                      parse_rel_formula("eq(y, y)"), b);
  CHECK(v.status == Verdict::Status::Counterexample);
}

TEST_CASE("independence checks") {
  DomainBound b = small_bound();
  CHECK(independent("y", parse_store_formula("x > 0"), b));
  CHECK_FALSE(independent("x", parse_store_formula("x > 0"), b));
  CHECK(independent_rel("y", "y", parse_rel_formula("eq(x, x)"), b));
  CHECK_FALSE(independent_rel("x", "y", parse_rel_formula("lhs(x = 0)"), b));
}

TEST_CASE("control patterns denote the union of matching clauses") {
  StateRelSpec spec;
  spec.clauses.push_back({2, std::nullopt, nullptr}); // [2|*]
  spec.clauses.push_back({4, 4, parse_rel_formula("lhs(x > 0)")});
  Store s = mk_store({{"x", 1}});
  CHECK(spec.holds(2, 9, s, s));
  CHECK(spec.holds(4, 4, s, s));
  CHECK_FALSE(spec.holds(4, 4, mk_store({{"x", 0}}), s));
  CHECK_FALSE(spec.holds(3, 3, s, s));
  CHECK(spec.mentions(2, 1));
  CHECK_FALSE(spec.mentions(3, 3));
}

TEST_CASE("pc encoding replaces control by counter tests") {
  StateRelSpec spec;
  spec.clauses.push_back({2, 3, nullptr});
  RelFormulaPtr enc = encode_pc(spec, "pc");
  Store at = mk_store({{"pc", 2}});
  Store at2 = mk_store({{"pc", 3}});
  CHECK(eval_rel_formula(enc, at, at2));
  CHECK_FALSE(eval_rel_formula(enc, at2, at));
}

TEST_CASE("spec files parse into annotations and alignment sections") {
  SpecFile unary = load_specfile(fixture_path("c0.spec"));
  CHECK_FALSE(unary.relational);
  CHECK(unary.has_annotation);
  CHECK(unary.an_u.at.size() == 6);
  CHECK(to_string(unary.post_u) == "x <= 0");

  SpecFile rel = load_specfile(fixture_path("c4c5.spec"));
  CHECK(rel.relational);
  CHECK(rel.has_annotation);
  CHECK(rel.has_align);
  CHECK(rel.an_r.at.size() == 15);
  CHECK(rel.align_j.clauses.size() == 8);
  CHECK(rel.align_l.clauses.size() == 4);
  CHECK(rel.align_r.clauses.size() == 4);
}

TEST_CASE("malformed spec files raise an error with a line number") {
  CHECK_THROWS_AS(parse_specfile("[spec]\npre = ((\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_specfile("[annotation]\noops\n"), std::runtime_error);
}
