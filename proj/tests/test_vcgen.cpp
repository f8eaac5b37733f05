// Verification-condition generation and discharge, unary and relational,
// and the annotation coverage condition.
#include "doctest.h"
#include "helpers.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/specfile.hpp"
#include "rvwb/vcgen.hpp"

using namespace rvwb;
using rvwb::testing::fixture_path;
using rvwb::testing::load_fixture;

namespace {

DomainBound xy_bound(int64_t lo, int64_t hi) {
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = lo;
  b.hi = hi;
  return b;
}

} // namespace

TEST_CASE("the countdown program yields its seven classic rows") {
  CommandPtr c0 = load_fixture("c0.gcl");
  SpecFile sp = load_specfile(fixture_path("c0.spec"));
  std::vector<VC> vcs = unary_vcs(c0, 6, sp.an_u);
  REQUIRE(vcs.size() == 7);
  const char* ids[] = {
      "unary:1->2", "unary:2->3", "unary:2->6", "unary:3->4",
      "unary:3->5", "unary:4->2", "unary:5->2",
  };
  for (size_t i = 0; i < 7; ++i) CHECK(vcs[i].id == ids[i]);

  // row-by-row semantic equality with the hand-written obligations
  DomainBound b = xy_bound(-4, 6);
  auto an = [&](Label n) { return sp.an_u.get(n); };
  auto sub = [&](Label n, const char* x, const char* e) {
    return subst_store(an(n), x, parse_int_expr(e));
  };
  std::pair<StoreFormulaPtr, StoreFormulaPtr> rows[] = {
      {an(1), sub(2, "x", "y")},
      {sf_and(sf_embed(parse_bool_expr("x > 0")), an(2)), an(3)},
      {sf_and(sf_not(sf_embed(parse_bool_expr("x > 0"))), an(2)), an(6)},
      {sf_and(sf_embed(parse_bool_expr("x mod 2 = 0")), an(3)), an(4)},
      {sf_and(sf_embed(parse_bool_expr("x mod 2 != 0")), an(3)), an(5)},
      {an(4), sub(2, "x", "x - 1")},
      {an(5), sub(2, "x", "x - 2")},
  };
  for (size_t i = 0; i < 7; ++i) {
    CHECK(sem_equal(vcs[i].u_ante, rows[i].first, b));
    CHECK(sem_equal(vcs[i].u_cons, rows[i].second, b));
  }
}

TEST_CASE("the seven rows discharge and a weakened annotation fails") {
  CommandPtr c0 = load_fixture("c0.gcl");
  SpecFile sp = load_specfile(fixture_path("c0.spec"));
  DomainBound b = xy_bound(-4, 6);
  CHECK(discharge(unary_vcs(c0, 6, sp.an_u), b).all_valid);

  UnaryAnnotation bad = sp.an_u;
  bad.at[6] = parse_store_formula("x = 0"); // x = -1 is also reachable
  DischargeReport rep = discharge(unary_vcs(c0, 6, bad), b);
  CHECK_FALSE(rep.all_valid);
  // exactly the do-exit row fails
  for (const DischargeEntry& e : rep.entries)
    CHECK(e.verdict.valid() == (e.vc.id != "unary:2->6"));
}

TEST_CASE("missing annotation entries denote false") {
  CommandPtr c0 = load_fixture("c0.gcl");
  UnaryAnnotation an; // empty: everything false
  std::vector<VC> vcs = unary_vcs(c0, 6, an);
  DomainBound b = xy_bound(-1, 1);
  // false => false rows all hold
  CHECK(discharge(vcs, b).all_valid);
}

TEST_CASE("lockstep relational rows: one joint row per edge pair plus exits") {
  CommandPtr c0 = load_fixture("c0.gcl");
  SpecFile sp = load_specfile(fixture_path("lockstep.spec"));
  std::vector<VC> vcs = encoded_rel_vcs(c0, c0, 6, 6, sp.align_l, sp.align_r,
                                        sp.align_j, sp.an_r, "pc");
  // same-control joint rows only: (1,1)×(1,1), (2,2)×{enter,exit}²,
  // (3,3)×(3,3)..., minus rows with literally-false annotations
  REQUIRE(!vcs.empty());
  for (const VC& vc : vcs) {
    CHECK(vc.kind == VC::Kind::JO);
    CHECK(vc.encoded);
    CHECK(vc.n == vc.n2); // lockstep never leaves the diagonal
  }
  DomainBound b = xy_bound(-2, 6);
  b.pc_domain = {1, 2, 3, 4, 5, 6};
  CHECK(discharge(vcs, b).all_valid);
}

TEST_CASE("the conditional alignment emits left-only and right-only rows") {
  CommandPtr c4 = load_fixture("c4.gcl");
  CommandPtr c5 = load_fixture("c5.gcl");
  SpecFile sp = load_specfile(fixture_path("c4c5.spec"));
  std::vector<VC> vcs = encoded_rel_vcs(c4, c5, 0, 0, sp.align_l, sp.align_r,
                                        sp.align_j, sp.an_r, "pc");
  int lo = 0, ro = 0, jo = 0;
  for (const VC& vc : vcs) {
    if (vc.kind == VC::Kind::LO) ++lo;
    if (vc.kind == VC::Kind::RO) ++ro;
    if (vc.kind == VC::Kind::JO) ++jo;
  }
  CHECK(lo > 0);
  CHECK(ro > 0);
  CHECK(jo > 0);
  CHECK(lo == ro); // the two sides are symmetric
}

TEST_CASE("coverage condition: annotated pairs lie inside the alignment") {
  SpecFile sp = load_specfile(fixture_path("lockstep.spec"));
  DomainBound b = xy_bound(-2, 4);
  b.pc_domain = {1, 2, 3, 4, 5, 6};
  CHECK(check_condition_c(sp.an_r, sp.align_l, sp.align_r, sp.align_j, 6, 6, b)
            .valid());

  // an uncovered pair is caught
  RelAnnotation an = sp.an_r;
  an.at[{2, 3}] = parse_rel_formula("true");
  Verdict v =
      check_condition_c(an, sp.align_l, sp.align_r, sp.align_j, 6, 6, b);
  REQUIRE(v.status == Verdict::Status::Counterexample);
  CHECK(v.cex[0].detail.find("(2,3)") != std::string::npos);
}
