// Program automata, alignment products, reachability, adequacy, and
// strongest annotations.
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "rvwb/automata.hpp"
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

DomainBound xy_bound(int64_t lo, int64_t hi) {
  DomainBound b;
  b.vars = {"x", "y"};
  b.lo = lo;
  b.hi = hi;
  return b;
}

// The two straight-line programs of the non-exhaustive-alignment example:
// three increments separated by skips on one side, bunched on the other.
CommandPtr straight_c() {
  return parse_program(
      "x@1 := x + 1; y@2 := y; x@3 := x + 1; y@4 := y; x@5 := x + 1");
}
CommandPtr straight_d() {
  return parse_program(
      "y@1 := y; x@2 := x + 1; x@3 := x + 1; x@4 := x + 1; y@5 := y");
}

// L = [2|3] v [4|4], R = [1|1] v [6|5], J = [1|2] v [3|3] v [5|4].
void straight_align(StateRelSpec& l, StateRelSpec& r, StateRelSpec& j) {
  l.clauses = {{2, 3, nullptr}, {4, 4, nullptr}};
  r.clauses = {{1, 1, nullptr}, {6, 5, nullptr}};
  j.clauses = {{1, 2, nullptr}, {3, 3, nullptr}, {5, 4, nullptr}};
}

} // namespace

TEST_CASE("the automaton of c0 has one edge per control-flow case") {
  Automaton a = build_aut(load_fixture("c0.gcl"), 6, xy_bound(-2, 2));
  CHECK(a.init == 1);
  CHECK(a.fin == 6);
  CHECK(a.ctrl == LabelSet{1, 2, 3, 4, 5, 6});
  std::ostringstream ss;
  for (const SymEdge& e : a.edges) ss << to_string(e) << "\n";
  CHECK(ss.str() ==
        "(1 -> 2) : asgn\n"
        "(2 -> 3) : do-enter\n"
        "(2 -> 6) : do-exit\n"
        "(3 -> 4) : if-branch\n"
        "(3 -> 5) : if-branch\n"
        "(4 -> 2) : asgn\n"
        "(5 -> 2) : asgn\n");
}

TEST_CASE("automaton reachability matches run outcomes") {
  ProgramGen gen(23, {"x", "y"});
  DomainBound b = xy_bound(-2, 2);
  b.step_budget = 20000;
  for (int i = 0; i < 40; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(2, next);
    Label f = next;
    Automaton a = build_aut(c, f, b);
    for (const Store& s : b.enumerate()) {
      RunResult r = run(c, s, b);
      if (!r.complete()) continue;
      ReachResult rr = reachable(a, {s}, b);
      if (!rr.complete) continue;
      std::set<Store> fin_outcomes;
      for (const auto& [n, t] : rr.states)
        if (n == f) fin_outcomes.insert(t);
      CHECK(fin_outcomes == r.outcomes);
    }
  }
}

TEST_CASE("lockstep product of c0 with itself") {
  DomainBound b = xy_bound(-2, 3);
  Automaton a = build_aut(load_fixture("c0.gcl"), 6, b);
  StateRelSpec l, r, j;
  for (Label i = 1; i <= 5; ++i) j.clauses.push_back({i, i, nullptr});
  ProductAutomaton p = build_product(a, a, l, r, j);

  ProductState init;
  init.ln = init.rn = 1;
  init.ls = init.rs = mk_store({{"x", 0}, {"y", 3}});
  ProductReachResult rr = reachable_product(p, {init}, b);
  REQUIRE(rr.complete);
  bool saw_fin = false;
  for (const ProductState& st : rr.states) {
    CHECK(st.ln == st.rn); // lockstep never decouples control
    CHECK(st.ls == st.rs);
    if (p.terminal(st)) saw_fin = true;
  }
  CHECK(saw_fin);

  Verdict ma = check_manifest_adequacy(p, parse_rel_formula("eq(y, y)"), b);
  CHECK(ma.valid());
  Verdict ad = check_adequacy(a, a, p, parse_rel_formula("eq(y, y)"), b);
  CHECK(ad.valid());
}

TEST_CASE("a non-exhaustive alignment is still manifestly adequate") {
  DomainBound b = xy_bound(-1, 1);
  Automaton a = build_aut(straight_c(), 6, b);
  Automaton a2 = build_aut(straight_d(), 6, b);
  StateRelSpec l, r, j;
  straight_align(l, r, j);
  ProductAutomaton p = build_product(a, a2, l, r, j);
  RelFormulaPtr q = parse_rel_formula("eq(x, x)");
  CHECK(check_manifest_adequacy(p, q, b).valid());
  CHECK(check_adequacy(a, a2, p, q, b).valid());
  CHECK(check_rel(straight_c(), straight_d(), q, q, b).valid());
}

TEST_CASE("wildcard clauses give the same product behavior") {
  DomainBound b = xy_bound(-1, 1);
  Automaton a = build_aut(straight_c(), 6, b);
  Automaton a2 = build_aut(straight_d(), 6, b);
  StateRelSpec l, r, j;
  straight_align(l, r, j);
  StateRelSpec lw, rw;
  lw.clauses = {{2, std::nullopt, nullptr}, {4, std::nullopt, nullptr}};
  rw.clauses = {{std::nullopt, 1, nullptr}, {std::nullopt, 5, nullptr}};
  ProductAutomaton p = build_product(a, a2, l, r, j);
  ProductAutomaton pw = build_product(a, a2, lw, rw, j);
  ProductState init;
  init.ln = init.rn = 1;
  init.ls = init.rs = mk_store({{"x", 0}, {"y", 0}});
  ProductReachResult x = reachable_product(p, {init}, b);
  ProductReachResult y = reachable_product(pw, {init}, b);
  CHECK(std::set<ProductState>(x.states.begin(), x.states.end()) ==
        std::set<ProductState>(y.states.begin(), y.states.end()));
}

TEST_CASE("dropping a left-only clause breaks manifest adequacy at (2,3)") {
  DomainBound b = xy_bound(-1, 1);
  Automaton a = build_aut(straight_c(), 6, b);
  Automaton a2 = build_aut(straight_d(), 6, b);
  StateRelSpec l, r, j;
  straight_align(l, r, j);
  l.clauses.erase(l.clauses.begin()); // drop [2|3]
  ProductAutomaton p = build_product(a, a2, l, r, j);
  Verdict v = check_manifest_adequacy(p, parse_rel_formula("eq(x, x)"), b);
  REQUIRE(v.status == Verdict::Status::Counterexample);
  CHECK(v.cex[0].detail.find("(2,3)") != std::string::npos);
  CHECK_FALSE(check_adequacy(a, a2, p, parse_rel_formula("eq(x, x)"), b)
                  .valid());
}

TEST_CASE("restrict_live removes final-control clauses exactly") {
  DomainBound b = xy_bound(-1, 1);
  Automaton a = build_aut(load_fixture("c0.gcl"), 6, b);
  StateRelSpec l, r, j;
  l.clauses = {{std::nullopt, std::nullopt, nullptr}}; // everything
  r.clauses = {{6, 6, nullptr}};
  j.clauses = {{2, 2, nullptr}, {6, 6, nullptr}};
  auto [l2, r2, j2] = restrict_live(a, a, l, r, j);
  // left side may not step at fin
  CHECK_FALSE(l2.mentions(6, 3));
  CHECK(l2.mentions(3, 6));
  CHECK(l2.mentions(2, 2));
  // right clause only covered fin, so nothing is left
  CHECK_FALSE(r2.mentions(6, 6));
  CHECK(j2.mentions(2, 2));
  CHECK_FALSE(j2.mentions(6, 6));
}

TEST_CASE("strongest annotation starts at the precondition and is valid") {
  DomainBound b = xy_bound(-2, 2);
  b.overrides["y"] = {0, 3};
  Automaton a = build_aut(load_fixture("c0.gcl"), 6, b);
  UnaryAnnotation an = strongest_annotation(a, sf_true(), b);
  REQUIRE(an.at.count(1) == 1);
  REQUIRE(an.at.count(6) == 1);
  // an(6) holds exactly for the reachable outcomes: x <= 0
  for (const Store& s : b.enumerate()) {
    if (eval_store_formula(an.get(6), s)) CHECK(s.get("x") <= 0);
  }
  // every annotation entry is invariant under its edges: checked by vcgen
  // elsewhere; here we check an(1) = precondition
  for (const Store& s : b.enumerate())
    CHECK(eval_store_formula(an.get(1), s));
}
