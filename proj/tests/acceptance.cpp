// End-to-end acceptance checks.  Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any fail.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "rvwb/automata.hpp"
#include "rvwb/normalform.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/proof.hpp"
#include "rvwb/semantics.hpp"
#include "rvwb/specfile.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/vcgen.hpp"

using namespace rvwb;
using rvwb::testing::fixture_path;
using rvwb::testing::load_fixture;
using rvwb::testing::ProgramGen;

namespace {

int failures = 0;

void report(int num, const std::string& what, bool pass, double seconds) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << num << ": " << what << " ("
            << seconds << "s)" << std::endl;
  if (!pass) ++failures;
}

double now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void run_check(int num, const std::string& what,
               const std::function<bool()>& body) {
  double t0 = now();
  bool pass = false;
  try {
    pass = body();
  } catch (const std::exception& e) {
    std::cout << "  exception: " << e.what() << std::endl;
  }
  report(num, what, pass, now() - t0);
}

DomainBound bound_of(std::vector<std::string> vars, int64_t lo, int64_t hi) {
  DomainBound b;
  b.vars = std::move(vars);
  b.lo = lo;
  b.hi = hi;
  return b;
}

RelFormulaPtr rf(const std::string& text) { return parse_rel_formula(text); }

// --- 1: following-successor fixture ----------------------------------------

bool check_fsuc() {
  CommandPtr c0 = load_fixture("c0.gcl");
  return fsuc(2, c0, 6) == 6 && fsuc(4, c0, 6) == 2;
}

// --- 2: the seven unary rows of the countdown program ----------------------

bool check_unary_vc_golden() {
  CommandPtr c0 = load_fixture("c0.gcl");
  SpecFile sp = load_specfile(fixture_path("c0.spec"));
  std::vector<VC> vcs = unary_vcs(c0, 6, sp.an_u);
  if (vcs.size() != 7) return false;
  DomainBound b = bound_of({"x", "y"}, -4, 6);
  auto an = [&](Label n) { return sp.an_u.get(n); };
  auto sub = [&](Label n, const char* e) {
    return subst_store(an(n), "x", parse_int_expr(e));
  };
  auto grd = [](const char* e) { return sf_embed(parse_bool_expr(e)); };
  std::pair<StoreFormulaPtr, StoreFormulaPtr> rows[] = {
      {an(1), subst_store(an(2), "x", parse_int_expr("y"))},
      {sf_and(grd("x > 0"), an(2)), an(3)},
      {sf_and(sf_not(grd("x > 0")), an(2)), an(6)},
      {sf_and(grd("x mod 2 = 0"), an(3)), an(4)},
      {sf_and(grd("x mod 2 != 0"), an(3)), an(5)},
      {an(4), sub(2, "x - 1")},
      {an(5), sub(2, "x - 2")},
  };
  for (size_t i = 0; i < 7; ++i) {
    if (!sem_equal(vcs[i].u_ante, rows[i].first, b)) return false;
    if (!sem_equal(vcs[i].u_cons, rows[i].second, b)) return false;
  }
  return true;
}

// --- 3: normal-form goldens ------------------------------------------------

bool body_matches(const NormalForm& nf, const std::vector<std::string>& want) {
  if (nf.body.size() != want.size()) return false;
  for (size_t i = 0; i < want.size(); ++i) {
    std::string got =
        to_string(nf.body[i].guard) + " -> " + to_string(nf.body[i].body);
    if (got != want[i]) {
      std::cout << "  mismatch at case " << i << ":\n    got  " << got
                << "\n    want " << want[i] << std::endl;
      return false;
    }
  }
  return true;
}

bool check_normal_form_golden() {
  NormalForm d0 = normalize(load_fixture("c0.gcl"), 6, "pc");
  bool ok0 = body_matches(
      d0, {
              "pc = 1 -> x@1 := y ; pc@0 := 2",
              "pc = 2 && x > 0 -> pc@0 := 3",
              "pc = 2 && !(x > 0) -> pc@0 := 6",
              "pc = 3 && x mod 2 = 0 -> pc@0 := 4",
              "pc = 3 && x mod 2 != 0 -> pc@0 := 5",
              "pc = 4 -> x@4 := x - 1 ; pc@0 := 2",
              "pc = 5 -> x@5 := x - 2 ; pc@0 := 2",
          });
  // The two loop variants differ only in their constants and divisors.
  auto variant = [](const char* z0, const char* div, const char* work) {
    return std::vector<std::string>{
        std::string("pc = 1 -> y@1 := x ; pc@0 := 2"),
        std::string("pc = 2 -> z@2 := ") + z0 + " ; pc@0 := 3",
        "pc = 3 -> w@3 := 0 ; pc@0 := 4",
        "pc = 4 && y != 4 -> pc@0 := 5",
        "pc = 4 && !(y != 4) -> pc@0 := 0",
        std::string("pc = 5 && w mod ") + div + " = 0 -> pc@0 := 6",
        std::string("pc = 5 && w mod ") + div + " != 0 -> pc@0 := 8",
        std::string("pc = 6 -> z@6 := ") + work + " ; pc@0 := 7",
        "pc = 7 -> y@7 := y - 1 ; pc@0 := 9",
        "pc = 8 -> pc@0 := 9",
        "pc = 9 -> w@9 := w + 1 ; pc@0 := 4",
    };
  };
  bool ok4 = body_matches(normalize(load_fixture("c4.gcl"), 0, "pc"),
                          variant("24", "2", "z * y"));
  bool ok5 = body_matches(normalize(load_fixture("c5.gcl"), 0, "pc"),
                          variant("16", "3", "z * 2"));
  return ok0 && ok4 && ok5;
}

// --- 4: normal-form theorem instances --------------------------------------

bool check_norm_equiv() {
  DomainBound b = bound_of({"x", "y", "z", "w"}, -4, 8);
  b.step_budget = 100000;
  if (!verify_norm_equiv(load_fixture("c0.gcl"), 6, "pc", b).valid())
    return false;
  if (!verify_norm_equiv(load_fixture("c1.gcl"), 7, "pc", b).valid())
    return false;
  if (!verify_norm_equiv(load_fixture("c4.gcl"), 0, "pc", b).valid())
    return false;
  if (!verify_norm_equiv(load_fixture("c5.gcl"), 0, "pc", b).valid())
    return false;
  // random programs at a small bound to keep the whole batch in budget
  ProgramGen gen(97, {"x", "y"});
  DomainBound small = bound_of({"x", "y"}, -1, 1);
  for (int i = 0; i < 100; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(3, next);
    if (!okf(c, next)) return false;
    if (!verify_norm_equiv(c, next, "pc", small).valid()) return false;
  }
  return true;
}

// --- 5: big/small-step and automaton consistency ----------------------------

bool check_semantic_consistency() {
  ProgramGen gen(131, {"x", "y", "z"});
  DomainBound b = bound_of({"x", "y", "z"}, -2, 2);
  b.step_budget = 20000;
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    Label next = 1;
    CommandPtr c = gen.gen(2, next);
    Label f = next;
    Automaton a = build_aut(c, f, b);
    for (const Store& s : b.enumerate()) {
      RunResult r = run(c, s, b);
      RunResult d = denote_bigstep(c, s, b);
      if (!r.complete() || !d.complete()) continue; // budget: no comparison
      if (r.outcomes != d.outcomes) return false;
      ReachResult rr = reachable(a, {s}, b);
      if (!rr.complete) continue;
      std::set<Store> fin;
      for (const auto& [n, t] : rr.states)
        if (n == f) fin.insert(t);
      if (fin != r.outcomes) return false;
      ++compared;
    }
  }
  return compared > 10000;
}

// --- 6: lockstep pipeline ---------------------------------------------------

bool check_lockstep_pipeline() {
  CommandPtr c0 = load_fixture("c0.gcl");
  SpecFile sp = load_specfile(fixture_path("lockstep.spec"));
  DomainBound b = bound_of({"x", "y"}, -2, 6);
  b.pc_name = "pc";
  b.pc_domain = {1, 2, 3, 4, 5, 6};

  // (a) manifest adequacy for Q = (y = y')
  Automaton a = build_aut(c0, 6, b);
  auto [l2, r2, j2] = restrict_live(a, a, sp.align_l, sp.align_r, sp.align_j);
  ProductAutomaton p = build_product(a, a, l2, r2, j2);
  if (!check_manifest_adequacy(p, rf("eq(y, y)"), b).valid()) return false;

  // (b) the relational VC set discharges
  if (!discharge(encoded_rel_vcs(c0, c0, 6, 6, sp.align_l, sp.align_r,
                                 sp.align_j, sp.an_r, "pc"),
                 b)
           .all_valid)
    return false;

  // (c) + (d) synthesis and checking
  ProofTreePtr t = synthesize_relational(c0, c0, 6, 6, sp.align_l, sp.align_r,
                                         sp.align_j, sp.an_r, "pc", b);
  if (!check_proof(t, b).valid()) return false;

  // (e) the judgment itself holds semantically
  return check_rel(c0, c0, rf("eq(y, y)"), rf("eq(x, x)"), b).valid();
}

// --- 7: conditional-alignment pipeline --------------------------------------

// The published alignment conditions, before the exit repair recorded in
// the shipped spec file: a side may run alone whenever it is in a skip
// round, and the joint case requires both to be in work rounds.
void published_alignment(StateRelSpec& l, StateRelSpec& r, StateRelSpec& j) {
  l.clauses = {{4, 4, rf("lhs(w mod 2 != 0)")},
               {5, 4, nullptr},
               {8, 4, nullptr},
               {9, 4, nullptr}};
  r.clauses = {{4, 4, rf("rhs(w mod 3 != 0)")},
               {4, 5, nullptr},
               {4, 8, nullptr},
               {4, 9, nullptr}};
  j.clauses = {{1, 1, nullptr},
               {2, 2, nullptr},
               {3, 3, nullptr},
               {4, 4, rf("lhs(w mod 2 = 0) && rhs(w mod 3 = 0)")},
               {5, 5, nullptr},
               {6, 6, nullptr},
               {7, 7, nullptr},
               {9, 9, nullptr}};
}

DomainBound c4c5_bound() {
  DomainBound b = bound_of({"x", "y", "z", "w"}, 0, 0);
  b.overrides["x"] = {4, 7};
  b.overrides["y"] = {3, 8};
  b.overrides["z"] = {1, 64};
  b.overrides["w"] = {0, 12};
  b.pc_name = "pc";
  b.pc_domain = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  return b;
}

// The seventeen published rows, stated against the published alignment.
bool check_published_rows(const DomainBound& b) {
  StateRelSpec l, r, j;
  published_alignment(l, r, j);
  const std::string S = "eq(y, y) && lhs(y > 3) && gt(z, z) && rhs(z > 0)";
  const std::string W = "lhs(w mod 2 = 0) && rhs(w mod 3 = 0)";
  auto both = [](RelFormulaPtr f, const char* x, const char* le,
                 const char* re) {
    return subst_rel(f, {{x, parse_int_expr(le)}}, {{x, parse_int_expr(re)}});
  };
  struct Row {
    RelFormulaPtr ante, cons;
  };
  std::vector<Row> rows = {
      // joint rows
      {rf_and(j.at(1, 1), rf("eq(x, x) && lhs(x > 3)")),
       both(rf("eq(y, y) && lhs(y > 3)"), "y", "x", "x")},
      {rf_and(j.at(2, 2), rf("eq(y, y) && lhs(y > 3)")),
       both(rf(S), "z", "24", "16")},
      {rf_and(j.at(3, 3), rf(S)), both(rf(S), "w", "0", "0")},
      {rf_and(j.at(4, 4), rf(S + " && lhs(y != 4) && rhs(y != 4)")),
       rf(S + " && lhs(y > 4) && " + W)},
      {rf_and(j.at(4, 4), rf(S)), rf("gt(z, z)")},
      {rf_and(j.at(5, 5), rf(W + " && " + S + " && lhs(y > 4)")),
       rf(S + " && lhs(y > 4) && " + W)},
      {rf_and(j.at(6, 6), rf(W + " && " + S + " && lhs(y > 4)")),
       both(rf(S + " && lhs(y > 4) && " + W), "z", "z * y", "z * 2")},
      {rf_and(j.at(7, 7), rf(W + " && " + S + " && lhs(y > 4)")),
       both(rf(S), "y", "y - 1", "y - 1")},
      {rf_and(j.at(9, 9), rf(S)), both(rf(S), "w", "w + 1", "w + 1")},
      // left-only rows
      {rf_and(l.at(4, 4), rf(S + " && lhs(y != 4)")),
       rf(S + " && lhs(w mod 2 != 0)")},
      {rf_and(l.at(5, 4), rf(S + " && lhs(w mod 2 != 0)")), rf(S)},
      {rf_and(l.at(8, 4), rf(S)), rf(S)},
      {rf_and(l.at(9, 4), rf(S)), rf(S)},
      // right-only rows
      {rf_and(r.at(4, 4), rf(S + " && rhs(y != 4)")),
       rf(S + " && rhs(w mod 3 != 0)")},
      {rf_and(r.at(4, 5), rf(S + " && rhs(w mod 3 != 0)")), rf(S)},
      {rf_and(r.at(4, 8), rf(S)), rf(S)},
      {rf_and(r.at(4, 9), rf(S)), rf(S)},
  };
  if (rows.size() != 17) return false;
  for (size_t i = 0; i < rows.size(); ++i) {
    Verdict v = entails(rows[i].ante, rows[i].cons, b);
    if (!v.valid()) {
      std::cout << "  published row " << i << " failed: " << v.to_string()
                << std::endl;
      return false;
    }
  }
  return true;
}

bool check_conditional_pipeline() {
  CommandPtr c4 = load_fixture("c4.gcl");
  CommandPtr c5 = load_fixture("c5.gcl");
  SpecFile sp = load_specfile(fixture_path("c4c5.spec"));
  DomainBound b = c4c5_bound();

  // (a) coverage of the annotation by the alignment conditions
  if (!check_condition_c(sp.an_r, sp.align_l, sp.align_r, sp.align_j, 0, 0, b)
           .valid())
    return false;

  // (b) the published VC table discharges at the stated bounds
  if (!check_published_rows(b)) return false;

  // (c) synthesized proof checks (at a reduced bound to stay in budget)
  DomainBound bc = c4c5_bound();
  bc.overrides["x"] = {4, 6};
  bc.overrides["y"] = {3, 7};
  bc.overrides["z"] = {1, 24};
  bc.overrides["w"] = {0, 6};
  ProofTreePtr t = synthesize_relational(c4, c5, 0, 0, sp.align_l, sp.align_r,
                                         sp.align_j, sp.an_r, "pc", bc);
  if (!check_proof(t, bc).valid()) return false;

  // (d) the judgment holds semantically for x = x' in [4..6]
  DomainBound br = bc;
  br.overrides["x"] = {4, 6};
  br.overrides["y"] = {0, 0};
  br.overrides["z"] = {0, 0};
  br.overrides["w"] = {0, 0};
  return check_rel(c4, c5, sp.pre_r, sp.post_r, br).valid();
}

// --- 8: unary completeness pipeline -----------------------------------------

bool check_floyd_pipeline() {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b = bound_of({"x", "y"}, -2, 4);
  b.overrides["y"] = {0, 4};
  Automaton a = build_aut(c0, 6, b);
  UnaryAnnotation an = strongest_annotation(a, sf_true(), b);
  if (!discharge(unary_vcs(c0, 6, an), b).all_valid) return false;
  ProofTreePtr t = synthesize_unary(c0, 6, an, "pc", b);
  DomainBound bc = b;
  bc.pc_name = "pc";
  bc.pc_domain = {1, 2, 3, 4, 5, 6};
  if (!check_proof(t, bc).valid()) return false;
  return check_unary(c0, t->conclusion.pre_u,
                     parse_store_formula("x <= 0"), b)
      .valid();
}

// --- 9: relational completeness smoke ----------------------------------------

bool check_cook_smoke() {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b = bound_of({"x", "y"}, -2, 4);
  b.overrides["y"] = {0, 3};
  b.pc_name = "pc";
  b.pc_domain = {1, 2, 3, 4, 5, 6};
  Automaton a = build_aut(c0, 6, b);
  // L = R = J = "not both finished"
  StateRelSpec not_fin;
  for (Label n : a.ctrl) {
    if (n != 6) {
      not_fin.clauses.push_back({n, std::nullopt, nullptr});
    } else {
      for (Label m : a.ctrl)
        if (m != 6) not_fin.clauses.push_back({n, m, nullptr});
    }
  }
  auto [l2, r2, j2] = restrict_live(a, a, not_fin, not_fin, not_fin);
  ProductAutomaton p = build_product(a, a, l2, r2, j2);
  RelFormulaPtr q = rf("eq(y, y)");
  RelAnnotation an = strongest_annotation(p, q, b);
  ProofTreePtr t = synthesize_relational(c0, c0, 6, 6, not_fin, not_fin,
                                         not_fin, an, "pc", b);
  return check_proof(t, b).valid();
}

// --- 10: adequacy counterexample ---------------------------------------------

bool check_adequacy_counterexample() {
  CommandPtr c = parse_program(
      "x@1 := x + 1; y@2 := y; x@3 := x + 1; y@4 := y; x@5 := x + 1");
  CommandPtr d = parse_program(
      "y@1 := y; x@2 := x + 1; x@3 := x + 1; x@4 := x + 1; y@5 := y");
  DomainBound b = bound_of({"x", "y"}, -1, 1);
  Automaton a = build_aut(c, 6, b);
  Automaton a2 = build_aut(d, 6, b);
  StateRelSpec l, r, j;
  l.clauses = {{4, 4, nullptr}}; // [2|3] dropped
  r.clauses = {{1, 1, nullptr}, {6, 5, nullptr}};
  j.clauses = {{1, 2, nullptr}, {3, 3, nullptr}, {5, 4, nullptr}};
  ProductAutomaton p = build_product(a, a2, l, r, j);
  Verdict v = check_manifest_adequacy(p, rf("eq(x, x)"), b);
  if (v.status != Verdict::Status::Counterexample) return false;
  if (v.cex[0].detail.find("(2,3)") == std::string::npos) return false;
  // restoring the clause makes it adequate again
  l.clauses.insert(l.clauses.begin(), {2, 3, nullptr});
  ProductAutomaton good = build_product(a, a2, l, r, j);
  return check_manifest_adequacy(good, rf("eq(x, x)"), b).valid();
}

// --- 11: checker-soundness property ------------------------------------------

bool check_mutation_rejection() {
  CommandPtr c0 = load_fixture("c0.gcl");
  DomainBound b = bound_of({"x", "y"}, -2, 4);
  b.overrides["y"] = {0, 4};
  b.pc_name = "pc";
  b.pc_domain = {1, 2, 3, 4, 5, 6};
  Automaton a = build_aut(c0, 6, b);
  UnaryAnnotation uan = strongest_annotation(a, sf_true(), b);
  ProofTreePtr unary = synthesize_unary(c0, 6, uan, "pc", b);
  SpecFile sp = load_specfile(fixture_path("lockstep.spec"));
  DomainBound br = bound_of({"x", "y"}, -2, 4);
  br.pc_name = "pc";
  br.pc_domain = {1, 2, 3, 4, 5, 6};
  ProofTreePtr rel = synthesize_relational(c0, c0, 6, 6, sp.align_l,
                                           sp.align_r, sp.align_j, sp.an_r,
                                           "pc", br);
  if (!check_proof(unary, b).valid()) return false;
  if (!check_proof(rel, br).valid()) return false;

  auto collect = [](const ProofTreePtr& t) {
    std::vector<ProofTree*> out;
    std::function<void(const ProofTreePtr&)> walk =
        [&](const ProofTreePtr& n) {
          out.push_back(const_cast<ProofTree*>(n.get()));
          for (const auto& p : n->premises) walk(p);
        };
    walk(t);
    return out;
  };
  std::vector<ProofTree*> unodes = collect(unary);
  std::vector<ProofTree*> rnodes = collect(rel);

  std::mt19937_64 rng(2026);
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    bool use_rel = i % 2 == 1;
    std::vector<ProofTree*>& nodes = use_rel ? rnodes : unodes;
    const ProofTreePtr& root = use_rel ? rel : unary;
    const DomainBound& bb = use_rel ? br : b;
    ProofTree* victim = nodes[rng() % nodes.size()];
    ProofTree saved = *victim;
    int kind = int(rng() % 3);
    if (kind == 1 && victim->premises.empty()) kind = 2;
    switch (kind) {
      case 0: // unprovable postcondition
        if (use_rel)
          victim->conclusion.post_r = rf("lt(x, x) && gt(x, x)");
        else
          victim->conclusion.post_u = parse_store_formula("x = 42");
        break;
      case 1: // broken arity
        victim->premises.clear();
        break;
      default: // wrong rule for the command shape
        victim->rule = victim->rule == Rule::Skip ? Rule::Asgn : Rule::Skip;
        break;
    }
    bool caught = !check_proof(root, bb).valid();
    if (caught) ++rejected;
    *victim = saved;
    if (!caught) {
      std::cout << "  mutation " << i << " (kind " << kind
                << ") was not rejected" << std::endl;
    }
  }
  return rejected == 50;
}

} // namespace

int main() {
  run_check(1, "following-successor fixture", check_fsuc);
  run_check(2, "unary VC golden rows", check_unary_vc_golden);
  run_check(3, "normal-form goldens", check_normal_form_golden);
  run_check(4, "normal-form equivalence instances", check_norm_equiv);
  run_check(5, "big/small-step and automaton consistency",
            check_semantic_consistency);
  run_check(6, "lockstep pipeline", check_lockstep_pipeline);
  run_check(7, "conditional-alignment pipeline", check_conditional_pipeline);
  run_check(8, "unary completeness pipeline", check_floyd_pipeline);
  run_check(9, "relational completeness smoke", check_cook_smoke);
  run_check(10, "adequacy counterexample at control (2,3)",
            check_adequacy_counterexample);
  run_check(11, "mutated proofs are rejected", check_mutation_rejection);
  std::cout << (failures == 0 ? "ALL PASS" : "FAILURES: ")
            << (failures == 0 ? std::string() : std::to_string(failures))
            << std::endl;
  return failures == 0 ? 0 : 1;
}
