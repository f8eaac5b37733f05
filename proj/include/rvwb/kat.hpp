// Kleene-algebra-with-tests expressions, the command translation into them,
// interpretation in the bounded relational model, the recorded hypothesis
// equation families, and the semantic equivalence oracle.
#ifndef RVWB_KAT_HPP
#define RVWB_KAT_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/store.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

struct KatExpr;
using KatExprPtr = std::shared_ptr<const KatExpr>;

// Tests are 0, 1, primitive tests, and +/;/! combinations of tests; the
// complement applies only to tests (enforced at construction).
struct KatExpr {
  enum class Kind { Zero, One, Test, Action, Plus, Seq, Star, Not } kind;
  BoolExprPtr test;   // Test: primitive boolean kept atomic
  std::string var;    // Action target
  IntExprPtr rhs;     // Action right-hand side
  KatExprPtr a, b;    // Plus/Seq; a also for Star/Not
};

KatExprPtr kat_zero();
KatExprPtr kat_one();
KatExprPtr kat_test(BoolExprPtr e);
KatExprPtr kat_action(const std::string& var, IntExprPtr rhs);
KatExprPtr kat_plus(KatExprPtr a, KatExprPtr b);
KatExprPtr kat_seq(KatExprPtr a, KatExprPtr b);
KatExprPtr kat_star(KatExprPtr a);
KatExprPtr kat_not(KatExprPtr a); // throws std::invalid_argument on non-test

bool is_test(const KatExprPtr& ke);
std::string to_string(const KatExprPtr& ke); // 0 1 + ; * ! tokens

// Command/boolean translation: skip -> 1, assignment -> action, sequencing
// -> ;, if -> sum of guard;body, do -> (sum)*;!enab; booleans homomorphically
// with comparisons kept atomic.
KatExprPtr mkt(const CommandPtr& c);
KatExprPtr mkt_bool(const BoolExprPtr& e);
KatExprPtr mkt_gcs(const GuardedList& gcs);

// Enumerated store universe for the relational model.
struct StoreSpace {
  std::vector<Store> stores;
  std::map<Store, int> index;

  static StoreSpace build(const DomainBound& bound);
  int find(const Store& s) const; // -1 when outside the universe
};

// Relation over store indices: rel[i] = image of stores[i].
using Rel = std::vector<std::set<int>>;

// Relational interpretation: 0 empty, 1 identity, test coreflexive, action
// the assignment relation (targets outside the universe are dropped), + union,
// ; composition, * reflexive-transitive closure, ! complement in the identity.
Rel interp(const KatExprPtr& ke, const StoreSpace& space);

// Bounded semantic equivalence: equality of interpretations over the space
// spanned by bound.vars.
Verdict equiv_semantic(const KatExprPtr& a, const KatExprPtr& b,
                       const DomainBound& bound);

struct KatEquation {
  enum class Tag {
    DiffTest,
    SetTest,
    TotIf,
    TestCommuteAsgn,
    HypFalse,
    HypAssign
  } tag;
  KatExprPtr lhs, rhs;
};

// The four normal-form axiom families instantiated over labs(c) ∪ {f} and
// the assignments and if-commands of c.  Requires pc fresh for c.  When a
// bound is supplied every equation is validated in the relational model and
// a failure throws std::logic_error.
std::vector<KatEquation> nfax(const std::string& pc, const CommandPtr& c,
                              Label f, const DomainBound* validate = nullptr);

// Hypothesis equations: an unsatisfiable test collapses to 0; a test followed
// by an assignment establishing another test absorbs its complement.
KatEquation hyp_false(BoolExprPtr e);
KatEquation hyp_assign(BoolExprPtr e0, const std::string& x, IntExprPtr e,
                       BoolExprPtr e1);

} // namespace rvwb

#endif
