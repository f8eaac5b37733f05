// Assertion languages over stores and store pairs, with substitution forms,
// left/right embeddings, cross comparisons, extensional (set-backed) atoms,
// control-pattern specs, pc-encoding, independence checks, and the bounded
// entailment oracle.
#ifndef RVWB_FORMULA_HPP
#define RVWB_FORMULA_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/eval.hpp"
#include "rvwb/store.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

// ---------------------------------------------------------------------------
// Store predicates
// ---------------------------------------------------------------------------

struct StoreFormula;
using StoreFormulaPtr = std::shared_ptr<const StoreFormula>;

// Extensional atom: membership of the store's projection onto `vars` in the
// listed set.  Used for annotations computed by reachability.
struct StoreSet {
  std::vector<std::string> vars;
  std::set<Store> members; // stores over exactly `vars`
};

struct StoreFormula {
  enum class Kind { True, False, Embed, And, Or, Not, Subst, Ext } kind;
  BoolExprPtr embed;              // Embed
  StoreFormulaPtr l, r;           // And/Or; l also for Not and Subst body
  std::string var;                // Subst target
  IntExprPtr expr;                // Subst replacement
  std::shared_ptr<const StoreSet> ext; // Ext
};

StoreFormulaPtr sf_true();
StoreFormulaPtr sf_false();
StoreFormulaPtr sf_embed(BoolExprPtr e);
StoreFormulaPtr sf_and(StoreFormulaPtr a, StoreFormulaPtr b);
StoreFormulaPtr sf_or(StoreFormulaPtr a, StoreFormulaPtr b);
StoreFormulaPtr sf_not(StoreFormulaPtr a);
// s |= P[x:=e]  iff  s[x -> [[e]](s)] |= P
StoreFormulaPtr subst_store(StoreFormulaPtr p, const std::string& x, IntExprPtr e);
StoreFormulaPtr sf_ext(std::shared_ptr<const StoreSet> set);

bool eval_store_formula(const StoreFormulaPtr& p, const Store& s);
void collect_vars(const StoreFormulaPtr& p, std::set<std::string>& out);
std::string to_string(const StoreFormulaPtr& p);

// ---------------------------------------------------------------------------
// Store-pair relations
// ---------------------------------------------------------------------------

struct RelFormula;
using RelFormulaPtr = std::shared_ptr<const RelFormula>;

struct StorePairSet {
  std::vector<std::string> lvars, rvars;
  std::set<std::pair<Store, Store>> members;
};

struct RelFormula {
  enum class Kind { True, False, Left, Right, Cross, And, Or, Not, Subst, Ext }
      kind;
  BoolExprPtr embed;      // Left / Right
  CmpOp cmp = CmpOp::Eq;  // Cross: [[le]](s)  cmp  [[re]](s')
  IntExprPtr le, re;      // Cross
  RelFormulaPtr l, r;     // And/Or; l also for Not and Subst body
  bool has_l = false, has_r = false;  // Subst sides present
  std::string lvar, rvar;             // Subst targets
  IntExprPtr lexpr, rexpr;            // Subst replacements
  std::shared_ptr<const StorePairSet> ext; // Ext
};

RelFormulaPtr rf_true();
RelFormulaPtr rf_false();
RelFormulaPtr rf_left(BoolExprPtr e);   // holds when e holds in the left store
RelFormulaPtr rf_right(BoolExprPtr e);
RelFormulaPtr rf_cross(CmpOp op, IntExprPtr left_e, IntExprPtr right_e);
RelFormulaPtr rf_and(RelFormulaPtr a, RelFormulaPtr b);
RelFormulaPtr rf_or(RelFormulaPtr a, RelFormulaPtr b);
RelFormulaPtr rf_not(RelFormulaPtr a);
// Two-sided substitution; either side may be absent.
RelFormulaPtr subst_rel(RelFormulaPtr rf,
                        std::optional<std::pair<std::string, IntExprPtr>> left,
                        std::optional<std::pair<std::string, IntExprPtr>> right);
RelFormulaPtr rf_ext(std::shared_ptr<const StorePairSet> set);

// Conjunction/disjunction of a whole list (True/False for empty).
RelFormulaPtr rf_and_all(const std::vector<RelFormulaPtr>& fs);
RelFormulaPtr rf_or_all(const std::vector<RelFormulaPtr>& fs);
StoreFormulaPtr sf_and_all(const std::vector<StoreFormulaPtr>& fs);
StoreFormulaPtr sf_or_all(const std::vector<StoreFormulaPtr>& fs);

bool eval_rel_formula(const RelFormulaPtr& p, const Store& s, const Store& t);
void collect_vars_left(const RelFormulaPtr& p, std::set<std::string>& out);
void collect_vars_right(const RelFormulaPtr& p, std::set<std::string>& out);
std::string to_string(const RelFormulaPtr& p);

// ---------------------------------------------------------------------------
// Control patterns for alignment conditions
// ---------------------------------------------------------------------------

// A clause [n|n'] /\ formula, with wildcards on either control slot.
// The spec denotes the union of its clauses.
struct StateRelClause {
  std::optional<Label> left, right; // nullopt = wildcard
  RelFormulaPtr formula = nullptr;  // null means "true"
};

struct StateRelSpec {
  std::vector<StateRelClause> clauses;

  // Disjunction of the formulas of clauses matching (n, n'); False if none.
  RelFormulaPtr at(Label n, Label n2) const;
  bool holds(Label n, Label n2, const Store& s, const Store& t) const;
  bool mentions(Label n, Label n2) const; // some clause matches (n, n')
};

// Replace [n|n'] by (pc = n in left) /\ (pc = n' in right); wildcards drop
// the conjunct.  Result is the disjunction over clauses.
RelFormulaPtr encode_pc(const StateRelSpec& spec, const std::string& pc);

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

// Unmapped control points denote false.
struct UnaryAnnotation {
  std::map<Label, StoreFormulaPtr> at;
  StoreFormulaPtr get(Label n) const;
};

struct RelAnnotation {
  std::map<std::pair<Label, Label>, RelFormulaPtr> at;
  RelFormulaPtr get(Label n, Label n2) const;
};

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Independence: the predicate does not distinguish stores differing only at x.
bool independent(const std::string& x, const StoreFormulaPtr& p,
                 const DomainBound& bound);
bool independent_rel(const std::string& x, const std::string& x2,
                     const RelFormulaPtr& p, const DomainBound& bound);

// Bounded entailment: F => G over all stores (pairs) in the bound.
// Conjunction structure of F is exploited: literal equalities pin variables,
// top-level disjunctions are case-split, one-sided conjuncts prefilter each
// side, and a cross equality indexes the right-store set.
Verdict entails(const StoreFormulaPtr& f, const StoreFormulaPtr& g,
                const DomainBound& bound);
Verdict entails(const RelFormulaPtr& f, const RelFormulaPtr& g,
                const DomainBound& bound);

bool sem_equal(const StoreFormulaPtr& a, const StoreFormulaPtr& b,
               const DomainBound& bound);
bool sem_equal(const RelFormulaPtr& a, const RelFormulaPtr& b,
               const DomainBound& bound);

// Structural equality (used as a fast path before semantic comparison).
bool equal(const StoreFormulaPtr& a, const StoreFormulaPtr& b);
bool equal(const RelFormulaPtr& a, const RelFormulaPtr& b);

} // namespace rvwb

#endif
