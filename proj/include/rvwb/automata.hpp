// Program automata, alignment products, liveness restriction, reachability,
// adequacy checks, and strongest (extensional) annotations.
#ifndef RVWB_AUTOMATA_HPP
#define RVWB_AUTOMATA_HPP

#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/formula.hpp"
#include "rvwb/store.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

// One symbolic control-flow case of a program automaton.  The five kinds
// mirror the verification-condition rows: finished skip, finished assignment,
// branch entry of an if, body entry of a loop, and loop exit.
struct SymEdge {
  enum class Kind { Skip, Asgn, IfBranch, DoEnter, DoExit } kind;
  Label from = 0, to = 0;
  std::string var;     // Asgn target
  IntExprPtr rhs;      // Asgn right-hand side
  BoolExprPtr guard;   // IfBranch/DoEnter: the guard; DoExit: negated enab
};

std::string to_string(const SymEdge& e); // "(n -> m) : <kind>"

struct Automaton {
  LabelSet ctrl;
  Label init = 0, fin = 0;
  DomainBound bound;
  std::vector<SymEdge> edges; // in program order

  // Successor states of (n, s); empty at fin.
  std::vector<std::pair<Label, Store>> step(Label n, const Store& s) const;
};

// The automaton of c for f.  Requires okf(c, f).
Automaton build_aut(const CommandPtr& c, Label f, const DomainBound& bound);

struct ProductState {
  Label ln = 0, rn = 0;
  Store ls, rs;

  bool operator<(const ProductState& o) const {
    return std::tie(ln, rn, ls, rs) < std::tie(o.ln, o.rn, o.ls, o.rs);
  }
  bool operator==(const ProductState& o) const {
    return ln == o.ln && rn == o.rn && ls == o.ls && rs == o.rs;
  }
  std::string to_string() const;
};

// Alignment product: a state may take a left-only step (when in L), a
// right-only step (when in R), or a joint step (when in J).
struct ProductAutomaton {
  Automaton left, right;
  StateRelSpec L, R, J;

  std::vector<ProductState> step(const ProductState& st) const;
  bool terminal(const ProductState& st) const {
    return st.ln == left.fin && st.rn == right.fin;
  }
};

ProductAutomaton build_product(const Automaton& a, const Automaton& a2,
                               StateRelSpec l, StateRelSpec r, StateRelSpec j);

// Remove the states from which the required side cannot step: for program
// automata this subtracts [fin|*] from L, [*|fin'] from R, and [fin|fin']
// from J.  Wildcard clauses are expanded over the finite control sets so the
// subtraction is exact; the product's transitions are unchanged.
std::tuple<StateRelSpec, StateRelSpec, StateRelSpec> restrict_live(
    const Automaton& a, const Automaton& a2, const StateRelSpec& l,
    const StateRelSpec& r, const StateRelSpec& j);

struct ReachResult {
  bool complete = true; // false when the step budget was exhausted
  std::set<std::pair<Label, Store>> states;
};

ReachResult reachable(const Automaton& a, const std::vector<Store>& init_stores,
                      const DomainBound& bound);

struct ProductReachResult {
  bool complete = true;
  std::vector<ProductState> states; // in BFS order
};

ProductReachResult reachable_product(const ProductAutomaton& p,
                                     const std::vector<ProductState>& init,
                                     const DomainBound& bound);

// Every state reachable from a Q-related initial store pair must be in
// L, R, J, or have both controls at fin.
Verdict check_manifest_adequacy(const ProductAutomaton& p,
                                const RelFormulaPtr& q,
                                const DomainBound& bound);

// For each Q-related initial pair, every pair of terminated unary outcomes
// must appear among the product's terminated outcomes.
Verdict check_adequacy(const Automaton& a, const Automaton& a2,
                       const ProductAutomaton& p, const RelFormulaPtr& q,
                       const DomainBound& bound);

// an(init) = P; elsewhere the exact reachable store set, extensionally.
// Throws std::runtime_error when reachability exceeds the budget.
UnaryAnnotation strongest_annotation(const Automaton& a,
                                     const StoreFormulaPtr& p,
                                     const DomainBound& bound);

// Product version: an(init,init') = Q; elsewhere extensional pair sets.
RelAnnotation strongest_annotation(const ProductAutomaton& p,
                                   const RelFormulaPtr& q,
                                   const DomainBound& bound);

} // namespace rvwb

#endif
