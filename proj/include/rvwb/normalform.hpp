// pc instrumentation, the flat automaton normal form of a command, guard
// classification, and the bounded normal-form equivalence check.
#ifndef RVWB_NORMALFORM_HPP
#define RVWB_NORMALFORM_HPP

#include <string>

#include "rvwb/ast.hpp"
#include "rvwb/automata.hpp"
#include "rvwb/store.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

// Prefix !n (pc := n, at the reserved label 0) before every atom, if, and do
// of c; loop bodies get a trailing reset to the loop head.  The result keeps
// pc ghost and erases back to c.  Requires pc fresh for c.
CommandPtr add_pc(const std::string& pc, const CommandPtr& c);

// The flat dispatch form: a do-loop whose guards each test pc (and possibly
// one source guard) and whose bodies perform at most one program assignment
// before setting pc to the successor.
struct NormalForm {
  std::string pc;
  Label init = 0;        // lab(c); the loop is entered after pc := init
  CommandPtr init_assign; // the command pc := init
  GuardedList body;
  Label fin = 0;

  CommandPtr loop() const; // do body od
};

// Deterministic construction of the unique normal form body.  Requires
// okf(c, f) and pc fresh.
NormalForm normalize(const CommandPtr& c, Label f, const std::string& pc);

// Which control-flow case a normal-form guard implements, with the source
// and target labels and (for branch/exit cases) the tested expression.
struct GuardClass {
  SymEdge::Kind kind;
  Label k = 0, m = 0;
  BoolExprPtr guard; // IfBranch/DoEnter: source guard; DoExit: negated enab
};

// Re-derives the classification of a guard of normalize(c, f, pc).body.
// Throws std::invalid_argument on anything else.
GuardClass classify_guard(const GuardedCommand& gc, const CommandPtr& c,
                          Label f, const std::string& pc);

// Bounded check of the normal-form theorem instance for c and f:
// (pc := lab(c)) ; do body od  is semantically equal to  add_pc(c) ; pc := f.
// The supplied bound's variables should cover the program variables; pc is
// added with domain labs(c) ∪ {f}.
Verdict verify_norm_equiv(const CommandPtr& c, Label f, const std::string& pc,
                          const DomainBound& bound);

} // namespace rvwb

#endif
