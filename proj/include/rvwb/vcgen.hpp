// Generation and discharge of verification conditions: unary rows over a
// program automaton's edges, state-level relational rows (left-only,
// right-only, joint), their pc-encoded forms, and the coverage condition
// that makes an annotated alignment manifestly adequate.
#ifndef RVWB_VCGEN_HPP
#define RVWB_VCGEN_HPP

#include <string>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/automata.hpp"
#include "rvwb/formula.hpp"
#include "rvwb/store.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

struct VC {
  enum class Kind { Unary, LO, RO, JO } kind = Kind::Unary;
  std::string id;       // "{kind}:{n},{n'}->{m},{m'}" (single labels if unary)
  std::string case_tag; // edge kind, "left|right" for relational rows
  Label n = 0, n2 = 0, m = 0, m2 = 0;
  bool encoded = false; // pc-encoded antecedent
  StoreFormulaPtr u_ante, u_cons; // Kind::Unary
  RelFormulaPtr r_ante, r_cons;   // LO/RO/JO

  std::string render() const;
};

// One VC per automaton edge: skip/assign rows relate an(n) to an(m) (with
// substitution), branch/enter/exit rows conjoin the tested guard.
// Control points missing from the annotation denote false.
std::vector<VC> unary_vcs(const CommandPtr& c, Label f,
                          const UnaryAnnotation& an);

// State-level relational VCs: for each left edge and right control point a
// left-only row (antecedent L ∧ an ∧ left guard), symmetrically right-only
// rows, and a joint row per edge pair (antecedent J ∧ an ∧ both guards,
// consequent with both substitutions).  Rows whose alignment-condition or
// annotation entry is literally false are vacuous and not emitted.
std::vector<VC> rel_vcs(const CommandPtr& c, const CommandPtr& c2, Label f,
                        Label f2, const StateRelSpec& l, const StateRelSpec& r,
                        const StateRelSpec& j, const RelAnnotation& an);

// The same rows with control encoded through pc: the alignment condition is
// replaced by its pc encoding and the control pair by pc tests on each side.
std::vector<VC> encoded_rel_vcs(const CommandPtr& c, const CommandPtr& c2,
                                Label f, Label f2, const StateRelSpec& l,
                                const StateRelSpec& r, const StateRelSpec& j,
                                const RelAnnotation& an, const std::string& pc);

struct DischargeEntry {
  VC vc;
  Verdict verdict;
};

struct DischargeReport {
  std::vector<DischargeEntry> entries;
  bool all_valid = true;
};

DischargeReport discharge(const std::vector<VC>& vcs, const DomainBound& bound);

// For every control pair (i,j) of the annotation except (f,f'):
// an(i,j) ∧ [i|j]  must lie inside  L ∨ R ∨ J ∨ [f|f'], checked through the
// pc encoding with bound.pc_name.
Verdict check_condition_c(const RelAnnotation& an, const StateRelSpec& l,
                          const StateRelSpec& r, const StateRelSpec& j,
                          Label f, Label f2, const DomainBound& bound);

} // namespace rvwb

#endif
