// Small-step transition semantics, an independent big-step evaluator used as
// a cross-check, bounded exhaustive execution, and semantic validity checks
// for unary and relational correctness judgments.
#ifndef RVWB_SEMANTICS_HPP
#define RVWB_SEMANTICS_HPP

#include <set>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/eval.hpp"
#include "rvwb/formula.hpp"
#include "rvwb/store.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

// A configuration of the transition system.  Finished atomic commands carry
// negated labels; the configuration is terminal iff the command is a Skip.
struct Config {
  CommandPtr command;
  Store store;

  bool terminal() const { return command->kind == Command::Kind::Skip; }
  std::string key() const; // stable identity for visited sets
};

// Successors under the six transition rules.  Empty for terminal or stuck
// configurations.
std::vector<Config> step(const Config& cfg);

struct RunResult {
  enum class Status { Complete, BudgetExceeded } status = Status::Complete;
  std::set<Store> outcomes;

  bool complete() const { return status == Status::Complete; }
};

// Exhaustive breadth-first exploration of the configuration graph.  The
// budget caps the number of distinct configurations explored; a divergent
// cycle (an execution path that never terminates) also yields BudgetExceeded,
// so Complete guarantees every path terminated.
RunResult run(const CommandPtr& c, const Store& s, const DomainBound& bound);

// Independent recursive evaluator (loops computed as store-level closures).
// Serves as an oracle against run.
RunResult denote_bigstep(const CommandPtr& c, const Store& s,
                         const DomainBound& bound);

// |= c : {P}{Q} over the bound: every P-store's every outcome satisfies Q.
Verdict check_unary(const CommandPtr& c, const StoreFormulaPtr& p,
                    const StoreFormulaPtr& q, const DomainBound& bound);

// |= c|c' : {R}{S} over the bound, forall-forall over terminating runs.
Verdict check_rel(const CommandPtr& c, const CommandPtr& c2,
                  const RelFormulaPtr& r, const RelFormulaPtr& s,
                  const DomainBound& bound);

} // namespace rvwb

#endif
