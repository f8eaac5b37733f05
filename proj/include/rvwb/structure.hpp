// Structural functions over labeled commands: initial and all labels,
// well-labeledness, subcommand lookup, following successor, enabledness,
// ghost-variable erasure, and the well-formedness report.
#ifndef RVWB_STRUCTURE_HPP
#define RVWB_STRUCTURE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/store.hpp"

namespace rvwb {

using LabelSet = std::set<Label>;

// Label of the first atom to execute: lab(c;d) = lab(c), otherwise the
// node's own label.
Label lab(const CommandPtr& c);

// All labels occurring in c.
LabelSet labs(const CommandPtr& c);

// ok: every label positive and no label occurs twice.
bool ok(const CommandPtr& c);

// okf: ok(c) and f not among c's labels ("ok, fresh").
bool okf(const CommandPtr& c, Label f);

// The unique subcommand labeled n; throws std::out_of_range if absent.
CommandPtr sub(Label n, const CommandPtr& c);

// Following successor: the control point reached after the atom at n
// finishes, with f as the successor of the whole command.  Loop bodies
// route back to the loop head.
Label fsuc(Label n, const CommandPtr& c, Label f);

// Disjunction of the guards, in order.
BoolExprPtr enab(const GuardedList& gcs);

// Replace every assignment to x by skip with the same label.
CommandPtr erase(const std::string& x, const CommandPtr& c);

// True when x occurs only within assignments to x itself.
bool ghost(const std::string& x, const CommandPtr& c);

// --- Well-formedness report -------------------------------------------------

enum class TotalIfStatus { PassSyntactic, PassBounded, Fail };

struct IfCheck {
  Label label;
  TotalIfStatus status;
  std::optional<Store> counterexample; // for Fail
};

struct WellFormednessReport {
  bool ok_labels;           // ok(c)
  std::vector<IfCheck> ifs; // one entry per if-command
  bool all_pass() const;
};

WellFormednessReport well_formed(const CommandPtr& c, const DomainBound& bound);

} // namespace rvwb

#endif
