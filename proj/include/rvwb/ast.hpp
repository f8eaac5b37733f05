// Abstract syntax for the labeled guarded-command language.
//
// Commands carry integer labels.  In a well-formed program every label is
// positive and unique; negative labels appear only transiently during
// small-step execution (a finished atom at label n becomes skip at -n), and
// label 0 is reserved for instrumentation commands such as pc := n.
#ifndef RVWB_AST_HPP
#define RVWB_AST_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace rvwb {

using Label = int64_t;

// ---------------------------------------------------------------------------
// Integer expressions
// ---------------------------------------------------------------------------

struct IntExpr;
using IntExprPtr = std::shared_ptr<const IntExpr>;

enum class IntOp { Add, Sub, Mul, Mod };

struct IntExpr {
  enum class Kind { Lit, Var, Bin } kind;
  int64_t lit = 0;        // Kind::Lit
  std::string var;        // Kind::Var
  IntOp op = IntOp::Add;  // Kind::Bin
  IntExprPtr lhs, rhs;    // Kind::Bin
};

IntExprPtr int_lit(int64_t v);
IntExprPtr int_var(const std::string& name);
IntExprPtr int_bin(IntOp op, IntExprPtr l, IntExprPtr r);

// ---------------------------------------------------------------------------
// Boolean expressions
// ---------------------------------------------------------------------------

struct BoolExpr;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BoolExpr {
  enum class Kind { True, False, Cmp, And, Or, Not } kind;
  CmpOp cmp = CmpOp::Eq;  // Kind::Cmp
  IntExprPtr il, ir;      // Kind::Cmp
  BoolExprPtr bl, br;     // And/Or (bl only for Not)
};

BoolExprPtr bool_true();
BoolExprPtr bool_false();
BoolExprPtr bool_cmp(CmpOp op, IntExprPtr l, IntExprPtr r);
BoolExprPtr bool_and(BoolExprPtr l, BoolExprPtr r);
BoolExprPtr bool_or(BoolExprPtr l, BoolExprPtr r);
BoolExprPtr bool_not(BoolExprPtr b);

// Syntactic complement used for total-if checks and loop-exit guards:
// the complement of (not e) is e, otherwise it is (not e).
BoolExprPtr bool_complement(BoolExprPtr b);

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct GuardedCommand {
  BoolExprPtr guard;
  CommandPtr body;
};

// Non-empty ordered list of guarded commands.
using GuardedList = std::vector<GuardedCommand>;

struct Command {
  enum class Kind { Skip, Assign, Seq, If, Do } kind;
  Label label = 0;   // Skip/Assign/If/Do
  std::string var;   // Assign target
  IntExprPtr rhs;    // Assign right-hand side
  CommandPtr c1, c2; // Seq components
  GuardedList gcs;   // If/Do branches
};

CommandPtr mk_skip(Label n);
CommandPtr mk_assign(Label n, const std::string& var, IntExprPtr rhs);
CommandPtr mk_seq(CommandPtr c, CommandPtr d);
CommandPtr mk_if(Label n, GuardedList gcs);
CommandPtr mk_do(Label n, GuardedList gcs);

// ---------------------------------------------------------------------------
// Structural equality and printing
// ---------------------------------------------------------------------------

bool equal(const IntExprPtr& a, const IntExprPtr& b);
bool equal(const BoolExprPtr& a, const BoolExprPtr& b);
bool equal(const CommandPtr& a, const CommandPtr& b);
bool equal_gcs(const GuardedList& a, const GuardedList& b);

std::string to_string(const IntExprPtr& e);
std::string to_string(const BoolExprPtr& e);
// Surface syntax with explicit @n labels; parse(to_string(c)) == c.
std::string to_string(const CommandPtr& c);
std::string to_string_gcs(const GuardedList& gcs);

// Variables occurring anywhere in the expression/command.
void collect_vars(const IntExprPtr& e, std::set<std::string>& out);
void collect_vars(const BoolExprPtr& e, std::set<std::string>& out);
void collect_vars(const CommandPtr& c, std::set<std::string>& out);
bool occurs(const std::string& x, const CommandPtr& c);

} // namespace rvwb

#endif
