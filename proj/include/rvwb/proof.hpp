// Hoare-logic and relational-Hoare-logic judgments, proof trees, the
// structural proof checker with oracle-backed obligations, derived-rule
// expansion, the two completeness-theorem proof synthesizers, and JSON
// (de)serialization of trees.
#ifndef RVWB_PROOF_HPP
#define RVWB_PROOF_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/formula.hpp"
#include "rvwb/store.hpp"
#include "rvwb/verdict.hpp"

namespace rvwb {

enum class Rule {
  // unary
  Skip, Asgn, Seq, If, Do, Conseq, False, Rewrite, Ghost,
  // relational
  DSkip, DAsgn, AsgnSkip, SkipAsgn, DSeq, DIf, DDo,
  RConseq, RDisj, RFalse, RRewrite, RGhost,
  // derived
  RDisjN, SeqSkip, IfSkip, DoSkip, AlgnIf,
};

std::string to_string(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);
bool is_derived(Rule r);
bool is_relational_rule(Rule r);

// c : {P}{Q}  or  c|c' : {R}{S}.
struct Judgment {
  bool relational = false;
  CommandPtr c, c2; // c2 null for unary judgments
  StoreFormulaPtr pre_u, post_u;
  RelFormulaPtr pre_r, post_r;

  static Judgment unary(CommandPtr c, StoreFormulaPtr pre, StoreFormulaPtr post);
  static Judgment rel(CommandPtr c, CommandPtr c2, RelFormulaPtr pre,
                      RelFormulaPtr post);
};

// A checkable side requirement attached to a rule application.
struct Obligation {
  enum class Kind {
    EntailUnary,   // u_lhs => u_rhs
    EntailRel,     // r_lhs => r_rhs
    Equivalence,   // eq_lhs ~ eq_rhs (bounded semantic check)
    GhostCheck,    // var is ghost in subject
    IndepUnary,    // u_lhs independent of var
    IndepRel,      // r_lhs independent of var|var2
    SideCondition, // r_lhs => r_rhs (loop-alignment side condition)
  } kind;
  std::string id;
  StoreFormulaPtr u_lhs, u_rhs;
  RelFormulaPtr r_lhs, r_rhs;
  CommandPtr eq_lhs, eq_rhs;
  std::string var, var2;
  CommandPtr subject;

  std::string describe() const;
};

struct ProofTree;
using ProofTreePtr = std::shared_ptr<ProofTree>;

struct ProofTree {
  Rule rule = Rule::Skip;
  Judgment conclusion;
  std::vector<ProofTreePtr> premises;
  // Derived by the checker from the rule schema; stored copies are
  // informational (serialization) and are not trusted.
  std::vector<Obligation> obligations;

  // Rule-specific instantiation data.
  RelFormulaPtr aux_l, aux_r;        // loop-alignment rule: the L/R relations
  std::string ghost_var, ghost_var2; // ghost-elimination rules
  std::string pc_hint;               // rewrite rules: pc used (strict mode)
};

ProofTreePtr mk_node(Rule rule, Judgment conclusion,
                     std::vector<ProofTreePtr> premises = {});

struct CheckOptions {
  // When set, rewrite obligations are accepted only for the certified
  // equivalence shapes (skip laws, trivial branch/loop collapse, the
  // normal-form equation, and the instrumentation-erasure collapse) instead
  // of being re-checked semantically.
  bool strict_rewrites = false;
};

// Structural check of every node against its rule schema plus discharge of
// all derived obligations over the bound.  Counterexample details carry the
// path to the offending node.
Verdict check_proof(const ProofTreePtr& t, const DomainBound& bound,
                    const CheckOptions& opts = {});

// The obligations the rule schema assigns to this node (not recursive).
std::vector<Obligation> derive_obligations(const ProofTree& t);

// Replace every derived-rule node by its primitive derivation; identity on
// primitive-only trees.  Conclusions are preserved node-for-node.
ProofTreePtr expand_derived(const ProofTreePtr& t);

// Floyd-completeness construction: from a valid annotation of aut(c, f),
// a proof of c : {an(lab(c))}{an(f)} using one Do node and no If node.
// Throws std::runtime_error when a verification condition fails, listing it.
ProofTreePtr synthesize_unary(const CommandPtr& c, Label f,
                              const UnaryAnnotation& an, const std::string& pc,
                              const DomainBound& bound);

// Alignment-completeness construction: from an adequate aligned annotation,
// a proof of c|c' : {an(lab(c),lab(c'))}{an(f,f')}.  Throws
// std::runtime_error naming the failed hypothesis (VC discharge or the
// alignment coverage condition).
ProofTreePtr synthesize_relational(const CommandPtr& c, const CommandPtr& c2,
                                   Label f, Label f2, const StateRelSpec& l,
                                   const StateRelSpec& r, const StateRelSpec& j,
                                   const RelAnnotation& an,
                                   const std::string& pc,
                                   const DomainBound& bound);

// JSON document: commands and formulas are interned into shared def tables
// (referenced by index, so subterms reused across nodes are written once);
// the tree itself is root = {rule, conclusion, obligations[], children[]},
// with the root conclusion also rendered in surface syntax.
std::string proof_to_json(const ProofTreePtr& t);
ProofTreePtr proof_from_json(const std::string& text);

} // namespace rvwb

#endif
