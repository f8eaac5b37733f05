// Structured text format for specifications: pre/post formulas, per-control
// annotations, and alignment conditions with control patterns.
#ifndef RVWB_SPECFILE_HPP
#define RVWB_SPECFILE_HPP

#include <string>

#include "rvwb/formula.hpp"

namespace rvwb {

// A parsed spec file.  `relational` is inferred from the contents: any
// alignment section, a paired annotation key "n,m", or a pre/post using the
// relational atoms lhs/rhs/eq/ne/lt/le/gt/ge.
struct SpecFile {
  bool relational = false;

  // [spec]
  StoreFormulaPtr pre_u, post_u; // unary files
  RelFormulaPtr pre_r, post_r;   // relational files

  // [annotation]
  bool has_annotation = false;
  UnaryAnnotation an_u;
  RelAnnotation an_r;

  // [align.L] / [align.R] / [align.J]
  bool has_align = false;
  StateRelSpec align_l, align_r, align_j;
};

// Relational formula surface syntax:
//   lhs(e) rhs(e) eq(e,e') ne(..) lt(..) le(..) gt(..) ge(..)
//   && || !  true false  parentheses
RelFormulaPtr parse_rel_formula(const std::string& text);

// Unary formulas are bare boolean expressions.
StoreFormulaPtr parse_store_formula(const std::string& text);

// Throws std::runtime_error with a line number on malformed input.
SpecFile parse_specfile(const std::string& text);
SpecFile load_specfile(const std::string& path);

} // namespace rvwb

#endif
