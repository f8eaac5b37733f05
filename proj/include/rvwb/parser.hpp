// Recursive-descent parser for the surface syntax of labeled guarded commands.
//
// Grammar (ASCII):
//   cmd  ::= atom (';' cmd)?
//   atom ::= 'skip' ('@' INT)?
//          | IDENT ('@' INT)? ':=' iexp
//          | 'if' ('@' INT)? gcs 'fi'
//          | 'do' ('@' INT)? gcs 'od'
//          | '(' cmd ')'
//   gcs  ::= bexp '->' cmd ('[]' bexp '->' cmd)*
//   bexp ::= disjunction over '||', '&&', '!', comparisons, 'true', 'false'
//   iexp ::= '+'/'-' over '*'/'mod' over INT | IDENT | '(' iexp ')'
// Comments run from '#' to end of line.
//
// Unlabeled nodes receive fresh positive labels in preorder starting from 1
// (skipping any explicitly used label); explicit labels must be positive and
// globally unique.
#ifndef RVWB_PARSER_HPP
#define RVWB_PARSER_HPP

#include <stdexcept>
#include <string>

#include "rvwb/ast.hpp"

namespace rvwb {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line, col;
};

CommandPtr parse_program(const std::string& text);

// Expression-only entry points (used by the spec-file reader).
IntExprPtr parse_int_expr(const std::string& text);
BoolExprPtr parse_bool_expr(const std::string& text);

} // namespace rvwb

#endif
