// Expression evaluation.  mod follows the sign of the dividend (C semantics)
// and mod 0 yields 0, so every expression is total.
#ifndef RVWB_EVAL_HPP
#define RVWB_EVAL_HPP

#include "rvwb/ast.hpp"
#include "rvwb/store.hpp"

namespace rvwb {

int64_t eval_int(const IntExprPtr& e, const Store& s);
bool eval_bool(const BoolExprPtr& e, const Store& s);

} // namespace rvwb

#endif
