#include "rvwb/eval.hpp"

namespace rvwb {

int64_t eval_int(const IntExprPtr& e, const Store& s) {
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return e->lit;
    case IntExpr::Kind::Var:
      return s.get(e->var);
    case IntExpr::Kind::Bin: {
      int64_t a = eval_int(e->lhs, s), b = eval_int(e->rhs, s);
      switch (e->op) {
        case IntOp::Add: return a + b;
        case IntOp::Sub: return a - b;
        case IntOp::Mul: return a * b;
        case IntOp::Mod: return b == 0 ? 0 : a % b;
      }
    }
  }
  return 0;
}

bool eval_bool(const BoolExprPtr& e, const Store& s) {
  switch (e->kind) {
    case BoolExpr::Kind::True:
      return true;
    case BoolExpr::Kind::False:
      return false;
    case BoolExpr::Kind::Cmp: {
      int64_t a = eval_int(e->il, s), b = eval_int(e->ir, s);
      switch (e->cmp) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
      }
      return false;
    }
    case BoolExpr::Kind::And:
      return eval_bool(e->bl, s) && eval_bool(e->br, s);
    case BoolExpr::Kind::Or:
      return eval_bool(e->bl, s) || eval_bool(e->br, s);
    case BoolExpr::Kind::Not:
      return !eval_bool(e->bl, s);
  }
  return false;
}

} // namespace rvwb
