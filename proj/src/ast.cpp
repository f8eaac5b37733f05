#include "rvwb/ast.hpp"

#include <sstream>

namespace rvwb {

IntExprPtr int_lit(int64_t v) {
  auto e = std::make_shared<IntExpr>();
  e->kind = IntExpr::Kind::Lit;
  e->lit = v;
  return e;
}

IntExprPtr int_var(const std::string& name) {
  auto e = std::make_shared<IntExpr>();
  e->kind = IntExpr::Kind::Var;
  e->var = name;
  return e;
}

IntExprPtr int_bin(IntOp op, IntExprPtr l, IntExprPtr r) {
  auto e = std::make_shared<IntExpr>();
  e->kind = IntExpr::Kind::Bin;
  e->op = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

BoolExprPtr bool_true() {
  static BoolExprPtr t = [] {
    auto e = std::make_shared<BoolExpr>();
    e->kind = BoolExpr::Kind::True;
    return e;
  }();
  return t;
}

BoolExprPtr bool_false() {
  static BoolExprPtr f = [] {
    auto e = std::make_shared<BoolExpr>();
    e->kind = BoolExpr::Kind::False;
    return e;
  }();
  return f;
}

BoolExprPtr bool_cmp(CmpOp op, IntExprPtr l, IntExprPtr r) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::Cmp;
  e->cmp = op;
  e->il = std::move(l);
  e->ir = std::move(r);
  return e;
}

BoolExprPtr bool_and(BoolExprPtr l, BoolExprPtr r) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::And;
  e->bl = std::move(l);
  e->br = std::move(r);
  return e;
}

BoolExprPtr bool_or(BoolExprPtr l, BoolExprPtr r) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::Or;
  e->bl = std::move(l);
  e->br = std::move(r);
  return e;
}

BoolExprPtr bool_not(BoolExprPtr b) {
  auto e = std::make_shared<BoolExpr>();
  e->kind = BoolExpr::Kind::Not;
  e->bl = std::move(b);
  return e;
}

BoolExprPtr bool_complement(BoolExprPtr b) {
  if (b->kind == BoolExpr::Kind::Not) return b->bl;
  return bool_not(std::move(b));
}

CommandPtr mk_skip(Label n) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Skip;
  c->label = n;
  return c;
}

CommandPtr mk_assign(Label n, const std::string& var, IntExprPtr rhs) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Assign;
  c->label = n;
  c->var = var;
  c->rhs = std::move(rhs);
  return c;
}

CommandPtr mk_seq(CommandPtr a, CommandPtr b) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Seq;
  c->c1 = std::move(a);
  c->c2 = std::move(b);
  return c;
}

CommandPtr mk_if(Label n, GuardedList gcs) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::If;
  c->label = n;
  c->gcs = std::move(gcs);
  return c;
}

CommandPtr mk_do(Label n, GuardedList gcs) {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::Do;
  c->label = n;
  c->gcs = std::move(gcs);
  return c;
}

bool equal(const IntExprPtr& a, const IntExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case IntExpr::Kind::Lit: return a->lit == b->lit;
    case IntExpr::Kind::Var: return a->var == b->var;
    case IntExpr::Kind::Bin:
      return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

bool equal(const BoolExprPtr& a, const BoolExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False: return true;
    case BoolExpr::Kind::Cmp:
      return a->cmp == b->cmp && equal(a->il, b->il) && equal(a->ir, b->ir);
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      return equal(a->bl, b->bl) && equal(a->br, b->br);
    case BoolExpr::Kind::Not: return equal(a->bl, b->bl);
  }
  return false;
}

bool equal_gcs(const GuardedList& a, const GuardedList& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i].guard, b[i].guard) || !equal(a[i].body, b[i].body))
      return false;
  return true;
}

bool equal(const CommandPtr& a, const CommandPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Command::Kind::Skip: return a->label == b->label;
    case Command::Kind::Assign:
      return a->label == b->label && a->var == b->var && equal(a->rhs, b->rhs);
    case Command::Kind::Seq:
      return equal(a->c1, b->c1) && equal(a->c2, b->c2);
    case Command::Kind::If:
    case Command::Kind::Do:
      return a->label == b->label && equal_gcs(a->gcs, b->gcs);
  }
  return false;
}

// --- Printing ---------------------------------------------------------------

namespace {

// Precedence: Mul/Mod bind tighter than Add/Sub.
int prec(IntOp op) {
  return (op == IntOp::Mul || op == IntOp::Mod) ? 2 : 1;
}

const char* op_token(IntOp op) {
  switch (op) {
    case IntOp::Add: return "+";
    case IntOp::Sub: return "-";
    case IntOp::Mul: return "*";
    case IntOp::Mod: return "mod";
  }
  return "?";
}

const char* cmp_token(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

void print_int(std::ostringstream& os, const IntExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case IntExpr::Kind::Lit: os << e->lit; return;
    case IntExpr::Kind::Var: os << e->var; return;
    case IntExpr::Kind::Bin: {
      int p = prec(e->op);
      bool paren = p < parent_prec;
      if (paren) os << "(";
      // Left-associative: the right operand needs a strictly higher context.
      print_int(os, e->lhs, p);
      os << " " << op_token(e->op) << " ";
      print_int(os, e->rhs, p + 1);
      if (paren) os << ")";
      return;
    }
  }
}

// Boolean precedence: ! > && > ||.
void print_bool(std::ostringstream& os, const BoolExprPtr& e, int parent_prec) {
  switch (e->kind) {
    case BoolExpr::Kind::True: os << "true"; return;
    case BoolExpr::Kind::False: os << "false"; return;
    case BoolExpr::Kind::Cmp: {
      print_int(os, e->il, 0);
      os << " " << cmp_token(e->cmp) << " ";
      print_int(os, e->ir, 0);
      return;
    }
    case BoolExpr::Kind::And: {
      bool paren = parent_prec > 2;
      if (paren) os << "(";
      print_bool(os, e->bl, 2);
      os << " && ";
      print_bool(os, e->br, 2);
      if (paren) os << ")";
      return;
    }
    case BoolExpr::Kind::Or: {
      bool paren = parent_prec > 1;
      if (paren) os << "(";
      print_bool(os, e->bl, 1);
      os << " || ";
      print_bool(os, e->br, 1);
      if (paren) os << ")";
      return;
    }
    case BoolExpr::Kind::Not: {
      os << "!";
      if (e->bl->kind == BoolExpr::Kind::True ||
          e->bl->kind == BoolExpr::Kind::False) {
        print_bool(os, e->bl, 3);
      } else {
        os << "(";
        print_bool(os, e->bl, 0);
        os << ")";
      }
      return;
    }
  }
}

void print_cmd(std::ostringstream& os, const CommandPtr& c);

void print_gcs(std::ostringstream& os, const GuardedList& gcs) {
  for (size_t i = 0; i < gcs.size(); ++i) {
    if (i) os << " [] ";
    print_bool(os, gcs[i].guard, 0);
    os << " -> ";
    print_cmd(os, gcs[i].body);
  }
}

void print_cmd(std::ostringstream& os, const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
      os << "skip@" << c->label;
      return;
    case Command::Kind::Assign:
      os << c->var << "@" << c->label << " := ";
      print_int(os, c->rhs, 0);
      return;
    case Command::Kind::Seq:
      print_cmd(os, c->c1);
      os << " ; ";
      print_cmd(os, c->c2);
      return;
    case Command::Kind::If:
      os << "if@" << c->label << " ";
      print_gcs(os, c->gcs);
      os << " fi";
      return;
    case Command::Kind::Do:
      os << "do@" << c->label << " ";
      print_gcs(os, c->gcs);
      os << " od";
      return;
  }
}

} // namespace

std::string to_string(const IntExprPtr& e) {
  std::ostringstream os;
  print_int(os, e, 0);
  return os.str();
}

std::string to_string(const BoolExprPtr& e) {
  std::ostringstream os;
  print_bool(os, e, 0);
  return os.str();
}

std::string to_string(const CommandPtr& c) {
  std::ostringstream os;
  print_cmd(os, c);
  return os.str();
}

std::string to_string_gcs(const GuardedList& gcs) {
  std::ostringstream os;
  print_gcs(os, gcs);
  return os.str();
}

void collect_vars(const IntExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case IntExpr::Kind::Lit: return;
    case IntExpr::Kind::Var: out.insert(e->var); return;
    case IntExpr::Kind::Bin:
      collect_vars(e->lhs, out);
      collect_vars(e->rhs, out);
      return;
  }
}

void collect_vars(const BoolExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False: return;
    case BoolExpr::Kind::Cmp:
      collect_vars(e->il, out);
      collect_vars(e->ir, out);
      return;
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      collect_vars(e->bl, out);
      collect_vars(e->br, out);
      return;
    case BoolExpr::Kind::Not: collect_vars(e->bl, out); return;
  }
}

void collect_vars(const CommandPtr& c, std::set<std::string>& out) {
  switch (c->kind) {
    case Command::Kind::Skip: return;
    case Command::Kind::Assign:
      out.insert(c->var);
      collect_vars(c->rhs, out);
      return;
    case Command::Kind::Seq:
      collect_vars(c->c1, out);
      collect_vars(c->c2, out);
      return;
    case Command::Kind::If:
    case Command::Kind::Do:
      for (const auto& gc : c->gcs) {
        collect_vars(gc.guard, out);
        collect_vars(gc.body, out);
      }
      return;
  }
}

bool occurs(const std::string& x, const CommandPtr& c) {
  std::set<std::string> vars;
  collect_vars(c, vars);
  return vars.count(x) != 0;
}

} // namespace rvwb
