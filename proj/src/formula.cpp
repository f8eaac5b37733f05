#include "rvwb/formula.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>

namespace rvwb {

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace {
StoreFormulaPtr mk_sf(StoreFormula f) {
  return std::make_shared<const StoreFormula>(std::move(f));
}
RelFormulaPtr mk_rf(RelFormula f) {
  return std::make_shared<const RelFormula>(std::move(f));
}
} // namespace

StoreFormulaPtr sf_true() {
  static StoreFormulaPtr t = mk_sf({StoreFormula::Kind::True});
  return t;
}
StoreFormulaPtr sf_false() {
  static StoreFormulaPtr f = mk_sf({StoreFormula::Kind::False});
  return f;
}
StoreFormulaPtr sf_embed(BoolExprPtr e) {
  StoreFormula f{StoreFormula::Kind::Embed};
  f.embed = std::move(e);
  return mk_sf(std::move(f));
}
StoreFormulaPtr sf_and(StoreFormulaPtr a, StoreFormulaPtr b) {
  StoreFormula f{StoreFormula::Kind::And};
  f.l = std::move(a);
  f.r = std::move(b);
  return mk_sf(std::move(f));
}
StoreFormulaPtr sf_or(StoreFormulaPtr a, StoreFormulaPtr b) {
  StoreFormula f{StoreFormula::Kind::Or};
  f.l = std::move(a);
  f.r = std::move(b);
  return mk_sf(std::move(f));
}
StoreFormulaPtr sf_not(StoreFormulaPtr a) {
  StoreFormula f{StoreFormula::Kind::Not};
  f.l = std::move(a);
  return mk_sf(std::move(f));
}
StoreFormulaPtr subst_store(StoreFormulaPtr p, const std::string& x,
                            IntExprPtr e) {
  StoreFormula f{StoreFormula::Kind::Subst};
  f.l = std::move(p);
  f.var = x;
  f.expr = std::move(e);
  return mk_sf(std::move(f));
}
StoreFormulaPtr sf_ext(std::shared_ptr<const StoreSet> set) {
  StoreFormula f{StoreFormula::Kind::Ext};
  f.ext = std::move(set);
  return mk_sf(std::move(f));
}

RelFormulaPtr rf_true() {
  static RelFormulaPtr t = mk_rf({RelFormula::Kind::True});
  return t;
}
RelFormulaPtr rf_false() {
  static RelFormulaPtr f = mk_rf({RelFormula::Kind::False});
  return f;
}
RelFormulaPtr rf_left(BoolExprPtr e) {
  RelFormula f{RelFormula::Kind::Left};
  f.embed = std::move(e);
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_right(BoolExprPtr e) {
  RelFormula f{RelFormula::Kind::Right};
  f.embed = std::move(e);
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_cross(CmpOp op, IntExprPtr left_e, IntExprPtr right_e) {
  RelFormula f{RelFormula::Kind::Cross};
  f.cmp = op;
  f.le = std::move(left_e);
  f.re = std::move(right_e);
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_and(RelFormulaPtr a, RelFormulaPtr b) {
  RelFormula f{RelFormula::Kind::And};
  f.l = std::move(a);
  f.r = std::move(b);
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_or(RelFormulaPtr a, RelFormulaPtr b) {
  RelFormula f{RelFormula::Kind::Or};
  f.l = std::move(a);
  f.r = std::move(b);
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_not(RelFormulaPtr a) {
  RelFormula f{RelFormula::Kind::Not};
  f.l = std::move(a);
  return mk_rf(std::move(f));
}
RelFormulaPtr subst_rel(RelFormulaPtr rf,
                        std::optional<std::pair<std::string, IntExprPtr>> left,
                        std::optional<std::pair<std::string, IntExprPtr>> right) {
  if (!left && !right) return rf;
  RelFormula f{RelFormula::Kind::Subst};
  f.l = std::move(rf);
  if (left) {
    f.has_l = true;
    f.lvar = left->first;
    f.lexpr = left->second;
  }
  if (right) {
    f.has_r = true;
    f.rvar = right->first;
    f.rexpr = right->second;
  }
  return mk_rf(std::move(f));
}
RelFormulaPtr rf_ext(std::shared_ptr<const StorePairSet> set) {
  RelFormula f{RelFormula::Kind::Ext};
  f.ext = std::move(set);
  return mk_rf(std::move(f));
}

RelFormulaPtr rf_and_all(const std::vector<RelFormulaPtr>& fs) {
  if (fs.empty()) return rf_true();
  RelFormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = rf_and(out, fs[i]);
  return out;
}
RelFormulaPtr rf_or_all(const std::vector<RelFormulaPtr>& fs) {
  if (fs.empty()) return rf_false();
  RelFormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = rf_or(out, fs[i]);
  return out;
}
StoreFormulaPtr sf_and_all(const std::vector<StoreFormulaPtr>& fs) {
  if (fs.empty()) return sf_true();
  StoreFormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = sf_and(out, fs[i]);
  return out;
}
StoreFormulaPtr sf_or_all(const std::vector<StoreFormulaPtr>& fs) {
  if (fs.empty()) return sf_false();
  StoreFormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = sf_or(out, fs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {
Store project(const Store& s, const std::vector<std::string>& vs) {
  Store p;
  for (const auto& v : vs) p.vals[v] = s.get(v);
  return p;
}
} // namespace

bool eval_store_formula(const StoreFormulaPtr& p, const Store& s) {
  switch (p->kind) {
    case StoreFormula::Kind::True:
      return true;
    case StoreFormula::Kind::False:
      return false;
    case StoreFormula::Kind::Embed:
      return eval_bool(p->embed, s);
    case StoreFormula::Kind::And:
      return eval_store_formula(p->l, s) && eval_store_formula(p->r, s);
    case StoreFormula::Kind::Or:
      return eval_store_formula(p->l, s) || eval_store_formula(p->r, s);
    case StoreFormula::Kind::Not:
      return !eval_store_formula(p->l, s);
    case StoreFormula::Kind::Subst:
      return eval_store_formula(p->l, s.with(p->var, eval_int(p->expr, s)));
    case StoreFormula::Kind::Ext:
      return p->ext->members.count(project(s, p->ext->vars)) != 0;
  }
  return false;
}

bool eval_rel_formula(const RelFormulaPtr& p, const Store& s, const Store& t) {
  switch (p->kind) {
    case RelFormula::Kind::True:
      return true;
    case RelFormula::Kind::False:
      return false;
    case RelFormula::Kind::Left:
      return eval_bool(p->embed, s);
    case RelFormula::Kind::Right:
      return eval_bool(p->embed, t);
    case RelFormula::Kind::Cross: {
      int64_t a = eval_int(p->le, s), b = eval_int(p->re, t);
      switch (p->cmp) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
      }
      return false;
    }
    case RelFormula::Kind::And:
      return eval_rel_formula(p->l, s, t) && eval_rel_formula(p->r, s, t);
    case RelFormula::Kind::Or:
      return eval_rel_formula(p->l, s, t) || eval_rel_formula(p->r, s, t);
    case RelFormula::Kind::Not:
      return !eval_rel_formula(p->l, s, t);
    case RelFormula::Kind::Subst: {
      Store s2 = p->has_l ? s.with(p->lvar, eval_int(p->lexpr, s)) : s;
      Store t2 = p->has_r ? t.with(p->rvar, eval_int(p->rexpr, t)) : t;
      return eval_rel_formula(p->l, s2, t2);
    }
    case RelFormula::Kind::Ext:
      return p->ext->members.count({project(s, p->ext->lvars),
                                    project(t, p->ext->rvars)}) != 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Variable collection
// ---------------------------------------------------------------------------

void collect_vars(const StoreFormulaPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case StoreFormula::Kind::True:
    case StoreFormula::Kind::False:
      return;
    case StoreFormula::Kind::Embed:
      collect_vars(p->embed, out);
      return;
    case StoreFormula::Kind::And:
    case StoreFormula::Kind::Or:
      collect_vars(p->l, out);
      collect_vars(p->r, out);
      return;
    case StoreFormula::Kind::Not:
      collect_vars(p->l, out);
      return;
    case StoreFormula::Kind::Subst:
      collect_vars(p->l, out);
      out.insert(p->var);
      collect_vars(p->expr, out);
      return;
    case StoreFormula::Kind::Ext:
      out.insert(p->ext->vars.begin(), p->ext->vars.end());
      return;
  }
}

namespace {
void collect_vars_side(const RelFormulaPtr& p, bool left,
                       std::set<std::string>& out) {
  switch (p->kind) {
    case RelFormula::Kind::True:
    case RelFormula::Kind::False:
      return;
    case RelFormula::Kind::Left:
      if (left) collect_vars(p->embed, out);
      return;
    case RelFormula::Kind::Right:
      if (!left) collect_vars(p->embed, out);
      return;
    case RelFormula::Kind::Cross:
      collect_vars(left ? p->le : p->re, out);
      return;
    case RelFormula::Kind::And:
    case RelFormula::Kind::Or:
      collect_vars_side(p->l, left, out);
      collect_vars_side(p->r, left, out);
      return;
    case RelFormula::Kind::Not:
      collect_vars_side(p->l, left, out);
      return;
    case RelFormula::Kind::Subst:
      collect_vars_side(p->l, left, out);
      if (left && p->has_l) {
        out.insert(p->lvar);
        collect_vars(p->lexpr, out);
      }
      if (!left && p->has_r) {
        out.insert(p->rvar);
        collect_vars(p->rexpr, out);
      }
      return;
    case RelFormula::Kind::Ext: {
      const auto& vs = left ? p->ext->lvars : p->ext->rvars;
      out.insert(vs.begin(), vs.end());
      return;
    }
  }
}
} // namespace

void collect_vars_left(const RelFormulaPtr& p, std::set<std::string>& out) {
  collect_vars_side(p, true, out);
}
void collect_vars_right(const RelFormulaPtr& p, std::set<std::string>& out) {
  collect_vars_side(p, false, out);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {
const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "eq";
    case CmpOp::Ne: return "ne";
    case CmpOp::Lt: return "lt";
    case CmpOp::Le: return "le";
    case CmpOp::Gt: return "gt";
    case CmpOp::Ge: return "ge";
  }
  return "?";
}
} // namespace

std::string to_string(const StoreFormulaPtr& p) {
  switch (p->kind) {
    case StoreFormula::Kind::True:
      return "true";
    case StoreFormula::Kind::False:
      return "false";
    case StoreFormula::Kind::Embed:
      return to_string(p->embed);
    case StoreFormula::Kind::And:
      return "(" + to_string(p->l) + " && " + to_string(p->r) + ")";
    case StoreFormula::Kind::Or:
      return "(" + to_string(p->l) + " || " + to_string(p->r) + ")";
    case StoreFormula::Kind::Not:
      return "!(" + to_string(p->l) + ")";
    case StoreFormula::Kind::Subst:
      return to_string(p->l) + "[" + p->var + " := " + to_string(p->expr) + "]";
    case StoreFormula::Kind::Ext:
      return "{set:" + std::to_string(p->ext->members.size()) + "}";
  }
  return "?";
}

std::string to_string(const RelFormulaPtr& p) {
  switch (p->kind) {
    case RelFormula::Kind::True:
      return "true";
    case RelFormula::Kind::False:
      return "false";
    case RelFormula::Kind::Left:
      return "lhs(" + to_string(p->embed) + ")";
    case RelFormula::Kind::Right:
      return "rhs(" + to_string(p->embed) + ")";
    case RelFormula::Kind::Cross:
      return std::string(cmp_name(p->cmp)) + "(" + to_string(p->le) + ", " +
             to_string(p->re) + ")";
    case RelFormula::Kind::And:
      return "(" + to_string(p->l) + " && " + to_string(p->r) + ")";
    case RelFormula::Kind::Or:
      return "(" + to_string(p->l) + " || " + to_string(p->r) + ")";
    case RelFormula::Kind::Not:
      return "!(" + to_string(p->l) + ")";
    case RelFormula::Kind::Subst: {
      std::string lv = p->has_l ? p->lvar : "-";
      std::string rv = p->has_r ? p->rvar : "-";
      std::string le = p->has_l ? to_string(p->lexpr) : "-";
      std::string re = p->has_r ? to_string(p->rexpr) : "-";
      return to_string(p->l) + "[" + lv + "|" + rv + " := " + le + "|" + re +
             "]";
    }
    case RelFormula::Kind::Ext:
      return "{pairset:" + std::to_string(p->ext->members.size()) + "}";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool equal(const StoreFormulaPtr& a, const StoreFormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StoreFormula::Kind::True:
    case StoreFormula::Kind::False:
      return true;
    case StoreFormula::Kind::Embed:
      return equal(a->embed, b->embed);
    case StoreFormula::Kind::And:
    case StoreFormula::Kind::Or:
      return equal(a->l, b->l) && equal(a->r, b->r);
    case StoreFormula::Kind::Not:
      return equal(a->l, b->l);
    case StoreFormula::Kind::Subst:
      return a->var == b->var && equal(a->expr, b->expr) && equal(a->l, b->l);
    case StoreFormula::Kind::Ext:
      return a->ext == b->ext ||
             (a->ext->vars == b->ext->vars &&
              a->ext->members == b->ext->members);
  }
  return false;
}

bool equal(const RelFormulaPtr& a, const RelFormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case RelFormula::Kind::True:
    case RelFormula::Kind::False:
      return true;
    case RelFormula::Kind::Left:
    case RelFormula::Kind::Right:
      return equal(a->embed, b->embed);
    case RelFormula::Kind::Cross:
      return a->cmp == b->cmp && equal(a->le, b->le) && equal(a->re, b->re);
    case RelFormula::Kind::And:
    case RelFormula::Kind::Or:
      return equal(a->l, b->l) && equal(a->r, b->r);
    case RelFormula::Kind::Not:
      return equal(a->l, b->l);
    case RelFormula::Kind::Subst:
      if (a->has_l != b->has_l || a->has_r != b->has_r) return false;
      if (a->has_l && (a->lvar != b->lvar || !equal(a->lexpr, b->lexpr)))
        return false;
      if (a->has_r && (a->rvar != b->rvar || !equal(a->rexpr, b->rexpr)))
        return false;
      return equal(a->l, b->l);
    case RelFormula::Kind::Ext:
      return a->ext == b->ext ||
             (a->ext->lvars == b->ext->lvars && a->ext->rvars == b->ext->rvars &&
              a->ext->members == b->ext->members);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Control patterns
// ---------------------------------------------------------------------------

RelFormulaPtr StateRelSpec::at(Label n, Label n2) const {
  std::vector<RelFormulaPtr> matches;
  for (const auto& cl : clauses) {
    if (cl.left && *cl.left != n) continue;
    if (cl.right && *cl.right != n2) continue;
    matches.push_back(cl.formula ? cl.formula : rf_true());
  }
  return rf_or_all(matches);
}

bool StateRelSpec::holds(Label n, Label n2, const Store& s,
                         const Store& t) const {
  for (const auto& cl : clauses) {
    if (cl.left && *cl.left != n) continue;
    if (cl.right && *cl.right != n2) continue;
    if (!cl.formula || eval_rel_formula(cl.formula, s, t)) return true;
  }
  return false;
}

bool StateRelSpec::mentions(Label n, Label n2) const {
  for (const auto& cl : clauses) {
    if (cl.left && *cl.left != n) continue;
    if (cl.right && *cl.right != n2) continue;
    return true;
  }
  return false;
}

RelFormulaPtr encode_pc(const StateRelSpec& spec, const std::string& pc) {
  std::vector<RelFormulaPtr> parts;
  for (const auto& cl : spec.clauses) {
    std::vector<RelFormulaPtr> conj;
    if (cl.left)
      conj.push_back(rf_left(
          bool_cmp(CmpOp::Eq, int_var(pc), int_lit(*cl.left))));
    if (cl.right)
      conj.push_back(rf_right(
          bool_cmp(CmpOp::Eq, int_var(pc), int_lit(*cl.right))));
    if (cl.formula) conj.push_back(cl.formula);
    parts.push_back(rf_and_all(conj));
  }
  return rf_or_all(parts);
}

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

StoreFormulaPtr UnaryAnnotation::get(Label n) const {
  auto it = at.find(n);
  return it == at.end() ? sf_false() : it->second;
}

RelFormulaPtr RelAnnotation::get(Label n, Label n2) const {
  auto it = at.find({n, n2});
  return it == at.end() ? rf_false() : it->second;
}

// ---------------------------------------------------------------------------
// Constant folding and pin specialization
// ---------------------------------------------------------------------------

namespace {

using PinMap = std::map<std::string, int64_t>;

IntExprPtr fold_int(const IntExprPtr& e, const PinMap& pins) {
  switch (e->kind) {
    case IntExpr::Kind::Lit:
      return e;
    case IntExpr::Kind::Var: {
      auto it = pins.find(e->var);
      return it == pins.end() ? e : int_lit(it->second);
    }
    case IntExpr::Kind::Bin: {
      IntExprPtr a = fold_int(e->lhs, pins), b = fold_int(e->rhs, pins);
      if (a->kind == IntExpr::Kind::Lit && b->kind == IntExpr::Kind::Lit) {
        Store empty;
        return int_lit(eval_int(int_bin(e->op, a, b), empty));
      }
      if (a.get() == e->lhs.get() && b.get() == e->rhs.get()) return e;
      return int_bin(e->op, a, b);
    }
  }
  return e;
}

BoolExprPtr fold_bool(const BoolExprPtr& e, const PinMap& pins) {
  switch (e->kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return e;
    case BoolExpr::Kind::Cmp: {
      IntExprPtr a = fold_int(e->il, pins), b = fold_int(e->ir, pins);
      if (a->kind == IntExpr::Kind::Lit && b->kind == IntExpr::Kind::Lit) {
        Store empty;
        return eval_bool(bool_cmp(e->cmp, a, b), empty) ? bool_true()
                                                        : bool_false();
      }
      if (a.get() == e->il.get() && b.get() == e->ir.get()) return e;
      return bool_cmp(e->cmp, a, b);
    }
    case BoolExpr::Kind::And: {
      BoolExprPtr a = fold_bool(e->bl, pins), b = fold_bool(e->br, pins);
      if (a->kind == BoolExpr::Kind::False || b->kind == BoolExpr::Kind::False)
        return bool_false();
      if (a->kind == BoolExpr::Kind::True) return b;
      if (b->kind == BoolExpr::Kind::True) return a;
      if (a.get() == e->bl.get() && b.get() == e->br.get()) return e;
      return bool_and(a, b);
    }
    case BoolExpr::Kind::Or: {
      BoolExprPtr a = fold_bool(e->bl, pins), b = fold_bool(e->br, pins);
      if (a->kind == BoolExpr::Kind::True || b->kind == BoolExpr::Kind::True)
        return bool_true();
      if (a->kind == BoolExpr::Kind::False) return b;
      if (b->kind == BoolExpr::Kind::False) return a;
      if (a.get() == e->bl.get() && b.get() == e->br.get()) return e;
      return bool_or(a, b);
    }
    case BoolExpr::Kind::Not: {
      BoolExprPtr a = fold_bool(e->bl, pins);
      if (a->kind == BoolExpr::Kind::True) return bool_false();
      if (a->kind == BoolExpr::Kind::False) return bool_true();
      if (a.get() == e->bl.get()) return e;
      return bool_not(a);
    }
  }
  return e;
}

// Whether the formula contains a set-backed atom over `var`.  Substituting a
// literal for `var` cannot be folded into such an atom, so the substitution
// node must be kept to bind the variable at evaluation time.
bool ext_mentions(const StoreFormulaPtr& p, const std::string& var) {
  switch (p->kind) {
    case StoreFormula::Kind::True:
    case StoreFormula::Kind::False:
    case StoreFormula::Kind::Embed:
      return false;
    case StoreFormula::Kind::And:
    case StoreFormula::Kind::Or:
      return ext_mentions(p->l, var) || ext_mentions(p->r, var);
    case StoreFormula::Kind::Not:
      return ext_mentions(p->l, var);
    case StoreFormula::Kind::Subst:
      return p->var != var && ext_mentions(p->l, var);
    case StoreFormula::Kind::Ext:
      for (const auto& v : p->ext->vars)
        if (v == var) return true;
      return false;
  }
  return false;
}

bool ext_mentions_rel(const RelFormulaPtr& p, bool left,
                      const std::string& var) {
  switch (p->kind) {
    case RelFormula::Kind::True:
    case RelFormula::Kind::False:
    case RelFormula::Kind::Left:
    case RelFormula::Kind::Right:
    case RelFormula::Kind::Cross:
      return false;
    case RelFormula::Kind::And:
    case RelFormula::Kind::Or:
      return ext_mentions_rel(p->l, left, var) ||
             ext_mentions_rel(p->r, left, var);
    case RelFormula::Kind::Not:
      return ext_mentions_rel(p->l, left, var);
    case RelFormula::Kind::Subst:
      if (left && p->has_l && p->lvar == var) return false;
      if (!left && p->has_r && p->rvar == var) return false;
      return ext_mentions_rel(p->l, left, var);
    case RelFormula::Kind::Ext: {
      const auto& vs = left ? p->ext->lvars : p->ext->rvars;
      for (const auto& v : vs)
        if (v == var) return true;
      return false;
    }
  }
  return false;
}

StoreFormulaPtr embed_or_const(BoolExprPtr e) {
  if (e->kind == BoolExpr::Kind::True) return sf_true();
  if (e->kind == BoolExpr::Kind::False) return sf_false();
  return sf_embed(std::move(e));
}

StoreFormulaPtr specialize_store(const StoreFormulaPtr& p, const PinMap& pins) {
  if (pins.empty()) return p;
  switch (p->kind) {
    case StoreFormula::Kind::True:
    case StoreFormula::Kind::False:
    case StoreFormula::Kind::Ext:
      return p;
    case StoreFormula::Kind::Embed:
      return embed_or_const(fold_bool(p->embed, pins));
    case StoreFormula::Kind::And: {
      StoreFormulaPtr a = specialize_store(p->l, pins);
      StoreFormulaPtr b = specialize_store(p->r, pins);
      if (a->kind == StoreFormula::Kind::False ||
          b->kind == StoreFormula::Kind::False)
        return sf_false();
      if (a->kind == StoreFormula::Kind::True) return b;
      if (b->kind == StoreFormula::Kind::True) return a;
      return sf_and(a, b);
    }
    case StoreFormula::Kind::Or: {
      StoreFormulaPtr a = specialize_store(p->l, pins);
      StoreFormulaPtr b = specialize_store(p->r, pins);
      if (a->kind == StoreFormula::Kind::True ||
          b->kind == StoreFormula::Kind::True)
        return sf_true();
      if (a->kind == StoreFormula::Kind::False) return b;
      if (b->kind == StoreFormula::Kind::False) return a;
      return sf_or(a, b);
    }
    case StoreFormula::Kind::Not: {
      StoreFormulaPtr a = specialize_store(p->l, pins);
      if (a->kind == StoreFormula::Kind::True) return sf_false();
      if (a->kind == StoreFormula::Kind::False) return sf_true();
      return sf_not(a);
    }
    case StoreFormula::Kind::Subst: {
      IntExprPtr e = fold_int(p->expr, pins);
      PinMap inner = pins;
      inner.erase(p->var);
      if (e->kind == IntExpr::Kind::Lit && !ext_mentions(p->l, p->var)) {
        // The bound variable becomes a known constant inside the body, so
        // the substitution node itself can be dropped.
        inner[p->var] = e->lit;
        return specialize_store(p->l, inner);
      }
      StoreFormulaPtr body =
          inner.empty() ? p->l : specialize_store(p->l, inner);
      if (body->kind == StoreFormula::Kind::True) return sf_true();
      if (body->kind == StoreFormula::Kind::False) return sf_false();
      return subst_store(body, p->var, e);
    }
  }
  return p;
}

struct RelPins {
  PinMap l, r;
  bool empty() const { return l.empty() && r.empty(); }
};

RelFormulaPtr specialize_rel(const RelFormulaPtr& p, const RelPins& pins) {
  if (pins.empty()) return p;
  switch (p->kind) {
    case RelFormula::Kind::True:
    case RelFormula::Kind::False:
    case RelFormula::Kind::Ext:
      return p;
    case RelFormula::Kind::Left: {
      BoolExprPtr e = fold_bool(p->embed, pins.l);
      if (e->kind == BoolExpr::Kind::True) return rf_true();
      if (e->kind == BoolExpr::Kind::False) return rf_false();
      return e.get() == p->embed.get() ? p : rf_left(e);
    }
    case RelFormula::Kind::Right: {
      BoolExprPtr e = fold_bool(p->embed, pins.r);
      if (e->kind == BoolExpr::Kind::True) return rf_true();
      if (e->kind == BoolExpr::Kind::False) return rf_false();
      return e.get() == p->embed.get() ? p : rf_right(e);
    }
    case RelFormula::Kind::Cross: {
      IntExprPtr a = fold_int(p->le, pins.l), b = fold_int(p->re, pins.r);
      if (a->kind == IntExpr::Kind::Lit && b->kind == IntExpr::Kind::Lit) {
        bool v = false;
        switch (p->cmp) {
          case CmpOp::Eq: v = a->lit == b->lit; break;
          case CmpOp::Ne: v = a->lit != b->lit; break;
          case CmpOp::Lt: v = a->lit < b->lit; break;
          case CmpOp::Le: v = a->lit <= b->lit; break;
          case CmpOp::Gt: v = a->lit > b->lit; break;
          case CmpOp::Ge: v = a->lit >= b->lit; break;
        }
        return v ? rf_true() : rf_false();
      }
      if (a.get() == p->le.get() && b.get() == p->re.get()) return p;
      return rf_cross(p->cmp, a, b);
    }
    case RelFormula::Kind::And: {
      RelFormulaPtr a = specialize_rel(p->l, pins);
      RelFormulaPtr b = specialize_rel(p->r, pins);
      if (a->kind == RelFormula::Kind::False ||
          b->kind == RelFormula::Kind::False)
        return rf_false();
      if (a->kind == RelFormula::Kind::True) return b;
      if (b->kind == RelFormula::Kind::True) return a;
      return rf_and(a, b);
    }
    case RelFormula::Kind::Or: {
      RelFormulaPtr a = specialize_rel(p->l, pins);
      RelFormulaPtr b = specialize_rel(p->r, pins);
      if (a->kind == RelFormula::Kind::True ||
          b->kind == RelFormula::Kind::True)
        return rf_true();
      if (a->kind == RelFormula::Kind::False) return b;
      if (b->kind == RelFormula::Kind::False) return a;
      return rf_or(a, b);
    }
    case RelFormula::Kind::Not: {
      RelFormulaPtr a = specialize_rel(p->l, pins);
      if (a->kind == RelFormula::Kind::True) return rf_false();
      if (a->kind == RelFormula::Kind::False) return rf_true();
      return rf_not(a);
    }
    case RelFormula::Kind::Subst: {
      RelPins inner = pins;
      std::optional<std::pair<std::string, IntExprPtr>> keep_l, keep_r;
      if (p->has_l) {
        IntExprPtr e = fold_int(p->lexpr, pins.l);
        inner.l.erase(p->lvar);
        if (e->kind == IntExpr::Kind::Lit &&
            !ext_mentions_rel(p->l, true, p->lvar))
          inner.l[p->lvar] = e->lit;
        else
          keep_l = {p->lvar, e};
      }
      if (p->has_r) {
        IntExprPtr e = fold_int(p->rexpr, pins.r);
        inner.r.erase(p->rvar);
        if (e->kind == IntExpr::Kind::Lit &&
            !ext_mentions_rel(p->l, false, p->rvar))
          inner.r[p->rvar] = e->lit;
        else
          keep_r = {p->rvar, e};
      }
      RelFormulaPtr body =
          inner.empty() ? p->l : specialize_rel(p->l, inner);
      if (!keep_l && !keep_r) return body;
      if (body->kind == RelFormula::Kind::True) return rf_true();
      if (body->kind == RelFormula::Kind::False) return rf_false();
      return subst_rel(body, keep_l, keep_r);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Entailment engine (relational)
// ---------------------------------------------------------------------------

void flatten_and(const RelFormulaPtr& f, std::vector<RelFormulaPtr>& out) {
  if (f->kind == RelFormula::Kind::And) {
    flatten_and(f->l, out);
    flatten_and(f->r, out);
  } else if (f->kind == RelFormula::Kind::Left &&
             f->embed->kind == BoolExpr::Kind::And) {
    // One-sided conjunctions expose their parts (e.g. pc tests in guards).
    flatten_and(rf_left(f->embed->bl), out);
    flatten_and(rf_left(f->embed->br), out);
  } else if (f->kind == RelFormula::Kind::Right &&
             f->embed->kind == BoolExpr::Kind::And) {
    flatten_and(rf_right(f->embed->bl), out);
    flatten_and(rf_right(f->embed->br), out);
  } else {
    out.push_back(f);
  }
}

void flatten_or(const RelFormulaPtr& f, std::vector<RelFormulaPtr>& out) {
  if (f->kind == RelFormula::Kind::Or) {
    flatten_or(f->l, out);
    flatten_or(f->r, out);
  } else {
    out.push_back(f);
  }
}

// A conjunct of the form lhs(x = k) / rhs(x = k) pins a variable.
bool extract_pin(const RelFormulaPtr& f, bool& left, std::string& var,
                 int64_t& val) {
  if (f->kind != RelFormula::Kind::Left && f->kind != RelFormula::Kind::Right)
    return false;
  const BoolExprPtr& e = f->embed;
  if (e->kind != BoolExpr::Kind::Cmp || e->cmp != CmpOp::Eq) return false;
  left = f->kind == RelFormula::Kind::Left;
  if (e->il->kind == IntExpr::Kind::Var && e->ir->kind == IntExpr::Kind::Lit) {
    var = e->il->var;
    val = e->ir->lit;
    return true;
  }
  if (e->il->kind == IntExpr::Kind::Lit && e->ir->kind == IntExpr::Kind::Var) {
    var = e->ir->var;
    val = e->il->lit;
    return true;
  }
  return false;
}

void sides_used(const RelFormulaPtr& f, bool& uses_l, bool& uses_r) {
  switch (f->kind) {
    case RelFormula::Kind::True:
    case RelFormula::Kind::False:
      return;
    case RelFormula::Kind::Left:
      uses_l = true;
      return;
    case RelFormula::Kind::Right:
      uses_r = true;
      return;
    case RelFormula::Kind::Cross:
    case RelFormula::Kind::Ext:
      uses_l = uses_r = true;
      return;
    case RelFormula::Kind::And:
    case RelFormula::Kind::Or:
      sides_used(f->l, uses_l, uses_r);
      sides_used(f->r, uses_l, uses_r);
      return;
    case RelFormula::Kind::Not:
      sides_used(f->l, uses_l, uses_r);
      return;
    case RelFormula::Kind::Subst:
      sides_used(f->l, uses_l, uses_r);
      if (f->has_l) uses_l = true;
      if (f->has_r) uses_r = true;
      return;
  }
}

struct RelEngine {
  const DomainBound& bound;
  Verdict verdict = Verdict::ok();

  explicit RelEngine(const DomainBound& b) : bound(b) {}

  bool done() const {
    return verdict.status == Verdict::Status::Counterexample &&
           verdict.cex.size() >= 5;
  }

  void solve(std::vector<RelFormulaPtr> conjs, RelFormulaPtr g, RelPins pins,
             int depth) {
    if (done()) return;
    // Propagate pins to a fixpoint: each round may expose new literal
    // equalities or constant-fold conjuncts away.
    for (;;) {
      bool new_pin = false;
      for (const auto& c : conjs) {
        bool left;
        std::string var;
        int64_t val;
        if (!extract_pin(c, left, var, val)) continue;
        PinMap& m = left ? pins.l : pins.r;
        auto it = m.find(var);
        if (it == m.end()) {
          m[var] = val;
          new_pin = true;
        } else if (it->second != val) {
          return; // contradictory antecedent: vacuously valid
        }
      }
      if (!new_pin) break;
      std::vector<RelFormulaPtr> next;
      for (const auto& c : conjs) {
        RelFormulaPtr sc = specialize_rel(c, pins);
        if (sc->kind == RelFormula::Kind::False) return;
        if (sc->kind == RelFormula::Kind::True) continue;
        flatten_and(sc, next);
      }
      conjs = std::move(next);
      g = specialize_rel(g, pins);
    }
    if (g->kind == RelFormula::Kind::True) return;

    // Pinned values outside the variable's domain make the antecedent
    // unsatisfiable within the bound.
    for (const auto& [x, v] : pins.l)
      if (!bound.in_range(x, v)) return;
    for (const auto& [x, v] : pins.r)
      if (!bound.in_range(x, v)) return;

    // Case split on a top-level disjunction in the antecedent.  Prefer a
    // disjunction whose every branch pins a variable (such as a control
    // cover  (lhs(pc=i) && rhs(pc=j)) || ...), since each branch then
    // specializes the remaining conjuncts instead of enlarging the search.
    if (depth < 4) {
      auto branch_pins = [](const RelFormulaPtr& d) {
        std::vector<RelFormulaPtr> parts;
        flatten_and(d, parts);
        bool left;
        std::string var;
        int64_t val;
        for (const auto& p : parts)
          if (extract_pin(p, left, var, val)) return true;
        return false;
      };
      size_t pick = conjs.size();
      for (size_t i = 0; i < conjs.size(); ++i) {
        if (conjs[i]->kind != RelFormula::Kind::Or) continue;
        if (pick == conjs.size()) pick = i;
        std::vector<RelFormulaPtr> ds;
        flatten_or(conjs[i], ds);
        bool all_pin = true;
        for (const auto& d : ds)
          if (!branch_pins(d)) {
            all_pin = false;
            break;
          }
        if (all_pin) {
          pick = i;
          break;
        }
      }
      if (pick != conjs.size()) {
        std::vector<RelFormulaPtr> ds;
        flatten_or(conjs[pick], ds);
        for (const auto& d : ds) {
          // Flatten the branch so conjuncts like lhs(pc=i) && rhs(pc=j)
          // expose their pins to the propagation loop.
          std::vector<RelFormulaPtr> sub;
          sub.reserve(conjs.size() + 1);
          for (size_t k = 0; k < conjs.size(); ++k)
            if (k != pick) sub.push_back(conjs[k]);
          flatten_and(d, sub);
          solve(sub, g, pins, depth + 1);
          if (done()) return;
        }
        return;
      }
    }

    enumerate(conjs, g, pins);
  }

  void enumerate(const std::vector<RelFormulaPtr>& conjs, const RelFormulaPtr& g,
                 const RelPins& pins) {
    std::vector<RelFormulaPtr> lonly, ronly, mixed;
    for (const auto& c : conjs) {
      bool ul = false, ur = false;
      sides_used(c, ul, ur);
      if (ul && ur)
        mixed.push_back(c);
      else if (ul)
        lonly.push_back(c);
      else if (ur)
        ronly.push_back(c);
      else
        mixed.push_back(c); // constant (shouldn't survive folding)
    }

    std::set<std::string> lv, rv;
    for (const auto& c : conjs) {
      collect_vars_left(c, lv);
      collect_vars_right(c, rv);
    }
    collect_vars_left(g, lv);
    collect_vars_right(g, rv);
    for (const auto& [x, _] : pins.l) lv.insert(x);
    for (const auto& [x, _] : pins.r) rv.insert(x);

    std::vector<Store> sl = side_stores(lv, pins.l, lonly, true);
    if (sl.empty()) return;
    std::vector<Store> sr = side_stores(rv, pins.r, ronly, false);
    if (sr.empty()) return;

    // Use the cross equalities as a composite index over the right stores.
    std::vector<const RelFormula*> keys;
    std::vector<RelFormulaPtr> rest;
    for (const auto& c : mixed) {
      if (c->kind == RelFormula::Kind::Cross && c->cmp == CmpOp::Eq)
        keys.push_back(c.get());
      else
        rest.push_back(c);
    }
    std::map<std::vector<int64_t>, std::vector<const Store*>> buckets;
    if (!keys.empty()) {
      std::vector<int64_t> key(keys.size());
      for (const Store& t : sr) {
        for (size_t k = 0; k < keys.size(); ++k)
          key[k] = eval_int(keys[k]->re, t);
        buckets[key].push_back(&t);
      }
    }

    std::vector<int64_t> key(keys.size());
    std::vector<RelFormulaPtr> rest_s;
    for (const Store& s : sl) {
      // Fold the left store into the remaining conjuncts and the goal so the
      // inner loop only evaluates the right-hand side.
      RelPins sp;
      sp.l = s.vals;
      bool dead = false;
      rest_s.clear();
      for (const auto& c : rest) {
        RelFormulaPtr sc = specialize_rel(c, sp);
        if (sc->kind == RelFormula::Kind::False) {
          dead = true;
          break;
        }
        if (sc->kind != RelFormula::Kind::True) rest_s.push_back(sc);
      }
      if (dead) continue;
      RelFormulaPtr gs = specialize_rel(g, sp);
      if (gs->kind == RelFormula::Kind::True) continue;

      auto check_pair = [&](const Store& t) {
        for (const auto& c : rest_s)
          if (!eval_rel_formula(c, s, t)) return;
        if (eval_rel_formula(gs, s, t)) return;
        Counterexample cx;
        cx.left = s;
        cx.right = t;
        cx.relational = true;
        verdict.add_cex(std::move(cx));
      };

      if (!keys.empty()) {
        for (size_t k = 0; k < keys.size(); ++k)
          key[k] = eval_int(keys[k]->le, s);
        auto it = buckets.find(key);
        if (it == buckets.end()) continue;
        for (const Store* t : it->second) {
          check_pair(*t);
          if (done()) return;
        }
      } else {
        for (const Store& t : sr) {
          check_pair(t);
          if (done()) return;
        }
      }
    }
  }

  std::vector<Store> side_stores(const std::set<std::string>& vars,
                                 const PinMap& pins,
                                 const std::vector<RelFormulaPtr>& filters,
                                 bool left) {
    DomainBound b = bound;
    b.vars.assign(vars.begin(), vars.end());
    for (const auto& [x, v] : pins) b.overrides[x] = {v, v};
    std::vector<Store> out;
    Store dummy;
    for (Store& s : b.enumerate()) {
      bool keep = true;
      for (const auto& f : filters) {
        bool h = left ? eval_rel_formula(f, s, dummy)
                      : eval_rel_formula(f, dummy, s);
        if (!h) {
          keep = false;
          break;
        }
      }
      if (keep) out.push_back(std::move(s));
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Entailment engine (unary)
// ---------------------------------------------------------------------------

void flatten_and(const StoreFormulaPtr& f, std::vector<StoreFormulaPtr>& out) {
  if (f->kind == StoreFormula::Kind::And) {
    flatten_and(f->l, out);
    flatten_and(f->r, out);
  } else if (f->kind == StoreFormula::Kind::Embed &&
             f->embed->kind == BoolExpr::Kind::And) {
    // Embedded conjunctions expose their parts (e.g. pc tests in guards).
    flatten_and(sf_embed(f->embed->bl), out);
    flatten_and(sf_embed(f->embed->br), out);
  } else {
    out.push_back(f);
  }
}

void flatten_or(const StoreFormulaPtr& f, std::vector<StoreFormulaPtr>& out) {
  if (f->kind == StoreFormula::Kind::Or) {
    flatten_or(f->l, out);
    flatten_or(f->r, out);
  } else {
    out.push_back(f);
  }
}

bool extract_pin_store(const StoreFormulaPtr& f, std::string& var,
                       int64_t& val) {
  if (f->kind != StoreFormula::Kind::Embed) return false;
  const BoolExprPtr& e = f->embed;
  if (e->kind != BoolExpr::Kind::Cmp || e->cmp != CmpOp::Eq) return false;
  if (e->il->kind == IntExpr::Kind::Var && e->ir->kind == IntExpr::Kind::Lit) {
    var = e->il->var;
    val = e->ir->lit;
    return true;
  }
  if (e->il->kind == IntExpr::Kind::Lit && e->ir->kind == IntExpr::Kind::Var) {
    var = e->ir->var;
    val = e->il->lit;
    return true;
  }
  return false;
}

struct StoreEngine {
  const DomainBound& bound;
  Verdict verdict = Verdict::ok();

  explicit StoreEngine(const DomainBound& b) : bound(b) {}

  bool done() const {
    return verdict.status == Verdict::Status::Counterexample &&
           verdict.cex.size() >= 5;
  }

  void solve(std::vector<StoreFormulaPtr> conjs, StoreFormulaPtr g,
             PinMap pins, int depth) {
    if (done()) return;
    for (;;) {
      bool new_pin = false;
      for (const auto& c : conjs) {
        std::string var;
        int64_t val;
        if (!extract_pin_store(c, var, val)) continue;
        auto it = pins.find(var);
        if (it == pins.end()) {
          pins[var] = val;
          new_pin = true;
        } else if (it->second != val) {
          return;
        }
      }
      if (!new_pin) break;
      std::vector<StoreFormulaPtr> next;
      for (const auto& c : conjs) {
        StoreFormulaPtr sc = specialize_store(c, pins);
        if (sc->kind == StoreFormula::Kind::False) return;
        if (sc->kind == StoreFormula::Kind::True) continue;
        flatten_and(sc, next);
      }
      conjs = std::move(next);
      g = specialize_store(g, pins);
    }
    if (g->kind == StoreFormula::Kind::True) return;
    for (const auto& [x, v] : pins)
      if (!bound.in_range(x, v)) return;

    // As in the relational engine, prefer splitting a disjunction whose
    // branches each pin a variable.
    if (depth < 4) {
      auto branch_pins = [](const StoreFormulaPtr& d) {
        std::vector<StoreFormulaPtr> parts;
        flatten_and(d, parts);
        std::string var;
        int64_t val;
        for (const auto& p : parts)
          if (extract_pin_store(p, var, val)) return true;
        return false;
      };
      size_t pick = conjs.size();
      for (size_t i = 0; i < conjs.size(); ++i) {
        if (conjs[i]->kind != StoreFormula::Kind::Or) continue;
        if (pick == conjs.size()) pick = i;
        std::vector<StoreFormulaPtr> ds;
        flatten_or(conjs[i], ds);
        bool all_pin = true;
        for (const auto& d : ds)
          if (!branch_pins(d)) {
            all_pin = false;
            break;
          }
        if (all_pin) {
          pick = i;
          break;
        }
      }
      if (pick != conjs.size()) {
        std::vector<StoreFormulaPtr> ds;
        flatten_or(conjs[pick], ds);
        for (const auto& d : ds) {
          // Flatten the branch so any pins inside a conjunction surface.
          std::vector<StoreFormulaPtr> sub;
          sub.reserve(conjs.size() + 1);
          for (size_t k = 0; k < conjs.size(); ++k)
            if (k != pick) sub.push_back(conjs[k]);
          flatten_and(d, sub);
          solve(sub, g, pins, depth + 1);
          if (done()) return;
        }
        return;
      }
    }

    std::set<std::string> vs;
    for (const auto& c : conjs) collect_vars(c, vs);
    collect_vars(g, vs);
    for (const auto& [x, _] : pins) vs.insert(x);

    DomainBound b = bound;
    b.vars.assign(vs.begin(), vs.end());
    for (const auto& [x, v] : pins) b.overrides[x] = {v, v};
    for (const Store& s : b.enumerate()) {
      bool sat = true;
      for (const auto& c : conjs)
        if (!eval_store_formula(c, s)) {
          sat = false;
          break;
        }
      if (!sat) continue;
      if (eval_store_formula(g, s)) continue;
      Counterexample cx;
      cx.left = s;
      verdict.add_cex(std::move(cx));
      if (done()) return;
    }
  }
};

} // namespace

Verdict entails(const StoreFormulaPtr& f, const StoreFormulaPtr& g,
                const DomainBound& bound) {
  StoreEngine eng(bound);
  std::vector<StoreFormulaPtr> conjs;
  flatten_and(f, conjs);
  eng.solve(std::move(conjs), g, {}, 0);
  return eng.verdict;
}

Verdict entails(const RelFormulaPtr& f, const RelFormulaPtr& g,
                const DomainBound& bound) {
  RelEngine eng(bound);
  std::vector<RelFormulaPtr> conjs;
  flatten_and(f, conjs);
  eng.solve(std::move(conjs), g, {}, 0);
  return eng.verdict;
}

bool sem_equal(const StoreFormulaPtr& a, const StoreFormulaPtr& b,
               const DomainBound& bound) {
  if (equal(a, b)) return true;
  return entails(a, b, bound).valid() && entails(b, a, bound).valid();
}

bool sem_equal(const RelFormulaPtr& a, const RelFormulaPtr& b,
               const DomainBound& bound) {
  if (equal(a, b)) return true;
  return entails(a, b, bound).valid() && entails(b, a, bound).valid();
}

// ---------------------------------------------------------------------------
// Independence
// ---------------------------------------------------------------------------

bool independent(const std::string& x, const StoreFormulaPtr& p,
                 const DomainBound& bound) {
  std::set<std::string> vs;
  collect_vars(p, vs);
  if (!vs.count(x)) return true;
  vs.erase(x);
  DomainBound base = bound;
  base.vars.assign(vs.begin(), vs.end());
  std::vector<int64_t> xs = bound.range(x);
  for (const Store& s : base.enumerate()) {
    bool first = true, val = false;
    for (int64_t v : xs) {
      bool h = eval_store_formula(p, s.with(x, v));
      if (first) {
        val = h;
        first = false;
      } else if (h != val) {
        return false;
      }
    }
  }
  return true;
}

bool independent_rel(const std::string& x, const std::string& x2,
                     const RelFormulaPtr& p, const DomainBound& bound) {
  std::set<std::string> lv, rv;
  collect_vars_left(p, lv);
  collect_vars_right(p, rv);
  if (!lv.count(x) && !rv.count(x2)) return true;
  lv.erase(x);
  rv.erase(x2);
  DomainBound lb = bound, rb = bound;
  lb.vars.assign(lv.begin(), lv.end());
  rb.vars.assign(rv.begin(), rv.end());
  std::vector<int64_t> xs = bound.range(x), ys = bound.range(x2);
  for (const Store& s : lb.enumerate()) {
    for (const Store& t : rb.enumerate()) {
      bool first = true, val = false;
      for (int64_t a : xs) {
        Store sa = s.with(x, a);
        for (int64_t b : ys) {
          bool h = eval_rel_formula(p, sa, t.with(x2, b));
          if (first) {
            val = h;
            first = false;
          } else if (h != val) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

} // namespace rvwb
