#include "rvwb/normalform.hpp"

#include <stdexcept>

#include "rvwb/kat.hpp"

namespace rvwb {

namespace {

CommandPtr set_pc(const std::string& pc, Label n) {
  return mk_assign(0, pc, int_lit(n));
}

} // namespace

CommandPtr add_pc(const std::string& pc, const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      return mk_seq(set_pc(pc, c->label), c);
    case Command::Kind::Seq:
      return mk_seq(add_pc(pc, c->c1), add_pc(pc, c->c2));
    case Command::Kind::If: {
      GuardedList gcs;
      for (const auto& gc : c->gcs) gcs.push_back({gc.guard, add_pc(pc, gc.body)});
      return mk_seq(set_pc(pc, c->label), mk_if(c->label, gcs));
    }
    case Command::Kind::Do: {
      // Each body re-announces the loop head when it finishes.
      GuardedList gcs;
      for (const auto& gc : c->gcs)
        gcs.push_back({gc.guard,
                       mk_seq(add_pc(pc, gc.body), set_pc(pc, c->label))});
      return mk_seq(set_pc(pc, c->label), mk_do(c->label, gcs));
    }
  }
  return c;
}

namespace {

BoolExprPtr pc_test(const std::string& pc, Label n) {
  return bool_cmp(CmpOp::Eq, int_var(pc), int_lit(n));
}

// Body guards with c's first atom dispatched toward f.
GuardedList norm_body(const CommandPtr& c, Label f, const std::string& pc) {
  GuardedList out;
  switch (c->kind) {
    case Command::Kind::Skip:
      out.push_back({pc_test(pc, c->label), set_pc(pc, f)});
      return out;
    case Command::Kind::Assign:
      out.push_back({pc_test(pc, c->label), mk_seq(c, set_pc(pc, f))});
      return out;
    case Command::Kind::Seq: {
      out = norm_body(c->c1, lab(c->c2), pc);
      for (auto& gc : norm_body(c->c2, f, pc)) out.push_back(std::move(gc));
      return out;
    }
    case Command::Kind::If: {
      for (const auto& gc : c->gcs)
        out.push_back({bool_and(pc_test(pc, c->label), gc.guard),
                       set_pc(pc, lab(gc.body))});
      for (const auto& gc : c->gcs)
        for (auto& g : norm_body(gc.body, f, pc)) out.push_back(std::move(g));
      return out;
    }
    case Command::Kind::Do: {
      for (const auto& gc : c->gcs)
        out.push_back({bool_and(pc_test(pc, c->label), gc.guard),
                       set_pc(pc, lab(gc.body))});
      out.push_back({bool_and(pc_test(pc, c->label), bool_not(enab(c->gcs))),
                     set_pc(pc, f)});
      for (const auto& gc : c->gcs)
        for (auto& g : norm_body(gc.body, c->label, pc))
          out.push_back(std::move(g));
      return out;
    }
  }
  return out;
}

} // namespace

CommandPtr NormalForm::loop() const { return mk_do(0, body); }

NormalForm normalize(const CommandPtr& c, Label f, const std::string& pc) {
  if (!okf(c, f))
    throw std::invalid_argument(
        "normalize: program must be well-labeled with fresh final label");
  if (occurs(pc, c))
    throw std::invalid_argument("normalize: pc variable occurs in the program");
  NormalForm nf;
  nf.pc = pc;
  nf.init = lab(c);
  nf.init_assign = set_pc(pc, nf.init);
  nf.body = norm_body(c, f, pc);
  nf.fin = f;
  return nf;
}

namespace {

// Matches pc = k, or (pc = k) && e; returns the k and the residual e.
bool split_guard(const BoolExprPtr& g, const std::string& pc, Label& k,
                 BoolExprPtr& extra) {
  const BoolExprPtr* head = &g;
  extra = nullptr;
  if (g->kind == BoolExpr::Kind::And) {
    head = &g->bl;
    extra = g->br;
  }
  const BoolExprPtr& h = *head;
  if (h->kind != BoolExpr::Kind::Cmp || h->cmp != CmpOp::Eq) return false;
  if (h->il->kind != IntExpr::Kind::Var || h->il->var != pc) return false;
  if (h->ir->kind != IntExpr::Kind::Lit) return false;
  k = h->ir->lit;
  return true;
}

// Matches pc := m at label 0.
bool is_set_pc(const CommandPtr& b, const std::string& pc, Label& m) {
  if (b->kind != Command::Kind::Assign || b->var != pc) return false;
  if (b->rhs->kind != IntExpr::Kind::Lit) return false;
  m = b->rhs->lit;
  return true;
}

} // namespace

GuardClass classify_guard(const GuardedCommand& gc, const CommandPtr& c,
                          Label f, const std::string& pc) {
  Label k = 0;
  BoolExprPtr extra;
  if (!split_guard(gc.guard, pc, k, extra))
    throw std::invalid_argument("classify_guard: guard does not test pc");

  GuardClass cls;
  cls.k = k;
  cls.guard = extra;

  Label m = 0;
  if (is_set_pc(gc.body, pc, m)) {
    cls.m = m;
    if (!extra) {
      // Bare dispatch without an assignment: the source atom is a skip.
      if (sub(k, c)->kind != Command::Kind::Skip)
        throw std::invalid_argument("classify_guard: bare guard on non-skip");
      cls.kind = SymEdge::Kind::Skip;
      return cls;
    }
    CommandPtr src = sub(k, c);
    if (src->kind == Command::Kind::If) {
      cls.kind = SymEdge::Kind::IfBranch;
      return cls;
    }
    if (src->kind == Command::Kind::Do) {
      for (const auto& g : src->gcs)
        if (equal(g.guard, extra)) {
          cls.kind = SymEdge::Kind::DoEnter;
          return cls;
        }
      cls.kind = SymEdge::Kind::DoExit;
      return cls;
    }
    throw std::invalid_argument("classify_guard: guarded dispatch from atom");
  }
  if (gc.body->kind == Command::Kind::Seq &&
      gc.body->c1->kind == Command::Kind::Assign &&
      is_set_pc(gc.body->c2, pc, m)) {
    if (extra)
      throw std::invalid_argument("classify_guard: guarded assignment body");
    cls.kind = SymEdge::Kind::Asgn;
    cls.m = m;
    return cls;
  }
  throw std::invalid_argument("classify_guard: body is not a normal-form body");
}

Verdict verify_norm_equiv(const CommandPtr& c, Label f, const std::string& pc,
                          const DomainBound& bound) {
  NormalForm nf = normalize(c, f, pc);
  KatExprPtr lhs = kat_seq(mkt(nf.init_assign), mkt(nf.loop()));
  KatExprPtr rhs = kat_seq(mkt(add_pc(pc, c)), mkt(set_pc(pc, f)));

  DomainBound b = bound;
  std::set<std::string> vs(b.vars.begin(), b.vars.end());
  std::set<std::string> cv;
  collect_vars(c, cv);
  vs.insert(cv.begin(), cv.end());
  vs.insert(pc);
  b.vars.assign(vs.begin(), vs.end());
  b.pc_name = pc;
  if (b.pc_domain.empty()) {
    for (Label n : labs(c)) b.pc_domain.push_back(n);
    b.pc_domain.push_back(f);
  }
  return equiv_semantic(lhs, rhs, b);
}

} // namespace rvwb
