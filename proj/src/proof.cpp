#include "rvwb/proof.hpp"

#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "rvwb/kat.hpp"
#include "rvwb/normalform.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/structure.hpp"

namespace rvwb {

// ---------------------------------------------------------------------------
// Rule names
// ---------------------------------------------------------------------------

namespace {

struct RuleName {
  Rule rule;
  const char* name;
};

const RuleName kRuleNames[] = {
    {Rule::Skip, "Skip"},         {Rule::Asgn, "Asgn"},
    {Rule::Seq, "Seq"},           {Rule::If, "If"},
    {Rule::Do, "Do"},             {Rule::Conseq, "Conseq"},
    {Rule::False, "False"},       {Rule::Rewrite, "Rewrite"},
    {Rule::Ghost, "Ghost"},       {Rule::DSkip, "dSkip"},
    {Rule::DAsgn, "dAsgn"},       {Rule::AsgnSkip, "AsgnSkip"},
    {Rule::SkipAsgn, "SkipAsgn"}, {Rule::DSeq, "dSeq"},
    {Rule::DIf, "dIf"},           {Rule::DDo, "dDo"},
    {Rule::RConseq, "rConseq"},   {Rule::RDisj, "rDisj"},
    {Rule::RFalse, "rFalse"},     {Rule::RRewrite, "rRewrite"},
    {Rule::RGhost, "rGhost"},     {Rule::RDisjN, "rDisjN"},
    {Rule::SeqSkip, "SeqSkip"},   {Rule::IfSkip, "IfSkip"},
    {Rule::DoSkip, "DoSkip"},     {Rule::AlgnIf, "AlgnIf"},
};

} // namespace

std::string to_string(Rule r) {
  for (const RuleName& rn : kRuleNames)
    if (rn.rule == r) return rn.name;
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  for (const RuleName& rn : kRuleNames)
    if (name == rn.name) return rn.rule;
  return std::nullopt;
}

bool is_derived(Rule r) {
  switch (r) {
    case Rule::RDisjN:
    case Rule::SeqSkip:
    case Rule::IfSkip:
    case Rule::DoSkip:
    case Rule::AlgnIf:
      return true;
    default:
      return false;
  }
}

bool is_relational_rule(Rule r) {
  switch (r) {
    case Rule::Skip:
    case Rule::Asgn:
    case Rule::Seq:
    case Rule::If:
    case Rule::Do:
    case Rule::Conseq:
    case Rule::False:
    case Rule::Rewrite:
    case Rule::Ghost:
      return false;
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------
// Judgments and obligations
// ---------------------------------------------------------------------------

Judgment Judgment::unary(CommandPtr c, StoreFormulaPtr pre,
                         StoreFormulaPtr post) {
  Judgment j;
  j.relational = false;
  j.c = std::move(c);
  j.pre_u = std::move(pre);
  j.post_u = std::move(post);
  return j;
}

Judgment Judgment::rel(CommandPtr c, CommandPtr c2, RelFormulaPtr pre,
                       RelFormulaPtr post) {
  Judgment j;
  j.relational = true;
  j.c = std::move(c);
  j.c2 = std::move(c2);
  j.pre_r = std::move(pre);
  j.post_r = std::move(post);
  return j;
}

std::string Obligation::describe() const {
  switch (kind) {
    case Kind::EntailUnary:
      return to_string(u_lhs) + "  =>  " + to_string(u_rhs);
    case Kind::EntailRel:
    case Kind::SideCondition:
      return to_string(r_lhs) + "  =>  " + to_string(r_rhs);
    case Kind::Equivalence:
      return to_string(eq_lhs) + "  ~  " + to_string(eq_rhs);
    case Kind::GhostCheck:
      return "ghost(" + var + ", " + to_string(subject) + ")";
    case Kind::IndepUnary:
      return "indep(" + var + ", " + to_string(u_lhs) + ")";
    case Kind::IndepRel:
      return "indep(" + var + "|" + var2 + ", " + to_string(r_lhs) + ")";
  }
  return "?";
}

ProofTreePtr mk_node(Rule rule, Judgment conclusion,
                     std::vector<ProofTreePtr> premises) {
  auto t = std::make_shared<ProofTree>();
  t->rule = rule;
  t->conclusion = std::move(conclusion);
  t->premises = std::move(premises);
  return t;
}

// ---------------------------------------------------------------------------
// Obligation derivation
// ---------------------------------------------------------------------------

namespace {

Obligation entail_u(StoreFormulaPtr a, StoreFormulaPtr b) {
  Obligation ob;
  ob.kind = Obligation::Kind::EntailUnary;
  ob.u_lhs = std::move(a);
  ob.u_rhs = std::move(b);
  return ob;
}

Obligation entail_r(RelFormulaPtr a, RelFormulaPtr b) {
  Obligation ob;
  ob.kind = Obligation::Kind::EntailRel;
  ob.r_lhs = std::move(a);
  ob.r_rhs = std::move(b);
  return ob;
}

Obligation equiv_ob(CommandPtr a, CommandPtr b) {
  Obligation ob;
  ob.kind = Obligation::Kind::Equivalence;
  ob.eq_lhs = std::move(a);
  ob.eq_rhs = std::move(b);
  return ob;
}

Obligation ghost_ob(const std::string& x, CommandPtr subject) {
  Obligation ob;
  ob.kind = Obligation::Kind::GhostCheck;
  ob.var = x;
  ob.subject = std::move(subject);
  return ob;
}

Obligation indep_u(const std::string& x, StoreFormulaPtr f) {
  Obligation ob;
  ob.kind = Obligation::Kind::IndepUnary;
  ob.var = x;
  ob.u_lhs = std::move(f);
  return ob;
}

Obligation indep_r(const std::string& x, const std::string& x2,
                   RelFormulaPtr f) {
  Obligation ob;
  ob.kind = Obligation::Kind::IndepRel;
  ob.var = x;
  ob.var2 = x2;
  ob.r_lhs = std::move(f);
  return ob;
}

// The loop-alignment side condition: Q implies that the loops are enabled
// together, or the one still enabled may run alone.
RelFormulaPtr ddo_side_target(const GuardedList& gl, const GuardedList& gr,
                              const RelFormulaPtr& auxl,
                              const RelFormulaPtr& auxr) {
  RelFormulaPtr el = rf_left(enab(gl));
  RelFormulaPtr er = rf_right(enab(gr));
  RelFormulaPtr same =
      rf_or(rf_and(el, er), rf_and(rf_not(el), rf_not(er)));
  return rf_or(rf_or(same, rf_and(auxl, el)), rf_and(auxr, er));
}

} // namespace

std::vector<Obligation> derive_obligations(const ProofTree& t) {
  std::vector<Obligation> out;
  const Judgment& c = t.conclusion;
  switch (t.rule) {
    case Rule::Conseq:
      if (t.premises.size() == 1) {
        const Judgment& p = t.premises[0]->conclusion;
        out.push_back(entail_u(c.pre_u, p.pre_u));
        out.push_back(entail_u(p.post_u, c.post_u));
      }
      break;
    case Rule::RConseq:
      if (t.premises.size() == 1) {
        const Judgment& p = t.premises[0]->conclusion;
        out.push_back(entail_r(c.pre_r, p.pre_r));
        out.push_back(entail_r(p.post_r, c.post_r));
      }
      break;
    case Rule::Rewrite:
      if (t.premises.size() == 1)
        out.push_back(equiv_ob(t.premises[0]->conclusion.c, c.c));
      break;
    case Rule::RRewrite:
      if (t.premises.size() == 1) {
        out.push_back(equiv_ob(t.premises[0]->conclusion.c, c.c));
        out.push_back(equiv_ob(t.premises[0]->conclusion.c2, c.c2));
      }
      break;
    case Rule::Ghost:
      if (t.premises.size() == 1) {
        out.push_back(ghost_ob(t.ghost_var, t.premises[0]->conclusion.c));
        out.push_back(indep_u(t.ghost_var, c.pre_u));
        out.push_back(indep_u(t.ghost_var, c.post_u));
      }
      break;
    case Rule::RGhost:
      if (t.premises.size() == 1) {
        out.push_back(ghost_ob(t.ghost_var, t.premises[0]->conclusion.c));
        Obligation g2 = ghost_ob(t.ghost_var2, t.premises[0]->conclusion.c2);
        out.push_back(std::move(g2));
        out.push_back(indep_r(t.ghost_var, t.ghost_var2, c.pre_r));
        out.push_back(indep_r(t.ghost_var, t.ghost_var2, c.post_r));
      }
      break;
    case Rule::DDo:
      if (c.c && c.c2 && c.c->kind == Command::Kind::Do &&
          c.c2->kind == Command::Kind::Do && t.aux_l && t.aux_r) {
        Obligation ob = entail_r(
            c.pre_r, ddo_side_target(c.c->gcs, c.c2->gcs, t.aux_l, t.aux_r));
        ob.kind = Obligation::Kind::SideCondition;
        out.push_back(std::move(ob));
      }
      break;
    case Rule::AlgnIf:
      if (c.c && c.c->kind == Command::Kind::If && c.c->gcs.size() == 2 &&
          c.c2 && c.c2->kind == Command::Kind::If && c.c2->gcs.size() == 2) {
        RelFormulaPtr el = rf_left(c.c->gcs[0].guard);
        RelFormulaPtr er = rf_right(c.c2->gcs[0].guard);
        out.push_back(entail_r(
            c.pre_r, rf_or(rf_and(el, er),
                           rf_and(rf_not(el), rf_not(er)))));
      }
      break;
    default:
      break;
  }
  for (size_t i = 0; i < out.size(); ++i) out[i].id = "ob" + std::to_string(i);
  return out;
}

// ---------------------------------------------------------------------------
// Checker
// ---------------------------------------------------------------------------

namespace {

struct Checker {
  const DomainBound& bound;
  const CheckOptions& opts;
  Verdict verdict = Verdict::ok();

  Checker(const DomainBound& b, const CheckOptions& o) : bound(b), opts(o) {}

  bool done() const {
    return verdict.status == Verdict::Status::Counterexample &&
           verdict.cex.size() >= 5;
  }

  void fail(const std::string& path, const std::string& msg) {
    Counterexample cx;
    cx.detail = path + ": " + msg;
    verdict.add_cex(std::move(cx));
  }

  bool feq(const StoreFormulaPtr& a, const StoreFormulaPtr& b) {
    return equal(a, b) || sem_equal(a, b, bound);
  }
  bool feq(const RelFormulaPtr& a, const RelFormulaPtr& b) {
    return equal(a, b) || sem_equal(a, b, bound);
  }

  DomainBound equiv_bound(const CommandPtr& a, const CommandPtr& b) const {
    DomainBound out = bound;
    std::set<std::string> vs(out.vars.begin(), out.vars.end());
    collect_vars(a, vs);
    collect_vars(b, vs);
    out.vars.assign(vs.begin(), vs.end());
    return out;
  }

  // --- strict rewrite shapes ----------------------------------------------

  static bool skip_collapse(const CommandPtr& a, const CommandPtr& b) {
    // skip;c ~ c  and  c;skip ~ c
    if (a->kind != Command::Kind::Seq) return false;
    if (a->c1->kind == Command::Kind::Skip && equal(a->c2, b)) return true;
    if (a->c2->kind == Command::Kind::Skip && equal(a->c1, b)) return true;
    return false;
  }

  static bool trivial_branch(const CommandPtr& a, const CommandPtr& b) {
    // if true -> skip fi ~ skip  and  do false -> skip od ~ skip
    if (b->kind != Command::Kind::Skip) return false;
    if (a->gcs.size() != 1) return false;
    const GuardedCommand& gc = a->gcs[0];
    if (gc.body->kind != Command::Kind::Skip) return false;
    if (a->kind == Command::Kind::If)
      return gc.guard->kind == BoolExpr::Kind::True;
    if (a->kind == Command::Kind::Do)
      return gc.guard->kind == BoolExpr::Kind::False;
    return false;
  }

  // Undoes the pc instrumentation; returns null when the shape is wrong.
  static CommandPtr strip_pc(const std::string& pc, const CommandPtr& c) {
    if (c->kind != Command::Kind::Seq) return nullptr;
    if (c->c1->kind == Command::Kind::Assign && c->c1->var == pc) {
      const CommandPtr& inner = c->c2;
      switch (inner->kind) {
        case Command::Kind::Skip:
        case Command::Kind::Assign:
          return inner;
        case Command::Kind::If: {
          GuardedList gcs;
          for (const auto& gc : inner->gcs) {
            CommandPtr body = strip_pc(pc, gc.body);
            if (!body) return nullptr;
            gcs.push_back({gc.guard, body});
          }
          return mk_if(inner->label, gcs);
        }
        case Command::Kind::Do: {
          GuardedList gcs;
          for (const auto& gc : inner->gcs) {
            if (gc.body->kind != Command::Kind::Seq) return nullptr;
            if (gc.body->c2->kind != Command::Kind::Assign ||
                gc.body->c2->var != pc)
              return nullptr;
            CommandPtr body = strip_pc(pc, gc.body->c1);
            if (!body) return nullptr;
            gcs.push_back({gc.guard, body});
          }
          return mk_do(inner->label, gcs);
        }
        default:
          return nullptr;
      }
    }
    CommandPtr l = strip_pc(pc, c->c1);
    CommandPtr r = strip_pc(pc, c->c2);
    if (!l || !r) return nullptr;
    return mk_seq(l, r);
  }

  // (pc := n); do body od  vs  add_pc(c); pc := f  for some program c.
  static bool normal_form_shape(const std::string& pc, const CommandPtr& a,
                                const CommandPtr& b) {
    if (a->kind != Command::Kind::Seq || b->kind != Command::Kind::Seq)
      return false;
    const CommandPtr &an = a->c1, &loop = a->c2;
    const CommandPtr &instr = b->c1, &fin = b->c2;
    if (an->kind != Command::Kind::Assign || an->var != pc ||
        an->rhs->kind != IntExpr::Kind::Lit)
      return false;
    if (loop->kind != Command::Kind::Do) return false;
    if (fin->kind != Command::Kind::Assign || fin->var != pc ||
        fin->rhs->kind != IntExpr::Kind::Lit)
      return false;
    CommandPtr c = strip_pc(pc, instr);
    if (!c || !equal(add_pc(pc, c), instr)) return false;
    Label f = fin->rhs->lit;
    if (!okf(c, f)) return false;
    NormalForm nf = normalize(c, f, pc);
    return nf.init == an->rhs->lit && equal(nf.loop(), loop);
  }

  // erase(pc, add_pc(c)); skip  vs  c
  static bool erase_collapse(const std::string& pc, const CommandPtr& a,
                             const CommandPtr& b) {
    if (a->kind != Command::Kind::Seq || a->c2->kind != Command::Kind::Skip)
      return false;
    if (occurs(pc, b)) return false;
    return equal(a->c1, erase(pc, add_pc(pc, b)));
  }

  bool strict_rewrite_ok(const std::string& pc, const CommandPtr& a,
                         const CommandPtr& b) {
    if (equal(a, b)) return true;
    if (skip_collapse(a, b) || skip_collapse(b, a)) return true;
    if (trivial_branch(a, b) || trivial_branch(b, a)) return true;
    if (pc.empty()) return false;
    try {
      if (normal_form_shape(pc, a, b) || normal_form_shape(pc, b, a))
        return true;
      if (erase_collapse(pc, a, b) || erase_collapse(pc, b, a)) return true;
    } catch (const std::exception&) {
      return false;
    }
    return false;
  }

  // --- obligation discharge -----------------------------------------------

  void check_obligation(const Obligation& ob, const std::string& pc_hint,
                        const std::string& path) {
    switch (ob.kind) {
      case Obligation::Kind::EntailUnary: {
        if (equal(ob.u_lhs, ob.u_rhs)) return;
        Verdict v = entails(ob.u_lhs, ob.u_rhs, bound);
        report(v, path, ob);
        return;
      }
      case Obligation::Kind::EntailRel:
      case Obligation::Kind::SideCondition: {
        if (equal(ob.r_lhs, ob.r_rhs)) return;
        Verdict v = entails(ob.r_lhs, ob.r_rhs, bound);
        report(v, path, ob);
        return;
      }
      case Obligation::Kind::Equivalence: {
        if (opts.strict_rewrites) {
          if (!strict_rewrite_ok(pc_hint, ob.eq_lhs, ob.eq_rhs))
            fail(path, "equivalence not of a certified shape: " +
                           ob.describe());
          return;
        }
        Verdict v = equiv_semantic(mkt(ob.eq_lhs), mkt(ob.eq_rhs),
                                   equiv_bound(ob.eq_lhs, ob.eq_rhs));
        if (v.valid() && v.note.empty()) v.note = "bounded";
        report(v, path, ob);
        return;
      }
      case Obligation::Kind::GhostCheck:
        if (!ghost(ob.var, ob.subject))
          fail(path, "not a ghost variable: " + ob.describe());
        return;
      case Obligation::Kind::IndepUnary:
        if (!independent(ob.var, ob.u_lhs, bound))
          fail(path, "formula depends on " + ob.var + ": " + ob.describe());
        return;
      case Obligation::Kind::IndepRel:
        if (!independent_rel(ob.var, ob.var2, ob.r_lhs, bound))
          fail(path, "formula depends on " + ob.var + "|" + ob.var2 + ": " +
                         ob.describe());
        return;
    }
  }

  void report(const Verdict& v, const std::string& path, const Obligation& ob) {
    if (v.valid()) return;
    if (v.status == Verdict::Status::Inconclusive) {
      if (verdict.status == Verdict::Status::Valid)
        verdict = Verdict::inconclusive(path + " [" + ob.id + "]: " + v.note);
      return;
    }
    for (const Counterexample& cx : v.cex) {
      Counterexample out = cx;
      out.detail = path + " [" + ob.id + "] " + ob.describe() +
                   (cx.detail.empty() ? "" : " ; " + cx.detail);
      verdict.add_cex(std::move(out));
      if (done()) return;
    }
    if (v.cex.empty())
      fail(path, "[" + ob.id + "] failed: " + ob.describe());
  }

  // --- schema checks -------------------------------------------------------

  // Verifies one node's shape; returns false (with a report) on mismatch.
  bool schema(const ProofTree& t, const std::string& path) {
    const Judgment& c = t.conclusion;
    auto req = [&](bool cond, const std::string& msg) {
      if (!cond) fail(path, msg);
      return cond;
    };
    if (!req(c.relational == is_relational_rule(t.rule),
             "judgment kind does not match rule " + to_string(t.rule)))
      return false;
    if (!req(c.c != nullptr, "missing command")) return false;
    if (c.relational && !req(c.c2 != nullptr, "missing right command"))
      return false;
    if (!c.relational &&
        !req(c.pre_u && c.post_u, "missing unary pre/post"))
      return false;
    if (c.relational && !req(c.pre_r && c.post_r, "missing rel pre/post"))
      return false;
    for (const auto& p : t.premises) {
      if (!req(p != nullptr, "null premise")) return false;
      if (!req(p->conclusion.relational == c.relational,
               "premise judgment kind mismatch"))
        return false;
    }
    auto prem = [&](size_t n) {
      return req(t.premises.size() == n,
                 "expected " + std::to_string(n) + " premises, found " +
                     std::to_string(t.premises.size()));
    };

    switch (t.rule) {
      case Rule::Skip:
        return prem(0) && req(c.c->kind == Command::Kind::Skip, "not skip") &&
               req(feq(c.pre_u, c.post_u), "pre and post differ");
      case Rule::Asgn:
        return prem(0) &&
               req(c.c->kind == Command::Kind::Assign, "not an assignment") &&
               req(feq(c.pre_u, subst_store(c.post_u, c.c->var, c.c->rhs)),
                   "precondition is not the substituted postcondition");
      case Rule::Seq: {
        if (!prem(2) || !req(c.c->kind == Command::Kind::Seq, "not a sequence"))
          return false;
        const Judgment& p1 = t.premises[0]->conclusion;
        const Judgment& p2 = t.premises[1]->conclusion;
        return req(equal(p1.c, c.c->c1), "first premise command mismatch") &&
               req(equal(p2.c, c.c->c2), "second premise command mismatch") &&
               req(feq(p1.pre_u, c.pre_u), "precondition mismatch") &&
               req(feq(p1.post_u, p2.pre_u), "midcondition mismatch") &&
               req(feq(p2.post_u, c.post_u), "postcondition mismatch");
      }
      case Rule::If: {
        if (!req(c.c->kind == Command::Kind::If, "not an if") ||
            !prem(c.c->gcs.size()))
          return false;
        for (size_t i = 0; i < c.c->gcs.size(); ++i) {
          const Judgment& p = t.premises[i]->conclusion;
          const GuardedCommand& gc = c.c->gcs[i];
          if (!req(equal(p.c, gc.body), "branch command mismatch") ||
              !req(feq(p.pre_u, sf_and_all({sf_embed(gc.guard), c.pre_u})),
                   "branch precondition mismatch") ||
              !req(feq(p.post_u, c.post_u), "branch postcondition mismatch"))
            return false;
        }
        return true;
      }
      case Rule::Do: {
        if (!req(c.c->kind == Command::Kind::Do, "not a loop") ||
            !prem(c.c->gcs.size()))
          return false;
        for (size_t i = 0; i < c.c->gcs.size(); ++i) {
          const Judgment& p = t.premises[i]->conclusion;
          const GuardedCommand& gc = c.c->gcs[i];
          if (!req(equal(p.c, gc.body), "body command mismatch") ||
              !req(feq(p.pre_u, sf_and_all({sf_embed(gc.guard), c.pre_u})),
                   "body precondition mismatch") ||
              !req(feq(p.post_u, c.pre_u), "body must restore the invariant"))
            return false;
        }
        return req(
            feq(c.post_u,
                sf_and_all({c.pre_u, sf_embed(bool_not(enab(c.c->gcs)))})),
            "postcondition is not invariant with no guard enabled");
      }
      case Rule::Conseq:
        return prem(1) &&
               req(equal(t.premises[0]->conclusion.c, c.c),
                   "premise command mismatch");
      case Rule::False:
        return prem(0) &&
               req(feq(c.pre_u, sf_false()), "precondition is not false");
      case Rule::Rewrite: {
        const Judgment* p = nullptr;
        if (!prem(1)) return false;
        p = &t.premises[0]->conclusion;
        return req(feq(p->pre_u, c.pre_u), "precondition mismatch") &&
               req(feq(p->post_u, c.post_u), "postcondition mismatch");
      }
      case Rule::Ghost: {
        if (!prem(1) ||
            !req(!t.ghost_var.empty(), "missing ghost variable"))
          return false;
        const Judgment& p = t.premises[0]->conclusion;
        return req(equal(c.c, erase(t.ghost_var, p.c)),
                   "conclusion is not the erased premise command") &&
               req(feq(p.pre_u, c.pre_u), "precondition mismatch") &&
               req(feq(p.post_u, c.post_u), "postcondition mismatch");
      }

      case Rule::DSkip:
        return prem(0) &&
               req(c.c->kind == Command::Kind::Skip &&
                       c.c2->kind == Command::Kind::Skip,
                   "not skip|skip") &&
               req(feq(c.pre_r, c.post_r), "pre and post differ");
      case Rule::DAsgn:
        return prem(0) &&
               req(c.c->kind == Command::Kind::Assign &&
                       c.c2->kind == Command::Kind::Assign,
                   "not an assignment pair") &&
               req(feq(c.pre_r,
                       subst_rel(c.post_r, {{c.c->var, c.c->rhs}},
                                 {{c.c2->var, c.c2->rhs}})),
                   "precondition is not the substituted postcondition");
      case Rule::AsgnSkip:
        return prem(0) &&
               req(c.c->kind == Command::Kind::Assign &&
                       c.c2->kind == Command::Kind::Skip,
                   "not assignment|skip") &&
               req(feq(c.pre_r, subst_rel(c.post_r, {{c.c->var, c.c->rhs}},
                                          std::nullopt)),
                   "precondition is not the substituted postcondition");
      case Rule::SkipAsgn:
        return prem(0) &&
               req(c.c->kind == Command::Kind::Skip &&
                       c.c2->kind == Command::Kind::Assign,
                   "not skip|assignment") &&
               req(feq(c.pre_r, subst_rel(c.post_r, std::nullopt,
                                          {{c.c2->var, c.c2->rhs}})),
                   "precondition is not the substituted postcondition");
      case Rule::DSeq: {
        if (!prem(2) ||
            !req(c.c->kind == Command::Kind::Seq &&
                     c.c2->kind == Command::Kind::Seq,
                 "not a sequence pair"))
          return false;
        const Judgment& p1 = t.premises[0]->conclusion;
        const Judgment& p2 = t.premises[1]->conclusion;
        return req(equal(p1.c, c.c->c1) && equal(p1.c2, c.c2->c1),
                   "first premise command mismatch") &&
               req(equal(p2.c, c.c->c2) && equal(p2.c2, c.c2->c2),
                   "second premise command mismatch") &&
               req(feq(p1.pre_r, c.pre_r), "precondition mismatch") &&
               req(feq(p1.post_r, p2.pre_r), "midcondition mismatch") &&
               req(feq(p2.post_r, c.post_r), "postcondition mismatch");
      }
      case Rule::DIf: {
        if (!req(c.c->kind == Command::Kind::If &&
                     c.c2->kind == Command::Kind::If,
                 "not an if pair"))
          return false;
        size_t nl = c.c->gcs.size(), nr = c.c2->gcs.size();
        if (!prem(nl * nr)) return false;
        for (size_t i = 0; i < nl; ++i)
          for (size_t jj = 0; jj < nr; ++jj) {
            const Judgment& p = t.premises[i * nr + jj]->conclusion;
            const GuardedCommand& gl = c.c->gcs[i];
            const GuardedCommand& gr = c.c2->gcs[jj];
            if (!req(equal(p.c, gl.body) && equal(p.c2, gr.body),
                     "branch command mismatch") ||
                !req(feq(p.pre_r, rf_and_all({c.pre_r, rf_left(gl.guard),
                                              rf_right(gr.guard)})),
                     "branch precondition mismatch") ||
                !req(feq(p.post_r, c.post_r), "branch postcondition mismatch"))
              return false;
          }
        return true;
      }
      case Rule::DDo: {
        if (!req(c.c->kind == Command::Kind::Do &&
                     c.c2->kind == Command::Kind::Do,
                 "not a loop pair") ||
            !req(t.aux_l && t.aux_r, "missing alignment relations"))
          return false;
        size_t nl = c.c->gcs.size(), nr = c.c2->gcs.size();
        if (!prem(nl + nr + nl * nr)) return false;
        for (size_t i = 0; i < nl; ++i) {
          const Judgment& p = t.premises[i]->conclusion;
          const GuardedCommand& gl = c.c->gcs[i];
          if (!req(equal(p.c, gl.body) && p.c2->kind == Command::Kind::Skip,
                   "left-only premise command mismatch") ||
              !req(feq(p.pre_r,
                       rf_and_all({c.pre_r, rf_left(gl.guard), t.aux_l})),
                   "left-only premise precondition mismatch") ||
              !req(feq(p.post_r, c.pre_r),
                   "left-only premise must restore the invariant"))
            return false;
        }
        for (size_t jj = 0; jj < nr; ++jj) {
          const Judgment& p = t.premises[nl + jj]->conclusion;
          const GuardedCommand& gr = c.c2->gcs[jj];
          if (!req(p.c->kind == Command::Kind::Skip && equal(p.c2, gr.body),
                   "right-only premise command mismatch") ||
              !req(feq(p.pre_r,
                       rf_and_all({c.pre_r, rf_right(gr.guard), t.aux_r})),
                   "right-only premise precondition mismatch") ||
              !req(feq(p.post_r, c.pre_r),
                   "right-only premise must restore the invariant"))
            return false;
        }
        for (size_t i = 0; i < nl; ++i)
          for (size_t jj = 0; jj < nr; ++jj) {
            const Judgment& p =
                t.premises[nl + nr + i * nr + jj]->conclusion;
            const GuardedCommand& gl = c.c->gcs[i];
            const GuardedCommand& gr = c.c2->gcs[jj];
            if (!req(equal(p.c, gl.body) && equal(p.c2, gr.body),
                     "joint premise command mismatch") ||
                !req(feq(p.pre_r,
                         rf_and_all({c.pre_r, rf_left(gl.guard),
                                     rf_right(gr.guard), rf_not(t.aux_l),
                                     rf_not(t.aux_r)})),
                     "joint premise precondition mismatch") ||
                !req(feq(p.post_r, c.pre_r),
                     "joint premise must restore the invariant"))
              return false;
          }
        return req(
            feq(c.post_r,
                rf_and_all({c.pre_r, rf_left(bool_not(enab(c.c->gcs))),
                            rf_right(bool_not(enab(c.c2->gcs)))})),
            "postcondition is not invariant with neither loop enabled");
      }
      case Rule::RConseq:
        return prem(1) &&
               req(equal(t.premises[0]->conclusion.c, c.c) &&
                       equal(t.premises[0]->conclusion.c2, c.c2),
                   "premise command mismatch");
      case Rule::RDisj: {
        if (!prem(2)) return false;
        const Judgment& p1 = t.premises[0]->conclusion;
        const Judgment& p2 = t.premises[1]->conclusion;
        return req(equal(p1.c, c.c) && equal(p1.c2, c.c2) &&
                       equal(p2.c, c.c) && equal(p2.c2, c.c2),
                   "premise command mismatch") &&
               req(feq(p1.post_r, c.post_r) && feq(p2.post_r, c.post_r),
                   "postcondition mismatch") &&
               req(feq(c.pre_r, rf_or(p1.pre_r, p2.pre_r)),
                   "precondition is not the disjunction of the premises");
      }
      case Rule::RFalse:
        return prem(0) &&
               req(feq(c.pre_r, rf_false()), "precondition is not false");
      case Rule::RRewrite: {
        if (!prem(1)) return false;
        const Judgment& p = t.premises[0]->conclusion;
        return req(feq(p.pre_r, c.pre_r), "precondition mismatch") &&
               req(feq(p.post_r, c.post_r), "postcondition mismatch");
      }
      case Rule::RGhost: {
        if (!prem(1) ||
            !req(!t.ghost_var.empty() && !t.ghost_var2.empty(),
                 "missing ghost variables"))
          return false;
        const Judgment& p = t.premises[0]->conclusion;
        return req(equal(c.c, erase(t.ghost_var, p.c)) &&
                       equal(c.c2, erase(t.ghost_var2, p.c2)),
                   "conclusion is not the erased premise commands") &&
               req(feq(p.pre_r, c.pre_r), "precondition mismatch") &&
               req(feq(p.post_r, c.post_r), "postcondition mismatch");
      }

      case Rule::RDisjN: {
        if (!req(!t.premises.empty(), "expected at least one premise"))
          return false;
        std::vector<RelFormulaPtr> pres;
        for (const auto& p : t.premises) {
          const Judgment& pj = p->conclusion;
          if (!req(equal(pj.c, c.c) && equal(pj.c2, c.c2),
                   "premise command mismatch") ||
              !req(feq(pj.post_r, c.post_r), "postcondition mismatch"))
            return false;
          pres.push_back(pj.pre_r);
        }
        return req(feq(c.pre_r, rf_or_all(pres)),
                   "precondition is not the disjunction of the premises");
      }
      case Rule::SeqSkip: {
        if (!prem(2) ||
            !req(c.c->kind == Command::Kind::Seq &&
                     c.c2->kind == Command::Kind::Skip,
                 "not sequence|skip"))
          return false;
        const Judgment& p1 = t.premises[0]->conclusion;
        const Judgment& p2 = t.premises[1]->conclusion;
        return req(equal(p1.c, c.c->c1) && p1.c2->kind == Command::Kind::Skip,
                   "first premise command mismatch") &&
               req(equal(p2.c, c.c->c2) && p2.c2->kind == Command::Kind::Skip,
                   "second premise command mismatch") &&
               req(feq(p1.pre_r, c.pre_r), "precondition mismatch") &&
               req(feq(p1.post_r, p2.pre_r), "midcondition mismatch") &&
               req(feq(p2.post_r, c.post_r), "postcondition mismatch");
      }
      case Rule::IfSkip: {
        if (!req(c.c->kind == Command::Kind::If &&
                     c.c2->kind == Command::Kind::Skip,
                 "not if|skip") ||
            !prem(c.c->gcs.size()))
          return false;
        for (size_t i = 0; i < c.c->gcs.size(); ++i) {
          const Judgment& p = t.premises[i]->conclusion;
          const GuardedCommand& gc = c.c->gcs[i];
          if (!req(equal(p.c, gc.body) && p.c2->kind == Command::Kind::Skip,
                   "branch command mismatch") ||
              !req(feq(p.pre_r, rf_and_all({c.pre_r, rf_left(gc.guard)})),
                   "branch precondition mismatch") ||
              !req(feq(p.post_r, c.post_r), "branch postcondition mismatch"))
            return false;
        }
        return true;
      }
      case Rule::DoSkip: {
        if (!req(c.c->kind == Command::Kind::Do &&
                     c.c2->kind == Command::Kind::Skip,
                 "not loop|skip") ||
            !prem(c.c->gcs.size()))
          return false;
        for (size_t i = 0; i < c.c->gcs.size(); ++i) {
          const Judgment& p = t.premises[i]->conclusion;
          const GuardedCommand& gc = c.c->gcs[i];
          if (!req(equal(p.c, gc.body) && p.c2->kind == Command::Kind::Skip,
                   "body command mismatch") ||
              !req(feq(p.pre_r, rf_and_all({c.pre_r, rf_left(gc.guard)})),
                   "body precondition mismatch") ||
              !req(feq(p.post_r, c.pre_r),
                   "body must restore the invariant"))
            return false;
        }
        return req(
            feq(c.post_r,
                rf_and_all({c.pre_r, rf_left(bool_not(enab(c.c->gcs)))})),
            "postcondition is not invariant with the loop disabled");
      }
      case Rule::AlgnIf: {
        if (!req(c.c->kind == Command::Kind::If && c.c->gcs.size() == 2 &&
                     c.c2->kind == Command::Kind::If &&
                     c.c2->gcs.size() == 2,
                 "not a two-branch if pair") ||
            !prem(2))
          return false;
        auto complementary = [&](const GuardedList& gcs) {
          return equal(gcs[1].guard, bool_complement(gcs[0].guard)) ||
                 sem_equal(sf_embed(gcs[1].guard),
                           sf_embed(bool_not(gcs[0].guard)), bound);
        };
        if (!req(complementary(c.c->gcs) && complementary(c.c2->gcs),
                 "branch guards are not complementary"))
          return false;
        const Judgment& p1 = t.premises[0]->conclusion;
        const Judgment& p2 = t.premises[1]->conclusion;
        return req(equal(p1.c, c.c->gcs[0].body) &&
                       equal(p1.c2, c.c2->gcs[0].body),
                   "then premise command mismatch") &&
               req(equal(p2.c, c.c->gcs[1].body) &&
                       equal(p2.c2, c.c2->gcs[1].body),
                   "else premise command mismatch") &&
               req(feq(p1.pre_r,
                       rf_and_all({c.pre_r, rf_left(c.c->gcs[0].guard)})),
                   "then precondition mismatch") &&
               req(feq(p2.pre_r,
                       rf_and_all(
                           {c.pre_r,
                            rf_left(bool_not(c.c->gcs[0].guard))})),
                   "else precondition mismatch") &&
               req(feq(p1.post_r, c.post_r) && feq(p2.post_r, c.post_r),
                   "postcondition mismatch");
      }
    }
    return false;
  }

  void check(const ProofTreePtr& t, const std::string& path) {
    if (done()) return;
    if (!t) {
      fail(path, "null node");
      return;
    }
    if (schema(*t, path)) {
      for (const Obligation& ob : derive_obligations(*t)) {
        check_obligation(ob, t->pc_hint, path);
        if (done()) return;
      }
    }
    for (size_t i = 0; i < t->premises.size(); ++i) {
      check(t->premises[i], path + "." + std::to_string(i));
      if (done()) return;
    }
  }
};

} // namespace

Verdict check_proof(const ProofTreePtr& t, const DomainBound& bound,
                    const CheckOptions& opts) {
  Checker ck(bound, opts);
  ck.check(t, "root");
  return ck.verdict;
}

// ---------------------------------------------------------------------------
// Derived-rule expansion
// ---------------------------------------------------------------------------

namespace {

ProofTreePtr rconseq_to(Judgment target, ProofTreePtr premise) {
  return mk_node(Rule::RConseq, std::move(target), {std::move(premise)});
}

// rFalse lifted to an arbitrary semantically-false precondition.
ProofTreePtr by_false(const CommandPtr& c, const CommandPtr& c2,
                      const RelFormulaPtr& pre, const RelFormulaPtr& post) {
  ProofTreePtr f =
      mk_node(Rule::RFalse, Judgment::rel(c, c2, rf_false(), post));
  return rconseq_to(Judgment::rel(c, c2, pre, post), f);
}

ProofTreePtr expand_rdisjn(const ProofTree& t) {
  const Judgment& c = t.conclusion;
  std::vector<ProofTreePtr> ps;
  for (const auto& p : t.premises) ps.push_back(expand_derived(p));
  ProofTreePtr acc = ps[0];
  for (size_t i = 1; i < ps.size(); ++i) {
    RelFormulaPtr pre =
        rf_or(acc->conclusion.pre_r, ps[i]->conclusion.pre_r);
    acc = mk_node(Rule::RDisj,
                  Judgment::rel(c.c, c.c2, pre, c.post_r), {acc, ps[i]});
  }
  if (equal(acc->conclusion.pre_r, c.pre_r)) return acc;
  return rconseq_to(c, acc);
}

ProofTreePtr expand_seqskip(const ProofTree& t) {
  const Judgment& c = t.conclusion;
  ProofTreePtr p1 = expand_derived(t.premises[0]);
  ProofTreePtr p2 = expand_derived(t.premises[1]);
  CommandPtr sk1 = p1->conclusion.c2;
  CommandPtr sk2 = p2->conclusion.c2;
  CommandPtr two = mk_seq(sk1, sk2);
  ProofTreePtr seq = mk_node(
      Rule::DSeq, Judgment::rel(c.c, two, c.pre_r, c.post_r), {p1, p2});
  ProofTreePtr rw = mk_node(Rule::RRewrite, c, {seq});
  return rw;
}

ProofTreePtr expand_ifskip(const ProofTree& t) {
  const Judgment& c = t.conclusion;
  // Against  if true -> skip fi, then rewrite the right side to skip.
  CommandPtr sk = mk_skip(0);
  CommandPtr triv = mk_if(0, {{bool_true(), sk}});
  std::vector<ProofTreePtr> ps;
  for (size_t i = 0; i < c.c->gcs.size(); ++i) {
    ProofTreePtr p = expand_derived(t.premises[i]);
    Judgment target = Judgment::rel(
        p->conclusion.c, p->conclusion.c2,
        rf_and_all({c.pre_r, rf_left(c.c->gcs[i].guard), rf_right(bool_true())}),
        c.post_r);
    ps.push_back(rconseq_to(target, p));
  }
  ProofTreePtr dif =
      mk_node(Rule::DIf, Judgment::rel(c.c, triv, c.pre_r, c.post_r), ps);
  return mk_node(Rule::RRewrite, c, {dif});
}

ProofTreePtr expand_doskip(const ProofTree& t) {
  const Judgment& c = t.conclusion;
  // Against  do false -> skip od  with both alignment relations true.
  CommandPtr sk = mk_skip(0);
  CommandPtr triv = mk_do(0, {{bool_false(), sk}});
  RelFormulaPtr q = c.pre_r;
  std::vector<ProofTreePtr> ps;
  for (size_t i = 0; i < c.c->gcs.size(); ++i) {
    ProofTreePtr p = expand_derived(t.premises[i]);
    Judgment target = Judgment::rel(
        p->conclusion.c, p->conclusion.c2,
        rf_and_all({q, rf_left(c.c->gcs[i].guard), rf_true()}), q);
    ps.push_back(rconseq_to(target, p));
  }
  // Vacuous right-only premise and joint premises.
  ps.push_back(by_false(sk, sk,
                        rf_and_all({q, rf_right(bool_false()), rf_true()}), q));
  for (size_t i = 0; i < c.c->gcs.size(); ++i)
    ps.push_back(by_false(
        c.c->gcs[i].body, sk,
        rf_and_all({q, rf_left(c.c->gcs[i].guard), rf_right(bool_false()),
                    rf_not(rf_true()), rf_not(rf_true())}),
        q));
  RelFormulaPtr post =
      rf_and_all({q, rf_left(bool_not(enab(c.c->gcs))),
                  rf_right(bool_not(enab(triv->gcs)))});
  ProofTreePtr ddo =
      mk_node(Rule::DDo, Judgment::rel(c.c, triv, q, post), ps);
  ddo->aux_l = rf_true();
  ddo->aux_r = rf_true();
  ProofTreePtr weak =
      rconseq_to(Judgment::rel(c.c, triv, q, c.post_r), ddo);
  return mk_node(Rule::RRewrite, c, {weak});
}

ProofTreePtr expand_algnif(const ProofTree& t) {
  const Judgment& c = t.conclusion;
  ProofTreePtr p1 = expand_derived(t.premises[0]);
  ProofTreePtr p2 = expand_derived(t.premises[1]);
  const BoolExprPtr& el = c.c->gcs[0].guard;
  const BoolExprPtr& el2 = c.c->gcs[1].guard;
  const BoolExprPtr& er = c.c2->gcs[0].guard;
  const BoolExprPtr& er2 = c.c2->gcs[1].guard;
  std::vector<ProofTreePtr> ps;
  ps.push_back(rconseq_to(
      Judgment::rel(p1->conclusion.c, p1->conclusion.c2,
                    rf_and_all({c.pre_r, rf_left(el), rf_right(er)}),
                    c.post_r),
      p1));
  // The mixed branch pairs are unreachable under the guard-agreement
  // obligation.
  ps.push_back(by_false(c.c->gcs[0].body, c.c2->gcs[1].body,
                        rf_and_all({c.pre_r, rf_left(el), rf_right(er2)}),
                        c.post_r));
  ps.push_back(by_false(c.c->gcs[1].body, c.c2->gcs[0].body,
                        rf_and_all({c.pre_r, rf_left(el2), rf_right(er)}),
                        c.post_r));
  ps.push_back(rconseq_to(
      Judgment::rel(p2->conclusion.c, p2->conclusion.c2,
                    rf_and_all({c.pre_r, rf_left(el2), rf_right(er2)}),
                    c.post_r),
      p2));
  return mk_node(Rule::DIf, c, ps);
}

} // namespace

ProofTreePtr expand_derived(const ProofTreePtr& t) {
  if (!t) return t;
  switch (t->rule) {
    case Rule::RDisjN:
      return expand_rdisjn(*t);
    case Rule::SeqSkip:
      return expand_seqskip(*t);
    case Rule::IfSkip:
      return expand_ifskip(*t);
    case Rule::DoSkip:
      return expand_doskip(*t);
    case Rule::AlgnIf:
      return expand_algnif(*t);
    default: {
      bool changed = false;
      std::vector<ProofTreePtr> ps;
      for (const auto& p : t->premises) {
        ProofTreePtr e = expand_derived(p);
        changed = changed || e != p;
        ps.push_back(e);
      }
      if (!changed) return t;
      auto out = std::make_shared<ProofTree>(*t);
      out->premises = std::move(ps);
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

namespace {

using Json = nlohmann::ordered_json;

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

CmpOp cmp_from_token(const std::string& s) {
  if (s == "=") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  if (s == "<") return CmpOp::Lt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">") return CmpOp::Gt;
  if (s == ">=") return CmpOp::Ge;
  throw std::runtime_error("proof json: bad comparison token: " + s);
}

Json store_values(const Store& s, const std::vector<std::string>& vars) {
  Json out = Json::array();
  for (const auto& v : vars) out.push_back(s.get(v));
  return out;
}

Store store_from_values(const Json& j, const std::vector<std::string>& vars) {
  Store s;
  for (size_t i = 0; i < vars.size(); ++i)
    s.vals[vars[i]] = j.at(i).get<int64_t>();
  return s;
}

const char* obligation_kind_name(Obligation::Kind k) {
  switch (k) {
    case Obligation::Kind::EntailUnary: return "entail-unary";
    case Obligation::Kind::EntailRel: return "entail-rel";
    case Obligation::Kind::Equivalence: return "equivalence";
    case Obligation::Kind::GhostCheck: return "ghost";
    case Obligation::Kind::IndepUnary: return "indep-unary";
    case Obligation::Kind::IndepRel: return "indep-rel";
    case Obligation::Kind::SideCondition: return "side-condition";
  }
  return "?";
}

// Commands and formulas are serialized structurally, not as surface text:
// instrumented programs carry the reserved label 0, which the surface parser
// (by design) rejects.  Shared subterms — synthesized trees reuse the loop
// invariant across hundreds of nodes — are interned into def tables at the
// document root and referenced by index, keeping documents small.
struct ProofWriter {
  Json cmds = Json::array();
  Json sfs = Json::array();
  Json rfs = Json::array();
  std::unordered_map<const Command*, size_t> cmap;
  std::unordered_map<const StoreFormula*, size_t> smap;
  std::unordered_map<const RelFormula*, size_t> rmap;

  size_t cmd(const CommandPtr& c) {
    auto it = cmap.find(c.get());
    if (it != cmap.end()) return it->second;
    Json j;
    switch (c->kind) {
      case Command::Kind::Skip:
        j["k"] = "skip";
        j["label"] = c->label;
        break;
      case Command::Kind::Assign:
        j["k"] = "assign";
        j["label"] = c->label;
        j["var"] = c->var;
        j["rhs"] = to_string(c->rhs);
        break;
      case Command::Kind::Seq:
        j["k"] = "seq";
        j["c1"] = cmd(c->c1);
        j["c2"] = cmd(c->c2);
        break;
      case Command::Kind::If:
      case Command::Kind::Do: {
        j["k"] = c->kind == Command::Kind::If ? "if" : "do";
        j["label"] = c->label;
        Json gcs = Json::array();
        for (const auto& gc : c->gcs) {
          Json g;
          g["guard"] = to_string(gc.guard);
          g["body"] = cmd(gc.body);
          gcs.push_back(std::move(g));
        }
        j["gcs"] = std::move(gcs);
        break;
      }
    }
    cmds.push_back(std::move(j));
    size_t idx = cmds.size() - 1;
    cmap[c.get()] = idx;
    return idx;
  }

  size_t sf(const StoreFormulaPtr& f) {
    auto it = smap.find(f.get());
    if (it != smap.end()) return it->second;
    Json j;
    switch (f->kind) {
      case StoreFormula::Kind::True: j["k"] = "true"; break;
      case StoreFormula::Kind::False: j["k"] = "false"; break;
      case StoreFormula::Kind::Embed:
        j["k"] = "embed";
        j["e"] = to_string(f->embed);
        break;
      case StoreFormula::Kind::And:
      case StoreFormula::Kind::Or:
        j["k"] = f->kind == StoreFormula::Kind::And ? "and" : "or";
        j["l"] = sf(f->l);
        j["r"] = sf(f->r);
        break;
      case StoreFormula::Kind::Not:
        j["k"] = "not";
        j["l"] = sf(f->l);
        break;
      case StoreFormula::Kind::Subst:
        j["k"] = "subst";
        j["body"] = sf(f->l);
        j["var"] = f->var;
        j["expr"] = to_string(f->expr);
        break;
      case StoreFormula::Kind::Ext: {
        j["k"] = "ext";
        j["vars"] = f->ext->vars;
        Json ms = Json::array();
        for (const Store& s : f->ext->members)
          ms.push_back(store_values(s, f->ext->vars));
        j["members"] = std::move(ms);
        break;
      }
    }
    sfs.push_back(std::move(j));
    size_t idx = sfs.size() - 1;
    smap[f.get()] = idx;
    return idx;
  }

  size_t rf(const RelFormulaPtr& f) {
    auto it = rmap.find(f.get());
    if (it != rmap.end()) return it->second;
    Json j;
    switch (f->kind) {
      case RelFormula::Kind::True: j["k"] = "true"; break;
      case RelFormula::Kind::False: j["k"] = "false"; break;
      case RelFormula::Kind::Left:
      case RelFormula::Kind::Right:
        j["k"] = f->kind == RelFormula::Kind::Left ? "left" : "right";
        j["e"] = to_string(f->embed);
        break;
      case RelFormula::Kind::Cross:
        j["k"] = "cross";
        j["cmp"] = cmp_token(f->cmp);
        j["le"] = to_string(f->le);
        j["re"] = to_string(f->re);
        break;
      case RelFormula::Kind::And:
      case RelFormula::Kind::Or:
        j["k"] = f->kind == RelFormula::Kind::And ? "and" : "or";
        j["l"] = rf(f->l);
        j["r"] = rf(f->r);
        break;
      case RelFormula::Kind::Not:
        j["k"] = "not";
        j["l"] = rf(f->l);
        break;
      case RelFormula::Kind::Subst:
        j["k"] = "subst";
        j["body"] = rf(f->l);
        if (f->has_l) {
          j["lvar"] = f->lvar;
          j["lexpr"] = to_string(f->lexpr);
        }
        if (f->has_r) {
          j["rvar"] = f->rvar;
          j["rexpr"] = to_string(f->rexpr);
        }
        break;
      case RelFormula::Kind::Ext: {
        j["k"] = "ext";
        j["lvars"] = f->ext->lvars;
        j["rvars"] = f->ext->rvars;
        Json ms = Json::array();
        for (const auto& [s, t] : f->ext->members) {
          Json m = Json::array();
          m.push_back(store_values(s, f->ext->lvars));
          m.push_back(store_values(t, f->ext->rvars));
          ms.push_back(std::move(m));
        }
        j["members"] = std::move(ms);
        break;
      }
    }
    rfs.push_back(std::move(j));
    size_t idx = rfs.size() - 1;
    rmap[f.get()] = idx;
    return idx;
  }

  Json judgment(const Judgment& jd) {
    Json j;
    j["relational"] = jd.relational;
    j["c"] = cmd(jd.c);
    if (jd.relational) {
      j["c2"] = cmd(jd.c2);
      j["pre"] = rf(jd.pre_r);
      j["post"] = rf(jd.post_r);
    } else {
      j["pre"] = sf(jd.pre_u);
      j["post"] = sf(jd.post_u);
    }
    return j;
  }

  Json obligation(const Obligation& ob) {
    Json j;
    j["id"] = ob.id;
    j["kind"] = obligation_kind_name(ob.kind);
    switch (ob.kind) {
      case Obligation::Kind::EntailUnary:
        j["lhs"] = sf(ob.u_lhs);
        j["rhs"] = sf(ob.u_rhs);
        break;
      case Obligation::Kind::EntailRel:
      case Obligation::Kind::SideCondition:
        j["lhs"] = rf(ob.r_lhs);
        j["rhs"] = rf(ob.r_rhs);
        break;
      case Obligation::Kind::Equivalence:
        j["lhs"] = cmd(ob.eq_lhs);
        j["rhs"] = cmd(ob.eq_rhs);
        break;
      case Obligation::Kind::GhostCheck:
        j["var"] = ob.var;
        j["subject"] = cmd(ob.subject);
        break;
      case Obligation::Kind::IndepUnary:
        j["var"] = ob.var;
        j["formula"] = sf(ob.u_lhs);
        break;
      case Obligation::Kind::IndepRel:
        j["var"] = ob.var;
        j["var2"] = ob.var2;
        j["formula"] = rf(ob.r_lhs);
        break;
    }
    return j;
  }

  Json node(const ProofTreePtr& t) {
    Json j;
    j["rule"] = to_string(t->rule);
    j["conclusion"] = judgment(t->conclusion);
    std::vector<Obligation> obs =
        t->obligations.empty() ? derive_obligations(*t) : t->obligations;
    Json jo = Json::array();
    for (const Obligation& ob : obs) jo.push_back(obligation(ob));
    j["obligations"] = std::move(jo);
    if (t->aux_l) j["aux_l"] = rf(t->aux_l);
    if (t->aux_r) j["aux_r"] = rf(t->aux_r);
    if (!t->ghost_var.empty()) j["ghost_var"] = t->ghost_var;
    if (!t->ghost_var2.empty()) j["ghost_var2"] = t->ghost_var2;
    if (!t->pc_hint.empty()) j["pc_hint"] = t->pc_hint;
    Json ch = Json::array();
    for (const auto& p : t->premises) ch.push_back(node(p));
    j["children"] = std::move(ch);
    return j;
  }
};

struct ProofReader {
  std::vector<CommandPtr> cmds;
  std::vector<StoreFormulaPtr> sfs;
  std::vector<RelFormulaPtr> rfs;

  // Def tables are written children-first, so each entry only references
  // earlier entries.
  void load_defs(const Json& doc) {
    for (const Json& j : doc.at("commands")) cmds.push_back(read_cmd(j));
    for (const Json& j : doc.at("store_formulas")) sfs.push_back(read_sf(j));
    for (const Json& j : doc.at("rel_formulas")) rfs.push_back(read_rf(j));
  }

  CommandPtr cmd(const Json& j) const {
    size_t i = j.get<size_t>();
    if (i >= cmds.size())
      throw std::runtime_error("proof json: command index out of range");
    return cmds[i];
  }
  StoreFormulaPtr sf(const Json& j) const {
    size_t i = j.get<size_t>();
    if (i >= sfs.size())
      throw std::runtime_error("proof json: formula index out of range");
    return sfs[i];
  }
  RelFormulaPtr rf(const Json& j) const {
    size_t i = j.get<size_t>();
    if (i >= rfs.size())
      throw std::runtime_error("proof json: formula index out of range");
    return rfs[i];
  }

  CommandPtr read_cmd(const Json& j) const {
    const std::string k = j.at("k").get<std::string>();
    if (k == "skip") return mk_skip(j.at("label").get<Label>());
    if (k == "assign")
      return mk_assign(j.at("label").get<Label>(), j.at("var"),
                       parse_int_expr(j.at("rhs")));
    if (k == "seq") return mk_seq(cmd(j.at("c1")), cmd(j.at("c2")));
    if (k == "if" || k == "do") {
      GuardedList gcs;
      for (const Json& g : j.at("gcs"))
        gcs.push_back({parse_bool_expr(g.at("guard")), cmd(g.at("body"))});
      return k == "if" ? mk_if(j.at("label").get<Label>(), gcs)
                       : mk_do(j.at("label").get<Label>(), gcs);
    }
    throw std::runtime_error("proof json: bad command kind: " + k);
  }

  StoreFormulaPtr read_sf(const Json& j) const {
    const std::string k = j.at("k").get<std::string>();
    if (k == "true") return sf_true();
    if (k == "false") return sf_false();
    if (k == "embed") return sf_embed(parse_bool_expr(j.at("e")));
    if (k == "and") return sf_and(sf(j.at("l")), sf(j.at("r")));
    if (k == "or") return sf_or(sf(j.at("l")), sf(j.at("r")));
    if (k == "not") return sf_not(sf(j.at("l")));
    if (k == "subst")
      return subst_store(sf(j.at("body")), j.at("var"),
                         parse_int_expr(j.at("expr")));
    if (k == "ext") {
      auto set = std::make_shared<StoreSet>();
      set->vars = j.at("vars").get<std::vector<std::string>>();
      for (const Json& m : j.at("members"))
        set->members.insert(store_from_values(m, set->vars));
      return sf_ext(set);
    }
    throw std::runtime_error("proof json: bad store formula kind: " + k);
  }

  RelFormulaPtr read_rf(const Json& j) const {
    const std::string k = j.at("k").get<std::string>();
    if (k == "true") return rf_true();
    if (k == "false") return rf_false();
    if (k == "left") return rf_left(parse_bool_expr(j.at("e")));
    if (k == "right") return rf_right(parse_bool_expr(j.at("e")));
    if (k == "cross")
      return rf_cross(cmp_from_token(j.at("cmp")), parse_int_expr(j.at("le")),
                      parse_int_expr(j.at("re")));
    if (k == "and") return rf_and(rf(j.at("l")), rf(j.at("r")));
    if (k == "or") return rf_or(rf(j.at("l")), rf(j.at("r")));
    if (k == "not") return rf_not(rf(j.at("l")));
    if (k == "subst") {
      std::optional<std::pair<std::string, IntExprPtr>> l, r;
      if (j.contains("lvar"))
        l = {{j.at("lvar").get<std::string>(), parse_int_expr(j.at("lexpr"))}};
      if (j.contains("rvar"))
        r = {{j.at("rvar").get<std::string>(), parse_int_expr(j.at("rexpr"))}};
      return subst_rel(rf(j.at("body")), l, r);
    }
    if (k == "ext") {
      auto set = std::make_shared<StorePairSet>();
      set->lvars = j.at("lvars").get<std::vector<std::string>>();
      set->rvars = j.at("rvars").get<std::vector<std::string>>();
      for (const Json& m : j.at("members"))
        set->members.insert({store_from_values(m.at(0), set->lvars),
                             store_from_values(m.at(1), set->rvars)});
      return rf_ext(set);
    }
    throw std::runtime_error("proof json: bad relational formula kind: " + k);
  }

  Judgment judgment(const Json& j) const {
    if (j.at("relational").get<bool>())
      return Judgment::rel(cmd(j.at("c")), cmd(j.at("c2")), rf(j.at("pre")),
                           rf(j.at("post")));
    return Judgment::unary(cmd(j.at("c")), sf(j.at("pre")), sf(j.at("post")));
  }

  ProofTreePtr node(const Json& j) const {
    auto t = std::make_shared<ProofTree>();
    auto rule = rule_from_name(j.at("rule").get<std::string>());
    if (!rule)
      throw std::runtime_error("proof json: unknown rule: " +
                               j.at("rule").get<std::string>());
    t->rule = *rule;
    t->conclusion = judgment(j.at("conclusion"));
    if (j.contains("aux_l")) t->aux_l = rf(j.at("aux_l"));
    if (j.contains("aux_r")) t->aux_r = rf(j.at("aux_r"));
    if (j.contains("ghost_var")) t->ghost_var = j.at("ghost_var");
    if (j.contains("ghost_var2")) t->ghost_var2 = j.at("ghost_var2");
    if (j.contains("pc_hint")) t->pc_hint = j.at("pc_hint");
    for (const Json& ch : j.at("children")) t->premises.push_back(node(ch));
    t->obligations = derive_obligations(*t);
    return t;
  }
};

std::string conclusion_text(const Judgment& jd) {
  if (jd.relational)
    return to_string(jd.c) + " | " + to_string(jd.c2) + " : {" +
           to_string(jd.pre_r) + "} {" + to_string(jd.post_r) + "}";
  return to_string(jd.c) + " : {" + to_string(jd.pre_u) + "} {" +
         to_string(jd.post_u) + "}";
}

} // namespace

std::string proof_to_json(const ProofTreePtr& t) {
  ProofWriter w;
  Json root = w.node(t);
  Json doc;
  doc["format"] = "rvwb-proof";
  doc["conclusion_text"] = conclusion_text(t->conclusion);
  doc["commands"] = std::move(w.cmds);
  doc["store_formulas"] = std::move(w.sfs);
  doc["rel_formulas"] = std::move(w.rfs);
  doc["root"] = std::move(root);
  return doc.dump(2) + "\n";
}

ProofTreePtr proof_from_json(const std::string& text) {
  Json doc = Json::parse(text);
  if (!doc.is_object() || doc.value("format", "") != "rvwb-proof")
    throw std::runtime_error("proof json: not a proof document");
  ProofReader r;
  r.load_defs(doc);
  return r.node(doc.at("root"));
}

} // namespace rvwb
