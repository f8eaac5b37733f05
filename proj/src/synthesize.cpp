// The two constructive completeness arguments: a Hoare proof from a valid
// automaton annotation, and a relational proof from an adequate aligned
// annotation.  Both go through the normal form: prove the dispatch loop with
// one loop rule, then transport the result back to the source program by
// rewriting and ghost-erasing the pc instrumentation.
#include <algorithm>
#include <stdexcept>

#include "rvwb/normalform.hpp"
#include "rvwb/proof.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/vcgen.hpp"

namespace rvwb {

namespace {

void fill_obligations(const ProofTreePtr& t) {
  t->obligations = derive_obligations(*t);
  for (const auto& p : t->premises) fill_obligations(p);
}

std::vector<Label> sorted_ctrl(const CommandPtr& c, Label f) {
  LabelSet ls = labs(c);
  ls.insert(f);
  return {ls.begin(), ls.end()};
}

BoolExprPtr pc_test(const std::string& pc, Label n) {
  return bool_cmp(CmpOp::Eq, int_var(pc), int_lit(n));
}

DomainBound with_pc(const DomainBound& bound, const std::string& pc,
                    const std::vector<Label>& ctrl) {
  DomainBound b = bound;
  b.pc_name = pc;
  if (b.pc_domain.empty())
    b.pc_domain.assign(ctrl.begin(), ctrl.end());
  return b;
}

[[noreturn]] void vc_failure(const DischargeReport& rep) {
  std::string msg = "verification condition failed:";
  for (const DischargeEntry& e : rep.entries)
    if (!e.verdict.valid()) msg += "\n" + e.vc.render() + "\n" + e.verdict.to_string();
  throw std::runtime_error(msg);
}

} // namespace

// ---------------------------------------------------------------------------
// Floyd completeness
// ---------------------------------------------------------------------------

ProofTreePtr synthesize_unary(const CommandPtr& c, Label f,
                              const UnaryAnnotation& an, const std::string& pc,
                              const DomainBound& bound) {
  if (!okf(c, f))
    throw std::invalid_argument("synthesize_unary: program not well-labeled");
  if (occurs(pc, c))
    throw std::invalid_argument("synthesize_unary: pc occurs in the program");

  std::vector<Label> ctrl = sorted_ctrl(c, f);
  DomainBound b = with_pc(bound, pc, ctrl);

  DischargeReport rep = discharge(unary_vcs(c, f, an), b);
  if (!rep.all_valid) vc_failure(rep);

  NormalForm nf = normalize(c, f, pc);

  // The loop invariant: pc is at some control point, and the annotation of
  // that control point holds.
  std::vector<StoreFormulaPtr> cover, rows;
  for (Label n : ctrl) {
    cover.push_back(sf_embed(pc_test(pc, n)));
    rows.push_back(sf_or(sf_not(sf_embed(pc_test(pc, n))), an.get(n)));
  }
  StoreFormulaPtr inv = sf_and(sf_or_all(cover), sf_and_all(rows));

  // One premise per dispatch guard.
  std::vector<ProofTreePtr> premises;
  for (const GuardedCommand& gc : nf.body) {
    StoreFormulaPtr pre = sf_and_all({sf_embed(gc.guard), inv});
    if (gc.body->kind == Command::Kind::Assign) {
      // pc := m  under  ?k [ /\ e ].
      StoreFormulaPtr sub = subst_store(inv, pc, gc.body->rhs);
      ProofTreePtr a =
          mk_node(Rule::Asgn, Judgment::unary(gc.body, sub, inv));
      premises.push_back(
          mk_node(Rule::Conseq, Judgment::unary(gc.body, pre, inv), {a}));
    } else {
      // (x := e); (pc := m)  under  ?k.
      const CommandPtr& asg = gc.body->c1;
      const CommandPtr& setp = gc.body->c2;
      Label m = setp->rhs->lit;
      StoreFormulaPtr mid = an.get(m);
      ProofTreePtr la = mk_node(
          Rule::Asgn,
          Judgment::unary(asg, subst_store(mid, asg->var, asg->rhs), mid));
      ProofTreePtr lc =
          mk_node(Rule::Conseq, Judgment::unary(asg, pre, mid), {la});
      ProofTreePtr ra = mk_node(
          Rule::Asgn, Judgment::unary(setp, subst_store(inv, pc, setp->rhs),
                                      inv));
      ProofTreePtr rc =
          mk_node(Rule::Conseq, Judgment::unary(setp, mid, inv), {ra});
      premises.push_back(
          mk_node(Rule::Seq, Judgment::unary(gc.body, pre, inv), {lc, rc}));
    }
  }

  CommandPtr loop = nf.loop();
  StoreFormulaPtr loop_post =
      sf_and_all({inv, sf_embed(bool_not(enab(nf.body)))});
  ProofTreePtr d =
      mk_node(Rule::Do, Judgment::unary(loop, inv, loop_post), premises);

  StoreFormulaPtr p = an.get(nf.init);
  StoreFormulaPtr q = an.get(f);

  ProofTreePtr dc = mk_node(Rule::Conseq, Judgment::unary(loop, inv, q), {d});
  ProofTreePtr ia = mk_node(
      Rule::Asgn, Judgment::unary(nf.init_assign,
                                  subst_store(inv, pc, int_lit(nf.init)), inv));
  ProofTreePtr ic =
      mk_node(Rule::Conseq, Judgment::unary(nf.init_assign, p, inv), {ia});
  CommandPtr prog = mk_seq(nf.init_assign, loop);
  ProofTreePtr sq =
      mk_node(Rule::Seq, Judgment::unary(prog, p, q), {ic, dc});

  CommandPtr instr = mk_seq(add_pc(pc, c), mk_assign(0, pc, int_lit(f)));
  ProofTreePtr rw = mk_node(Rule::Rewrite, Judgment::unary(instr, p, q), {sq});
  rw->pc_hint = pc;

  CommandPtr erased = erase(pc, instr);
  ProofTreePtr gh =
      mk_node(Rule::Ghost, Judgment::unary(erased, p, q), {rw});
  gh->ghost_var = pc;

  ProofTreePtr fin = mk_node(Rule::Rewrite, Judgment::unary(c, p, q), {gh});
  fin->pc_hint = pc;
  fill_obligations(fin);
  return fin;
}

// ---------------------------------------------------------------------------
// Alignment completeness
// ---------------------------------------------------------------------------

namespace {

// Shared state of the relational construction.
struct RelSynth {
  const std::string& pc;
  RelFormulaPtr q;        // the loop invariant
  RelFormulaPtr lt, rt;   // pc-encoded one-sided alignment conditions

  RelFormulaPtr lpc(Label n) const {
    return rf_left(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(n)));
  }
  RelFormulaPtr rpc(Label n) const {
    return rf_right(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(n)));
  }

  // body | skip : {a}{q} for a left dispatch body.
  ProofTreePtr left_step(const CommandPtr& body, RelFormulaPtr a) const {
    CommandPtr sk = mk_skip(0);
    if (body->kind == Command::Kind::Assign) {
      RelFormulaPtr sub = subst_rel(q, {{body->var, body->rhs}}, std::nullopt);
      ProofTreePtr n =
          mk_node(Rule::AsgnSkip, Judgment::rel(body, sk, sub, q));
      return mk_node(Rule::RConseq, Judgment::rel(body, sk, a, q), {n});
    }
    const CommandPtr& asg = body->c1;
    const CommandPtr& setp = body->c2;
    RelFormulaPtr b = subst_rel(q, {{setp->var, setp->rhs}}, std::nullopt);
    ProofTreePtr t1a = mk_node(
        Rule::AsgnSkip,
        Judgment::rel(asg, sk,
                      subst_rel(b, {{asg->var, asg->rhs}}, std::nullopt), b));
    ProofTreePtr t1 =
        mk_node(Rule::RConseq, Judgment::rel(asg, sk, a, b), {t1a});
    ProofTreePtr t2 =
        mk_node(Rule::AsgnSkip, Judgment::rel(setp, sk, b, q));
    return mk_node(Rule::SeqSkip, Judgment::rel(body, sk, a, q), {t1, t2});
  }

  // skip | body : {a}{q} for a right dispatch body.
  ProofTreePtr right_step(const CommandPtr& body, RelFormulaPtr a) const {
    CommandPtr sk = mk_skip(0);
    if (body->kind == Command::Kind::Assign) {
      RelFormulaPtr sub = subst_rel(q, std::nullopt, {{body->var, body->rhs}});
      ProofTreePtr n =
          mk_node(Rule::SkipAsgn, Judgment::rel(sk, body, sub, q));
      return mk_node(Rule::RConseq, Judgment::rel(sk, body, a, q), {n});
    }
    const CommandPtr& asg = body->c1;
    const CommandPtr& setp = body->c2;
    RelFormulaPtr b = subst_rel(q, std::nullopt, {{setp->var, setp->rhs}});
    ProofTreePtr t1a = mk_node(
        Rule::SkipAsgn,
        Judgment::rel(sk, asg,
                      subst_rel(b, std::nullopt, {{asg->var, asg->rhs}}), b));
    ProofTreePtr t1 =
        mk_node(Rule::RConseq, Judgment::rel(sk, asg, a, b), {t1a});
    ProofTreePtr t2 =
        mk_node(Rule::SkipAsgn, Judgment::rel(sk, setp, b, q));
    CommandPtr two = mk_seq(sk, sk);
    ProofTreePtr d =
        mk_node(Rule::DSeq, Judgment::rel(two, body, a, q), {t1, t2});
    return mk_node(Rule::RRewrite, Judgment::rel(sk, body, a, q), {d});
  }

  // bl | br : {a}{q} for a pair of dispatch bodies.
  ProofTreePtr joint_step(const CommandPtr& bl, const CommandPtr& br,
                          RelFormulaPtr a) const {
    CommandPtr sk = mk_skip(0);
    bool lseq = bl->kind == Command::Kind::Seq;
    bool rseq = br->kind == Command::Kind::Seq;
    const CommandPtr setl = lseq ? bl->c2 : bl;
    const CommandPtr setr = rseq ? br->c2 : br;
    RelFormulaPtr b =
        subst_rel(q, {{setl->var, setl->rhs}}, {{setr->var, setr->rhs}});
    if (!lseq && !rseq) {
      ProofTreePtr n = mk_node(Rule::DAsgn, Judgment::rel(bl, br, b, q));
      return mk_node(Rule::RConseq, Judgment::rel(bl, br, a, q), {n});
    }
    ProofTreePtr t2 = mk_node(Rule::DAsgn, Judgment::rel(setl, setr, b, q));
    if (lseq && rseq) {
      const CommandPtr& la = bl->c1;
      const CommandPtr& ra = br->c1;
      ProofTreePtr t1a = mk_node(
          Rule::DAsgn,
          Judgment::rel(la, ra,
                        subst_rel(b, {{la->var, la->rhs}},
                                  {{ra->var, ra->rhs}}),
                        b));
      ProofTreePtr t1 =
          mk_node(Rule::RConseq, Judgment::rel(la, ra, a, b), {t1a});
      return mk_node(Rule::DSeq, Judgment::rel(bl, br, a, q), {t1, t2});
    }
    if (lseq) {
      const CommandPtr& la = bl->c1;
      ProofTreePtr t1a = mk_node(
          Rule::AsgnSkip,
          Judgment::rel(la, sk,
                        subst_rel(b, {{la->var, la->rhs}}, std::nullopt), b));
      ProofTreePtr t1 =
          mk_node(Rule::RConseq, Judgment::rel(la, sk, a, b), {t1a});
      ProofTreePtr d = mk_node(
          Rule::DSeq, Judgment::rel(bl, mk_seq(sk, setr), a, q), {t1, t2});
      return mk_node(Rule::RRewrite, Judgment::rel(bl, br, a, q), {d});
    }
    const CommandPtr& ra = br->c1;
    ProofTreePtr t1a = mk_node(
        Rule::SkipAsgn,
        Judgment::rel(sk, ra,
                      subst_rel(b, std::nullopt, {{ra->var, ra->rhs}}), b));
    ProofTreePtr t1 =
        mk_node(Rule::RConseq, Judgment::rel(sk, ra, a, b), {t1a});
    ProofTreePtr d = mk_node(
        Rule::DSeq, Judgment::rel(mk_seq(sk, setl), br, a, q), {t1, t2});
    return mk_node(Rule::RRewrite, Judgment::rel(bl, br, a, q), {d});
  }
};

} // namespace

ProofTreePtr synthesize_relational(const CommandPtr& c, const CommandPtr& c2,
                                   Label f, Label f2, const StateRelSpec& l,
                                   const StateRelSpec& r, const StateRelSpec& j,
                                   const RelAnnotation& an,
                                   const std::string& pc,
                                   const DomainBound& bound) {
  if (!okf(c, f) || !okf(c2, f2))
    throw std::invalid_argument(
        "synthesize_relational: programs not well-labeled");
  if (occurs(pc, c) || occurs(pc, c2))
    throw std::invalid_argument(
        "synthesize_relational: pc occurs in a program");

  std::vector<Label> s1 = sorted_ctrl(c, f);
  std::vector<Label> s2 = sorted_ctrl(c2, f2);
  std::vector<Label> all = s1;
  all.insert(all.end(), s2.begin(), s2.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  DomainBound b = with_pc(bound, pc, all);

  DischargeReport rep =
      discharge(encoded_rel_vcs(c, c2, f, f2, l, r, j, an, pc), b);
  if (!rep.all_valid) vc_failure(rep);
  Verdict cc = check_condition_c(an, l, r, j, f, f2, b);
  if (!cc.valid())
    throw std::runtime_error(
        "alignment coverage condition failed:\n" + cc.to_string());

  NormalForm nf1 = normalize(c, f, pc);
  NormalForm nf2 = normalize(c2, f2, pc);

  RelSynth sy{pc, nullptr, encode_pc(l, pc), encode_pc(r, pc)};

  // The invariant: the control pair is on the grid, and its annotation holds.
  std::vector<RelFormulaPtr> rows, cover;
  for (Label i : s1)
    for (Label jj : s2) {
      RelFormulaPtr pair = rf_and(sy.lpc(i), sy.rpc(jj));
      rows.push_back(rf_or(rf_not(pair), an.get(i, jj)));
      cover.push_back(pair);
    }
  sy.q = rf_and(rf_and_all(rows), rf_or_all(cover));
  const RelFormulaPtr& q = sy.q;

  CommandPtr sk = mk_skip(0);
  std::vector<ProofTreePtr> premises;

  // Left-only premises: split on the right control point.
  for (const GuardedCommand& gc : nf1.body) {
    std::vector<ProofTreePtr> subs;
    std::vector<RelFormulaPtr> pres;
    for (Label jj : s2) {
      RelFormulaPtr a =
          rf_and_all({q, rf_left(gc.guard), sy.lt, sy.rpc(jj)});
      pres.push_back(a);
      subs.push_back(sy.left_step(gc.body, a));
    }
    ProofTreePtr disj = mk_node(
        Rule::RDisjN, Judgment::rel(gc.body, sk, rf_or_all(pres), q), subs);
    premises.push_back(mk_node(
        Rule::RConseq,
        Judgment::rel(gc.body, sk,
                      rf_and_all({q, rf_left(gc.guard), sy.lt}), q),
        {disj}));
  }

  // Right-only premises: split on the left control point.
  for (const GuardedCommand& gc : nf2.body) {
    std::vector<ProofTreePtr> subs;
    std::vector<RelFormulaPtr> pres;
    for (Label i : s1) {
      RelFormulaPtr a =
          rf_and_all({q, rf_right(gc.guard), sy.rt, sy.lpc(i)});
      pres.push_back(a);
      subs.push_back(sy.right_step(gc.body, a));
    }
    ProofTreePtr disj = mk_node(
        Rule::RDisjN, Judgment::rel(sk, gc.body, rf_or_all(pres), q), subs);
    premises.push_back(mk_node(
        Rule::RConseq,
        Judgment::rel(sk, gc.body,
                      rf_and_all({q, rf_right(gc.guard), sy.rt}), q),
        {disj}));
  }

  // Joint premises, one per guard pair.
  for (const GuardedCommand& gl : nf1.body)
    for (const GuardedCommand& gr : nf2.body) {
      RelFormulaPtr a =
          rf_and_all({q, rf_left(gl.guard), rf_right(gr.guard),
                      rf_not(sy.lt), rf_not(sy.rt)});
      premises.push_back(sy.joint_step(gl.body, gr.body, a));
    }

  CommandPtr loop1 = nf1.loop();
  CommandPtr loop2 = nf2.loop();
  RelFormulaPtr loop_post =
      rf_and_all({q, rf_left(bool_not(enab(nf1.body))),
                  rf_right(bool_not(enab(nf2.body)))});
  ProofTreePtr ddo =
      mk_node(Rule::DDo, Judgment::rel(loop1, loop2, q, loop_post), premises);
  ddo->aux_l = sy.lt;
  ddo->aux_r = sy.rt;

  RelFormulaPtr s0 = an.get(nf1.init, nf2.init);
  RelFormulaPtr t0 = an.get(f, f2);
  RelFormulaPtr pre1 =
      rf_and_all({sy.lpc(nf1.init), sy.rpc(nf2.init), s0});

  ProofTreePtr w1 =
      mk_node(Rule::RConseq, Judgment::rel(loop1, loop2, pre1, t0), {ddo});
  ProofTreePtr ta = mk_node(
      Rule::DAsgn,
      Judgment::rel(nf1.init_assign, nf2.init_assign,
                    subst_rel(pre1, {{pc, int_lit(nf1.init)}},
                              {{pc, int_lit(nf2.init)}}),
                    pre1));
  ProofTreePtr ti = mk_node(
      Rule::RConseq,
      Judgment::rel(nf1.init_assign, nf2.init_assign, s0, pre1), {ta});
  CommandPtr prog1 = mk_seq(nf1.init_assign, loop1);
  CommandPtr prog2 = mk_seq(nf2.init_assign, loop2);
  ProofTreePtr sq = mk_node(
      Rule::DSeq, Judgment::rel(prog1, prog2, s0, t0), {ti, w1});

  CommandPtr instr1 = mk_seq(add_pc(pc, c), mk_assign(0, pc, int_lit(f)));
  CommandPtr instr2 = mk_seq(add_pc(pc, c2), mk_assign(0, pc, int_lit(f2)));
  ProofTreePtr rw = mk_node(
      Rule::RRewrite, Judgment::rel(instr1, instr2, s0, t0), {sq});
  rw->pc_hint = pc;

  ProofTreePtr gh = mk_node(
      Rule::RGhost,
      Judgment::rel(erase(pc, instr1), erase(pc, instr2), s0, t0), {rw});
  gh->ghost_var = pc;
  gh->ghost_var2 = pc;

  ProofTreePtr fin =
      mk_node(Rule::RRewrite, Judgment::rel(c, c2, s0, t0), {gh});
  fin->pc_hint = pc;
  fill_obligations(fin);
  return fin;
}

} // namespace rvwb
