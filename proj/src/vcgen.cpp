#include "rvwb/vcgen.hpp"

#include <optional>

#include "rvwb/structure.hpp"

namespace rvwb {

namespace {

const char* edge_kind_name(SymEdge::Kind k) {
  switch (k) {
    case SymEdge::Kind::Skip: return "skip";
    case SymEdge::Kind::Asgn: return "asgn";
    case SymEdge::Kind::IfBranch: return "if-branch";
    case SymEdge::Kind::DoEnter: return "do-enter";
    case SymEdge::Kind::DoExit: return "do-exit";
  }
  return "?";
}

std::vector<SymEdge> program_edges(const CommandPtr& c, Label f) {
  return build_aut(c, f, DomainBound{}).edges;
}

bool is_false(const RelFormulaPtr& f) {
  return f->kind == RelFormula::Kind::False;
}

// Optional substitution pair carried by an edge.
std::optional<std::pair<std::string, IntExprPtr>> edge_subst(const SymEdge& e) {
  if (e.kind == SymEdge::Kind::Asgn) return {{e.var, e.rhs}};
  return std::nullopt;
}

// Optional guard condition carried by an edge (exit edges carry the negated
// enabling condition already).
BoolExprPtr edge_guard(const SymEdge& e) {
  switch (e.kind) {
    case SymEdge::Kind::IfBranch:
    case SymEdge::Kind::DoEnter:
    case SymEdge::Kind::DoExit:
      return e.guard;
    default:
      return nullptr;
  }
}

} // namespace

std::string VC::render() const {
  std::string s = id + " [" + case_tag + "]";
  if (encoded) s += " (encoded)";
  s += "\n  ";
  if (kind == Kind::Unary)
    s += to_string(u_ante) + "\n  => " + to_string(u_cons);
  else
    s += to_string(r_ante) + "\n  => " + to_string(r_cons);
  return s;
}

std::vector<VC> unary_vcs(const CommandPtr& c, Label f,
                          const UnaryAnnotation& an) {
  std::vector<VC> out;
  for (const SymEdge& e : program_edges(c, f)) {
    VC vc;
    vc.kind = VC::Kind::Unary;
    vc.n = e.from;
    vc.m = e.to;
    vc.id = "unary:" + std::to_string(e.from) + "->" + std::to_string(e.to);
    vc.case_tag = edge_kind_name(e.kind);
    StoreFormulaPtr ante = an.get(e.from);
    if (BoolExprPtr g = edge_guard(e)) ante = sf_and(ante, sf_embed(g));
    StoreFormulaPtr cons = an.get(e.to);
    if (auto sub = edge_subst(e)) cons = subst_store(cons, sub->first, sub->second);
    vc.u_ante = ante;
    vc.u_cons = cons;
    out.push_back(std::move(vc));
  }
  return out;
}

namespace {

std::string rel_id(const char* kind, Label n, Label n2, Label m, Label m2) {
  return std::string(kind) + ":" + std::to_string(n) + "," +
         std::to_string(n2) + "->" + std::to_string(m) + "," +
         std::to_string(m2);
}

// Common generator for the plain and pc-encoded forms.
std::vector<VC> rel_vcs_impl(const CommandPtr& c, const CommandPtr& c2,
                             Label f, Label f2, const StateRelSpec& l,
                             const StateRelSpec& r, const StateRelSpec& j,
                             const RelAnnotation& an, const std::string* pc) {
  std::vector<VC> out;
  std::vector<SymEdge> le = program_edges(c, f);
  std::vector<SymEdge> re = program_edges(c2, f2);
  LabelSet lctrl = labs(c);
  lctrl.insert(f);
  LabelSet rctrl = labs(c2);
  rctrl.insert(f2);

  auto pc_pair = [&](Label n, Label n2) {
    return rf_and(
        rf_left(bool_cmp(CmpOp::Eq, int_var(*pc), int_lit(n))),
        rf_right(bool_cmp(CmpOp::Eq, int_var(*pc), int_lit(n2))));
  };

  // Left-only rows: one per (left edge, right control point).
  for (const SymEdge& e : le) {
    for (Label n2 : rctrl) {
      RelFormulaPtr cond = l.at(e.from, n2);
      RelFormulaPtr ante_an = an.get(e.from, n2);
      if (is_false(cond) || is_false(ante_an)) continue;
      VC vc;
      vc.kind = VC::Kind::LO;
      vc.n = e.from;
      vc.n2 = n2;
      vc.m = e.to;
      vc.m2 = n2;
      vc.id = rel_id("LO", e.from, n2, e.to, n2);
      vc.case_tag = std::string(edge_kind_name(e.kind)) + "|-";
      std::vector<RelFormulaPtr> ante;
      if (pc) {
        ante.push_back(encode_pc(l, *pc));
        ante.push_back(pc_pair(e.from, n2));
        vc.encoded = true;
      } else {
        ante.push_back(cond);
      }
      ante.push_back(ante_an);
      if (BoolExprPtr g = edge_guard(e)) ante.push_back(rf_left(g));
      vc.r_ante = rf_and_all(ante);
      RelFormulaPtr cons = an.get(e.to, n2);
      if (auto sub = edge_subst(e)) cons = subst_rel(cons, sub, std::nullopt);
      vc.r_cons = cons;
      out.push_back(std::move(vc));
    }
  }

  // Right-only rows.
  for (const SymEdge& e : re) {
    for (Label n : lctrl) {
      RelFormulaPtr cond = r.at(n, e.from);
      RelFormulaPtr ante_an = an.get(n, e.from);
      if (is_false(cond) || is_false(ante_an)) continue;
      VC vc;
      vc.kind = VC::Kind::RO;
      vc.n = n;
      vc.n2 = e.from;
      vc.m = n;
      vc.m2 = e.to;
      vc.id = rel_id("RO", n, e.from, n, e.to);
      vc.case_tag = std::string("-|") + edge_kind_name(e.kind);
      std::vector<RelFormulaPtr> ante;
      if (pc) {
        ante.push_back(encode_pc(r, *pc));
        ante.push_back(pc_pair(n, e.from));
        vc.encoded = true;
      } else {
        ante.push_back(cond);
      }
      ante.push_back(ante_an);
      if (BoolExprPtr g = edge_guard(e)) ante.push_back(rf_right(g));
      vc.r_ante = rf_and_all(ante);
      RelFormulaPtr cons = an.get(n, e.to);
      if (auto sub = edge_subst(e)) cons = subst_rel(cons, std::nullopt, sub);
      vc.r_cons = cons;
      out.push_back(std::move(vc));
    }
  }

  // Joint rows: one per edge pair.
  for (const SymEdge& el : le) {
    for (const SymEdge& er : re) {
      RelFormulaPtr cond = j.at(el.from, er.from);
      RelFormulaPtr ante_an = an.get(el.from, er.from);
      if (is_false(cond) || is_false(ante_an)) continue;
      VC vc;
      vc.kind = VC::Kind::JO;
      vc.n = el.from;
      vc.n2 = er.from;
      vc.m = el.to;
      vc.m2 = er.to;
      vc.id = rel_id("JO", el.from, er.from, el.to, er.to);
      vc.case_tag = std::string(edge_kind_name(el.kind)) + "|" +
                    edge_kind_name(er.kind);
      std::vector<RelFormulaPtr> ante;
      if (pc) {
        ante.push_back(encode_pc(j, *pc));
        ante.push_back(pc_pair(el.from, er.from));
        vc.encoded = true;
      } else {
        ante.push_back(cond);
      }
      ante.push_back(ante_an);
      if (BoolExprPtr g = edge_guard(el)) ante.push_back(rf_left(g));
      if (BoolExprPtr g = edge_guard(er)) ante.push_back(rf_right(g));
      vc.r_ante = rf_and_all(ante);
      vc.r_cons = subst_rel(an.get(el.to, er.to), edge_subst(el), edge_subst(er));
      out.push_back(std::move(vc));
    }
  }
  return out;
}

} // namespace

std::vector<VC> rel_vcs(const CommandPtr& c, const CommandPtr& c2, Label f,
                        Label f2, const StateRelSpec& l, const StateRelSpec& r,
                        const StateRelSpec& j, const RelAnnotation& an) {
  return rel_vcs_impl(c, c2, f, f2, l, r, j, an, nullptr);
}

std::vector<VC> encoded_rel_vcs(const CommandPtr& c, const CommandPtr& c2,
                                Label f, Label f2, const StateRelSpec& l,
                                const StateRelSpec& r, const StateRelSpec& j,
                                const RelAnnotation& an,
                                const std::string& pc) {
  if (occurs(pc, c) || occurs(pc, c2))
    throw std::invalid_argument(
        "encoded_rel_vcs: pc variable occurs in a program");
  return rel_vcs_impl(c, c2, f, f2, l, r, j, an, &pc);
}

DischargeReport discharge(const std::vector<VC>& vcs,
                          const DomainBound& bound) {
  DischargeReport rep;
  for (const VC& vc : vcs) {
    Verdict v = vc.kind == VC::Kind::Unary
                    ? entails(vc.u_ante, vc.u_cons, bound)
                    : entails(vc.r_ante, vc.r_cons, bound);
    if (!v.valid()) rep.all_valid = false;
    rep.entries.push_back({vc, std::move(v)});
  }
  return rep;
}

Verdict check_condition_c(const RelAnnotation& an, const StateRelSpec& l,
                          const StateRelSpec& r, const StateRelSpec& j,
                          Label f, Label f2, const DomainBound& bound) {
  const std::string& pc = bound.pc_name;
  RelFormulaPtr target = rf_or(
      rf_or(encode_pc(l, pc), encode_pc(r, pc)),
      rf_or(encode_pc(j, pc),
            rf_and(rf_left(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(f))),
                   rf_right(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(f2))))));
  Verdict out = Verdict::ok();
  for (const auto& [ctrl, formula] : an.at) {
    auto [i, jj] = ctrl;
    if (i == f && jj == f2) continue;
    if (is_false(formula)) continue;
    RelFormulaPtr ante = rf_and_all(
        {rf_left(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(i))),
         rf_right(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(jj))), formula});
    Verdict v = entails(ante, target, bound);
    if (v.valid()) continue;
    if (v.status == Verdict::Status::Inconclusive) return v;
    for (auto& cx : v.cex) {
      cx.detail = "control (" + std::to_string(i) + "," + std::to_string(jj) +
                  ") " + cx.detail;
      out.add_cex(cx);
    }
    if (out.cex.size() >= 5) return out;
  }
  return out;
}

} // namespace rvwb
