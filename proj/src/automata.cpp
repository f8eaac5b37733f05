#include "rvwb/automata.hpp"

#include <deque>
#include <stdexcept>

#include "rvwb/eval.hpp"

namespace rvwb {

std::string to_string(const SymEdge& e) {
  const char* kind = "";
  switch (e.kind) {
    case SymEdge::Kind::Skip: kind = "skip"; break;
    case SymEdge::Kind::Asgn: kind = "asgn"; break;
    case SymEdge::Kind::IfBranch: kind = "if-branch"; break;
    case SymEdge::Kind::DoEnter: kind = "do-enter"; break;
    case SymEdge::Kind::DoExit: kind = "do-exit"; break;
  }
  return "(" + std::to_string(e.from) + " -> " + std::to_string(e.to) +
         ") : " + kind;
}

std::vector<std::pair<Label, Store>> Automaton::step(Label n,
                                                     const Store& s) const {
  std::vector<std::pair<Label, Store>> out;
  for (const SymEdge& e : edges) {
    if (e.from != n) continue;
    switch (e.kind) {
      case SymEdge::Kind::Skip:
        out.push_back({e.to, s});
        break;
      case SymEdge::Kind::Asgn:
        out.push_back({e.to, s.with(e.var, eval_int(e.rhs, s))});
        break;
      case SymEdge::Kind::IfBranch:
      case SymEdge::Kind::DoEnter:
      case SymEdge::Kind::DoExit:
        if (eval_bool(e.guard, s)) out.push_back({e.to, s});
        break;
    }
  }
  return out;
}

namespace {

void collect_edges(const CommandPtr& node, const CommandPtr& whole, Label f,
                   std::vector<SymEdge>& out) {
  switch (node->kind) {
    case Command::Kind::Skip: {
      SymEdge e{SymEdge::Kind::Skip, node->label,
                fsuc(node->label, whole, f)};
      out.push_back(e);
      return;
    }
    case Command::Kind::Assign: {
      SymEdge e{SymEdge::Kind::Asgn, node->label,
                fsuc(node->label, whole, f)};
      e.var = node->var;
      e.rhs = node->rhs;
      out.push_back(e);
      return;
    }
    case Command::Kind::Seq:
      collect_edges(node->c1, whole, f, out);
      collect_edges(node->c2, whole, f, out);
      return;
    case Command::Kind::If:
      for (const auto& gc : node->gcs) {
        SymEdge e{SymEdge::Kind::IfBranch, node->label, lab(gc.body)};
        e.guard = gc.guard;
        out.push_back(e);
      }
      for (const auto& gc : node->gcs) collect_edges(gc.body, whole, f, out);
      return;
    case Command::Kind::Do: {
      for (const auto& gc : node->gcs) {
        SymEdge e{SymEdge::Kind::DoEnter, node->label, lab(gc.body)};
        e.guard = gc.guard;
        out.push_back(e);
      }
      SymEdge exit{SymEdge::Kind::DoExit, node->label,
                   fsuc(node->label, whole, f)};
      exit.guard = bool_not(enab(node->gcs));
      out.push_back(exit);
      for (const auto& gc : node->gcs) collect_edges(gc.body, whole, f, out);
      return;
    }
  }
}

} // namespace

Automaton build_aut(const CommandPtr& c, Label f, const DomainBound& bound) {
  if (!okf(c, f))
    throw std::invalid_argument(
        "build_aut: program must be well-labeled with fresh final label");
  Automaton a;
  a.ctrl = labs(c);
  a.ctrl.insert(f);
  a.init = lab(c);
  a.fin = f;
  a.bound = bound;
  collect_edges(c, c, f, a.edges);
  return a;
}

std::string ProductState::to_string() const {
  return "((" + std::to_string(ln) + "," + std::to_string(rn) + "), (" +
         ls.to_string() + " | " + rs.to_string() + "))";
}

std::vector<ProductState> ProductAutomaton::step(const ProductState& st) const {
  std::vector<ProductState> out;
  if (L.holds(st.ln, st.rn, st.ls, st.rs))
    for (auto& [m, u] : left.step(st.ln, st.ls))
      out.push_back({m, st.rn, u, st.rs});
  if (R.holds(st.ln, st.rn, st.ls, st.rs))
    for (auto& [m, u] : right.step(st.rn, st.rs))
      out.push_back({st.ln, m, st.ls, u});
  if (J.holds(st.ln, st.rn, st.ls, st.rs))
    for (auto& [m, u] : left.step(st.ln, st.ls))
      for (auto& [m2, u2] : right.step(st.rn, st.rs))
        out.push_back({m, m2, u, u2});
  return out;
}

ProductAutomaton build_product(const Automaton& a, const Automaton& a2,
                               StateRelSpec l, StateRelSpec r,
                               StateRelSpec j) {
  return {a, a2, std::move(l), std::move(r), std::move(j)};
}

namespace {

// Expand wildcard slots over a control set minus one excluded label, leaving
// the clause otherwise intact.
std::vector<StateRelClause> expand_left(const StateRelClause& cl,
                                        const LabelSet& ctrl, Label excl) {
  std::vector<StateRelClause> out;
  if (cl.left) {
    if (*cl.left != excl) out.push_back(cl);
    return out;
  }
  for (Label n : ctrl) {
    if (n == excl) continue;
    StateRelClause c = cl;
    c.left = n;
    out.push_back(c);
  }
  return out;
}

std::vector<StateRelClause> expand_right(const StateRelClause& cl,
                                         const LabelSet& ctrl, Label excl) {
  std::vector<StateRelClause> out;
  if (cl.right) {
    if (*cl.right != excl) out.push_back(cl);
    return out;
  }
  for (Label n : ctrl) {
    if (n == excl) continue;
    StateRelClause c = cl;
    c.right = n;
    out.push_back(c);
  }
  return out;
}

} // namespace

std::tuple<StateRelSpec, StateRelSpec, StateRelSpec> restrict_live(
    const Automaton& a, const Automaton& a2, const StateRelSpec& l,
    const StateRelSpec& r, const StateRelSpec& j) {
  StateRelSpec l2, r2, j2;
  for (const auto& cl : l.clauses)
    for (auto& c : expand_left(cl, a.ctrl, a.fin)) l2.clauses.push_back(c);
  for (const auto& cl : r.clauses)
    for (auto& c : expand_right(cl, a2.ctrl, a2.fin)) r2.clauses.push_back(c);
  for (const auto& cl : j.clauses)
    for (auto& cl1 : expand_left(cl, a.ctrl, a.fin))
      for (auto& c : expand_right(cl1, a2.ctrl, a2.fin))
        j2.clauses.push_back(c);
  return {l2, r2, j2};
}

ReachResult reachable(const Automaton& a, const std::vector<Store>& init_stores,
                      const DomainBound& bound) {
  ReachResult res;
  std::deque<std::pair<Label, Store>> work;
  int64_t expanded = 0;
  for (const Store& s : init_stores)
    if (res.states.insert({a.init, s}).second) work.push_back({a.init, s});
  while (!work.empty()) {
    if (++expanded > bound.step_budget) {
      res.complete = false;
      return res;
    }
    auto [n, s] = work.front();
    work.pop_front();
    for (auto& nxt : a.step(n, s))
      if (res.states.insert(nxt).second) work.push_back(nxt);
  }
  return res;
}

ProductReachResult reachable_product(const ProductAutomaton& p,
                                     const std::vector<ProductState>& init,
                                     const DomainBound& bound) {
  ProductReachResult res;
  std::set<ProductState> seen;
  std::deque<ProductState> work;
  int64_t expanded = 0;
  for (const ProductState& st : init)
    if (seen.insert(st).second) {
      res.states.push_back(st);
      work.push_back(st);
    }
  while (!work.empty()) {
    if (++expanded > bound.step_budget) {
      res.complete = false;
      return res;
    }
    ProductState st = work.front();
    work.pop_front();
    for (ProductState& nxt : p.step(st))
      if (seen.insert(nxt).second) {
        res.states.push_back(nxt);
        work.push_back(nxt);
      }
  }
  return res;
}

namespace {

std::vector<ProductState> q_initial_pairs(const ProductAutomaton& p,
                                          const RelFormulaPtr& q,
                                          const DomainBound& bound) {
  std::vector<ProductState> init;
  std::vector<Store> stores = bound.enumerate();
  for (const Store& s : stores)
    for (const Store& t : stores)
      if (eval_rel_formula(q, s, t))
        init.push_back({p.left.init, p.right.init, s, t});
  return init;
}

} // namespace

Verdict check_manifest_adequacy(const ProductAutomaton& p,
                                const RelFormulaPtr& q,
                                const DomainBound& bound) {
  ProductReachResult r = reachable_product(p, q_initial_pairs(p, q, bound),
                                           bound);
  if (!r.complete)
    return Verdict::inconclusive("product reachability exceeded step budget");
  Verdict v = Verdict::ok();
  for (const ProductState& st : r.states) {
    if (p.terminal(st)) continue;
    if (p.L.holds(st.ln, st.rn, st.ls, st.rs) ||
        p.R.holds(st.ln, st.rn, st.ls, st.rs) ||
        p.J.holds(st.ln, st.rn, st.ls, st.rs))
      continue;
    Counterexample cx;
    cx.left = st.ls;
    cx.right = st.rs;
    cx.relational = true;
    cx.detail = "uncovered state at control (" + std::to_string(st.ln) + "," +
                std::to_string(st.rn) + ")";
    v.add_cex(std::move(cx));
    if (v.cex.size() >= 5) return v;
  }
  return v;
}

Verdict check_adequacy(const Automaton& a, const Automaton& a2,
                       const ProductAutomaton& p, const RelFormulaPtr& q,
                       const DomainBound& bound) {
  Verdict v = Verdict::ok();
  std::vector<Store> stores = bound.enumerate();
  for (const Store& s : stores) {
    for (const Store& t : stores) {
      if (!eval_rel_formula(q, s, t)) continue;
      ReachResult rl = reachable(a, {s}, bound);
      ReachResult rr = reachable(a2, {t}, bound);
      ProductReachResult rp =
          reachable_product(p, {{a.init, a2.init, s, t}}, bound);
      if (!rl.complete || !rr.complete || !rp.complete)
        return Verdict::inconclusive("reachability exceeded step budget");
      std::set<std::pair<Store, Store>> prod_outcomes;
      for (const ProductState& st : rp.states)
        if (p.terminal(st)) prod_outcomes.insert({st.ls, st.rs});
      for (const auto& [n, u] : rl.states) {
        if (n != a.fin) continue;
        for (const auto& [n2, u2] : rr.states) {
          if (n2 != a2.fin) continue;
          if (prod_outcomes.count({u, u2})) continue;
          Counterexample cx;
          cx.left = s;
          cx.right = t;
          cx.relational = true;
          cx.detail = "terminated pair " + u.to_string() + " | " +
                      u2.to_string() + " unreachable in product";
          v.add_cex(std::move(cx));
          if (v.cex.size() >= 5) return v;
        }
      }
    }
  }
  return v;
}

UnaryAnnotation strongest_annotation(const Automaton& a,
                                     const StoreFormulaPtr& p,
                                     const DomainBound& bound) {
  std::vector<Store> init;
  for (const Store& s : bound.enumerate())
    if (eval_store_formula(p, s)) init.push_back(s);
  ReachResult r = reachable(a, init, bound);
  if (!r.complete)
    throw std::runtime_error(
        "strongest_annotation: reachability exceeded step budget");
  std::map<Label, std::shared_ptr<StoreSet>> sets;
  for (const auto& [n, s] : r.states) {
    if (n == a.init) continue;
    auto& set = sets[n];
    if (!set) {
      set = std::make_shared<StoreSet>();
      set->vars = bound.vars;
    }
    set->members.insert(s);
  }
  UnaryAnnotation an;
  an.at[a.init] = p;
  for (auto& [n, set] : sets) an.at[n] = sf_ext(set);
  return an;
}

RelAnnotation strongest_annotation(const ProductAutomaton& p,
                                   const RelFormulaPtr& q,
                                   const DomainBound& bound) {
  ProductReachResult r = reachable_product(p, q_initial_pairs(p, q, bound),
                                           bound);
  if (!r.complete)
    throw std::runtime_error(
        "strongest_annotation: product reachability exceeded step budget");
  std::map<std::pair<Label, Label>, std::shared_ptr<StorePairSet>> sets;
  for (const ProductState& st : r.states) {
    if (st.ln == p.left.init && st.rn == p.right.init) continue;
    auto& set = sets[{st.ln, st.rn}];
    if (!set) {
      set = std::make_shared<StorePairSet>();
      set->lvars = bound.vars;
      set->rvars = bound.vars;
    }
    set->members.insert({st.ls, st.rs});
  }
  RelAnnotation an;
  an.at[{p.left.init, p.right.init}] = q;
  for (auto& [nn, set] : sets) an.at[nn] = rf_ext(set);
  return an;
}

} // namespace rvwb
