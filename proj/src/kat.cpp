#include "rvwb/kat.hpp"

#include <stdexcept>

#include "rvwb/eval.hpp"

namespace rvwb {

namespace {
KatExprPtr mk(KatExpr e) { return std::make_shared<const KatExpr>(std::move(e)); }
} // namespace

KatExprPtr kat_zero() {
  static KatExprPtr z = mk({KatExpr::Kind::Zero});
  return z;
}
KatExprPtr kat_one() {
  static KatExprPtr o = mk({KatExpr::Kind::One});
  return o;
}
KatExprPtr kat_test(BoolExprPtr e) {
  KatExpr k{KatExpr::Kind::Test};
  k.test = std::move(e);
  return mk(std::move(k));
}
KatExprPtr kat_action(const std::string& var, IntExprPtr rhs) {
  KatExpr k{KatExpr::Kind::Action};
  k.var = var;
  k.rhs = std::move(rhs);
  return mk(std::move(k));
}
KatExprPtr kat_plus(KatExprPtr a, KatExprPtr b) {
  KatExpr k{KatExpr::Kind::Plus};
  k.a = std::move(a);
  k.b = std::move(b);
  return mk(std::move(k));
}
KatExprPtr kat_seq(KatExprPtr a, KatExprPtr b) {
  KatExpr k{KatExpr::Kind::Seq};
  k.a = std::move(a);
  k.b = std::move(b);
  return mk(std::move(k));
}
KatExprPtr kat_star(KatExprPtr a) {
  KatExpr k{KatExpr::Kind::Star};
  k.a = std::move(a);
  return mk(std::move(k));
}
KatExprPtr kat_not(KatExprPtr a) {
  if (!is_test(a))
    throw std::invalid_argument("kat_not: complement of a non-test");
  KatExpr k{KatExpr::Kind::Not};
  k.a = std::move(a);
  return mk(std::move(k));
}

bool is_test(const KatExprPtr& ke) {
  switch (ke->kind) {
    case KatExpr::Kind::Zero:
    case KatExpr::Kind::One:
    case KatExpr::Kind::Test:
      return true;
    case KatExpr::Kind::Plus:
    case KatExpr::Kind::Seq:
      return is_test(ke->a) && is_test(ke->b);
    case KatExpr::Kind::Not:
      return true; // construction guarantees the operand is a test
    case KatExpr::Kind::Action:
    case KatExpr::Kind::Star:
      return false;
  }
  return false;
}

std::string to_string(const KatExprPtr& ke) {
  switch (ke->kind) {
    case KatExpr::Kind::Zero:
      return "0";
    case KatExpr::Kind::One:
      return "1";
    case KatExpr::Kind::Test:
      return "<" + to_string(ke->test) + ">";
    case KatExpr::Kind::Action:
      return "<" + ke->var + " := " + to_string(ke->rhs) + ">";
    case KatExpr::Kind::Plus:
      return "(" + to_string(ke->a) + " + " + to_string(ke->b) + ")";
    case KatExpr::Kind::Seq:
      return "(" + to_string(ke->a) + " ; " + to_string(ke->b) + ")";
    case KatExpr::Kind::Star:
      return "(" + to_string(ke->a) + ")*";
    case KatExpr::Kind::Not:
      return "!" + to_string(ke->a);
  }
  return "?";
}

KatExprPtr mkt_bool(const BoolExprPtr& e) {
  switch (e->kind) {
    case BoolExpr::Kind::True:
      return kat_one();
    case BoolExpr::Kind::False:
      return kat_zero();
    case BoolExpr::Kind::Cmp:
      return kat_test(e);
    case BoolExpr::Kind::And:
      return kat_seq(mkt_bool(e->bl), mkt_bool(e->br));
    case BoolExpr::Kind::Or:
      return kat_plus(mkt_bool(e->bl), mkt_bool(e->br));
    case BoolExpr::Kind::Not:
      return kat_not(mkt_bool(e->bl));
  }
  return kat_zero();
}

KatExprPtr mkt_gcs(const GuardedList& gcs) {
  KatExprPtr sum;
  for (const auto& gc : gcs) {
    KatExprPtr part = kat_seq(mkt_bool(gc.guard), mkt(gc.body));
    sum = sum ? kat_plus(sum, part) : part;
  }
  return sum ? sum : kat_zero();
}

KatExprPtr mkt(const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return kat_one();
    case Command::Kind::Assign:
      return kat_action(c->var, c->rhs);
    case Command::Kind::Seq:
      return kat_seq(mkt(c->c1), mkt(c->c2));
    case Command::Kind::If:
      return mkt_gcs(c->gcs);
    case Command::Kind::Do:
      return kat_seq(kat_star(mkt_gcs(c->gcs)),
                     kat_not(mkt_bool(enab(c->gcs))));
  }
  return kat_zero();
}

StoreSpace StoreSpace::build(const DomainBound& bound) {
  StoreSpace sp;
  sp.stores = bound.enumerate();
  for (int i = 0; i < (int)sp.stores.size(); ++i) sp.index[sp.stores[i]] = i;
  return sp;
}

int StoreSpace::find(const Store& s) const {
  auto it = index.find(s);
  return it == index.end() ? -1 : it->second;
}

namespace {

Rel compose(const Rel& a, const Rel& b) {
  Rel r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (int j : a[i]) r[i].insert(b[j].begin(), b[j].end());
  return r;
}

} // namespace

Rel interp(const KatExprPtr& ke, const StoreSpace& space) {
  size_t n = space.stores.size();
  Rel r(n);
  switch (ke->kind) {
    case KatExpr::Kind::Zero:
      return r;
    case KatExpr::Kind::One:
      for (size_t i = 0; i < n; ++i) r[i].insert((int)i);
      return r;
    case KatExpr::Kind::Test:
      for (size_t i = 0; i < n; ++i)
        if (eval_bool(ke->test, space.stores[i])) r[i].insert((int)i);
      return r;
    case KatExpr::Kind::Action:
      for (size_t i = 0; i < n; ++i) {
        int j = space.find(space.stores[i].with(
            ke->var, eval_int(ke->rhs, space.stores[i])));
        if (j >= 0) r[i].insert(j);
      }
      return r;
    case KatExpr::Kind::Plus: {
      r = interp(ke->a, space);
      Rel rb = interp(ke->b, space);
      for (size_t i = 0; i < n; ++i) r[i].insert(rb[i].begin(), rb[i].end());
      return r;
    }
    case KatExpr::Kind::Seq:
      return compose(interp(ke->a, space), interp(ke->b, space));
    case KatExpr::Kind::Star: {
      Rel base = interp(ke->a, space);
      // Per-source BFS closure over the successor sets.
      for (size_t i = 0; i < n; ++i) {
        std::vector<int> work{(int)i};
        r[i].insert((int)i);
        while (!work.empty()) {
          int v = work.back();
          work.pop_back();
          for (int w : base[v])
            if (r[i].insert(w).second) work.push_back(w);
        }
      }
      return r;
    }
    case KatExpr::Kind::Not: {
      Rel base = interp(ke->a, space);
      for (size_t i = 0; i < n; ++i)
        if (!base[i].count((int)i)) r[i].insert((int)i);
      return r;
    }
  }
  return r;
}

Verdict equiv_semantic(const KatExprPtr& a, const KatExprPtr& b,
                       const DomainBound& bound) {
  StoreSpace space = StoreSpace::build(bound);
  Rel ra = interp(a, space), rb = interp(b, space);
  Verdict v = Verdict::ok();
  for (size_t i = 0; i < space.stores.size(); ++i) {
    if (ra[i] == rb[i]) continue;
    Counterexample cx;
    cx.left = space.stores[i];
    cx.detail = "images differ (" + std::to_string(ra[i].size()) + " vs " +
                std::to_string(rb[i].size()) + " outcomes)";
    v.add_cex(std::move(cx));
    if (v.cex.size() >= 5) break;
  }
  return v;
}

namespace {

void collect_assigns(const CommandPtr& c,
                     std::vector<std::pair<std::string, IntExprPtr>>& out) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return;
    case Command::Kind::Assign:
      out.push_back({c->var, c->rhs});
      return;
    case Command::Kind::Seq:
      collect_assigns(c->c1, out);
      collect_assigns(c->c2, out);
      return;
    case Command::Kind::If:
    case Command::Kind::Do:
      for (const auto& gc : c->gcs) collect_assigns(gc.body, out);
      return;
  }
}

void collect_if_guards(const CommandPtr& c, std::vector<GuardedList>& out) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      return;
    case Command::Kind::Seq:
      collect_if_guards(c->c1, out);
      collect_if_guards(c->c2, out);
      return;
    case Command::Kind::If:
      out.push_back(c->gcs);
      for (const auto& gc : c->gcs) collect_if_guards(gc.body, out);
      return;
    case Command::Kind::Do:
      for (const auto& gc : c->gcs) collect_if_guards(gc.body, out);
      return;
  }
}

} // namespace

std::vector<KatEquation> nfax(const std::string& pc, const CommandPtr& c,
                              Label f, const DomainBound* validate) {
  if (occurs(pc, c))
    throw std::invalid_argument("nfax: pc variable occurs in the program");
  std::vector<KatEquation> eqs;
  LabelSet ls = labs(c);
  ls.insert(f);
  auto at = [&](Label i) {
    return kat_test(bool_cmp(CmpOp::Eq, int_var(pc), int_lit(i)));
  };
  auto set = [&](Label i) { return kat_action(pc, int_lit(i)); };

  for (Label i : ls)
    for (Label j : ls) {
      if (i == j) continue;
      eqs.push_back({KatEquation::Tag::DiffTest, kat_seq(at(i), at(j)),
                     kat_zero()});
    }
  for (Label i : ls)
    eqs.push_back({KatEquation::Tag::SetTest, kat_seq(set(i), at(i)), set(i)});
  std::vector<GuardedList> ifs;
  collect_if_guards(c, ifs);
  for (const auto& gcs : ifs)
    eqs.push_back({KatEquation::Tag::TotIf, kat_not(mkt_bool(enab(gcs))),
                   kat_zero()});
  std::vector<std::pair<std::string, IntExprPtr>> assigns;
  collect_assigns(c, assigns);
  for (Label i : ls)
    for (const auto& [x, e] : assigns) {
      if (x == pc) continue;
      eqs.push_back({KatEquation::Tag::TestCommuteAsgn,
                     kat_seq(at(i), kat_action(x, e)),
                     kat_seq(kat_action(x, e), at(i))});
    }

  if (validate) {
    for (const auto& eq : eqs)
      if (!equiv_semantic(eq.lhs, eq.rhs, *validate).valid())
        throw std::logic_error("nfax: equation fails in the relational model");
  }
  return eqs;
}

KatEquation hyp_false(BoolExprPtr e) {
  return {KatEquation::Tag::HypFalse, mkt_bool(e), kat_zero()};
}

KatEquation hyp_assign(BoolExprPtr e0, const std::string& x, IntExprPtr e,
                       BoolExprPtr e1) {
  return {KatEquation::Tag::HypAssign,
          kat_seq(kat_seq(mkt_bool(e0), kat_action(x, e)),
                  kat_not(mkt_bool(e1))),
          kat_zero()};
}

} // namespace rvwb
