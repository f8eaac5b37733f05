#include "rvwb/structure.hpp"

#include <stdexcept>

#include "rvwb/eval.hpp"

namespace rvwb {

Label lab(const CommandPtr& c) {
  if (c->kind == Command::Kind::Seq) return lab(c->c1);
  return c->label;
}

namespace {

void collect_labels(const CommandPtr& c, std::vector<Label>& out) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      out.push_back(c->label);
      return;
    case Command::Kind::Seq:
      collect_labels(c->c1, out);
      collect_labels(c->c2, out);
      return;
    case Command::Kind::If:
    case Command::Kind::Do:
      out.push_back(c->label);
      for (const auto& gc : c->gcs) collect_labels(gc.body, out);
      return;
  }
}

} // namespace

LabelSet labs(const CommandPtr& c) {
  std::vector<Label> v;
  collect_labels(c, v);
  return LabelSet(v.begin(), v.end());
}

bool ok(const CommandPtr& c) {
  std::vector<Label> v;
  collect_labels(c, v);
  LabelSet seen;
  for (Label n : v) {
    if (n <= 0) return false;
    if (!seen.insert(n).second) return false;
  }
  return true;
}

bool okf(const CommandPtr& c, Label f) { return ok(c) && !labs(c).count(f); }

namespace {

CommandPtr sub_opt(Label n, const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      return c->label == n ? c : nullptr;
    case Command::Kind::Seq: {
      if (CommandPtr r = sub_opt(n, c->c1)) return r;
      return sub_opt(n, c->c2);
    }
    case Command::Kind::If:
    case Command::Kind::Do: {
      if (c->label == n) return c;
      for (const auto& gc : c->gcs)
        if (CommandPtr r = sub_opt(n, gc.body)) return r;
      return nullptr;
    }
  }
  return nullptr;
}

} // namespace

CommandPtr sub(Label n, const CommandPtr& c) {
  CommandPtr r = sub_opt(n, c);
  if (!r) throw std::out_of_range("no subcommand with label " + std::to_string(n));
  return r;
}

Label fsuc(Label n, const CommandPtr& c, Label f) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      return f;
    case Command::Kind::Seq:
      if (labs(c->c1).count(n)) return fsuc(n, c->c1, lab(c->c2));
      return fsuc(n, c->c2, f);
    case Command::Kind::If:
      if (n == c->label) return f;
      for (const auto& gc : c->gcs)
        if (labs(gc.body).count(n)) return fsuc(n, gc.body, f);
      throw std::out_of_range("fsuc: label not in command");
    case Command::Kind::Do:
      if (n == c->label) return f;
      // Within a loop body the successor is the loop head.
      for (const auto& gc : c->gcs)
        if (labs(gc.body).count(n)) return fsuc(n, gc.body, c->label);
      throw std::out_of_range("fsuc: label not in command");
  }
  throw std::out_of_range("fsuc: label not in command");
}

BoolExprPtr enab(const GuardedList& gcs) {
  if (gcs.empty()) return bool_false();
  // Right-nested disjunction in source order: e1 || (e2 || ...).
  BoolExprPtr e = gcs.back().guard;
  for (size_t i = gcs.size() - 1; i-- > 0;) e = bool_or(gcs[i].guard, e);
  return e;
}

CommandPtr erase(const std::string& x, const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return c;
    case Command::Kind::Assign:
      return c->var == x ? mk_skip(c->label) : c;
    case Command::Kind::Seq:
      return mk_seq(erase(x, c->c1), erase(x, c->c2));
    case Command::Kind::If:
    case Command::Kind::Do: {
      GuardedList gcs;
      for (const auto& gc : c->gcs) gcs.push_back({gc.guard, erase(x, gc.body)});
      return c->kind == Command::Kind::If ? mk_if(c->label, gcs)
                                          : mk_do(c->label, gcs);
    }
  }
  return c;
}

bool ghost(const std::string& x, const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return true;
    case Command::Kind::Assign: {
      if (c->var == x) return true; // any occurrence inside its own assignment
      std::set<std::string> vars;
      collect_vars(c->rhs, vars);
      return vars.count(x) == 0;
    }
    case Command::Kind::Seq:
      return ghost(x, c->c1) && ghost(x, c->c2);
    case Command::Kind::If:
    case Command::Kind::Do:
      for (const auto& gc : c->gcs) {
        std::set<std::string> vars;
        collect_vars(gc.guard, vars);
        if (vars.count(x)) return false;
        if (!ghost(x, gc.body)) return false;
      }
      return true;
  }
  return false;
}

bool WellFormednessReport::all_pass() const {
  if (!ok_labels) return false;
  for (const auto& ic : ifs)
    if (ic.status == TotalIfStatus::Fail) return false;
  return true;
}

namespace {

// A guard list is syntactically total when some guard is the syntactic
// complement of another (so their disjunction covers every store).
bool syntactically_total(const GuardedList& gcs) {
  for (size_t i = 0; i < gcs.size(); ++i)
    for (size_t j = 0; j < gcs.size(); ++j)
      if (i != j && equal(gcs[j].guard, bool_complement(gcs[i].guard)))
        return true;
  for (const auto& gc : gcs)
    if (gc.guard->kind == BoolExpr::Kind::True) return true;
  return false;
}

void check_ifs(const CommandPtr& c, const DomainBound& bound,
               std::vector<IfCheck>& out) {
  switch (c->kind) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      return;
    case Command::Kind::Seq:
      check_ifs(c->c1, bound, out);
      check_ifs(c->c2, bound, out);
      return;
    case Command::Kind::If:
    case Command::Kind::Do: {
      if (c->kind == Command::Kind::If) {
        IfCheck ic;
        ic.label = c->label;
        if (syntactically_total(c->gcs)) {
          ic.status = TotalIfStatus::PassSyntactic;
        } else {
          ic.status = TotalIfStatus::PassBounded;
          BoolExprPtr e = enab(c->gcs);
          std::set<std::string> vs;
          collect_vars(e, vs);
          DomainBound b = bound.with_vars(
              std::vector<std::string>(vs.begin(), vs.end()));
          for (const Store& s : b.enumerate()) {
            if (!eval_bool(e, s)) {
              ic.status = TotalIfStatus::Fail;
              ic.counterexample = s;
              break;
            }
          }
        }
        out.push_back(ic);
      }
      for (const auto& gc : c->gcs) check_ifs(gc.body, bound, out);
      return;
    }
  }
}

} // namespace

WellFormednessReport well_formed(const CommandPtr& c, const DomainBound& bound) {
  WellFormednessReport r;
  r.ok_labels = ok(c);
  check_ifs(c, bound, r.ifs);
  return r;
}

} // namespace rvwb
