#include "rvwb/semantics.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "rvwb/structure.hpp"

namespace rvwb {

std::string Config::key() const {
  return to_string(command) + " @@ " + store.to_string();
}

std::vector<Config> step(const Config& cfg) {
  const CommandPtr& c = cfg.command;
  const Store& s = cfg.store;
  std::vector<Config> out;
  switch (c->kind) {
    case Command::Kind::Skip:
      return out; // terminal
    case Command::Kind::Assign:
      out.push_back({mk_skip(-c->label), s.with(c->var, eval_int(c->rhs, s))});
      return out;
    case Command::Kind::If:
      for (const auto& gc : c->gcs)
        if (eval_bool(gc.guard, s)) out.push_back({gc.body, s});
      return out; // stuck when no guard holds (ruled out by total-if)
    case Command::Kind::Do: {
      bool any = false;
      for (const auto& gc : c->gcs)
        if (eval_bool(gc.guard, s)) {
          any = true;
          out.push_back({mk_seq(gc.body, c), s});
        }
      if (!any) out.push_back({mk_skip(-c->label), s});
      return out;
    }
    case Command::Kind::Seq: {
      if (c->c1->kind == Command::Kind::Skip) {
        out.push_back({c->c2, s});
        return out;
      }
      for (Config& n : step({c->c1, s}))
        out.push_back({mk_seq(n.command, c->c2), n.store});
      return out;
    }
  }
  return out;
}

namespace {

// Reachable-graph closure with cycle detection.  Nodes are produced by
// `expand`; a node with no successors and `is_outcome` true contributes an
// outcome.  Divergence (a reachable cycle) or exceeding the budget yields
// BudgetExceeded, since then some execution path never terminates (or we
// cannot tell).
template <typename Node, typename KeyFn, typename ExpandFn, typename TermFn>
RunResult close_graph(const Node& start, KeyFn key, ExpandFn expand,
                      TermFn terminal_store, int64_t budget) {
  RunResult res;
  std::unordered_map<std::string, size_t> index;
  std::vector<Node> nodes;
  std::vector<std::vector<size_t>> succs;
  std::deque<size_t> work;

  auto intern = [&](const Node& n) -> std::pair<size_t, bool> {
    auto [it, fresh] = index.try_emplace(key(n), nodes.size());
    if (fresh) {
      nodes.push_back(n);
      succs.emplace_back();
      work.push_back(it->second);
    }
    return {it->second, fresh};
  };

  intern(start);
  while (!work.empty()) {
    if ((int64_t)nodes.size() > budget) {
      res.status = RunResult::Status::BudgetExceeded;
      return res;
    }
    size_t i = work.front();
    work.pop_front();
    std::vector<Node> next = expand(nodes[i]);
    if (next.empty()) {
      if (auto st = terminal_store(nodes[i])) res.outcomes.insert(*st);
      continue;
    }
    for (const Node& n : next) {
      size_t j = intern(n).first; // may grow succs; index afterwards
      succs[i].push_back(j);
    }
  }

  // Iterative three-color DFS over the closed graph to find a cycle.
  std::vector<int> color(nodes.size(), 0); // 0 white, 1 gray, 2 black
  for (size_t root = 0; root < nodes.size(); ++root) {
    if (color[root]) continue;
    std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, ei] = stack.back();
      if (ei < succs[v].size()) {
        size_t w = succs[v][ei++];
        if (color[w] == 1) {
          res.status = RunResult::Status::BudgetExceeded;
          return res;
        }
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return res;
}

} // namespace

RunResult run(const CommandPtr& c, const Store& s, const DomainBound& bound) {
  return close_graph<Config>(
      {c, s}, [](const Config& cfg) { return cfg.key(); },
      [](const Config& cfg) { return step(cfg); },
      [](const Config& cfg) -> std::optional<Store> {
        if (cfg.terminal()) return cfg.store;
        return std::nullopt; // stuck non-terminal: no outcome
      },
      bound.step_budget);
}

namespace {

// Big-step evaluation, recursive in the command structure.  Loops are
// computed as a closure over the stores reachable by whole iterations.
RunResult denote(const CommandPtr& c, const Store& s, const DomainBound& bound);

RunResult denote_set(const CommandPtr& c, const std::set<Store>& in,
                     const DomainBound& bound) {
  RunResult res;
  for (const Store& s : in) {
    RunResult r = denote(c, s, bound);
    if (!r.complete()) res.status = RunResult::Status::BudgetExceeded;
    res.outcomes.insert(r.outcomes.begin(), r.outcomes.end());
  }
  return res;
}

RunResult denote(const CommandPtr& c, const Store& s,
                 const DomainBound& bound) {
  RunResult res;
  switch (c->kind) {
    case Command::Kind::Skip:
      res.outcomes.insert(s);
      return res;
    case Command::Kind::Assign:
      res.outcomes.insert(s.with(c->var, eval_int(c->rhs, s)));
      return res;
    case Command::Kind::Seq: {
      RunResult r1 = denote(c->c1, s, bound);
      RunResult r2 = denote_set(c->c2, r1.outcomes, bound);
      if (!r1.complete()) r2.status = RunResult::Status::BudgetExceeded;
      return r2;
    }
    case Command::Kind::If: {
      for (const auto& gc : c->gcs) {
        if (!eval_bool(gc.guard, s)) continue;
        RunResult r = denote(gc.body, s, bound);
        if (!r.complete()) res.status = RunResult::Status::BudgetExceeded;
        res.outcomes.insert(r.outcomes.begin(), r.outcomes.end());
      }
      return res;
    }
    case Command::Kind::Do: {
      // One iteration from store u yields the bodies' outcomes for each
      // enabled guard; a store with no enabled guard is a loop outcome.
      bool nested_over = false;
      RunResult r = close_graph<Store>(
          s, [](const Store& u) { return u.to_string(); },
          [&](const Store& u) -> std::vector<Store> {
            std::vector<Store> next;
            for (const auto& gc : c->gcs) {
              if (!eval_bool(gc.guard, u)) continue;
              RunResult b = denote(gc.body, u, bound);
              if (!b.complete()) nested_over = true;
              next.insert(next.end(), b.outcomes.begin(), b.outcomes.end());
            }
            return next;
          },
          [&](const Store& u) -> std::optional<Store> {
            for (const auto& gc : c->gcs)
              if (eval_bool(gc.guard, u)) return std::nullopt;
            return u;
          },
          bound.step_budget);
      if (nested_over) r.status = RunResult::Status::BudgetExceeded;
      return r;
    }
  }
  return res;
}

} // namespace

RunResult denote_bigstep(const CommandPtr& c, const Store& s,
                         const DomainBound& bound) {
  return denote(c, s, bound);
}

namespace {

using RunCache = std::map<Store, RunResult>;

const RunResult& cached_run(const CommandPtr& c, const Store& s,
                            const DomainBound& bound, RunCache& cache) {
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  return cache.emplace(s, run(c, s, bound)).first->second;
}

} // namespace

Verdict check_unary(const CommandPtr& c, const StoreFormulaPtr& p,
                    const StoreFormulaPtr& q, const DomainBound& bound) {
  Verdict v = Verdict::ok();
  bool budget_hit = false;
  for (const Store& s : bound.enumerate()) {
    if (!eval_store_formula(p, s)) continue;
    RunResult r = run(c, s, bound);
    if (!r.complete()) budget_hit = true;
    for (const Store& t : r.outcomes) {
      if (eval_store_formula(q, t)) continue;
      Counterexample cx;
      cx.left = s;
      cx.detail = "outcome " + t.to_string();
      v.add_cex(std::move(cx));
      if (v.cex.size() >= 5) return v;
    }
  }
  if (v.valid() && budget_hit)
    return Verdict::inconclusive("step budget exceeded on some initial store");
  return v;
}

Verdict check_rel(const CommandPtr& c, const CommandPtr& c2,
                  const RelFormulaPtr& r, const RelFormulaPtr& s,
                  const DomainBound& bound) {
  Verdict v = Verdict::ok();
  bool budget_hit = false;
  RunCache lcache, rcache;
  std::vector<Store> stores = bound.enumerate();
  for (const Store& sl : stores) {
    for (const Store& sr : stores) {
      if (!eval_rel_formula(r, sl, sr)) continue;
      const RunResult& r1 = cached_run(c, sl, bound, lcache);
      const RunResult& r2 = cached_run(c2, sr, bound, rcache);
      if (!r1.complete() || !r2.complete()) budget_hit = true;
      for (const Store& t1 : r1.outcomes) {
        for (const Store& t2 : r2.outcomes) {
          if (eval_rel_formula(s, t1, t2)) continue;
          Counterexample cx;
          cx.left = sl;
          cx.right = sr;
          cx.relational = true;
          cx.detail = "outcomes " + t1.to_string() + " | " + t2.to_string();
          v.add_cex(std::move(cx));
          if (v.cex.size() >= 5) return v;
        }
      }
    }
  }
  if (v.valid() && budget_hit)
    return Verdict::inconclusive("step budget exceeded on some initial store");
  return v;
}

} // namespace rvwb
