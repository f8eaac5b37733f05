// Command-line front end: batch pipelines over the library.
//
// Exit codes: 0 valid/success, 1 counterexample/failure, 2 usage or
// precondition error, 3 inconclusive (budget exhausted).
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvwb/automata.hpp"
#include "rvwb/kat.hpp"
#include "rvwb/normalform.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/proof.hpp"
#include "rvwb/semantics.hpp"
#include "rvwb/specfile.hpp"
#include "rvwb/structure.hpp"
#include "rvwb/vcgen.hpp"

using namespace rvwb;

namespace {

constexpr int kExitValid = 0;
constexpr int kExitCounterexample = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared numeric/domain flags.
struct BoundOpts {
  int64_t min = -4, max = 8;
  int64_t budget = 100000;
  std::string pc = "pc";
  std::vector<std::string> vars;

  void attach(CLI::App* cmd, bool with_pc = true) {
    cmd->add_option("--min", min, "Smallest enumerated value (default -4)");
    cmd->add_option("--max", max, "Largest enumerated value (default 8)");
    cmd->add_option("--budget", budget, "Step budget (default 100000)");
    if (with_pc)
      cmd->add_option("--pc", pc, "Ghost program-counter name (default pc)");
    cmd->add_option("--vars", vars,
                    "Variable universe (default: variables of the programs)")
        ->delimiter(',');
  }

  // Bound over the given default variables unless --vars overrides them.
  DomainBound make(const std::set<std::string>& defaults) const {
    DomainBound b;
    if (vars.empty())
      b.vars.assign(defaults.begin(), defaults.end());
    else
      b.vars = vars;
    b.lo = min;
    b.hi = max;
    b.step_budget = budget;
    b.pc_name = pc;
    return b;
  }
};

std::set<std::string> program_vars(const CommandPtr& c,
                                   const CommandPtr& c2 = nullptr) {
  std::set<std::string> vs;
  collect_vars(c, vs);
  if (c2) collect_vars(c2, vs);
  return vs;
}

std::vector<int64_t> pc_domain_of(const CommandPtr& c, Label f,
                                  const CommandPtr& c2 = nullptr,
                                  Label f2 = 0) {
  std::set<Label> ls = labs(c);
  ls.insert(f);
  if (c2) {
    for (Label n : labs(c2)) ls.insert(n);
    ls.insert(f2);
  }
  return {ls.begin(), ls.end()};
}

CommandPtr load_program(const std::string& path) {
  return parse_program(slurp(path));
}

// Every pipeline that instruments a ghost counter rejects programs that
// already use the name.
void require_pc_fresh(const std::string& pc, const CommandPtr& c,
                      const std::string& path) {
  if (occurs(pc, c))
    throw CLI::ValidationError("--pc", "variable '" + pc + "' occurs in " +
                                           path + "; pick a fresh name");
}

int exit_of(const Verdict& v) {
  switch (v.status) {
    case Verdict::Status::Valid: return kExitValid;
    case Verdict::Status::Counterexample: return kExitCounterexample;
    case Verdict::Status::Inconclusive: return kExitInconclusive;
  }
  return kExitUsage;
}

Store parse_store_arg(const std::string& text) {
  Store s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--store", "expected var=value: " + item);
    s.vals[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int do_parse(const std::string& file, const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  std::cout << to_string(c) << "\n";
  WellFormednessReport wf = well_formed(c, bo.make(program_vars(c)));
  std::cout << "labels: " << (wf.ok_labels ? "ok" : "not ok") << "\n";
  bool pass = wf.ok_labels;
  for (const IfCheck& ic : wf.ifs) {
    std::cout << "if@" << ic.label << ": ";
    switch (ic.status) {
      case TotalIfStatus::PassSyntactic: std::cout << "total (syntactic)\n"; break;
      case TotalIfStatus::PassBounded: std::cout << "total (bounded)\n"; break;
      case TotalIfStatus::Fail:
        std::cout << "not total";
        if (ic.counterexample)
          std::cout << " at " << ic.counterexample->to_string();
        std::cout << "\n";
        pass = false;
        break;
    }
  }
  return pass ? kExitValid : kExitCounterexample;
}

int do_run(const std::string& file, const std::string& store_arg,
           const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  Store init = parse_store_arg(store_arg);
  DomainBound b = bo.make(program_vars(c));
  for (const std::string& v : b.vars)
    if (!init.has(v)) init.vals[v] = 0;
  RunResult r = run(c, init, b);
  for (const Store& s : r.outcomes) std::cout << s.to_string() << "\n";
  if (!r.complete()) {
    std::cerr << "INCONCLUSIVE: step budget exhausted\n";
    return kExitInconclusive;
  }
  return kExitValid;
}

int do_aut(const std::string& file, Label fin, bool dump_edges,
           const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  if (!okf(c, fin))
    throw CLI::ValidationError("--fin", "program must be well-labeled with " +
                                            std::to_string(fin) + " fresh");
  Automaton a = build_aut(c, fin, bo.make(program_vars(c)));
  if (dump_edges) {
    for (const SymEdge& e : a.edges) std::cout << to_string(e) << "\n";
  } else {
    std::cout << "control points: " << a.ctrl.size()
              << "  init: " << a.init << "  fin: " << a.fin
              << "  edges: " << a.edges.size() << "\n";
  }
  return kExitValid;
}

int do_normalize(const std::string& file, Label fin, bool verify,
                 const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  require_pc_fresh(bo.pc, c, file);
  if (!okf(c, fin))
    throw CLI::ValidationError("--fin", "program must be well-labeled with " +
                                            std::to_string(fin) + " fresh");
  NormalForm nf = normalize(c, fin, bo.pc);
  std::cout << to_string(nf.init_assign) << ";\n" << to_string(nf.loop())
            << "\n";
  if (!verify) return kExitValid;
  Verdict v = verify_norm_equiv(c, fin, bo.pc, bo.make(program_vars(c)));
  std::cout << "equivalence (bounded): " << v.to_string() << "\n";
  return exit_of(v);
}

int do_check_equiv(const std::string& file1, const std::string& file2,
                   bool kat_dump, const BoundOpts& bo) {
  CommandPtr c = load_program(file1);
  CommandPtr d = load_program(file2);
  KatExprPtr ka = mkt(c), kb = mkt(d);
  if (kat_dump) {
    std::cout << "lhs: " << to_string(ka) << "\n";
    std::cout << "rhs: " << to_string(kb) << "\n";
  }
  Verdict v = equiv_semantic(ka, kb, bo.make(program_vars(c, d)));
  if (v.valid())
    std::cout << "VALID (bounded)\n";
  else
    std::cout << v.to_string() << "\n";
  return exit_of(v);
}

int vc_report(const std::vector<VC>& vcs, bool do_discharge,
              const DomainBound& b) {
  if (!do_discharge) {
    for (const VC& vc : vcs) std::cout << vc.render() << "\n";
    return kExitValid;
  }
  DischargeReport rep = discharge(vcs, b);
  bool any_cex = false, any_inc = false;
  for (const DischargeEntry& e : rep.entries) {
    std::cout << e.vc.render() << "\n  verdict: " << e.verdict.to_string()
              << "\n";
    if (e.verdict.status == Verdict::Status::Counterexample) any_cex = true;
    if (e.verdict.status == Verdict::Status::Inconclusive) any_inc = true;
  }
  std::cout << (rep.all_valid ? "all VCs VALID" : "discharge FAILED") << "\n";
  if (any_cex) return kExitCounterexample;
  if (any_inc) return kExitInconclusive;
  return kExitValid;
}

int do_vcgen(const std::string& file, Label fin, const std::string& spec_path,
             bool do_discharge, const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  require_pc_fresh(bo.pc, c, file);
  SpecFile sp = load_specfile(spec_path);
  if (sp.relational || !sp.has_annotation)
    throw CLI::ValidationError("--spec",
                               "vcgen needs a unary spec with [annotation]");
  DomainBound b = bo.make(program_vars(c));
  return vc_report(unary_vcs(c, fin, sp.an_u), do_discharge, b);
}

int do_rvcgen(const std::string& file1, const std::string& file2, Label fin,
              Label fin2, const std::string& spec_path, bool do_discharge,
              bool state_level, const BoundOpts& bo) {
  CommandPtr c = load_program(file1);
  CommandPtr c2 = load_program(file2);
  require_pc_fresh(bo.pc, c, file1);
  require_pc_fresh(bo.pc, c2, file2);
  SpecFile sp = load_specfile(spec_path);
  if (!sp.relational || !sp.has_annotation || !sp.has_align)
    throw CLI::ValidationError(
        "--spec", "rvcgen needs a relational spec with [annotation] and "
                  "[align.*] sections");
  DomainBound b = bo.make(program_vars(c, c2));
  b.pc_domain = pc_domain_of(c, fin, c2, fin2);
  std::vector<VC> vcs =
      state_level
          ? rel_vcs(c, c2, fin, fin2, sp.align_l, sp.align_r, sp.align_j,
                    sp.an_r)
          : encoded_rel_vcs(c, c2, fin, fin2, sp.align_l, sp.align_r,
                            sp.align_j, sp.an_r, bo.pc);
  return vc_report(vcs, do_discharge, b);
}

int do_prove_unary(const std::string& file, Label fin,
                   const std::string& spec_path, const std::string& out,
                   const BoundOpts& bo) {
  CommandPtr c = load_program(file);
  require_pc_fresh(bo.pc, c, file);
  SpecFile sp = load_specfile(spec_path);
  if (sp.relational || !sp.has_annotation)
    throw CLI::ValidationError(
        "--spec", "prove-unary needs a unary spec with [annotation]");
  DomainBound b = bo.make(program_vars(c));
  b.pc_domain = pc_domain_of(c, fin);
  ProofTreePtr t;
  try {
    t = synthesize_unary(c, fin, sp.an_u, bo.pc, b);
  } catch (const std::runtime_error& e) {
    std::cerr << "synthesis failed: " << e.what() << "\n";
    return kExitCounterexample;
  }
  std::ofstream os(out);
  os << proof_to_json(t);
  std::cout << "proof written to " << out << "\n";
  return kExitValid;
}

int do_prove_rel(const std::string& file1, const std::string& file2, Label fin,
                 Label fin2, const std::string& spec_path,
                 const std::string& out, const BoundOpts& bo) {
  CommandPtr c = load_program(file1);
  CommandPtr c2 = load_program(file2);
  require_pc_fresh(bo.pc, c, file1);
  require_pc_fresh(bo.pc, c2, file2);
  SpecFile sp = load_specfile(spec_path);
  if (!sp.relational || !sp.has_annotation || !sp.has_align)
    throw CLI::ValidationError(
        "--spec", "prove-rel needs a relational spec with [annotation] and "
                  "[align.*] sections");
  DomainBound b = bo.make(program_vars(c, c2));
  b.pc_domain = pc_domain_of(c, fin, c2, fin2);
  ProofTreePtr t;
  try {
    t = synthesize_relational(c, c2, fin, fin2, sp.align_l, sp.align_r,
                              sp.align_j, sp.an_r, bo.pc, b);
  } catch (const std::runtime_error& e) {
    std::cerr << "synthesis failed: " << e.what() << "\n";
    return kExitCounterexample;
  }
  std::ofstream os(out);
  os << proof_to_json(t);
  std::cout << "proof written to " << out << "\n";
  return kExitValid;
}

// Variables and pc values referenced anywhere in a proof tree, for the
// default checking bound.
void tree_universe(const ProofTreePtr& t, const std::string& pc,
                   std::set<std::string>& vars, std::set<int64_t>& pcs) {
  const Judgment& j = t->conclusion;
  collect_vars(j.c, vars);
  for (Label n : labs(j.c)) pcs.insert(n);
  if (j.relational) {
    collect_vars(j.c2, vars);
    for (Label n : labs(j.c2)) pcs.insert(n);
    collect_vars_left(j.pre_r, vars);
    collect_vars_right(j.pre_r, vars);
    collect_vars_left(j.post_r, vars);
    collect_vars_right(j.post_r, vars);
  }
  // Instrumented commands set the counter to the final label as well.
  std::function<void(const CommandPtr&)> scan = [&](const CommandPtr& c) {
    if (!c) return;
    if (c->kind == Command::Kind::Assign && c->var == pc &&
        c->rhs->kind == IntExpr::Kind::Lit)
      pcs.insert(c->rhs->lit);
    if (c->kind == Command::Kind::Seq) {
      scan(c->c1);
      scan(c->c2);
    }
    for (const auto& gc : c->gcs) scan(gc.body);
  };
  scan(j.c);
  if (j.relational) scan(j.c2);
  for (const auto& p : t->premises) tree_universe(p, pc, vars, pcs);
}

int do_check_proof(const std::string& file, const BoundOpts& bo) {
  ProofTreePtr t = proof_from_json(slurp(file));
  std::set<std::string> vars;
  std::set<int64_t> pcs;
  tree_universe(t, bo.pc, vars, pcs);
  vars.erase(bo.pc);
  DomainBound b = bo.make(vars);
  b.pc_domain.assign(pcs.begin(), pcs.end());
  Verdict v = check_proof(t, b);
  std::cout << "check-proof: " << v.to_string() << "\n";
  return exit_of(v);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational verification workbench for labeled guarded "
               "commands"};
  app.require_subcommand(1);

  std::string file, file2, spec_path, out = "out.proof", store_arg;
  Label fin = 0, fin2 = 0;
  bool dump_edges = false, verify = false, kat_dump = false;
  bool do_discharge = false, state_level = false;
  BoundOpts bo;

  CLI::App* parse_cmd = app.add_subcommand("parse", "Parse and well-form a program");
  parse_cmd->add_option("file", file)->required();
  bo.attach(parse_cmd, false);

  CLI::App* run_cmd = app.add_subcommand("run", "Enumerate outcome stores");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--store", store_arg, "Initial store, e.g. x=3,y=0");
  bo.attach(run_cmd, false);

  CLI::App* aut_cmd = app.add_subcommand("aut", "Program automaton");
  aut_cmd->add_option("file", file)->required();
  aut_cmd->add_option("--fin", fin, "Final label")->required();
  aut_cmd->add_flag("--dump-edges", dump_edges, "Print the symbolic edges");
  bo.attach(aut_cmd, false);

  CLI::App* norm_cmd = app.add_subcommand("normalize", "Automaton normal form");
  norm_cmd->add_option("file", file)->required();
  norm_cmd->add_option("--fin", fin, "Final label")->required();
  norm_cmd->add_flag("--verify", verify, "Check bounded equivalence");
  bo.attach(norm_cmd);

  CLI::App* eq_cmd =
      app.add_subcommand("check-equiv", "Bounded semantic equivalence");
  eq_cmd->add_option("file1", file)->required();
  eq_cmd->add_option("file2", file2)->required();
  eq_cmd->add_flag("--kat-dump", kat_dump, "Print the algebraic translations");
  bo.attach(eq_cmd, false);

  CLI::App* vc_cmd = app.add_subcommand("vcgen", "Unary verification conditions");
  vc_cmd->add_option("file", file)->required();
  vc_cmd->add_option("--fin", fin, "Final label")->required();
  vc_cmd->add_option("--spec", spec_path, "Spec file with [annotation]")
      ->required();
  vc_cmd->add_flag("--discharge", do_discharge, "Check each VC over the bound");
  bo.attach(vc_cmd);

  CLI::App* rvc_cmd =
      app.add_subcommand("rvcgen", "Relational verification conditions");
  rvc_cmd->add_option("file1", file)->required();
  rvc_cmd->add_option("file2", file2)->required();
  rvc_cmd->add_option("--fin", fin, "Left final label")->required();
  rvc_cmd->add_option("--fin2", fin2, "Right final label")->required();
  rvc_cmd->add_option("--spec", spec_path,
                      "Spec file with [annotation] and [align.*]")
      ->required();
  rvc_cmd->add_flag("--discharge", do_discharge, "Check each VC over the bound");
  rvc_cmd->add_flag("--state", state_level,
                    "Emit state-level rows instead of pc-encoded ones");
  bo.attach(rvc_cmd);

  CLI::App* pu_cmd =
      app.add_subcommand("prove-unary", "Synthesize a Hoare proof");
  pu_cmd->add_option("file", file)->required();
  pu_cmd->add_option("--fin", fin, "Final label")->required();
  pu_cmd->add_option("--spec", spec_path, "Spec file with [annotation]")
      ->required();
  pu_cmd->add_option("-o,--out", out, "Output path (default out.proof)");
  bo.attach(pu_cmd);

  CLI::App* pr_cmd =
      app.add_subcommand("prove-rel", "Synthesize a relational proof");
  pr_cmd->add_option("file1", file)->required();
  pr_cmd->add_option("file2", file2)->required();
  pr_cmd->add_option("--fin", fin, "Left final label")->required();
  pr_cmd->add_option("--fin2", fin2, "Right final label")->required();
  pr_cmd->add_option("--spec", spec_path,
                     "Spec file with [annotation] and [align.*]")
      ->required();
  pr_cmd->add_option("-o,--out", out, "Output path (default out.proof)");
  bo.attach(pr_cmd);

  CLI::App* cp_cmd = app.add_subcommand("check-proof", "Check a proof document");
  cp_cmd->add_option("file", file)->required();
  bo.attach(cp_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse_cmd) return do_parse(file, bo);
    if (*run_cmd) return do_run(file, store_arg, bo);
    if (*aut_cmd) return do_aut(file, fin, dump_edges, bo);
    if (*norm_cmd) return do_normalize(file, fin, verify, bo);
    if (*eq_cmd) return do_check_equiv(file, file2, kat_dump, bo);
    if (*vc_cmd) return do_vcgen(file, fin, spec_path, do_discharge, bo);
    if (*rvc_cmd)
      return do_rvcgen(file, file2, fin, fin2, spec_path, do_discharge,
                       state_level, bo);
    if (*pu_cmd) return do_prove_unary(file, fin, spec_path, out, bo);
    if (*pr_cmd) return do_prove_rel(file, file2, fin, fin2, spec_path, out, bo);
    if (*cp_cmd) return do_check_proof(file, bo);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
