// Shared test utilities: fixture loading and a random program generator
// whose output is always well-labeled with total if-commands.
#ifndef RVWB_TESTS_HELPERS_HPP
#define RVWB_TESTS_HELPERS_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rvwb/ast.hpp"
#include "rvwb/parser.hpp"
#include "rvwb/structure.hpp"

namespace rvwb::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CommandPtr load_fixture(const std::string& name) {
  return parse_program(slurp(fixture_path(name)));
}

// Random labeled programs over the given variables.  Labels are assigned in
// preorder starting from 1, so the result is ok and the next free label is
// returned through `next` (usable as a fresh final label).  If-commands use
// a guard and its complement, so they are total in every store.
class ProgramGen {
 public:
  ProgramGen(uint64_t seed, std::vector<std::string> vars)
      : rng_(seed), vars_(std::move(vars)) {}

  CommandPtr gen(int depth, Label& next) {
    int pick = depth <= 0 ? int(rng_() % 2) : int(rng_() % 5);
    switch (pick) {
      case 0: return mk_skip(next++);
      case 1: return mk_assign(next++, var(), int_expr(2));
      case 2: {
        Label n = next++;
        // sequence body after the head so labels stay preorder
        CommandPtr a = pick_atom(n);
        return mk_seq(a, gen(depth - 1, next));
      }
      case 3: {
        Label n = next++;
        BoolExprPtr g = bool_expr();
        GuardedList gcs;
        gcs.push_back({g, gen(depth - 1, next)});
        gcs.push_back({bool_complement(g), gen(depth - 1, next)});
        return mk_if(n, gcs);
      }
      default: {
        Label n = next++;
        // a guard that eventually fails keeps bounded runs short
        std::string x = var();
        BoolExprPtr g = bool_cmp(CmpOp::Gt, int_var(x), int_lit(0));
        CommandPtr dec =
            mk_assign(next++, x, int_bin(IntOp::Sub, int_var(x), int_lit(1)));
        CommandPtr body = rng_() % 2 == 0
                              ? dec
                              : mk_seq(dec, gen(depth - 1, next));
        GuardedList gcs;
        gcs.push_back({g, body});
        return mk_do(n, gcs);
      }
    }
  }

 private:
  CommandPtr pick_atom(Label n) {
    return rng_() % 2 == 0 ? mk_skip(n) : mk_assign(n, var(), int_expr(1));
  }

  const std::string& var() { return vars_[rng_() % vars_.size()]; }

  IntExprPtr int_expr(int depth) {
    if (depth <= 0 || rng_() % 3 == 0)
      return rng_() % 2 == 0 ? int_var(var())
                             : int_lit(int64_t(rng_() % 5) - 2);
    IntOp op = std::vector<IntOp>{IntOp::Add, IntOp::Sub, IntOp::Mul,
                                  IntOp::Mod}[rng_() % 4];
    return int_bin(op, int_expr(depth - 1), int_expr(depth - 1));
  }

  BoolExprPtr bool_expr() {
    CmpOp op = std::vector<CmpOp>{CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le,
                                  CmpOp::Gt, CmpOp::Ge}[rng_() % 6];
    return bool_cmp(op, int_expr(1), int_expr(1));
  }

  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

} // namespace rvwb::testing

#endif
