// Shared verdict type for all bounded oracles.
#ifndef RVWB_VERDICT_HPP
#define RVWB_VERDICT_HPP

#include <string>
#include <vector>

#include "rvwb/store.hpp"

namespace rvwb {

// A counterexample is one or two stores (relational oracles fill both).
struct Counterexample {
  Store left;
  Store right;
  bool relational = false;
  std::string detail; // free-form context, e.g. the violated obligation
  std::string to_string() const;
};

struct Verdict {
  enum class Status { Valid, Counterexample, Inconclusive } status;
  std::vector<Counterexample> cex; // at most 5 kept
  std::string note;

  bool valid() const { return status == Status::Valid; }

  static Verdict ok() { return {Status::Valid, {}, ""}; }
  static Verdict inconclusive(const std::string& why) {
    return {Status::Inconclusive, {}, why};
  }
  void add_cex(Counterexample c) {
    status = Status::Counterexample;
    if (cex.size() < 5) cex.push_back(std::move(c));
  }
  std::string to_string() const;
};

} // namespace rvwb

#endif
