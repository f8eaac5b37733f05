#include "rvwb/verdict.hpp"

namespace rvwb {

std::string Counterexample::to_string() const {
  std::string s;
  if (relational) {
    s = "left: " + left.to_string() + " | right: " + right.to_string();
  } else {
    s = left.to_string();
  }
  if (!detail.empty()) s += "  (" + detail + ")";
  return s;
}

std::string Verdict::to_string() const {
  switch (status) {
    case Status::Valid:
      return "valid";
    case Status::Inconclusive:
      return "inconclusive: " + note;
    case Status::Counterexample: {
      std::string s = "counterexample";
      if (!note.empty()) s += " (" + note + ")";
      for (const Counterexample& c : cex) s += "\n  " + c.to_string();
      return s;
    }
  }
  return "?";
}

} // namespace rvwb
