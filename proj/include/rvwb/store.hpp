// Variable stores and the bounded enumeration domain used by all oracles.
#ifndef RVWB_STORE_HPP
#define RVWB_STORE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace rvwb {

// A store is a total map from a fixed variable universe to integers.
// Comparable and hashable so it can live in sets and visited maps.
struct Store {
  std::map<std::string, int64_t> vals;

  int64_t get(const std::string& x) const; // throws on unbound variable
  bool has(const std::string& x) const { return vals.count(x) != 0; }
  Store with(const std::string& x, int64_t v) const;

  bool operator==(const Store& o) const { return vals == o.vals; }
  bool operator<(const Store& o) const { return vals < o.vals; }

  std::string to_string() const; // "x=-1 y=3", sorted by name
};

struct StoreHash {
  size_t operator()(const Store& s) const;
};

// Finite enumeration domain: each variable ranges over [lo..hi] unless an
// override or the pc domain applies.  step_budget limits search expansions.
struct DomainBound {
  std::vector<std::string> vars;
  int64_t lo = -4, hi = 8;
  std::map<std::string, std::pair<int64_t, int64_t>> overrides;
  int64_t step_budget = 100000;
  std::string pc_name = "pc";
  std::vector<int64_t> pc_domain; // used for pc_name when non-empty

  // Values variable x ranges over.
  std::vector<int64_t> range(const std::string& x) const;
  // True when v is inside x's range (used to truncate relational models).
  bool in_range(const std::string& x, int64_t v) const;
  // All stores over `vars` (Cartesian product of ranges).
  std::vector<Store> enumerate() const;
  // All stores over an explicit variable list.
  std::vector<Store> enumerate(const std::vector<std::string>& vars) const;

  DomainBound with_vars(const std::vector<std::string>& vs) const;
};

} // namespace rvwb

#endif
