#include "rvwb/store.hpp"

#include <sstream>
#include <stdexcept>

namespace rvwb {

int64_t Store::get(const std::string& x) const {
  auto it = vals.find(x);
  if (it == vals.end())
    throw std::runtime_error("unbound variable: " + x);
  return it->second;
}

Store Store::with(const std::string& x, int64_t v) const {
  Store s = *this;
  s.vals[x] = v;
  return s;
}

std::string Store::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : vals) {
    if (!first) os << " ";
    os << k << "=" << v;
    first = false;
  }
  return os.str();
}

size_t StoreHash::operator()(const Store& s) const {
  size_t h = 1469598103934665603ull;
  for (const auto& [k, v] : s.vals) {
    for (char c : k) h = (h ^ (size_t)c) * 1099511628211ull;
    h = (h ^ (size_t)v) * 1099511628211ull;
  }
  return h;
}

std::vector<int64_t> DomainBound::range(const std::string& x) const {
  if (x == pc_name && !pc_domain.empty()) return pc_domain;
  auto it = overrides.find(x);
  int64_t a = lo, b = hi;
  if (it != overrides.end()) {
    a = it->second.first;
    b = it->second.second;
  }
  std::vector<int64_t> r;
  for (int64_t v = a; v <= b; ++v) r.push_back(v);
  return r;
}

bool DomainBound::in_range(const std::string& x, int64_t v) const {
  if (x == pc_name && !pc_domain.empty()) {
    for (int64_t p : pc_domain)
      if (p == v) return true;
    return false;
  }
  auto it = overrides.find(x);
  int64_t a = lo, b = hi;
  if (it != overrides.end()) {
    a = it->second.first;
    b = it->second.second;
  }
  return a <= v && v <= b;
}

std::vector<Store> DomainBound::enumerate() const { return enumerate(vars); }

std::vector<Store> DomainBound::enumerate(
    const std::vector<std::string>& vs) const {
  std::vector<Store> out;
  Store cur;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == vs.size()) {
      out.push_back(cur);
      return;
    }
    for (int64_t v : range(vs[i])) {
      cur.vals[vs[i]] = v;
      go(i + 1);
    }
    cur.vals.erase(vs[i]);
  };
  go(0);
  return out;
}

DomainBound DomainBound::with_vars(const std::vector<std::string>& vs) const {
  DomainBound b = *this;
  b.vars = vs;
  return b;
}

} // namespace rvwb
