#include "rvwb/specfile.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rvwb/parser.hpp"

namespace rvwb {

namespace {

struct RelParser {
  const std::string& s;
  size_t i = 0;

  explicit RelParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("formula: " + msg + " at offset " +
                             std::to_string(i) + " in \"" + s + "\"");
  }

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool op(const char* tok) {
    ws();
    size_t n = std::strlen(tok);
    if (s.compare(i, n, tok) != 0) return false;
    i += n;
    return true;
  }

  bool keyword(const char* kw) {
    ws();
    size_t n = std::strlen(kw);
    if (s.compare(i, n, kw) != 0) return false;
    size_t j = i + n;
    if (j < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
      return false;
    i = j;
    return true;
  }

  // Consumes "( ... )" and returns the inside; if want_comma, also splits at
  // the top-level comma.
  std::pair<std::string, std::string> args(bool want_comma) {
    ws();
    if (i >= s.size() || s[i] != '(') fail("expected '('");
    size_t start = ++i;
    int depth = 0;
    size_t comma = std::string::npos;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) break;
        --depth;
      } else if (c == ',' && depth == 0 && comma == std::string::npos) {
        comma = i;
      }
    }
    if (i >= s.size()) fail("unbalanced parentheses");
    size_t end = i++;
    if (want_comma) {
      if (comma == std::string::npos) fail("expected two arguments");
      return {s.substr(start, comma - start),
              s.substr(comma + 1, end - comma - 1)};
    }
    if (comma != std::string::npos) fail("expected one argument");
    return {s.substr(start, end - start), ""};
  }

  RelFormulaPtr parse_or() {
    RelFormulaPtr f = parse_and();
    while (op("||")) f = rf_or(f, parse_and());
    return f;
  }

  RelFormulaPtr parse_and() {
    RelFormulaPtr f = parse_not();
    while (true) {
      ws();
      if (s.compare(i, 2, "&&") != 0) break;
      i += 2;
      f = rf_and(f, parse_not());
    }
    return f;
  }

  RelFormulaPtr parse_not() {
    ws();
    if (i < s.size() && s[i] == '!' &&
        (i + 1 >= s.size() || s[i + 1] != '=')) {
      ++i;
      return rf_not(parse_not());
    }
    return parse_atom();
  }

  RelFormulaPtr cross(CmpOp cmp) {
    auto [a, b] = args(true);
    return rf_cross(cmp, parse_int_expr(a), parse_int_expr(b));
  }

  RelFormulaPtr parse_atom() {
    ws();
    if (keyword("true")) return rf_true();
    if (keyword("false")) return rf_false();
    if (keyword("lhs")) return rf_left(parse_bool_expr(args(false).first));
    if (keyword("rhs")) return rf_right(parse_bool_expr(args(false).first));
    if (keyword("eq")) return cross(CmpOp::Eq);
    if (keyword("ne")) return cross(CmpOp::Ne);
    if (keyword("lt")) return cross(CmpOp::Lt);
    if (keyword("le")) return cross(CmpOp::Le);
    if (keyword("gt")) return cross(CmpOp::Gt);
    if (keyword("ge")) return cross(CmpOp::Ge);
    if (i < s.size() && s[i] == '(') {
      ++i;
      RelFormulaPtr f = parse_or();
      ws();
      if (i >= s.size() || s[i] != ')') fail("expected ')'");
      ++i;
      return f;
    }
    fail("expected a relational atom");
  }
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

// Does the text use any of the relational atoms?
bool uses_rel_atoms(const std::string& v) {
  static const char* kws[] = {"lhs", "rhs", "eq", "ne", "lt", "le", "gt", "ge"};
  for (const char* kw : kws) {
    size_t n = std::strlen(kw);
    for (size_t p = v.find(kw); p != std::string::npos; p = v.find(kw, p + 1)) {
      bool lb = p == 0 || (!std::isalnum(static_cast<unsigned char>(v[p - 1])) &&
                           v[p - 1] != '_');
      size_t q = p + n;
      while (q < v.size() && std::isspace(static_cast<unsigned char>(v[q]))) ++q;
      if (lb && q < v.size() && v[q] == '(') return true;
    }
  }
  return false;
}

bool parse_label(const std::string& s, Label& out) {
  std::string t = trim(s);
  if (t.empty()) return false;
  size_t p = 0;
  if (t[0] == '-') p = 1;
  if (p == t.size()) return false;
  for (size_t k = p; k < t.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(t[k]))) return false;
  out = std::stoll(t);
  return true;
}

// "(4,4)" / "(*,4)" / "(4,*)" / "(*,*)"
bool parse_pattern(const std::string& s, std::optional<Label>& l,
                   std::optional<Label>& r) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') return false;
  t = t.substr(1, t.size() - 2);
  size_t c = t.find(',');
  if (c == std::string::npos) return false;
  std::string a = trim(t.substr(0, c)), b = trim(t.substr(c + 1));
  if (a == "*") {
    l = std::nullopt;
  } else {
    Label n;
    if (!parse_label(a, n)) return false;
    l = n;
  }
  if (b == "*") {
    r = std::nullopt;
  } else {
    Label n;
    if (!parse_label(b, n)) return false;
    r = n;
  }
  return true;
}

struct Line {
  int no;
  std::string key, value; // key=value lines
  std::string section;    // section headers
};

} // namespace

RelFormulaPtr parse_rel_formula(const std::string& text) {
  RelParser p(text);
  RelFormulaPtr f = p.parse_or();
  p.ws();
  if (p.i != text.size())
    throw std::runtime_error("formula: trailing input in \"" + text + "\"");
  return f;
}

StoreFormulaPtr parse_store_formula(const std::string& text) {
  std::string t = trim(text);
  if (t == "true") return sf_true();
  if (t == "false") return sf_false();
  return sf_embed(parse_bool_expr(t));
}

SpecFile parse_specfile(const std::string& text) {
  // First pass: split into lines, note sections, and decide unary/relational.
  std::vector<Line> lines;
  std::string section;
  bool relational = false;
  {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      std::string line = trim(strip_comment(raw));
      if (line.empty()) continue;
      Line l;
      l.no = no;
      if (line.front() == '[' && line.back() == ']') {
        l.section = line.substr(1, line.size() - 2);
        section = l.section;
        if (section != "spec" && section != "annotation" &&
            section != "align.L" && section != "align.R" &&
            section != "align.J")
          throw std::runtime_error("spec file line " + std::to_string(no) +
                                   ": unknown section [" + section + "]");
        if (section.rfind("align.", 0) == 0) relational = true;
      } else {
        size_t eq = line.find('=');
        if (eq == std::string::npos || section.empty())
          throw std::runtime_error("spec file line " + std::to_string(no) +
                                   ": expected 'key = value' inside a section");
        l.key = trim(line.substr(0, eq));
        l.value = trim(line.substr(eq + 1));
        if (l.key.empty() || l.value.empty())
          throw std::runtime_error("spec file line " + std::to_string(no) +
                                   ": empty key or value");
        if (section == "annotation" && l.key.find(',') != std::string::npos)
          relational = true;
        if (section == "spec" && uses_rel_atoms(l.value)) relational = true;
      }
      lines.push_back(std::move(l));
    }
  }

  SpecFile out;
  out.relational = relational;
  section.clear();
  for (const Line& l : lines) {
    if (!l.section.empty()) {
      section = l.section;
      continue;
    }
    try {
      if (section == "spec") {
        if (l.key != "pre" && l.key != "post")
          throw std::runtime_error("unknown key '" + l.key + "' in [spec]");
        if (relational) {
          RelFormulaPtr f = parse_rel_formula(l.value);
          (l.key == "pre" ? out.pre_r : out.post_r) = f;
        } else {
          StoreFormulaPtr f = parse_store_formula(l.value);
          (l.key == "pre" ? out.pre_u : out.post_u) = f;
        }
      } else if (section == "annotation") {
        out.has_annotation = true;
        if (relational) {
          size_t c = l.key.find(',');
          Label n, m;
          if (c == std::string::npos || !parse_label(l.key.substr(0, c), n) ||
              !parse_label(l.key.substr(c + 1), m))
            throw std::runtime_error("expected 'n,m' annotation key, got '" +
                                     l.key + "'");
          out.an_r.at[{n, m}] = parse_rel_formula(l.value);
        } else {
          Label n;
          if (!parse_label(l.key, n))
            throw std::runtime_error("expected a label annotation key, got '" +
                                     l.key + "'");
          out.an_u.at[n] = parse_store_formula(l.value);
        }
      } else { // align.L / align.R / align.J
        out.has_align = true;
        StateRelClause cl;
        if (!parse_pattern(l.key, cl.left, cl.right))
          throw std::runtime_error("expected a control pattern '(n,m)', got '" +
                                   l.key + "'");
        RelFormulaPtr f = parse_rel_formula(l.value);
        if (f->kind != RelFormula::Kind::True) cl.formula = f;
        StateRelSpec& spec = section == "align.L"   ? out.align_l
                             : section == "align.R" ? out.align_r
                                                    : out.align_j;
        spec.clauses.push_back(std::move(cl));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("spec file line " + std::to_string(l.no) + ": " +
                               e.what());
    }
  }
  return out;
}

SpecFile load_specfile(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_specfile(ss.str());
}

} // namespace rvwb
