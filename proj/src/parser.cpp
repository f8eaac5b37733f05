#include "rvwb/parser.hpp"

#include <cctype>
#include <vector>

namespace rvwb {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                         std::to_string(col) + ": " + msg),
      line(line),
      col(col) {}

namespace {

enum class Tok {
  End, Ident, Int, KwSkip, KwIf, KwFi, KwDo, KwOd, KwMod, KwTrue, KwFalse,
  Assign, Semi, Arrow, Box, At, LParen, RParen,
  Plus, Minus, Star, Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang
};

struct Token {
  Tok kind;
  std::string text;
  int64_t value = 0;
  int line = 1, col = 1;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  size_t pos = 0;
  int line = 1, col = 1;
  auto bump = [&] {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  };
  while (pos < src.size()) {
    char c = src[pos];
    if (c == '#') {
      while (pos < src.size() && src[pos] != '\n') bump();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump();
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::string id;
      while (pos < src.size() &&
             (std::isalnum((unsigned char)src[pos]) || src[pos] == '_')) {
        id += src[pos];
        bump();
      }
      t.text = id;
      if (id == "skip") t.kind = Tok::KwSkip;
      else if (id == "if") t.kind = Tok::KwIf;
      else if (id == "fi") t.kind = Tok::KwFi;
      else if (id == "do") t.kind = Tok::KwDo;
      else if (id == "od") t.kind = Tok::KwOd;
      else if (id == "mod") t.kind = Tok::KwMod;
      else if (id == "true") t.kind = Tok::KwTrue;
      else if (id == "false") t.kind = Tok::KwFalse;
      else t.kind = Tok::Ident;
      out.push_back(t);
      continue;
    }
    if (std::isdigit((unsigned char)c)) {
      int64_t v = 0;
      while (pos < src.size() && std::isdigit((unsigned char)src[pos])) {
        v = v * 10 + (src[pos] - '0');
        bump();
      }
      t.kind = Tok::Int;
      t.value = v;
      out.push_back(t);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && pos + 1 < src.size() && src[pos + 1] == b;
    };
    if (two(':', '=')) { bump(); bump(); t.kind = Tok::Assign; out.push_back(t); continue; }
    if (two('-', '>')) { bump(); bump(); t.kind = Tok::Arrow; out.push_back(t); continue; }
    if (two('[', ']')) { bump(); bump(); t.kind = Tok::Box; out.push_back(t); continue; }
    if (two('!', '=')) { bump(); bump(); t.kind = Tok::Ne; out.push_back(t); continue; }
    if (two('<', '=')) { bump(); bump(); t.kind = Tok::Le; out.push_back(t); continue; }
    if (two('>', '=')) { bump(); bump(); t.kind = Tok::Ge; out.push_back(t); continue; }
    if (two('&', '&')) { bump(); bump(); t.kind = Tok::AndAnd; out.push_back(t); continue; }
    if (two('|', '|')) { bump(); bump(); t.kind = Tok::OrOr; out.push_back(t); continue; }
    bump();
    switch (c) {
      case ';': t.kind = Tok::Semi; break;
      case '@': t.kind = Tok::At; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '=': t.kind = Tok::Eq; break;
      case '<': t.kind = Tok::Lt; break;
      case '>': t.kind = Tok::Gt; break;
      case '!': t.kind = Tok::Bang; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         line, col);
    }
    out.push_back(t);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Token-stream parser with positional backtracking (needed to disambiguate
// "(x > 0) && ..." from "(x + 1) > 0" in guard position).
class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

  CommandPtr command() {
    CommandPtr c = atom();
    if (peek().kind == Tok::Semi) {
      take();
      return mk_seq(c, command());
    }
    return c;
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail("expected end of input");
  }

  BoolExprPtr bool_expr() { return disj(); }
  IntExprPtr int_expr() { return additive(); }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, peek().line, peek().col);
  }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return take();
  }

  Label opt_label() {
    if (peek().kind != Tok::At) return 0;
    take();
    Token t = expect(Tok::Int, "label number");
    if (t.value <= 0) throw ParseError("label must be positive", t.line, t.col);
    return t.value;
  }

  CommandPtr atom() {
    switch (peek().kind) {
      case Tok::KwSkip: {
        take();
        return mk_skip(opt_label());
      }
      case Tok::Ident: {
        Token id = take();
        Label n = opt_label();
        expect(Tok::Assign, "':='");
        return mk_assign(n, id.text, int_expr());
      }
      case Tok::KwIf: {
        take();
        Label n = opt_label();
        GuardedList gcs = guarded_list();
        expect(Tok::KwFi, "'fi'");
        return mk_if(n, gcs);
      }
      case Tok::KwDo: {
        take();
        Label n = opt_label();
        GuardedList gcs = guarded_list();
        expect(Tok::KwOd, "'od'");
        return mk_do(n, gcs);
      }
      case Tok::LParen: {
        take();
        CommandPtr c = command();
        expect(Tok::RParen, "')'");
        return c;
      }
      default:
        fail("expected command");
    }
  }

  GuardedList guarded_list() {
    GuardedList gcs;
    for (;;) {
      BoolExprPtr g = bool_expr();
      expect(Tok::Arrow, "'->'");
      gcs.push_back({g, command()});
      if (peek().kind != Tok::Box) break;
      take();
    }
    return gcs;
  }

  BoolExprPtr disj() {
    BoolExprPtr e = conj();
    while (peek().kind == Tok::OrOr) {
      take();
      e = bool_or(e, conj());
    }
    return e;
  }

  BoolExprPtr conj() {
    BoolExprPtr e = bfactor();
    while (peek().kind == Tok::AndAnd) {
      take();
      e = bool_and(e, bfactor());
    }
    return e;
  }

  BoolExprPtr bfactor() {
    switch (peek().kind) {
      case Tok::KwTrue: take(); return bool_true();
      case Tok::KwFalse: take(); return bool_false();
      case Tok::Bang:
        take();
        return bool_not(bfactor());
      case Tok::LParen: {
        // Try a parenthesized boolean expression; if that fails or is
        // followed by a comparison operator, re-parse as a comparison whose
        // left operand starts with '('.
        size_t mark = pos_;
        try {
          take();
          BoolExprPtr e = disj();
          expect(Tok::RParen, "')'");
          switch (peek().kind) {
            case Tok::Eq: case Tok::Ne: case Tok::Lt:
            case Tok::Le: case Tok::Gt: case Tok::Ge:
              break; // actually arithmetic, fall through to comparison
            default:
              return e;
          }
        } catch (const ParseError&) {
        }
        pos_ = mark;
        return comparison();
      }
      default:
        return comparison();
    }
  }

  BoolExprPtr comparison() {
    IntExprPtr l = int_expr();
    CmpOp op;
    switch (peek().kind) {
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: fail("expected comparison operator");
    }
    take();
    return bool_cmp(op, l, int_expr());
  }

  IntExprPtr additive() {
    IntExprPtr e = multiplicative();
    for (;;) {
      if (peek().kind == Tok::Plus) {
        take();
        e = int_bin(IntOp::Add, e, multiplicative());
      } else if (peek().kind == Tok::Minus) {
        take();
        e = int_bin(IntOp::Sub, e, multiplicative());
      } else {
        return e;
      }
    }
  }

  IntExprPtr multiplicative() {
    IntExprPtr e = ifactor();
    for (;;) {
      if (peek().kind == Tok::Star) {
        take();
        e = int_bin(IntOp::Mul, e, ifactor());
      } else if (peek().kind == Tok::KwMod) {
        take();
        e = int_bin(IntOp::Mod, e, ifactor());
      } else {
        return e;
      }
    }
  }

  IntExprPtr ifactor() {
    switch (peek().kind) {
      case Tok::Int: return int_lit(take().value);
      case Tok::Minus: {
        take();
        Token t = expect(Tok::Int, "integer literal");
        return int_lit(-t.value);
      }
      case Tok::Ident: return int_var(take().text);
      case Tok::LParen: {
        take();
        IntExprPtr e = additive();
        expect(Tok::RParen, "')'");
        return e;
      }
      default: fail("expected integer expression");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// Relabeling: preorder walk; explicit labels keep their value, unlabeled
// nodes take the next unused positive integer starting at 1.
class Relabeler {
 public:
  explicit Relabeler(const CommandPtr& root) { collect_explicit(root); }

  CommandPtr relabel(const CommandPtr& c) {
    switch (c->kind) {
      case Command::Kind::Skip:
        return mk_skip(pick(c->label));
      case Command::Kind::Assign:
        return mk_assign(pick(c->label), c->var, c->rhs);
      case Command::Kind::Seq: {
        CommandPtr a = relabel(c->c1);
        return mk_seq(a, relabel(c->c2));
      }
      case Command::Kind::If:
      case Command::Kind::Do: {
        Label n = pick(c->label);
        GuardedList gcs;
        for (const auto& gc : c->gcs)
          gcs.push_back({gc.guard, relabel(gc.body)});
        return c->kind == Command::Kind::If ? mk_if(n, gcs) : mk_do(n, gcs);
      }
    }
    return c;
  }

 private:
  void collect_explicit(const CommandPtr& c) {
    if (c->kind == Command::Kind::Seq) {
      collect_explicit(c->c1);
      collect_explicit(c->c2);
      return;
    }
    if (c->label != 0) {
      if (!used_.insert(c->label).second)
        throw ParseError(
            "duplicate explicit label @" + std::to_string(c->label), 0, 0);
    }
    if (c->kind == Command::Kind::If || c->kind == Command::Kind::Do)
      for (const auto& gc : c->gcs) collect_explicit(gc.body);
  }

  Label pick(Label explicit_label) {
    if (explicit_label != 0) return explicit_label;
    while (used_.count(next_)) ++next_;
    used_.insert(next_);
    return next_++;
  }

  std::set<Label> used_;
  Label next_ = 1;
};

} // namespace

CommandPtr parse_program(const std::string& text) {
  Parser p(text);
  CommandPtr raw = p.command();
  p.expect_end();
  Relabeler r(raw);
  return r.relabel(raw);
}

IntExprPtr parse_int_expr(const std::string& text) {
  Parser p(text);
  IntExprPtr e = p.int_expr();
  p.expect_end();
  return e;
}

BoolExprPtr parse_bool_expr(const std::string& text) {
  Parser p(text);
  BoolExprPtr e = p.bool_expr();
  p.expect_end();
  return e;
}

} // namespace rvwb
