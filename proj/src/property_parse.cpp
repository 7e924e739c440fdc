// Property DSL lexer, parser and printer.

#include <cctype>
#include <charconv>

#include "marchsim/error.hpp"
#include "marchsim/property.hpp"

namespace marchsim {

namespace {

enum class Tok : std::uint8_t {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  Not,
  AndAnd,
  OrOr,
  EqEq,
  NotEq,
  HashHash,
  ImplOverlap,
  ImplNext,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  std::size_t pos = 0;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), 0, i});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.substr(i, 3) == "|->") {
      push(Tok::ImplOverlap, 3);
    } else if (s.substr(i, 3) == "|=>") {
      push(Tok::ImplNext, 3);
    } else if (s.substr(i, 3) == "===") {
      push(Tok::EqEq, 3);
    } else if (s.substr(i, 3) == "!==") {
      push(Tok::NotEq, 3);
    } else if (s.substr(i, 2) == "==") {
      push(Tok::EqEq, 2);
    } else if (s.substr(i, 2) == "!=") {
      push(Tok::NotEq, 2);
    } else if (s.substr(i, 2) == "&&") {
      push(Tok::AndAnd, 2);
    } else if (s.substr(i, 2) == "||") {
      push(Tok::OrOr, 2);
    } else if (s.substr(i, 2) == "##") {
      push(Tok::HashHash, 2);
    } else if (c == '!') {
      push(Tok::Not, 1);
    } else if (c == '(') {
      push(Tok::LParen, 1);
    } else if (c == ')') {
      push(Tok::RParen, 1);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      std::int64_t value = 0;
      std::from_chars(s.data() + start, s.data() + i, value);
      // Sized Verilog literal: <size>'<base><digits>
      if (i < s.size() && s[i] == '\'') {
        ++i;
        if (i >= s.size()) throw ParseError(i, "truncated sized literal");
        const char base_ch = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
        const int base = base_ch == 'b' ? 2 : base_ch == 'd' ? 10 : base_ch == 'h' ? 16 : base_ch == 'o' ? 8 : 0;
        if (base == 0) throw ParseError(i, "unknown literal base");
        ++i;
        const std::size_t digits = i;
        while (i < s.size() && (std::isxdigit(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        std::string body;
        for (std::size_t k = digits; k < i; ++k)
          if (s[k] != '_') body += s[k];
        auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value, base);
        if (body.empty() || ec != std::errc() || end != body.data() + body.size())
          throw ParseError(digits, "bad sized literal digits");
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), value, start});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      const std::size_t start = i;
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '$')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), 0, start});
    } else {
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", 0, s.size()});
  return out;
}

BoolExpr make(ExprNode::Kind kind, BoolExpr lhs = nullptr, BoolExpr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  PropertyDef property() {
    PropertyDef p;
    if (peek().kind == Tok::Ident && peek().text == "disable") {
      next();
      if (peek().kind != Tok::Ident || peek().text != "iff") fail("expected 'iff' after 'disable'");
      next();
      expect(Tok::LParen, "'('");
      p.disable_iff = expr();
      expect(Tok::RParen, "')'");
    }
    p.antecedent = sequence();
    if (peek().kind == Tok::ImplOverlap || peek().kind == Tok::ImplNext) {
      Implication imp;
      imp.overlapped = next().kind == Tok::ImplOverlap;
      if (peek().kind == Tok::HashHash) {
        next();
        imp.delay = delay_value();
      }
      imp.consequent = sequence();
      p.implication = std::move(imp);
    }
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token &peek() const { return tokens_[at_]; }
  const Token &next() { return tokens_[at_++]; }

  [[noreturn]] void fail(const std::string &message) const { throw ParseError(peek().pos, message); }

  void expect(Tok kind, const char *what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    next();
  }

  std::uint32_t delay_value() {
    if (peek().kind != Tok::Number) fail("expected delay count after '##'");
    const auto v = next().number;
    if (v < 1 || v > 1'000'000) fail("delay must be in 1..1000000");
    return static_cast<std::uint32_t>(v);
  }

  SequenceExpr sequence() {
    SequenceExpr seq;
    std::uint32_t lead = 0;
    if (peek().kind == Tok::HashHash) {
      next();
      lead = delay_value();
    }
    seq.terms.push_back({lead, expr()});
    while (peek().kind == Tok::HashHash) {
      next();
      const std::uint32_t d = delay_value();
      seq.terms.push_back({d, expr()});
    }
    return seq;
  }

  BoolExpr expr() {
    BoolExpr lhs = conjunction();
    while (peek().kind == Tok::OrOr) {
      next();
      lhs = make(ExprNode::Kind::Or, lhs, conjunction());
    }
    return lhs;
  }

  BoolExpr conjunction() {
    BoolExpr lhs = equality();
    while (peek().kind == Tok::AndAnd) {
      next();
      lhs = make(ExprNode::Kind::And, lhs, equality());
    }
    return lhs;
  }

  BoolExpr equality() {
    BoolExpr lhs = unary();
    while (peek().kind == Tok::EqEq || peek().kind == Tok::NotEq) {
      const auto kind = next().kind == Tok::EqEq ? ExprNode::Kind::Eq : ExprNode::Kind::Ne;
      lhs = make(kind, lhs, unary());
    }
    return lhs;
  }

  BoolExpr unary() {
    if (peek().kind == Tok::Not) {
      next();
      return make(ExprNode::Kind::Not, unary());
    }
    return primary();
  }

  BoolExpr primary() {
    const Token &t = peek();
    switch (t.kind) {
      case Tok::LParen: {
        next();
        BoolExpr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Number: {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Const;
        n->value = next().number;
        return n;
      }
      case Tok::Ident: {
        const std::string name = next().text;
        if (name == "stable" || name == "$stable") {
          expect(Tok::LParen, "'(' after stable");
          if (peek().kind != Tok::Ident) fail("stable() takes a signal name");
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::Stable;
          n->name = next().text;
          expect(Tok::RParen, "')'");
          return n;
        }
        if (name == "first_match") {
          // Identity over single-cycle sequences; longer sequences are rejected.
          expect(Tok::LParen, "'(' after first_match");
          SequenceExpr inner = sequence();
          if (inner.terms.size() != 1 || inner.terms[0].delay != 0)
            fail("first_match over multi-cycle sequences is not supported");
          expect(Tok::RParen, "')'");
          return inner.terms[0].expr;
        }
        if (name == "true" || name == "false") {
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprNode::Kind::Const;
          n->value = name == "true" ? 1 : 0;
          return n;
        }
        if (name == "disable" || name == "iff") fail("unexpected keyword '" + name + "'");
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprNode::Kind::Ident;
        n->name = name;
        return n;
      }
      case Tok::End: fail("unexpected end of property");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

int precedence(ExprNode::Kind k) {
  switch (k) {
    case ExprNode::Kind::Or: return 1;
    case ExprNode::Kind::And: return 2;
    case ExprNode::Kind::Eq:
    case ExprNode::Kind::Ne: return 3;
    case ExprNode::Kind::Not: return 4;
    default: return 5;
  }
}

void print(const BoolExpr &e, std::string &out, int context) {
  const int prec = precedence(e->kind);
  const bool paren = prec < context;
  if (paren) out += '(';
  switch (e->kind) {
    case ExprNode::Kind::Const: out += std::to_string(e->value); break;
    case ExprNode::Kind::Ident: out += e->name; break;
    case ExprNode::Kind::Stable: out += "stable(" + e->name + ")"; break;
    case ExprNode::Kind::Not:
      out += '!';
      print(e->lhs, out, 5);
      break;
    case ExprNode::Kind::And:
    case ExprNode::Kind::Or:
    case ExprNode::Kind::Eq:
    case ExprNode::Kind::Ne: {
      const char *op = e->kind == ExprNode::Kind::And  ? " && "
                       : e->kind == ExprNode::Kind::Or ? " || "
                       : e->kind == ExprNode::Kind::Eq ? " == "
                                                       : " != ";
      print(e->lhs, out, prec);
      out += op;
      // Left-associative: a right operand of equal precedence needs parentheses.
      print(e->rhs, out, prec + 1);
      break;
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::uint64_t SequenceExpr::length() const {
  std::uint64_t total = 0;
  for (const auto &t : terms) total += t.delay;
  return total;
}

std::string to_text(const BoolExpr &expr) {
  std::string out;
  print(expr, out, 0);
  return out;
}

std::string to_text(const SequenceExpr &seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.terms.size(); ++i) {
    if (i) out += ' ';
    if (seq.terms[i].delay) out += "##" + std::to_string(seq.terms[i].delay) + " ";
    std::string term = to_text(seq.terms[i].expr);
    // Keep multi-term sequences unambiguous when terms are compound.
    if (seq.terms.size() > 1 && precedence(seq.terms[i].expr->kind) < 4) term = "(" + term + ")";
    out += term;
  }
  return out;
}

std::string to_text(const PropertyDef &p) {
  std::string out;
  if (p.disable_iff) out += "disable iff (" + to_text(*p.disable_iff) + ") ";
  out += to_text(p.antecedent);
  if (p.implication) {
    out += p.implication->overlapped ? " |-> " : " |=> ";
    if (p.implication->delay) out += "##" + std::to_string(p.implication->delay) + " ";
    out += to_text(p.implication->consequent);
  }
  return out;
}

PropertyDef parse_property(std::string_view text) { return Parser(text).property(); }

}  // namespace marchsim
