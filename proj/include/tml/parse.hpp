#pragma once

// Text syntax for formulas and two-sided sequents.
//
//   formula := disj ; disj := conj ('|' conj)* ; conj := unary ('&' unary)*
//   unary   := '~' unary | '#' unary | atom
//   atom    := ident | 'bot' | '(' formula ')'
//
// Unicode aliases: ¬ ~, □ #, ∧ &, ∨ |, ⊥ bot, ⇒ =>.

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tml/formula.hpp"

namespace tml {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class Style { Ascii, Unicode };

namespace detail {

enum class Tok { Ident, Bot, Neg, Box, And, Or, LParen, RParen, Comma, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Bot: return "'bot'";
    case Tok::Neg: return "'~'";
    case Tok::Box: return "'#'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'=>'";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      const int l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", l, c});
        return out;
      }
      const char ch = src_[pos_];
      if (ch >= 'a' && ch <= 'z') {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance(1);
        std::string word(src_.substr(start, pos_ - start));
        out.push_back({word == kBotKeyword ? Tok::Bot : Tok::Ident, word, l, c});
        continue;
      }
      switch (ch) {
        case '~': push(out, Tok::Neg, 1, l, c); continue;
        case '#': push(out, Tok::Box, 1, l, c); continue;
        case '&': push(out, Tok::And, 1, l, c); continue;
        case '|': push(out, Tok::Or, 1, l, c); continue;
        case '(': push(out, Tok::LParen, 1, l, c); continue;
        case ')': push(out, Tok::RParen, 1, l, c); continue;
        case ',': push(out, Tok::Comma, 1, l, c); continue;
        case '=':
          if (src_.substr(pos_, 2) == "=>") {
            push(out, Tok::Arrow, 2, l, c);
            continue;
          }
          break;
        default: break;
      }
      // Multi-byte aliases (UTF-8).
      static const std::pair<std::string_view, Tok> kAliases[] = {
          {"\xC2\xAC", Tok::Neg},          // ¬
          {"\xE2\x96\xA1", Tok::Box},      // □
          {"\xE2\x88\xA7", Tok::And},      // ∧
          {"\xE2\x88\xA8", Tok::Or},       // ∨
          {"\xE2\x8A\xA5", Tok::Bot},      // ⊥
          {"\xE2\x87\x92", Tok::Arrow},    // ⇒
      };
      bool matched = false;
      for (const auto& [spelling, kind] : kAliases) {
        if (src_.substr(pos_, spelling.size()) == spelling) {
          out.push_back({kind, std::string(spelling), l, c});
          pos_ += spelling.size();
          ++col_;
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }
  }

 private:
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }
  void advance(std::size_t n) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }
  void push(std::vector<Token>& out, Tok k, std::size_t n, int l, int c) {
    out.push_back({k, std::string(src_.substr(pos_, n)), l, c});
    advance(n);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula formula() {
    Formula f = conjunction();
    while (peek().kind == Tok::Or) {
      next();
      f = disj(f, conjunction());
    }
    return f;
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, "expected " + expected + ", found " + found);
  }

  void expect(Tok k) {
    if (peek().kind != k) fail(describe(k));
    next();
  }

 private:
  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::And) {
      next();
      f = conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Neg: next(); return neg(unary());
      case Tok::Box: next(); return box(unary());
      default: return atom();
    }
  }

  Formula atom() {
    switch (peek().kind) {
      case Tok::Ident: return var(next().text);
      case Tok::Bot: next(); return bot();
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen);
        return f;
      }
      default: fail("formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline std::vector<Formula> formula_list(Parser& p, Tok stop) {
  std::vector<Formula> out;
  if (p.peek().kind == stop) return out;
  out.push_back(p.formula());
  while (p.peek().kind == Tok::Comma) {
    p.next();
    out.push_back(p.formula());
  }
  return out;
}

inline void render_into(const Formula& f, Style style, std::string& out) {
  if (style == Style::Ascii) {
    out += f.text();
    return;
  }
  auto sub = [&](const Formula& k, bool paren) {
    if (paren) out += '(';
    render_into(k, style, out);
    if (paren) out += ')';
  };
  switch (f.op()) {
    case Op::Var: out += f.name(); return;
    case Op::Bot: out += "\xE2\x8A\xA5"; return;
    case Op::Neg:
    case Op::Box:
      out += f.is_neg() ? "\xC2\xAC" : "\xE2\x96\xA1";
      sub(f.child(), f.child().precedence() < 3);
      return;
    case Op::And:
    case Op::Or: {
      const int prec = f.precedence();
      sub(f.left(), f.left().precedence() < prec);
      out += f.is_or() ? " \xE2\x88\xA8 " : " \xE2\x88\xA7 ";
      sub(f.right(), f.right().precedence() <= prec);
      return;
    }
  }
}

}  // namespace detail

inline Formula parse(std::string_view text) {
  detail::Parser p(detail::Lexer(text).run());
  Formula f = p.formula();
  if (p.peek().kind != detail::Tok::End) p.fail("'|', '&' or end of input");
  return f;
}

// Comma-separated formula list; the empty string gives an empty list.
inline std::vector<Formula> parse_list(std::string_view text) {
  detail::Parser p(detail::Lexer(text).run());
  auto out = detail::formula_list(p, detail::Tok::End);
  if (p.peek().kind != detail::Tok::End) p.fail("',' or end of input");
  return out;
}

inline std::string render(const Formula& f, Style style = Style::Ascii) {
  if (style == Style::Ascii) return f.text();
  std::string out;
  detail::render_into(f, style, out);
  return out;
}

inline std::string render(const FormulaSet& s, Style style = Style::Ascii) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += render(s[i], style);
  }
  return out;
}

}  // namespace tml
