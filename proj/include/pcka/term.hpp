#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "pcka/rational.hpp"

namespace pcka {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Abstract syntax of process expressions:
//   0 | 1 | a | E + F | E ; F | E || F | (E [alpha] F) | E*F
// The star is the binary Kleene star; postfix `E*` is sugar for `E*1`.
struct Term {
  enum class Kind { zero, one, action, plus, seq, par, pchoice, star };

  Kind kind;
  std::string name;  // action
  Rat alpha;         // pchoice, strictly between 0 and 1
  TermPtr left, right;
};

inline TermPtr t_zero() { return std::make_shared<Term>(Term{Term::Kind::zero, {}, {}, {}, {}}); }
inline TermPtr t_one() { return std::make_shared<Term>(Term{Term::Kind::one, {}, {}, {}, {}}); }

inline TermPtr t_action(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty action name");
  return std::make_shared<Term>(Term{Term::Kind::action, std::move(name), {}, {}, {}});
}

inline TermPtr t_node(Term::Kind k, TermPtr l, TermPtr r) {
  return std::make_shared<Term>(Term{k, {}, {}, std::move(l), std::move(r)});
}

inline TermPtr t_plus(TermPtr l, TermPtr r) { return t_node(Term::Kind::plus, std::move(l), std::move(r)); }
inline TermPtr t_seq(TermPtr l, TermPtr r) { return t_node(Term::Kind::seq, std::move(l), std::move(r)); }
inline TermPtr t_par(TermPtr l, TermPtr r) { return t_node(Term::Kind::par, std::move(l), std::move(r)); }
inline TermPtr t_star(TermPtr l, TermPtr r) { return t_node(Term::Kind::star, std::move(l), std::move(r)); }

inline TermPtr t_pchoice(TermPtr l, Rat alpha, TermPtr r) {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("probabilistic choice weight must lie strictly between 0 and 1");
  auto t = Term{Term::Kind::pchoice, {}, std::move(alpha), std::move(l), std::move(r)};
  return std::make_shared<Term>(std::move(t));
}

inline bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::zero:
    case Term::Kind::one: return true;
    case Term::Kind::action: return a->name == b->name;
    case Term::Kind::pchoice:
      if (a->alpha != b->alpha) return false;
      [[fallthrough]];
    default: return term_eq(a->left, b->left) && term_eq(a->right, b->right);
  }
}

inline bool term_has_star(const TermPtr& t) {
  if (!t) return false;
  if (t->kind == Term::Kind::star) return true;
  return term_has_star(t->left) || term_has_star(t->right);
}

inline bool term_has_pchoice(const TermPtr& t) {
  if (!t) return false;
  if (t->kind == Term::Kind::pchoice) return true;
  return term_has_pchoice(t->left) || term_has_pchoice(t->right);
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

struct Lexer {
  enum class Tok { end, num, ident, plus, semi, par, star, lparen, rparen, lbrack, rbrack, slash };

  std::string_view src;
  std::size_t pos = 0;
  Tok tok = Tok::end;
  std::string text;      // ident / num payload
  std::size_t tok_pos = 0;

  explicit Lexer(std::string_view s) : src(s) { next(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_pos); }

  void next() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' || src[pos] == '\r'))
      ++pos;
    tok_pos = pos;
    text.clear();
    if (pos == src.size()) { tok = Tok::end; return; }
    char c = src[pos];
    if (c >= '0' && c <= '9') {
      while (pos < src.size() && ((src[pos] >= '0' && src[pos] <= '9') || src[pos] == '.'))
        text += src[pos++];
      tok = Tok::num;
      return;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      while (pos < src.size() &&
             ((src[pos] >= 'a' && src[pos] <= 'z') || (src[pos] >= 'A' && src[pos] <= 'Z') ||
              (src[pos] >= '0' && src[pos] <= '9') || src[pos] == '_'))
        text += src[pos++];
      tok = Tok::ident;
      return;
    }
    switch (c) {
      case '+': tok = Tok::plus; ++pos; return;
      case ';': tok = Tok::semi; ++pos; return;
      case '*': tok = Tok::star; ++pos; return;
      case '(': tok = Tok::lparen; ++pos; return;
      case ')': tok = Tok::rparen; ++pos; return;
      case '[': tok = Tok::lbrack; ++pos; return;
      case ']': tok = Tok::rbrack; ++pos; return;
      case '/': tok = Tok::slash; ++pos; return;
      case '|':
        if (pos + 1 < src.size() && src[pos + 1] == '|') { tok = Tok::par; pos += 2; return; }
        throw ParseError("stray '|', expected '||'", pos);
      default: throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
};

struct Parser {
  Lexer lx;

  explicit Parser(std::string_view s) : lx(s) {}
  using Tok = Lexer::Tok;

  TermPtr parse() {
    TermPtr t = expr();
    if (lx.tok != Tok::end) lx.fail("trailing input after expression");
    return t;
  }

  // Lowest level: either a left-associative `+` chain or a single
  // bracketed probabilistic choice. Mixing the two without parentheses
  // is rejected, and `[a] ... [b]` chains must be bracketed as well.
  TermPtr expr() {
    TermPtr t = par();
    if (lx.tok == Tok::plus) {
      while (lx.tok == Tok::plus) {
        lx.next();
        t = t_plus(t, par());
      }
      if (lx.tok == Tok::lbrack)
        lx.fail("'+' and '[..]' at the same level must be disambiguated with parentheses");
      return t;
    }
    if (lx.tok == Tok::lbrack) {
      Rat a = alpha();
      TermPtr r = par();
      if (lx.tok == Tok::plus)
        lx.fail("'+' and '[..]' at the same level must be disambiguated with parentheses");
      if (lx.tok == Tok::lbrack)
        lx.fail("nested '[..]' choices must be parenthesised");
      return t_pchoice(t, std::move(a), r);
    }
    return t;
  }

  Rat alpha() {
    std::size_t at = lx.tok_pos;
    lx.next();  // '['
    if (lx.tok != Tok::num) lx.fail("expected a probability inside '[..]'");
    std::string s = lx.text;
    lx.next();
    if (lx.tok == Tok::slash) {
      lx.next();
      if (lx.tok != Tok::num) lx.fail("expected a denominator after '/'");
      s += "/" + lx.text;
      lx.next();
    }
    if (lx.tok != Tok::rbrack) lx.fail("expected ']'");
    lx.next();
    Rat a = rat_from_string(s);
    if (!(a > 0 && a < 1))
      throw ParseError("probability must lie strictly between 0 and 1", at);
    return a;
  }

  TermPtr par() {
    TermPtr t = seq();
    while (lx.tok == Tok::par) {
      lx.next();
      t = t_par(t, seq());
    }
    return t;
  }

  TermPtr seq() {
    TermPtr t = starred();
    while (lx.tok == Tok::semi) {
      lx.next();
      t = t_seq(t, starred());
    }
    return t;
  }

  // `E*F` is the binary star; a `*` not followed by an operand is the
  // postfix sugar `E*` = `E*1`.
  TermPtr starred() {
    TermPtr t = primary();
    while (lx.tok == Tok::star) {
      lx.next();
      if (lx.tok == Tok::num || lx.tok == Tok::ident || lx.tok == Tok::lparen)
        t = t_star(t, primary());
      else
        t = t_star(t, t_one());
    }
    return t;
  }

  TermPtr primary() {
    switch (lx.tok) {
      case Tok::num: {
        if (lx.text == "0") { lx.next(); return t_zero(); }
        if (lx.text == "1") { lx.next(); return t_one(); }
        lx.fail("unexpected number (actions must start with a letter)");
      }
      case Tok::ident: {
        std::string n = lx.text;
        lx.next();
        return t_action(std::move(n));
      }
      case Tok::lparen: {
        lx.next();
        TermPtr t = expr();
        if (lx.tok != Tok::rparen) lx.fail("expected ')'");
        lx.next();
        return t;
      }
      default: lx.fail("expected an expression");
    }
  }
};

inline int term_prec(const Term& t) {
  switch (t.kind) {
    case Term::Kind::plus:
    case Term::Kind::pchoice: return 1;
    case Term::Kind::par: return 2;
    case Term::Kind::seq: return 3;
    case Term::Kind::star: return 4;
    default: return 5;
  }
}

inline void render(const TermPtr& t, int min_prec, std::string& out) {
  int p = term_prec(*t);
  bool paren = p < min_prec;
  if (t->kind == Term::Kind::pchoice) paren = true;  // always bracketed
  if (paren) out += '(';
  switch (t->kind) {
    case Term::Kind::zero: out += '0'; break;
    case Term::Kind::one: out += '1'; break;
    case Term::Kind::action: out += t->name; break;
    case Term::Kind::plus:
      render(t->left, 1, out);
      out += " + ";
      render(t->right, 2, out);
      break;
    case Term::Kind::pchoice:
      render(t->left, 2, out);
      out += " [" + rat_to_string(t->alpha) + "] ";
      render(t->right, 2, out);
      break;
    case Term::Kind::par:
      render(t->left, 2, out);
      out += " || ";
      render(t->right, 3, out);
      break;
    case Term::Kind::seq:
      render(t->left, 3, out);
      out += " ; ";
      render(t->right, 4, out);
      break;
    case Term::Kind::star:
      render(t->left, 4, out);
      out += '*';
      render(t->right, 5, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline TermPtr parse_term(std::string_view text) { return detail::Parser(text).parse(); }

// Rendering round-trips: parse_term(render_term(t)) is structurally t.
inline std::string render_term(const TermPtr& t) {
  std::string out;
  detail::render(t, 0, out);
  return out;
}

}  // namespace pcka
