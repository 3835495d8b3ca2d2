#pragma once

// Precedence parser shared by the LaTeX and Prover9 front ends.
//
//   iff     := implies ( IFF implies )*          left-assoc
//   implies := or ( IMP implies | RIMP or )?     right-assoc
//   or      := and ( OR and )*
//   and     := unary ( AND unary )*
//   unary   := NOT unary | QUANT ident unary | '(' iff ')' | atom
//   atom    := ident '(' ident ( ',' ident )* ')'
//
// A quantifier whose body is not a parenthesised group leaves its scope
// "open"; an open scope directly followed by a binary connective is
// rejected with AmbiguousScope.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"

namespace sylo::fol::detail {

enum class Tok {
  Forall,
  Exists,
  Not,
  And,
  Or,
  Implies,
  RevImplies,
  Iff,
  LParen,
  RParen,
  Comma,
  Ident,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Forall: return "universal quantifier";
    case Tok::Exists: return "existential quantifier";
    case Tok::Not: return "negation";
    case Tok::And: return "conjunction";
    case Tok::Or: return "disjunction";
    case Tok::Implies: return "implication";
    case Tok::RevImplies: return "backward implication";
    case Tok::Iff: return "equivalence";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Ident: return "identifier";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    if (toks_.empty() || toks_.front().kind == Tok::End)
      throw ParseError(Errc::EmptyInput, 0, {}, "empty formula");
    auto r = parse_iff();
    if (peek().kind != Tok::End) {
      throw ParseError(Errc::SyntaxError, peek().pos, {"end of input", "binary connective"},
                       "unexpected " + std::string(tok_name(peek().kind)));
    }
    return std::move(r.f);
  }

 private:
  struct Parsed {
    Formula f;
    bool open_scope;
  };

  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  static bool is_binary(Tok t) {
    return t == Tok::And || t == Tok::Or || t == Tok::Implies || t == Tok::RevImplies ||
           t == Tok::Iff;
  }

  void check_scope(const Parsed& p) const {
    if (p.open_scope && is_binary(peek().kind)) {
      throw ParseError(Errc::AmbiguousScope, peek().pos, {"'(' around the quantifier body"},
                       "quantifier scope is ambiguous before " +
                           std::string(tok_name(peek().kind)));
    }
  }

  Parsed parse_iff() {
    Parsed lhs = parse_implies();
    while (peek().kind == Tok::Iff) {
      take();
      Parsed rhs = parse_implies();
      lhs = Parsed{iff(std::move(lhs.f), std::move(rhs.f)), false};
    }
    return lhs;
  }

  Parsed parse_implies() {
    Parsed lhs = parse_or();
    if (peek().kind == Tok::Implies) {
      take();
      Parsed rhs = parse_implies();
      return Parsed{implies(std::move(lhs.f), std::move(rhs.f)), false};
    }
    if (peek().kind == Tok::RevImplies) {
      take();
      Parsed rhs = parse_or();
      return Parsed{implies(std::move(rhs.f), std::move(lhs.f)), false};
    }
    return lhs;
  }

  Parsed parse_or() {
    Parsed lhs = parse_and();
    while (peek().kind == Tok::Or) {
      take();
      Parsed rhs = parse_and();
      lhs = Parsed{disj(std::move(lhs.f), std::move(rhs.f)), false};
    }
    return lhs;
  }

  Parsed parse_and() {
    Parsed lhs = parse_unary();
    check_scope(lhs);
    while (peek().kind == Tok::And) {
      take();
      Parsed rhs = parse_unary();
      check_scope(rhs);
      lhs = Parsed{conj(std::move(lhs.f), std::move(rhs.f)), false};
    }
    return lhs;
  }

  Parsed parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: {
        take();
        Parsed inner = parse_unary();
        return Parsed{neg(std::move(inner.f)), inner.open_scope};
      }
      case Tok::Forall:
      case Tok::Exists: {
        Quantifier q = t.kind == Tok::Forall ? Quantifier::ForAll : Quantifier::Exists;
        take();
        if (peek().kind != Tok::Ident)
          throw ParseError(Errc::SyntaxError, peek().pos, {"variable name"},
                           "unexpected " + std::string(tok_name(peek().kind)));
        std::string var = take().text;
        bool parenthesised = peek().kind == Tok::LParen;
        Parsed body = parse_unary();
        Formula f(Quantified{q, Variable{std::move(var)}, std::move(body.f)});
        return Parsed{std::move(f), !parenthesised};
      }
      case Tok::LParen: {
        take();
        Parsed inner = parse_iff();
        if (peek().kind != Tok::RParen)
          throw ParseError(Errc::SyntaxError, peek().pos, {"')'", "binary connective"},
                           "unexpected " + std::string(tok_name(peek().kind)));
        take();
        return Parsed{std::move(inner.f), false};
      }
      case Tok::Ident:
        return Parsed{parse_atom(), false};
      default:
        throw ParseError(Errc::SyntaxError, t.pos,
                         {"predicate", "'('", "negation", "quantifier"},
                         "unexpected " + std::string(tok_name(t.kind)));
    }
  }

  Formula parse_atom() {
    Token name = take();
    if (peek().kind != Tok::LParen)
      throw ParseError(Errc::SyntaxError, peek().pos, {"'(' after predicate name"},
                       "predicate '" + name.text + "' has no argument list");
    take();
    std::vector<Variable> args;
    while (true) {
      if (peek().kind != Tok::Ident)
        throw ParseError(Errc::SyntaxError, peek().pos, {"variable name"},
                         "unexpected " + std::string(tok_name(peek().kind)));
      args.push_back(Variable{take().text});
      if (peek().kind == Tok::LParen)
        throw ParseError(Errc::UnsupportedFeature, peek().pos, {},
                         "function terms are not supported");
      if (peek().kind == Tok::Comma) {
        take();
        continue;
      }
      if (peek().kind == Tok::RParen) {
        take();
        break;
      }
      throw ParseError(Errc::SyntaxError, peek().pos, {"','", "')'"},
                       "unexpected " + std::string(tok_name(peek().kind)));
    }
    return Formula(Predicate{std::move(name.text), std::move(args)});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

/// Wraps a parsed formula as a Sentence, reporting free variables with the
/// position of their first use.
inline Sentence close_sentence(Formula f, const std::vector<Token>& toks) {
  auto fv = free_variables(f);
  if (!fv.empty()) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].kind == Tok::Ident && toks[i].text == fv.front() &&
          (i == 0 || toks[i - 1].kind == Tok::LParen || toks[i - 1].kind == Tok::Comma)) {
        pos = toks[i].pos;
        break;
      }
    }
    throw ParseError(Errc::UnboundVariable, pos, {},
                     "variable '" + fv.front() + "' is not bound");
  }
  return Sentence(std::move(f));
}

}  // namespace sylo::fol::detail
