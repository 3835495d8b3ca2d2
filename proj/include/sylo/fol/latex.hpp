#pragma once

// LaTeX-notation formulas: \forall, \exists, \land, \lor, \neg, \rightarrow
// (plus common aliases), as produced by chat models inside \boxed{...}.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/detail/parser_core.hpp"
#include "sylo/fol/formula.hpp"

namespace sylo::fol {

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

/// Index of the matching '}' for the '{' at `open`, or npos.
inline std::size_t match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '{' || s[i + 1] == '}')) {
      ++i;
      continue;
    }
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Content of the last balanced \boxed{...} group, if any.
inline std::optional<std::string> last_boxed(std::string_view text) {
  constexpr std::string_view kBoxed = "\\boxed";
  std::optional<std::string> found;
  std::size_t from = 0;
  while (true) {
    auto at = text.find(kBoxed, from);
    if (at == std::string_view::npos) break;
    std::size_t open = at + kBoxed.size();
    while (open < text.size() && text[open] == ' ') ++open;
    from = at + kBoxed.size();
    if (open >= text.size() || text[open] != '{') continue;
    auto close = detail::match_brace(text, open);
    if (close == std::string_view::npos) continue;
    found = std::string(text.substr(open + 1, close - open - 1));
    from = close + 1;
  }
  return found;
}

/// Strips a surrounding \boxed{...} (last group wins), $...$, \[...\] and whitespace.
inline std::string unwrap_latex(std::string_view input) {
  std::string s(detail::trim(input));
  if (auto boxed = last_boxed(s)) s = *boxed;
  bool changed = true;
  while (changed) {
    changed = false;
    std::string_view v = detail::trim(s);
    if (v.size() >= 4 && v.substr(0, 2) == "$$" && v.substr(v.size() - 2) == "$$") {
      v = v.substr(2, v.size() - 4);
      changed = true;
    } else if (v.size() >= 2 && v.front() == '$' && v.back() == '$') {
      v = v.substr(1, v.size() - 2);
      changed = true;
    } else if (v.size() >= 4 && v.substr(0, 2) == "\\[" && v.substr(v.size() - 2) == "\\]") {
      v = v.substr(2, v.size() - 4);
      changed = true;
    } else if (v.size() >= 4 && v.substr(0, 2) == "\\(" && v.substr(v.size() - 2) == "\\)") {
      v = v.substr(2, v.size() - 4);
      changed = true;
    }
    s = std::string(detail::trim(v));
  }
  return s;
}

namespace detail {

struct CommandEntry {
  std::string_view name;
  Tok kind;
};

inline constexpr CommandEntry kLatexCommands[] = {
    {"forall", Tok::Forall},      {"exists", Tok::Exists},        {"land", Tok::And},
    {"wedge", Tok::And},          {"lor", Tok::Or},               {"vee", Tok::Or},
    {"neg", Tok::Not},            {"lnot", Tok::Not},             {"rightarrow", Tok::Implies},
    {"to", Tok::Implies},         {"Rightarrow", Tok::Implies},   {"implies", Tok::Implies},
    {"longrightarrow", Tok::Implies}, {"leftrightarrow", Tok::Iff}, {"Leftrightarrow", Tok::Iff},
    {"iff", Tok::Iff},            {"longleftrightarrow", Tok::Iff},
};

// Unicode operator spellings occasionally emitted instead of commands.
struct Utf8Entry {
  std::string_view bytes;
  Tok kind;
};
inline constexpr Utf8Entry kUtf8Ops[] = {
    {"∀", Tok::Forall}, {"∃", Tok::Exists}, {"∧", Tok::And},
    {"∨", Tok::Or},     {"¬", Tok::Not},    {"→", Tok::Implies},
    {"↔", Tok::Iff},
};

inline bool is_spacing_command(std::string_view cmd) {
  return cmd == "," || cmd == ";" || cmd == ":" || cmd == "!" || cmd == " " || cmd == "quad" ||
         cmd == "qquad";
}

inline bool is_name_wrapper(std::string_view cmd) {
  return cmd == "text" || cmd == "mathrm" || cmd == "mathit" || cmd == "textit" ||
         cmd == "operatorname" || cmd == "mathsf" || cmd == "texttt" || cmd == "textrm";
}

inline std::vector<Token> lex_latex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
      continue;
    }
    if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
      continue;
    }
    if (c == ',') {
      out.push_back({Tok::Comma, ",", i++});
      continue;
    }
    if (c == '=') {
      throw ParseError(Errc::UnsupportedFeature, i, {}, "equality is not supported");
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(Errc::UnsupportedFeature, i, {}, "numeric constants are not supported");
    }
    if (c == '\\') {
      std::size_t start = i++;
      if (i < s.size() && !std::isalpha(static_cast<unsigned char>(s[i]))) {
        std::string_view sym = s.substr(i, 1);
        ++i;
        if (is_spacing_command(sym)) continue;
        throw ParseError(Errc::SyntaxError, start, {}, "unknown command '\\" + std::string(sym) + "'");
      }
      std::size_t name_start = i;
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
      std::string_view cmd = s.substr(name_start, i - name_start);
      if (is_spacing_command(cmd)) continue;
      if (cmd == "left" || cmd == "right" || cmd == "big" || cmd == "Big" || cmd == "bigl" ||
          cmd == "bigr" || cmd == "Bigl" || cmd == "Bigr")
        continue;  // sizing prefix; the delimiter that follows is lexed normally
      if (is_name_wrapper(cmd)) {
        while (i < s.size() && s[i] == ' ') ++i;
        if (i >= s.size() || s[i] != '{')
          throw ParseError(Errc::SyntaxError, i, {"'{'"}, "expected braces after \\" + std::string(cmd));
        auto close = match_brace(s, i);
        if (close == std::string_view::npos)
          throw ParseError(Errc::SyntaxError, i, {"'}'"}, "unbalanced braces");
        std::string name;
        for (std::size_t k = i + 1; k < close; ++k) {
          if (s[k] == '\\' && k + 1 < close && s[k + 1] == '_') continue;
          if (s[k] == ' ' || s[k] == '-') {
            name += '_';
            continue;
          }
          name += s[k];
        }
        if (name.empty() || !is_ident_start(name.front()))
          throw ParseError(Errc::SyntaxError, i, {"identifier"}, "invalid name '" + name + "'");
        for (char ch : name)
          if (!is_ident_char(ch))
            throw ParseError(Errc::SyntaxError, i, {"identifier"}, "invalid name '" + name + "'");
        out.push_back({Tok::Ident, std::move(name), start});
        i = close + 1;
        continue;
      }
      bool known = false;
      for (const auto& e : kLatexCommands) {
        if (e.name == cmd) {
          out.push_back({e.kind, "\\" + std::string(cmd), start});
          known = true;
          break;
        }
      }
      if (!known)
        throw ParseError(Errc::SyntaxError, start, {"logical operator"},
                         "unknown command '\\" + std::string(cmd) + "'");
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t start = i;
      std::string name;
      while (i < s.size()) {
        if (is_ident_char(s[i])) {
          name += s[i++];
        } else if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == '_') {
          name += '_';
          i += 2;
        } else {
          break;
        }
      }
      out.push_back({Tok::Ident, std::move(name), start});
      continue;
    }
    bool matched = false;
    for (const auto& e : kUtf8Ops) {
      if (s.substr(i, e.bytes.size()) == e.bytes) {
        out.push_back({e.kind, std::string(e.bytes), i});
        i += e.bytes.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    throw ParseError(Errc::SyntaxError, i, {}, "unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

}  // namespace detail

/// Parses a LaTeX-notation sentence. Surrounding \boxed{}, $...$ and
/// whitespace are removed first; the result is closed.
inline Sentence parse_latex_formula(std::string_view input) {
  std::string body = unwrap_latex(input);
  if (body.empty()) throw ParseError(Errc::EmptyInput, 0, {}, "empty formula");
  auto toks = detail::lex_latex(body);
  detail::Parser parser(toks);
  return detail::close_sentence(parser.parse_all(), toks);
}

namespace detail {

inline void render_latex_into(const Formula& f, std::string& out);

inline void render_latex_operand(const Formula& f, std::string& out) {
  if (f.is<Binary>()) {
    out += '(';
    render_latex_into(f, out);
    out += ')';
  } else {
    render_latex_into(f, out);
  }
}

inline void render_latex_into(const Formula& f, std::string& out) {
  if (auto* p = f.as<Predicate>()) {
    out += p->name;
    out += '(';
    for (std::size_t i = 0; i < p->args.size(); ++i) {
      if (i) out += ", ";
      out += p->args[i].name;
    }
    out += ')';
  } else if (auto* n = f.as<Negation>()) {
    out += "\\neg ";
    render_latex_operand(n->inner, out);
  } else if (auto* b = f.as<Binary>()) {
    render_latex_operand(b->left, out);
    switch (b->op) {
      case Connective::And: out += " \\land "; break;
      case Connective::Or: out += " \\lor "; break;
      case Connective::Implies: out += " \\rightarrow "; break;
      case Connective::Iff: out += " \\leftrightarrow "; break;
    }
    render_latex_operand(b->right, out);
  } else {
    const auto& q = *f.as<Quantified>();
    out += q.q == Quantifier::ForAll ? "\\forall " : "\\exists ";
    out += q.var.name;
    out += " (";
    render_latex_into(q.body, out);
    out += ')';
  }
}

}  // namespace detail

inline std::string render_latex(const Formula& f) {
  std::string out;
  detail::render_latex_into(f, out);
  return out;
}

/// Canonical, fully parenthesised LaTeX rendering.
inline std::string render_latex(const Sentence& s) { return render_latex(s.formula()); }

}  // namespace sylo::fol
