#pragma once

// Prover9 concrete syntax: all, exists, &, |, -, ->, <-, <->.
//
// Single-letter lowercase names x y z u v w p q r are variables in Prover9,
// so predicates with those names are emitted with a "_pred" suffix.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/detail/parser_core.hpp"
#include "sylo/fol/formula.hpp"
#include "sylo/fol/latex.hpp"

namespace sylo::fol {

inline constexpr std::array<std::string_view, 9> kProver9ReservedNames = {"x", "y", "z", "u", "v",
                                                                          "w", "p", "q", "r"};

inline bool is_prover9_reserved(std::string_view name) {
  return std::find(kProver9ReservedNames.begin(), kProver9ReservedNames.end(), name) !=
         kProver9ReservedNames.end();
}

/// Predicate renaming applied consistently across one problem.
class Prover9Names {
 public:
  Prover9Names() = default;

  /// Builds a renaming for every predicate occurring in `sentences`, keeping
  /// renamed names clear of predicates the problem already uses.
  explicit Prover9Names(const std::vector<Sentence>& sentences) {
    std::set<std::string> used;
    for (const auto& s : sentences)
      for (auto& p : collect_predicates(s)) used.insert(p);
    for (const auto& name : used) {
      if (!is_prover9_reserved(name)) continue;
      std::string candidate = name + "_pred";
      while (used.count(candidate)) candidate += "_pred";
      used.insert(candidate);
      renames_[name] = candidate;
    }
  }

  std::string operator()(const std::string& name) const {
    auto it = renames_.find(name);
    if (it != renames_.end()) return it->second;
    if (is_prover9_reserved(name)) return name + "_pred";
    return name;
  }

 private:
  std::map<std::string, std::string> renames_;
};

namespace detail {

inline void render_p9_into(const Formula& f, const Prover9Names& names, std::string& out);

inline void render_p9_operand(const Formula& f, const Prover9Names& names, std::string& out) {
  if (f.is<Predicate>() || f.is<Negation>()) {
    render_p9_into(f, names, out);
  } else {
    out += '(';
    render_p9_into(f, names, out);
    out += ')';
  }
}

inline void render_p9_into(const Formula& f, const Prover9Names& names, std::string& out) {
  if (auto* p = f.as<Predicate>()) {
    out += names(p->name);
    out += '(';
    for (std::size_t i = 0; i < p->args.size(); ++i) {
      if (i) out += ',';
      out += p->args[i].name;
    }
    out += ')';
  } else if (auto* n = f.as<Negation>()) {
    out += '-';
    if (n->inner.is<Predicate>()) {
      render_p9_into(n->inner, names, out);
    } else {
      out += '(';
      render_p9_into(n->inner, names, out);
      out += ')';
    }
  } else if (auto* b = f.as<Binary>()) {
    render_p9_operand(b->left, names, out);
    switch (b->op) {
      case Connective::And: out += " & "; break;
      case Connective::Or: out += " | "; break;
      case Connective::Implies: out += " -> "; break;
      case Connective::Iff: out += " <-> "; break;
    }
    render_p9_operand(b->right, names, out);
  } else {
    const auto& q = *f.as<Quantified>();
    out += q.q == Quantifier::ForAll ? "all " : "exists ";
    out += q.var.name;
    out += " (";
    render_p9_into(q.body, names, out);
    out += ')';
  }
}

}  // namespace detail

/// Renders a `.`-terminated Prover9 formula.
inline std::string render_prover9(const Sentence& s, const Prover9Names& names = {}) {
  std::string out;
  detail::render_p9_into(s.formula(), names, out);
  out += '.';
  return out;
}

/// Normalises raw model output before Prover9 parsing: drops ';', '$',
/// trailing periods and LaTeX remnants, and maps LaTeX operators onto their
/// Prover9 spelling. Idempotent.
inline std::string cleanup_prover9(std::string_view raw) {
  std::string s;
  if (auto boxed = last_boxed(raw)) {
    s = *boxed;
  } else {
    s = std::string(raw);
  }

  static constexpr std::pair<std::string_view, std::string_view> kOps[] = {
      {"longleftrightarrow", " <-> "}, {"leftrightarrow", " <-> "}, {"Leftrightarrow", " <-> "},
      {"iff", " <-> "},                {"longrightarrow", " -> "},  {"rightarrow", " -> "},
      {"Rightarrow", " -> "},          {"implies", " -> "},         {"to", " -> "},
      {"leftarrow", " <- "},           {"land", " & "},             {"wedge", " & "},
      {"lor", " | "},                  {"vee", " | "},              {"neg", " -"},
      {"lnot", " -"},                  {"forall", " all "},         {"exists", " exists "},
  };

  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    char c = s[i];
    if (c == ';' || c == '$') {
      ++i;
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      std::string_view cmd(s.data() + i + 1, j - i - 1);
      if (cmd.empty()) {
        // "\_" keeps the underscore; other escaped symbols are dropped.
        if (j < s.size() && s[j] == '_') out += '_';
        i = j + 1;
        continue;
      }
      // Unknown commands (\text, \mathrm, ...) vanish; their braced content stays.
      for (const auto& [name, repl] : kOps) {
        if (cmd == name) {
          out += repl;
          break;
        }
      }
      i = j;
      continue;
    }
    if (c == '{' || c == '}') {
      ++i;
      continue;
    }
    out += c;
    ++i;
  }

  // Collapse whitespace and drop trailing periods.
  std::string collapsed;
  for (char c : out) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!collapsed.empty() && collapsed.back() != ' ') collapsed += ' ';
    } else {
      collapsed += c;
    }
  }
  while (!collapsed.empty() && (collapsed.back() == '.' || collapsed.back() == ' '))
    collapsed.pop_back();
  while (!collapsed.empty() && collapsed.front() == ' ') collapsed.erase(collapsed.begin());
  return collapsed;
}

namespace detail {

inline std::vector<Token> lex_prover9(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    auto starts = [&](std::string_view t) { return s.substr(i, t.size()) == t; };
    if (starts("<->")) {
      out.push_back({Tok::Iff, "<->", i});
      i += 3;
    } else if (starts("->")) {
      out.push_back({Tok::Implies, "->", i});
      i += 2;
    } else if (starts("<-")) {
      out.push_back({Tok::RevImplies, "<-", i});
      i += 2;
    } else if (c == '-') {
      out.push_back({Tok::Not, "-", i++});
    } else if (c == '&') {
      out.push_back({Tok::And, "&", i++});
    } else if (c == '|') {
      out.push_back({Tok::Or, "|", i++});
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", i++});
    } else if (c == '=') {
      throw ParseError(Errc::UnsupportedFeature, i, {}, "equality is not supported");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(Errc::UnsupportedFeature, i, {}, "numeric constants are not supported");
    } else if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < s.size() && is_ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      if (word == "all") {
        out.push_back({Tok::Forall, word, start});
      } else if (word == "exists") {
        out.push_back({Tok::Exists, word, start});
      } else {
        out.push_back({Tok::Ident, std::move(word), start});
      }
    } else {
      throw ParseError(Errc::SyntaxError, i, {}, "unexpected character '" + std::string(1, c) + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

}  // namespace detail

/// Parses one Prover9 formula after cleanup_prover9. Positions refer to the
/// cleaned text.
inline Sentence parse_prover9_formula(std::string_view input) {
  std::string cleaned = cleanup_prover9(input);
  if (cleaned.empty()) throw ParseError(Errc::EmptyInput, 0, {}, "empty formula");
  auto toks = detail::lex_prover9(cleaned);
  detail::Parser parser(toks);
  return detail::close_sentence(parser.parse_all(), toks);
}

}  // namespace sylo::fol
