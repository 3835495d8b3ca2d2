#pragma once

// Categorical sentence forms and structural checks for two-premise syllogisms.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sylo/fol/formula.hpp"

namespace sylo::aristotle {

enum class FormKind { A, E, I, O, IndividualAffirmative, IndividualNegative, NonCategorical };

constexpr std::string_view form_name(FormKind k) {
  switch (k) {
    case FormKind::A: return "A";
    case FormKind::E: return "E";
    case FormKind::I: return "I";
    case FormKind::O: return "O";
    case FormKind::IndividualAffirmative: return "IndividualAffirmative";
    case FormKind::IndividualNegative: return "IndividualNegative";
    case FormKind::NonCategorical: return "NonCategorical";
  }
  return "?";
}

struct CategoricalForm {
  FormKind kind = FormKind::NonCategorical;
  std::optional<std::string> subject;
  std::optional<std::string> predicate;

  static CategoricalForm none() { return {}; }
  static CategoricalForm of(FormKind k, std::string s, std::string p) { return {k, std::move(s), std::move(p)}; }

  friend bool operator==(const CategoricalForm&, const CategoricalForm&) = default;
};

/// Canonical sentence for a universal/particular form:
///   A: forall x (S(x) -> P(x))     E: forall x (S(x) -> -P(x))
///   I: exists x (S(x) & P(x))      O: exists x (S(x) & -P(x))
inline fol::Sentence categorical_sentence(FormKind kind, const std::string& s, const std::string& p) {
  using namespace fol;
  switch (kind) {
    case FormKind::A: return Sentence(forall("x", implies(atom(s, "x"), atom(p, "x"))));
    case FormKind::E: return Sentence(forall("x", implies(atom(s, "x"), neg(atom(p, "x")))));
    case FormKind::I: return Sentence(exists("x", conj(atom(s, "x"), atom(p, "x"))));
    case FormKind::O: return Sentence(exists("x", conj(atom(s, "x"), neg(atom(p, "x")))));
    default: break;
  }
  throw std::invalid_argument("no canonical sentence for form " + std::string(form_name(kind)));
}

namespace detail {

inline fol::Formula strip_double_negation(const fol::Formula& f) {
  if (auto* n = f.as<fol::Negation>())
    if (auto* nn = n->inner.as<fol::Negation>()) return strip_double_negation(nn->inner);
  return f;
}

// Unary atom over `var`, possibly negated (after double-negation removal).
struct Literal {
  std::string name;
  bool positive;
};

inline std::optional<Literal> literal_of(const fol::Formula& raw, const std::string& var) {
  fol::Formula f = strip_double_negation(raw);
  bool positive = true;
  if (auto* n = f.as<fol::Negation>()) {
    positive = false;
    f = strip_double_negation(n->inner);
    if (f.is<fol::Negation>()) return std::nullopt;
  }
  auto* p = f.as<fol::Predicate>();
  if (!p || p->args.size() != 1 || p->args[0].name != var) return std::nullopt;
  return Literal{p->name, positive};
}

}  // namespace detail

/// Recognises A/E/I/O shapes up to commutativity of conjunction and
/// double-negation elimination; everything else is NonCategorical.
inline CategoricalForm classify_categorical_form(const fol::Sentence& s) {
  using namespace fol;
  Formula f = detail::strip_double_negation(s.formula());

  bool outer_negated = false;
  if (auto* n = f.as<Negation>()) {
    outer_negated = true;
    f = detail::strip_double_negation(n->inner);
  }
  auto* q = f.as<Quantified>();
  if (!q) return CategoricalForm::none();
  const std::string& v = q->var.name;
  Formula body = detail::strip_double_negation(q->body);
  auto* bin = body.as<Binary>();
  if (!bin) return CategoricalForm::none();

  if (!outer_negated && q->q == Quantifier::ForAll && bin->op == Connective::Implies) {
    auto l = detail::literal_of(bin->left, v), r = detail::literal_of(bin->right, v);
    if (!l || !r || !l->positive || l->name == r->name) return CategoricalForm::none();
    return CategoricalForm::of(r->positive ? FormKind::A : FormKind::E, l->name, r->name);
  }
  if (q->q == Quantifier::Exists && bin->op == Connective::And) {
    auto l = detail::literal_of(bin->left, v), r = detail::literal_of(bin->right, v);
    if (!l || !r || l->name == r->name) return CategoricalForm::none();
    if (!l->positive && r->positive) std::swap(l, r);
    if (!l->positive) return CategoricalForm::none();
    if (outer_negated) {
      // not exists x (S & P) is the universal negative; other negations are not categorical.
      if (!r->positive) return CategoricalForm::none();
      return CategoricalForm::of(FormKind::E, l->name, r->name);
    }
    return CategoricalForm::of(r->positive ? FormKind::I : FormKind::O, l->name, r->name);
  }
  return CategoricalForm::none();
}

struct StructureReport {
  bool premise_count_ok = false;
  std::optional<std::string> middle_term;
  std::map<std::string, int> term_usage;  // number of sentences mentioning each term
  std::vector<std::string> violations;
};

/// Structural diagnostics: exactly two categorical premises, three terms,
/// a middle term shared by the premises and absent from the conclusion, and
/// the conclusion's predicate / subject drawn from the major / minor premise.
inline StructureReport check_structure(const std::vector<fol::Sentence>& premises,
                                       const fol::Sentence& conclusion) {
  StructureReport r;
  r.premise_count_ok = premises.size() == 2;
  if (!r.premise_count_ok)
    r.violations.push_back("expected exactly two premises, found " + std::to_string(premises.size()));

  std::vector<CategoricalForm> forms;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    forms.push_back(classify_categorical_form(premises[i]));
    if (forms.back().kind == FormKind::NonCategorical)
      r.violations.push_back("premise " + std::to_string(i + 1) + " is not a categorical sentence");
  }
  CategoricalForm concl = classify_categorical_form(conclusion);
  if (concl.kind == FormKind::NonCategorical) r.violations.push_back("conclusion is not a categorical sentence");

  for (const auto& s : premises)
    for (const auto& p : fol::collect_predicates(s)) ++r.term_usage[p];
  for (const auto& p : fol::collect_predicates(conclusion)) ++r.term_usage[p];

  if (r.term_usage.size() != 3)
    r.violations.push_back("expected exactly three terms, found " + std::to_string(r.term_usage.size()));

  if (!r.premise_count_ok || forms[0].kind == FormKind::NonCategorical ||
      forms[1].kind == FormKind::NonCategorical || concl.kind == FormKind::NonCategorical)
    return r;

  auto terms_of = [](const CategoricalForm& f) { return std::vector<std::string>{*f.subject, *f.predicate}; };
  auto has = [](const std::vector<std::string>& v, const std::string& t) {
    return v[0] == t || v[1] == t;
  };
  auto t1 = terms_of(forms[0]), t2 = terms_of(forms[1]), tc = terms_of(concl);
  std::vector<std::string> shared;
  for (const auto& t : t1)
    if (has(t2, t)) shared.push_back(t);
  if (shared.size() != 1) {
    r.violations.push_back(shared.empty() ? "premises share no middle term"
                                          : "premises share more than one term");
    return r;
  }
  r.middle_term = shared.front();
  if (has(tc, *r.middle_term))
    r.violations.push_back("middle term '" + *r.middle_term + "' appears in the conclusion");

  const std::string& subject = *concl.subject;
  const std::string& predicate = *concl.predicate;
  bool major = has(t1, predicate) || has(t2, predicate);
  bool minor = has(t1, subject) || has(t2, subject);
  if (!major || predicate == *r.middle_term)
    r.violations.push_back("no major premise contains the conclusion's predicate '" + predicate + "'");
  if (!minor || subject == *r.middle_term)
    r.violations.push_back("no minor premise contains the conclusion's subject '" + subject + "'");
  return r;
}

}  // namespace sylo::aristotle
