#pragma once

#include <string>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"

namespace sylo::aristotle {

namespace detail {

// True when `s` is exactly  exists v T(v)  for some variable v.
inline bool is_import_fact(const fol::Sentence& s, const std::string& term) {
  auto* q = s.formula().as<fol::Quantified>();
  if (!q || q->q != fol::Quantifier::Exists) return false;
  auto* p = q->body.as<fol::Predicate>();
  return p && p->name == term && p->args.size() == 1 && p->args[0].name == q->var.name;
}

}  // namespace detail

/// Existential import: appends  exists x T(x)  for every distinct predicate T
/// of the premises (first-occurrence order), skipping facts already present.
inline std::vector<fol::Sentence> augment_existential_import(const std::vector<fol::Sentence>& premises) {
  std::vector<std::string> terms;
  for (const auto& s : premises) {
    fol::require_monadic(s.formula());
    for (auto& p : fol::collect_predicates(s)) {
      bool seen = false;
      for (const auto& t : terms) seen = seen || t == p;
      if (!seen) terms.push_back(p);
    }
  }
  std::vector<fol::Sentence> out = premises;
  for (const auto& t : terms) {
    bool present = false;
    for (const auto& s : premises) present = present || detail::is_import_fact(s, t);
    if (present) continue;
    std::string var = t == "x" ? "y" : "x";
    out.emplace_back(fol::exists(var, fol::atom(t, var)));
  }
  return out;
}

}  // namespace sylo::aristotle
