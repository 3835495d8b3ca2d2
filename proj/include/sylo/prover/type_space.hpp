#pragma once

// Decision procedure for monadic FOL over type profiles.
//
// A type is the set of predicates true of an element. Per disjunctive case a
// universal with matrix M forbids every type violating M; the case is
// satisfiable iff some type survives and every existential matrix has a
// surviving witness type.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"
#include "sylo/prover/model.hpp"
#include "sylo/prover/normal_form.hpp"
#include "sylo/prover/verdict.hpp"

namespace sylo::prover {

/// Predicate count above which the type space is not materialised.
inline constexpr std::size_t kMaxTypeSpacePredicates = 20;

struct Sat {
  Model model;
};
struct Unsat {};
struct SatUnsupported {
  std::string reason;
};
using SatResult = std::variant<Sat, Unsat, SatUnsupported>;

namespace detail {

class TypeSpaceSearch {
 public:
  TypeSpaceSearch(PredicateIndex index) : index_(std::move(index)), n_types_(1u << index_.size()) {}

  std::optional<std::vector<std::uint32_t>> run(const std::vector<NormalSentence>& sentences) {
    std::vector<const NormalSentence*> pending;
    for (const auto& s : sentences) pending.push_back(&s);
    std::vector<char> allowed(n_types_, 1);
    std::vector<const Matrix*> existentials;
    return search(pending, allowed, existentials);
  }

 private:
  std::vector<char> satisfying(const Matrix& m) const {
    std::vector<char> out(n_types_);
    for (std::uint32_t t = 0; t < n_types_; ++t) {
      out[t] = m.eval([&](const std::string& name) {
        int bit = index_.bit(name);
        return bit >= 0 && (t & (1u << bit)) != 0;
      });
    }
    return out;
  }

  std::optional<std::vector<std::uint32_t>> search(std::vector<const NormalSentence*> pending,
                                                   std::vector<char> allowed,
                                                   std::vector<const Matrix*> existentials) {
    while (!pending.empty()) {
      const NormalSentence* s = pending.back();
      pending.pop_back();
      switch (s->kind) {
        case NormalSentence::Kind::True: break;
        case NormalSentence::Kind::False: return std::nullopt;
        case NormalSentence::Kind::And:
          for (const auto& c : s->children) pending.push_back(&c);
          break;
        case NormalSentence::Kind::Universal: {
          auto sat = satisfying(s->matrix);
          bool any = false;
          for (std::uint32_t t = 0; t < n_types_; ++t) {
            allowed[t] = allowed[t] && sat[t];
            any = any || allowed[t];
          }
          if (!any) return std::nullopt;
          break;
        }
        case NormalSentence::Kind::Existential:
          existentials.push_back(&s->matrix);
          break;
        case NormalSentence::Kind::Or: {
          for (const auto& c : s->children) {
            auto branch = pending;
            branch.push_back(&c);
            if (auto r = search(std::move(branch), allowed, existentials)) return r;
          }
          return std::nullopt;
        }
      }
    }

    std::vector<std::uint32_t> realized;
    for (const Matrix* m : existentials) {
      auto sat = satisfying(*m);
      std::optional<std::uint32_t> witness;
      for (std::uint32_t t = 0; t < n_types_ && !witness; ++t)
        if (allowed[t] && sat[t]) witness = t;
      if (!witness) return std::nullopt;
      realized.push_back(*witness);
    }
    if (realized.empty()) {
      for (std::uint32_t t = 0; t < n_types_; ++t) {
        if (allowed[t]) {
          realized.push_back(t);
          break;
        }
      }
      if (realized.empty()) return std::nullopt;
    }
    return realized;
  }

  PredicateIndex index_;
  std::uint32_t n_types_;
};

}  // namespace detail

/// Satisfiability of a finite set of monadic sentences.
inline SatResult check_satisfiable(const std::vector<fol::Sentence>& sentences) {
  auto index = PredicateIndex::of(sentences);
  if (index.size() > kMaxTypeSpacePredicates)
    return SatUnsupported{std::to_string(index.size()) + " predicates exceed the type-space limit of " +
                          std::to_string(kMaxTypeSpacePredicates)};
  std::vector<NormalSentence> normal;
  try {
    for (const auto& s : sentences) normal.push_back(normalize(s));
  } catch (const Error& e) {
    if (e.code() != Errc::Unsupported) throw;
    return SatUnsupported{e.what()};
  }
  detail::TypeSpaceSearch search(index);
  if (auto types = search.run(normal)) return Sat{Model(std::move(index), std::move(*types))};
  return Unsat{};
}

/// Premises entail the conclusion iff premises plus its negation are unsatisfiable.
inline ProverVerdict decide_entailment(const ProverProblem& problem) {
  auto sentences = problem.premises;
  sentences.push_back(fol::Sentence(fol::neg(problem.conclusion.formula())));
  auto result = check_satisfiable(sentences);
  if (std::holds_alternative<Unsat>(result)) return ProverVerdict::entailed(Engine::TypeSpace);
  if (auto* u = std::get_if<SatUnsupported>(&result))
    return ProverVerdict::unsupported(Engine::TypeSpace, u->reason);
  return ProverVerdict::not_entailed(std::get<Sat>(result).model, problem, Engine::TypeSpace);
}

}  // namespace sylo::prover
