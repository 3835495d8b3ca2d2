#pragma once

// Brute-force entailment oracle over domains of size 1..max_domain, evaluated
// directly on the formula AST. Without equality two elements of the same type
// satisfy the same formulas, so domains of pairwise distinct types (up to
// permutation) cover every interpretation. Complete when max_domain >= 2^k
// for k predicates.

#include <cstdint>
#include <string>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"
#include "sylo/prover/model.hpp"
#include "sylo/prover/verdict.hpp"

namespace sylo::prover {

inline ProverVerdict decide_by_domain_enumeration(const ProverProblem& problem, std::size_t max_domain) {
  auto all = problem.all_sentences();
  try {
    for (const auto& s : all) fol::require_monadic(s.formula());
  } catch (const Error& e) {
    return ProverVerdict::unsupported(Engine::DomainEnumeration, e.what());
  }
  auto index = PredicateIndex::of(all);
  if (index.size() >= 31 || (std::size_t{1} << index.size()) > max_domain) {
    return ProverVerdict::unsupported(
        Engine::DomainEnumeration, "2^" + std::to_string(index.size()) + " types exceed max domain " +
                                       std::to_string(max_domain));
  }
  const std::uint32_t n_types = 1u << index.size();

  Interpretation in{index, {}};
  for (std::size_t n = 1; n <= max_domain && n <= n_types; ++n) {
    // Strictly increasing type sequences enumerate every n-subset of types.
    in.elements.resize(n);
    for (std::size_t i = 0; i < n; ++i) in.elements[i] = static_cast<std::uint32_t>(i);
    while (true) {
      bool premises_hold = true;
      for (const auto& p : problem.premises) {
        if (!holds(p, in)) {
          premises_hold = false;
          break;
        }
      }
      if (premises_hold && !holds(problem.conclusion, in))
        return ProverVerdict::not_entailed(Model(index, in.elements), problem, Engine::DomainEnumeration);

      std::size_t i = n;
      while (i > 0 && in.elements[i - 1] == n_types - n + (i - 1)) --i;
      if (i == 0) break;
      ++in.elements[i - 1];
      for (std::size_t j = i; j < n; ++j) in.elements[j] = in.elements[j - 1] + 1;
    }
  }
  return ProverVerdict::entailed(Engine::DomainEnumeration);
}

/// Oracle run with the smallest complete domain bound.
inline ProverVerdict decide_by_domain_enumeration(const ProverProblem& problem) {
  auto index = PredicateIndex::of(problem.all_sentences());
  std::size_t bound = index.size() >= 31 ? 0 : (std::size_t{1} << index.size());
  return decide_by_domain_enumeration(problem, bound);
}

}  // namespace sylo::prover
