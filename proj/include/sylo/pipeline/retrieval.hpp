#pragma once

// Greedy relevant-premise retrieval by permanent removal.

#include <vector>

#include "sylo/aristotle/import.hpp"
#include "sylo/error.hpp"
#include "sylo/prover/prover.hpp"

namespace sylo::pipeline {

struct EntailmentOracle {
  bool augment_import = true;
  prover::ProverConfig prover;

  /// Entailment of `conclusion` by `premises`, re-augmented from scratch.
  bool entails(const std::vector<fol::Sentence>& premises, const fol::Sentence& conclusion) const {
    prover::ProverProblem problem{augment_import ? aristotle::augment_existential_import(premises) : premises,
                                  conclusion};
    auto verdict = prover::decide(problem, prover);
    if (verdict.status() == prover::Status::Unsupported) throw Error(Errc::Unsupported, verdict.detail());
    return verdict.is_entailed();
  }
};

namespace detail {

inline std::vector<fol::Sentence> select(const std::vector<fol::Sentence>& premises, const std::vector<int>& idx) {
  std::vector<fol::Sentence> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(premises[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace detail

/// Indices (ascending) of the premises kept after dropping, in index order,
/// every premise whose removal from the current working set preserves
/// entailment. Empty when the full set does not entail the conclusion.
inline std::vector<int> retrieve_relevant_premises(const std::vector<fol::Sentence>& premises,
                                                   const fol::Sentence& conclusion, const EntailmentOracle& oracle) {
  if (!oracle.entails(premises, conclusion)) return {};
  std::vector<int> working;
  for (int i = 0; i < static_cast<int>(premises.size()); ++i) working.push_back(i);
  for (int i = 0; i < static_cast<int>(premises.size()); ++i) {
    std::vector<int> without;
    for (int j : working)
      if (j != i) without.push_back(j);
    if (oracle.entails(detail::select(premises, without), conclusion)) working = std::move(without);
  }
  return working;
}

}  // namespace sylo::pipeline
