#pragma once

#include "sylo/prover/enumeration.hpp"
#include "sylo/prover/external.hpp"
#include "sylo/prover/model.hpp"
#include "sylo/prover/normal_form.hpp"
#include "sylo/prover/type_space.hpp"
#include "sylo/prover/verdict.hpp"

namespace sylo::prover {

struct ProverConfig {
  Engine engine = Engine::TypeSpace;
  ExternalProverConfig external;
};

/// Dispatches to the configured engine. The enumeration engine runs with the
/// smallest complete domain bound.
inline ProverVerdict decide(const ProverProblem& problem, const ProverConfig& cfg = {}) {
  switch (cfg.engine) {
    case Engine::TypeSpace: return decide_entailment(problem);
    case Engine::DomainEnumeration: return decide_by_domain_enumeration(problem);
    case Engine::ExternalProver9: return prove_external(problem, cfg.external);
  }
  return decide_entailment(problem);
}

}  // namespace sylo::prover
