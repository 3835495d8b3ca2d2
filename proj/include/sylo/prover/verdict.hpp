#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sylo/fol/formula.hpp"
#include "sylo/prover/model.hpp"

namespace sylo::prover {

struct ProverProblem {
  std::vector<fol::Sentence> premises;
  fol::Sentence conclusion;

  /// Premises followed by the conclusion.
  std::vector<fol::Sentence> all_sentences() const {
    auto out = premises;
    out.push_back(conclusion);
    return out;
  }
};

enum class Engine { TypeSpace, DomainEnumeration, ExternalProver9 };

constexpr std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::TypeSpace: return "typespace";
    case Engine::DomainEnumeration: return "enumeration";
    case Engine::ExternalProver9: return "prover9";
  }
  return "unknown";
}

inline Engine parse_engine(std::string_view s) {
  if (s == "typespace") return Engine::TypeSpace;
  if (s == "enumeration") return Engine::DomainEnumeration;
  if (s == "prover9") return Engine::ExternalProver9;
  throw std::invalid_argument("unknown engine '" + std::string(s) + "'");
}

enum class Status { Entailed, NotEntailed, Unsupported };

constexpr std::string_view status_name(Status s) {
  switch (s) {
    case Status::Entailed: return "Entailed";
    case Status::NotEntailed: return "NotEntailed";
    case Status::Unsupported: return "Unsupported";
  }
  return "unknown";
}

/// Entailment decision. A countermodel accompanies NotEntailed from the
/// embedded engines and is re-checked against the problem on construction.
class ProverVerdict {
 public:
  static ProverVerdict entailed(Engine e) { return ProverVerdict(Status::Entailed, std::nullopt, e, {}); }

  static ProverVerdict unsupported(Engine e, std::string why) {
    return ProverVerdict(Status::Unsupported, std::nullopt, e, std::move(why));
  }

  static ProverVerdict not_entailed_external() {
    return ProverVerdict(Status::NotEntailed, std::nullopt, Engine::ExternalProver9, {});
  }

  static ProverVerdict not_entailed(Model countermodel, const ProverProblem& problem, Engine e) {
    if (e == Engine::ExternalProver9) throw std::logic_error("external verdicts carry no countermodel");
    for (const auto& p : problem.premises)
      if (!holds(p, countermodel))
        throw std::logic_error("countermodel " + countermodel.to_string() + " falsifies a premise");
    if (holds(problem.conclusion, countermodel))
      throw std::logic_error("countermodel " + countermodel.to_string() + " satisfies the conclusion");
    return ProverVerdict(Status::NotEntailed, std::move(countermodel), e, {});
  }

  Status status() const noexcept { return status_; }
  Engine engine() const noexcept { return engine_; }
  const std::optional<Model>& countermodel() const noexcept { return countermodel_; }
  const std::string& detail() const noexcept { return detail_; }
  bool is_entailed() const noexcept { return status_ == Status::Entailed; }

 private:
  ProverVerdict(Status s, std::optional<Model> m, Engine e, std::string detail)
      : status_(s), countermodel_(std::move(m)), engine_(e), detail_(std::move(detail)) {}

  Status status_;
  std::optional<Model> countermodel_;
  Engine engine_;
  std::string detail_;
};

}  // namespace sylo::prover
