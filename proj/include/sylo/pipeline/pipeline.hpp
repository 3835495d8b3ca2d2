#pragma once

// Per-sample classification and dataset-level orchestration.

#include <algorithm>
#include <atomic>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "sylo/aristotle/import.hpp"
#include "sylo/error.hpp"
#include "sylo/fol/latex.hpp"
#include "sylo/llm/gateway.hpp"
#include "sylo/pipeline/retrieval.hpp"
#include "sylo/pipeline/types.hpp"
#include "sylo/prover/prover.hpp"

namespace sylo::pipeline {

enum class Strategy { MultiStep, SingleStep, DirectProver9, EndToEnd, LLMProver, LLMRetrieval };

constexpr std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::MultiStep: return "multistep";
    case Strategy::SingleStep: return "singlestep";
    case Strategy::DirectProver9: return "direct-prover9";
    case Strategy::EndToEnd: return "end-to-end";
    case Strategy::LLMProver: return "llm-prover";
    case Strategy::LLMRetrieval: return "llm-retrieval";
  }
  return "unknown";
}

inline Strategy parse_strategy(std::string_view s) {
  for (auto st : {Strategy::MultiStep, Strategy::SingleStep, Strategy::DirectProver9, Strategy::EndToEnd,
                  Strategy::LLMProver, Strategy::LLMRetrieval})
    if (strategy_name(st) == s) return st;
  throw Error(Errc::InvalidInput, "unknown strategy '" + std::string(s) + "'");
}

struct PipelineConfig {
  Strategy strategy = Strategy::MultiStep;
  bool translate_first = false;
  bool augment_import = true;
  prover::ProverConfig prover;
  llm::RetryPolicy retry;
  int worker_limit = 4;
};

/// Splits model output into nonempty, trimmed lines.
inline std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto t = fol::detail::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

class Pipeline {
 public:
  /// `gateway` may be null when no strategy step needs a model.
  Pipeline(std::shared_ptr<llm::Gateway> gateway, PipelineConfig cfg)
      : gateway_(std::move(gateway)), cfg_(std::move(cfg)) {
    cfg_.retry.validate();
    if (cfg_.worker_limit < 1) throw Error(Errc::InvalidInput, "worker_limit must be at least 1");
  }

  const PipelineConfig& config() const noexcept { return cfg_; }

  /// Validity (and, for subtasks 2 and 4, relevance) of one sample. Input
  /// validation happens before any model call.
  Prediction classify(const Syllogism& input, int subtask = 1) const {
    input.validate();
    if (subtask < 1 || subtask > 4) throw Error(Errc::InvalidInput, "subtask must be 1..4");
    const bool want_relevance = subtask == 2 || subtask == 4;

    Prediction pred;
    pred.id = input.id;
    Syllogism s = input;
    if ((subtask == 3 || subtask == 4) && cfg_.translate_first && s.language != "en") translate(s, pred);

    const auto text = llm::format_syllogism(s.premises, s.conclusion);
    if (cfg_.strategy == Strategy::EndToEnd) {
      auto r = gateway().end_to_end_classify(text, want_relevance, static_cast<int>(s.premises.size()));
      pred.valid = r.valid;
      pred.relevant = r.relevant.value_or(std::vector<int>{});
      pred.diagnostics.engine = "llm";
      return pred;
    }

    auto mapping = parse(s, text);
    std::vector<fol::Sentence> premises;
    for (std::size_t i = 0; i < s.premises.size(); ++i) premises.push_back(mapping[i].sentence);
    fol::Sentence conclusion = mapping[s.premises.size()].sentence;
    for (const auto& e : mapping.entries()) pred.diagnostics.attempts += e.attempts;
    for (const auto& p : premises) pred.diagnostics.fol_premises.push_back(fol::render_latex(p));
    pred.diagnostics.fol_conclusion = fol::render_latex(conclusion);

    if (cfg_.strategy == Strategy::LLMProver) {
      pred.valid = gateway().llm_prove(pred.diagnostics.fol_premises, pred.diagnostics.fol_conclusion);
      pred.diagnostics.engine = "llm";
    } else {
      prover::ProverProblem problem{
          cfg_.augment_import ? aristotle::augment_existential_import(premises) : premises, conclusion};
      auto verdict = prover::decide(problem, cfg_.prover);
      pred.diagnostics.engine = std::string(prover::engine_name(verdict.engine()));
      if (verdict.status() == prover::Status::Unsupported) throw Error(Errc::Unsupported, verdict.detail());
      pred.valid = verdict.is_entailed();
      if (verdict.countermodel()) pred.diagnostics.countermodel = verdict.countermodel()->to_string();
    }

    if (want_relevance && pred.valid) {
      if (cfg_.strategy == Strategy::LLMRetrieval)
        pred.relevant = gateway().llm_retrieve_relevant(s.premises, s.conclusion);
      else
        pred.relevant = retrieve_relevant_premises(premises, conclusion, oracle());
    }
    return pred;
  }

  /// Classifies every sample with up to worker_limit workers. Output order
  /// follows input order; a failing sample yields valid=false with the
  /// failure recorded in its diagnostics.
  std::vector<Prediction> run_subtask(const std::vector<Syllogism>& dataset, int subtask) const {
    if (subtask < 1 || subtask > 4) throw Error(Errc::InvalidInput, "subtask must be 1..4");
    std::vector<Prediction> out(dataset.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < dataset.size(); i = next++) out[i] = classify_or_fail(dataset[i], subtask);
    };
    auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg_.worker_limit), dataset.size());
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 1; w < n_workers; ++w) workers.emplace_back(work);
      work();
    }
    return out;
  }

  Prediction classify_or_fail(const Syllogism& s, int subtask) const {
    try {
      return classify(s, subtask);
    } catch (const std::exception& e) {
      Prediction p;
      p.id = s.id;
      p.valid = false;
      p.diagnostics.failed = true;
      p.diagnostics.error = e.what();
      p.diagnostics.engine = std::string(prover::engine_name(cfg_.prover.engine));
      return p;
    }
  }

  EntailmentOracle oracle() const { return EntailmentOracle{cfg_.augment_import, cfg_.prover}; }

 private:
  llm::Gateway& gateway() const {
    if (!gateway_) throw Error(Errc::InvalidInput, "this strategy needs a model endpoint or stub fixtures");
    return *gateway_;
  }

  void translate(Syllogism& s, Prediction& pred) const {
    auto outcome = gateway().translate_syllogism(llm::format_syllogism(s.premises, s.conclusion));
    pred.diagnostics.translation = outcome.translation;
    auto lines = nonempty_lines(outcome.translation);
    if (lines.size() != s.premises.size() + 1)
      throw Error(Errc::MalformedResponse, "translation has " + std::to_string(lines.size()) + " lines, expected " +
                                               std::to_string(s.premises.size() + 1));
    s.conclusion = lines.back();
    lines.pop_back();
    s.premises = std::move(lines);
  }

  fol::PredicateMapping parse(const Syllogism& s, const std::string& text) const {
    std::vector<std::string> props = s.premises;
    props.push_back(s.conclusion);
    switch (cfg_.strategy) {
      case Strategy::SingleStep:
        return gateway().parse_syllogism_singlestep(text, static_cast<int>(s.premises.size()), cfg_.retry);
      case Strategy::DirectProver9:
        return gateway().parse_syllogism_prover9(props, cfg_.retry);
      default:
        return gateway().parse_syllogism_multistep(props, cfg_.retry);
    }
  }

  std::shared_ptr<llm::Gateway> gateway_;
  PipelineConfig cfg_;
};

}  // namespace sylo::pipeline
