#pragma once

// Model-facing operations: semantic parsing, translation, end-to-end
// classification, and the model-as-prover / model-as-retriever baselines.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sylo/error.hpp"
#include "sylo/fol/formula.hpp"
#include "sylo/fol/latex.hpp"
#include "sylo/fol/prover9.hpp"
#include "sylo/llm/chat.hpp"
#include "sylo/llm/extract.hpp"
#include "sylo/llm/templates.hpp"

namespace sylo::llm {

struct RetryPolicy {
  int max_attempts = 3;
  double retry_temperature = 0.6;

  void validate() const {
    if (max_attempts < 1) throw Error(Errc::InvalidInput, "max_attempts must be at least 1");
    if (!(retry_temperature >= 0.0 && retry_temperature <= 2.0))
      throw Error(Errc::InvalidInput, "retry_temperature must lie in [0, 2]");
  }

  /// Attempt 1 is greedy; later attempts sample.
  double temperature_for(int attempt) const { return attempt <= 1 ? 0.0 : retry_temperature; }
};

struct TranslationOutcome {
  std::string translation;
  std::string self_eval_feedback;
  bool self_eval_correct = true;
  bool corrected = false;
};

struct EndToEndResult {
  bool valid = false;
  std::optional<std::vector<int>> relevant;
};

struct GatewayConfig {
  std::string parser_model = "default";
  std::string translator_model = "default";
  std::string reasoner_model = "default";
  RetryPolicy retry;
  int max_context_tokens = kDefaultContextTokens;
  int concurrency = BoundedBackend::kDefaultLimit;
};

/// One proposition per line, premises first.
inline std::string format_syllogism(const std::vector<std::string>& premises, const std::string& conclusion) {
  std::string out;
  for (const auto& p : premises) out += p + "\n";
  return out + conclusion;
}

/// "0: ...", "1: ..." lines.
inline std::string format_indexed(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "\n";
    out += std::to_string(i) + ": " + items[i];
  }
  return out;
}

inline std::string format_lines(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "\n";
    out += items[i];
  }
  return out;
}

class Gateway {
 public:
  Gateway(std::shared_ptr<ChatBackend> backend, GatewayConfig cfg = {},
          TemplateLibrary templates = TemplateLibrary::builtin())
      : backend_(std::make_shared<BoundedBackend>(std::move(backend), cfg.concurrency)),
        cfg_(std::move(cfg)),
        templates_(std::move(templates)) {
    cfg_.retry.validate();
  }

  const GatewayConfig& config() const noexcept { return cfg_; }
  const TemplateLibrary& templates() const noexcept { return templates_; }

  std::string chat(const ChatRequest& request) { return backend_->complete(request); }

  /// Each proposition in its own call; earlier results are shown to later calls.
  fol::PredicateMapping parse_syllogism_multistep(const std::vector<std::string>& propositions,
                                                  std::optional<RetryPolicy> policy = std::nullopt) {
    return parse_sequential(propositions, policy.value_or(cfg_.retry), templates::kParseInitial,
                            templates::kParseDefault, [](const std::string& response) {
                              return fol::parse_latex_formula(extract_boxed(response));
                            },
                            [](const fol::Sentence& s) { return fol::render_latex(s); });
  }

  /// As multistep, but the model writes Prover9 syntax directly.
  fol::PredicateMapping parse_syllogism_prover9(const std::vector<std::string>& propositions,
                                                std::optional<RetryPolicy> policy = std::nullopt) {
    return parse_sequential(propositions, policy.value_or(cfg_.retry), templates::kProver9ParseInitial,
                            templates::kProver9ParseDefault, [](const std::string& response) {
                              return fol::parse_prover9_formula(fol::cleanup_prover9(response));
                            },
                            [](const fol::Sentence& s) { return fol::render_prover9(s); });
  }

  /// Whole syllogism in one call, answered as a JSON array of
  /// {proposition, fol_formula} objects, premises first.
  fol::PredicateMapping parse_syllogism_singlestep(const std::string& syllogism_text, int n_premises,
                                                   std::optional<RetryPolicy> policy = std::nullopt) {
    auto pol = policy.value_or(cfg_.retry);
    pol.validate();
    auto prompt = templates_.render(templates::kParseSingleStep,
                                    {{"num_premises", std::to_string(n_premises)}, {"syllogism", syllogism_text}});
    std::string last_error;
    for (int attempt = 1; attempt <= pol.max_attempts; ++attempt) {
      auto response = chat(parser_request(prompt, templates::kParseSingleStep, pol, attempt));
      try {
        auto doc = extract_json_object(response);
        if (!doc.is_array()) throw Error(Errc::SchemaMismatch, "expected a JSON array of propositions");
        if (doc.size() != static_cast<std::size_t>(n_premises) + 1)
          throw Error(Errc::SchemaMismatch, "expected " + std::to_string(n_premises + 1) + " entries, got " +
                                                std::to_string(doc.size()));
        fol::PredicateMapping mapping;
        for (const auto& item : doc) {
          require_fields(item, {"proposition", "fol_formula"});
          if (!item["proposition"].is_string() || !item["fol_formula"].is_string())
            throw Error(Errc::SchemaMismatch, "proposition and fol_formula must be strings");
          mapping.add(item["proposition"].get<std::string>(),
                      fol::parse_latex_formula(item["fol_formula"].get<std::string>()), attempt);
        }
        return mapping;
      } catch (const Error& e) {
        if (e.code() == Errc::SchemaMismatch && attempt == pol.max_attempts) throw;
        last_error = e.what();
      }
    }
    throw Error(Errc::ParseExhausted, "single-step parse failed after " + std::to_string(pol.max_attempts) +
                                          " attempts: " + last_error);
  }

  /// Translate, self-evaluate, and correct at most once.
  TranslationOutcome translate_syllogism(const std::string& syllogism_text) {
    TranslationOutcome out;
    out.translation =
        chat(translator_request(templates_.render(templates::kTranslate, {{"syllogism", syllogism_text}}),
                                templates::kTranslate));
    auto eval_response = chat(translator_request(
        templates_.render(templates::kTranslateEvaluate,
                          {{"formatted_original", syllogism_text}, {"translation", out.translation}}),
        templates::kTranslateEvaluate));
    auto verdict = extract_json_object(eval_response);
    require_fields(verdict, {"correct"});
    out.self_eval_correct = json_boolean(verdict["correct"], "correct");
    if (verdict.contains("feedback") && verdict["feedback"].is_string())
      out.self_eval_feedback = verdict["feedback"].get<std::string>();
    if (!out.self_eval_correct) {
      out.translation = chat(translator_request(
          templates_.render(templates::kTranslateCorrect,
                            {{"syllogism", syllogism_text}, {"feedback", out.self_eval_feedback}}),
          templates::kTranslateCorrect));
      out.corrected = true;
    }
    return out;
  }

  /// Direct validity judgement, optionally with 0-based relevant premises.
  /// `n_premises`, when given, bounds the returned indices.
  EndToEndResult end_to_end_classify(const std::string& syllogism_text, bool want_relevance,
                                     std::optional<int> n_premises = std::nullopt) {
    auto name = want_relevance ? templates::kEndToEndRelevance : templates::kEndToEnd;
    auto response = chat(reasoner_request(templates_.render(name, {{"syllogism", syllogism_text}}), name));
    auto doc = extract_json_object(response);
    require_fields(doc, {"valid"});
    EndToEndResult out;
    out.valid = json_boolean(doc["valid"], "valid");
    if (want_relevance) {
      // The field is only requested for valid arguments.
      out.relevant = doc.contains("relevant_premises") && out.valid
                         ? index_list(doc["relevant_premises"], n_premises)
                         : std::vector<int>{};
    }
    return out;
  }

  /// The model decides entailment over already-formalised premises.
  bool llm_prove(const std::vector<std::string>& premises_fol, const std::string& conclusion_fol) {
    auto prompt = templates_.render(templates::kLlmProver,
                                    {{"premises", format_lines(premises_fol)}, {"conclusion", conclusion_fol}});
    auto token = std::string(fol::detail::trim(extract_boxed(chat(reasoner_request(prompt, templates::kLlmProver)))));
    std::transform(token.begin(), token.end(), token.begin(), [](unsigned char c) { return std::tolower(c); });
    if (token.rfind("\\text{", 0) == 0 && token.back() == '}') token = token.substr(6, token.size() - 7);
    if (token == "true") return true;
    if (token == "false") return false;
    throw Error(Errc::NotABoolean, "boxed answer is not true/false: " + token);
  }

  /// The model picks the premises needed for the conclusion.
  std::vector<int> llm_retrieve_relevant(const std::vector<std::string>& premises, const std::string& conclusion) {
    auto prompt = templates_.render(templates::kLlmRetrieval,
                                    {{"premises", format_indexed(premises)}, {"conclusion", conclusion}});
    auto doc = extract_json_object(chat(reasoner_request(prompt, templates::kLlmRetrieval)));
    if (!doc.is_array()) throw Error(Errc::SchemaMismatch, "expected a JSON array of indices");
    return index_list(doc, static_cast<int>(premises.size()));
  }

 private:
  template <class Parse, class Render>
  fol::PredicateMapping parse_sequential(const std::vector<std::string>& propositions, const RetryPolicy& pol,
                                         std::string_view initial, std::string_view followup, Parse parse,
                                         Render render) {
    pol.validate();
    if (propositions.empty()) throw Error(Errc::InvalidInput, "no propositions to parse");
    fol::PredicateMapping mapping;
    std::vector<std::string> history;
    for (std::size_t idx = 0; idx < propositions.size(); ++idx) {
      const auto& text = propositions[idx];
      if (const auto* known = mapping.find(text)) {
        mapping.add(text, known->sentence, 0);
        continue;
      }
      std::string prompt = history.empty()
                               ? templates_.render(initial, {{"proposition", text}})
                               : templates_.render(followup, {{"previous_propositions", format_lines(history)},
                                                              {"proposition", text}});
      auto name = history.empty() ? initial : followup;
      std::string last_error;
      bool done = false;
      for (int attempt = 1; attempt <= pol.max_attempts && !done; ++attempt) {
        auto response = chat(parser_request(prompt, name, pol, attempt));
        try {
          auto sentence = parse(response);
          history.push_back(text + " -> " + render(sentence));
          mapping.add(text, std::move(sentence), attempt);
          done = true;
        } catch (const Error& e) {
          if (!is_recoverable(e.code())) throw;
          last_error = e.what();
        }
      }
      if (!done)
        throw Error(Errc::ParseExhausted, "proposition " + std::to_string(idx) + " failed after " +
                                              std::to_string(pol.max_attempts) + " attempts: " + last_error);
    }
    return mapping;
  }

  static bool is_recoverable(Errc c) {
    switch (c) {
      case Errc::NoBoxedContent:
      case Errc::NoJsonFound:
      case Errc::SchemaMismatch:
      case Errc::EmptyInput:
      case Errc::SyntaxError:
      case Errc::UnboundVariable:
      case Errc::AmbiguousScope:
      case Errc::UnsupportedFeature:
      case Errc::NameClash:
      case Errc::InvalidInput:
        return true;
      default:
        return false;
    }
  }

  ChatRequest parser_request(std::string prompt, std::string_view name, const RetryPolicy& pol, int attempt) const {
    auto r = user_request(cfg_.parser_model, std::move(prompt), pol.temperature_for(attempt), std::string(name),
                          attempt);
    r.max_context_tokens = cfg_.max_context_tokens;
    return r;
  }

  ChatRequest translator_request(std::string prompt, std::string_view name) const {
    auto r = user_request(cfg_.translator_model, std::move(prompt), 0.0, std::string(name));
    r.max_context_tokens = cfg_.max_context_tokens;
    return r;
  }

  ChatRequest reasoner_request(std::string prompt, std::string_view name) const {
    auto r = user_request(cfg_.reasoner_model, std::move(prompt), 0.0, std::string(name));
    r.max_context_tokens = cfg_.max_context_tokens;
    return r;
  }

  static std::vector<int> index_list(const nlohmann::json& v, std::optional<int> bound) {
    if (!v.is_array()) throw Error(Errc::SchemaMismatch, "expected an array of indices");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw Error(Errc::SchemaMismatch, "premise index is not an integer");
      int i = e.get<int>();
      if (i < 0 || (bound && i >= *bound))
        throw Error(Errc::IndexOutOfRange, "premise index " + std::to_string(i) + " out of range");
      out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::shared_ptr<ChatBackend> backend_;
  GatewayConfig cfg_;
  TemplateLibrary templates_;
};

}  // namespace sylo::llm
