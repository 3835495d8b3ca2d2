#pragma once

// Prompt templates with {slot} placeholders. The built-in set is compiled in
// from assets/prompts; a directory of *.txt files can override it.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/prompt_assets.hpp"

namespace sylo::llm {

namespace templates {
inline constexpr std::string_view kParseDefault = "parse_default";
inline constexpr std::string_view kParseInitial = "parse_initial";
inline constexpr std::string_view kParseSingleStep = "parse_single_step";
inline constexpr std::string_view kProver9ParseDefault = "prover9_parse_default";
inline constexpr std::string_view kProver9ParseInitial = "prover9_parse_initial";
inline constexpr std::string_view kTranslate = "translate";
inline constexpr std::string_view kTranslateEvaluate = "translate_evaluate";
inline constexpr std::string_view kTranslateCorrect = "translate_correct";
inline constexpr std::string_view kEndToEnd = "end_to_end";
inline constexpr std::string_view kEndToEndRelevance = "end_to_end_relevance";
inline constexpr std::string_view kLlmProver = "llm_prover";
inline constexpr std::string_view kLlmRetrieval = "llm_retrieval";
}  // namespace templates

/// Slots each known template must expose.
inline std::set<std::string> required_slots_for(std::string_view name) {
  using namespace templates;
  if (name == kParseDefault || name == kProver9ParseDefault) return {"previous_propositions", "proposition"};
  if (name == kParseInitial || name == kProver9ParseInitial) return {"proposition"};
  if (name == kParseSingleStep) return {"num_premises", "syllogism"};
  if (name == kTranslate || name == kEndToEnd || name == kEndToEndRelevance) return {"syllogism"};
  if (name == kTranslateEvaluate) return {"formatted_original", "translation"};
  if (name == kTranslateCorrect) return {"syllogism", "feedback"};
  if (name == kLlmProver || name == kLlmRetrieval) return {"premises", "conclusion"};
  return {};
}

class PromptTemplate {
 public:
  PromptTemplate(std::string name, std::string body, std::set<std::string> required)
      : name_(std::move(name)), body_(std::move(body)), required_(std::move(required)) {
    for (const auto& slot : required_)
      if (body_.find("{" + slot + "}") == std::string::npos)
        throw Error(Errc::MissingSlot, "template '" + name_ + "' lacks slot {" + slot + "}");
  }

  const std::string& name() const noexcept { return name_; }
  const std::string& body() const noexcept { return body_; }
  const std::set<std::string>& required_slots() const noexcept { return required_; }

  /// Substitutes every required slot. Braces that are not required slots
  /// (JSON examples, \boxed{true}) are left untouched, and substituted
  /// values are never rescanned.
  std::string render(const std::map<std::string, std::string>& values) const {
    for (const auto& slot : required_)
      if (!values.count(slot))
        throw Error(Errc::MissingSlot, "no value for {" + slot + "} in template '" + name_ + "'");
    std::string out;
    out.reserve(body_.size() + 256);
    for (std::size_t i = 0; i < body_.size();) {
      if (body_[i] == '{') {
        auto close = body_.find('}', i + 1);
        if (close != std::string::npos) {
          std::string key = body_.substr(i + 1, close - i - 1);
          if (required_.count(key)) {
            out += values.at(key);
            i = close + 1;
            continue;
          }
        }
      }
      out += body_[i++];
    }
    return out;
  }

 private:
  std::string name_;
  std::string body_;
  std::set<std::string> required_;
};

class TemplateLibrary {
 public:
  /// The compiled-in templates.
  static TemplateLibrary builtin() {
    TemplateLibrary lib;
    for (const auto& [name, body] : assets::kPromptTemplates)
      lib.add(PromptTemplate(std::string(name), std::string(body), required_slots_for(name)));
    return lib;
  }

  /// Built-in templates overridden by every <name>.txt in `dir`.
  static TemplateLibrary with_overrides(const std::filesystem::path& dir) {
    TemplateLibrary lib = builtin();
    if (!std::filesystem::is_directory(dir))
      throw Error(Errc::Io, "prompt directory not found: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() != ".txt") continue;
      std::ifstream in(entry.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      std::string body = ss.str();
      if (!body.empty() && body.back() == '\n') body.pop_back();
      std::string name = entry.path().stem().string();
      lib.add(PromptTemplate(name, std::move(body), required_slots_for(name)));
    }
    return lib;
  }

  void add(PromptTemplate t) {
    auto name = t.name();
    templates_.insert_or_assign(std::move(name), std::move(t));
  }

  const PromptTemplate& get(std::string_view name) const {
    auto it = templates_.find(std::string(name));
    if (it == templates_.end()) throw Error(Errc::MissingSlot, "unknown template '" + std::string(name) + "'");
    return it->second;
  }

  std::string render(std::string_view name, const std::map<std::string, std::string>& values) const {
    return get(name).render(values);
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, _] : templates_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace sylo::llm
