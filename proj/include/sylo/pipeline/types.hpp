#pragma once

// Dataset records, prediction records, and their JSON-lines encoding.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sylo/error.hpp"

namespace sylo::pipeline {

using json = nlohmann::json;

struct Syllogism {
  std::string id;
  std::vector<std::string> premises;
  std::string conclusion;
  std::optional<bool> label_valid;
  std::optional<bool> label_plausible;
  std::optional<std::vector<int>> gold_relevant;
  std::string language = "en";

  friend bool operator==(const Syllogism&, const Syllogism&) = default;

  void validate() const {
    if (id.empty()) throw Error(Errc::InvalidInput, "syllogism has an empty id");
    if (premises.empty()) throw Error(Errc::InvalidInput, "syllogism " + id + " has no premises");
    for (const auto& p : premises)
      if (p.empty()) throw Error(Errc::InvalidInput, "syllogism " + id + " has an empty premise");
    if (conclusion.empty()) throw Error(Errc::InvalidInput, "syllogism " + id + " has an empty conclusion");
    if (gold_relevant)
      for (int i : *gold_relevant)
        if (i < 0 || i >= static_cast<int>(premises.size()))
          throw Error(Errc::InvalidInput, "syllogism " + id + " has gold_relevant index " + std::to_string(i) +
                                              " out of range");
  }
};

struct Diagnostics {
  std::vector<std::string> fol_premises;
  std::string fol_conclusion;
  std::string engine;
  int attempts = 0;
  bool failed = false;
  std::string error;
  std::string countermodel;
  std::string translation;

  friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct Prediction {
  std::string id;
  bool valid = false;
  std::vector<int> relevant;
  Diagnostics diagnostics;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// JSON conversion.

inline json to_json(const Syllogism& s) {
  json j = {{"id", s.id}, {"premises", s.premises}, {"conclusion", s.conclusion}};
  if (s.label_valid) j["label_valid"] = *s.label_valid;
  if (s.label_plausible) j["label_plausible"] = *s.label_plausible;
  if (s.gold_relevant) j["gold_relevant"] = *s.gold_relevant;
  j["language"] = s.language;
  return j;
}

namespace detail {

template <class T>
T field(const json& j, const char* name) {
  if (!j.contains(name)) throw Error(Errc::SchemaMismatch, std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::SchemaMismatch, std::string("field '") + name + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return field<T>(j, name);
}

}  // namespace detail

inline Syllogism syllogism_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::SchemaMismatch, "record is not a JSON object");
  Syllogism s;
  s.id = detail::field<std::string>(j, "id");
  s.premises = detail::field<std::vector<std::string>>(j, "premises");
  s.conclusion = detail::field<std::string>(j, "conclusion");
  s.label_valid = detail::optional_field<bool>(j, "label_valid");
  s.label_plausible = detail::optional_field<bool>(j, "label_plausible");
  s.gold_relevant = detail::optional_field<std::vector<int>>(j, "gold_relevant");
  if (auto lang = detail::optional_field<std::string>(j, "language")) s.language = *lang;
  s.validate();
  return s;
}

inline json to_json(const Prediction& p) {
  json d = {{"fol_premises", p.diagnostics.fol_premises},
            {"fol_conclusion", p.diagnostics.fol_conclusion},
            {"engine", p.diagnostics.engine},
            {"attempts", p.diagnostics.attempts},
            {"failed", p.diagnostics.failed}};
  if (!p.diagnostics.error.empty()) d["error"] = p.diagnostics.error;
  if (!p.diagnostics.countermodel.empty()) d["countermodel"] = p.diagnostics.countermodel;
  if (!p.diagnostics.translation.empty()) d["translation"] = p.diagnostics.translation;
  return {{"id", p.id}, {"valid", p.valid}, {"relevant", p.relevant}, {"diagnostics", std::move(d)}};
}

inline Prediction prediction_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::SchemaMismatch, "record is not a JSON object");
  Prediction p;
  p.id = detail::field<std::string>(j, "id");
  p.valid = detail::field<bool>(j, "valid");
  p.relevant = detail::optional_field<std::vector<int>>(j, "relevant").value_or(std::vector<int>{});
  std::sort(p.relevant.begin(), p.relevant.end());
  p.relevant.erase(std::unique(p.relevant.begin(), p.relevant.end()), p.relevant.end());
  if (j.contains("diagnostics") && j["diagnostics"].is_object()) {
    const auto& d = j["diagnostics"];
    auto& out = p.diagnostics;
    out.fol_premises = detail::optional_field<std::vector<std::string>>(d, "fol_premises").value_or(
        std::vector<std::string>{});
    out.fol_conclusion = detail::optional_field<std::string>(d, "fol_conclusion").value_or("");
    out.engine = detail::optional_field<std::string>(d, "engine").value_or("");
    out.attempts = detail::optional_field<int>(d, "attempts").value_or(0);
    out.failed = detail::optional_field<bool>(d, "failed").value_or(false);
    out.error = detail::optional_field<std::string>(d, "error").value_or("");
    out.countermodel = detail::optional_field<std::string>(d, "countermodel").value_or("");
    out.translation = detail::optional_field<std::string>(d, "translation").value_or("");
  }
  return p;
}

// JSON-lines files.

namespace detail {

template <class T, class Decode>
std::vector<T> read_jsonl(const std::filesystem::path& path, Decode decode) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = json::parse(line, nullptr, false);
    try {
      if (j.is_discarded()) throw Error(Errc::SchemaMismatch, "invalid JSON");
      out.push_back(decode(j));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

template <class T>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  for (const auto& item : items) out << to_json(item).dump() << "\n";
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

}  // namespace detail

/// Reads a dataset; errors name the offending line. Ids must be unique.
inline std::vector<Syllogism> load_dataset(const std::filesystem::path& path) {
  auto data = detail::read_jsonl<Syllogism>(path, syllogism_from_json);
  std::set<std::string> seen;
  for (const auto& s : data)
    if (!seen.insert(s.id).second) throw Error(Errc::InvalidInput, path.string() + ": duplicate id " + s.id);
  return data;
}

inline void save_dataset(const std::filesystem::path& path, const std::vector<Syllogism>& data) {
  detail::write_jsonl(path, data);
}

inline std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
  return detail::read_jsonl<Prediction>(path, prediction_from_json);
}

inline void save_predictions(const std::filesystem::path& path, const std::vector<Prediction>& preds) {
  detail::write_jsonl(path, preds);
}

}  // namespace sylo::pipeline
