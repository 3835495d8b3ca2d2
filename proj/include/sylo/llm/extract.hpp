#pragma once

// Pulling structured answers out of free-form model output.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sylo/error.hpp"
#include "sylo/fol/latex.hpp"

namespace sylo::llm {

using json = nlohmann::json;

/// Content of the last balanced \boxed{...} group.
inline std::string extract_boxed(std::string_view text) {
  auto boxed = fol::last_boxed(text);
  if (!boxed) throw Error(Errc::NoBoxedContent, "no \\boxed{...} group in response");
  return *boxed;
}

namespace detail {

// End index (inclusive) of the bracketed region opened at `start`, honouring
// JSON string quoting, or npos.
inline std::size_t json_span_end(std::string_view s, std::size_t start) {
  std::vector<char> stack;
  bool in_string = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      stack.push_back(c == '{' ? '}' : ']');
    } else if (c == '}' || c == ']') {
      if (stack.empty() || stack.back() != c) return std::string_view::npos;
      stack.pop_back();
      if (stack.empty()) return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace detail

/// The last syntactically valid JSON object or array in `text`: the candidate
/// ending furthest right, outermost on ties. Markdown fences need no special
/// handling since only the bracketed span is parsed.
inline json extract_json_object(std::string_view text) {
  std::size_t best_end = 0, best_start = std::string_view::npos;
  json best;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{' && text[i] != '[') continue;
    auto end = detail::json_span_end(text, i);
    if (end == std::string_view::npos) continue;
    if (best_start != std::string_view::npos && end <= best_end) continue;
    auto parsed = json::parse(text.substr(i, end - i + 1), nullptr, false);
    if (parsed.is_discarded()) continue;
    best = std::move(parsed);
    best_start = i;
    best_end = end;
  }
  if (best_start == std::string_view::npos) throw Error(Errc::NoJsonFound, "no JSON object or array in response");
  return best;
}

/// Throws SchemaMismatch unless `v` is an object carrying every field.
inline void require_fields(const json& v, std::initializer_list<std::string_view> fields) {
  std::string missing;
  if (!v.is_object()) throw Error(Errc::SchemaMismatch, "expected a JSON object");
  for (auto f : fields) {
    if (!v.contains(std::string(f))) {
      if (!missing.empty()) missing += ", ";
      missing += f;
    }
  }
  if (!missing.empty()) throw Error(Errc::SchemaMismatch, "missing fields: " + missing);
}

/// JSON bool, or the strings "true"/"false".
inline bool json_boolean(const json& v, std::string_view field) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "true" || s == "True") return true;
    if (s == "false" || s == "False") return false;
  }
  throw Error(Errc::SchemaMismatch, "field '" + std::string(field) + "' is not a boolean");
}

}  // namespace sylo::llm
