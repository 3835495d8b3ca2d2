#pragma once

// Offline chat backends. StubBackend replays scripted responses keyed on
// (template name, FNV-1a hash of the prompt); RecordingBackend captures a live
// or synthetic backend's answers into that fixture format.
//
// Fixture JSON:
//   {"entries": [{"template": "parse_initial",
//                 "prompt_hash": "<16 hex digits>",   (or "prompt": "<full text>")
//                 "responses": ["attempt 1 reply", "attempt 2 reply", ...]}]}
// Attempt n receives responses[min(n, size) - 1].

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sylo/error.hpp"
#include "sylo/llm/chat.hpp"

namespace sylo::llm {

struct StubKey {
  std::string template_name;
  std::string prompt_hash;
  auto operator<=>(const StubKey&) const = default;
};

inline StubKey stub_key(const ChatRequest& r) { return {r.template_name, hex64(fnv1a64(r.prompt_text()))}; }

class StubBackend final : public ChatBackend {
 public:
  StubBackend() = default;

  void script(StubKey key, std::vector<std::string> responses) {
    std::lock_guard lock(mu_);
    table_[std::move(key)] = std::move(responses);
  }

  void script(const std::string& template_name, const std::string& prompt, std::vector<std::string> responses) {
    script(StubKey{template_name, hex64(fnv1a64(prompt))}, std::move(responses));
  }

  /// Stores `response` as the reply to the attempt carried by `request`.
  void record(const ChatRequest& request, std::string response) {
    std::lock_guard lock(mu_);
    auto& slot = table_[stub_key(request)];
    auto idx = static_cast<std::size_t>(request.attempt < 1 ? 0 : request.attempt - 1);
    if (slot.size() <= idx) slot.resize(idx + 1);
    slot[idx] = std::move(response);
  }

  std::string complete(const ChatRequest& request) override {
    request.validate();
    auto key = stub_key(request);
    std::lock_guard lock(mu_);
    ++calls_[request.template_name];
    auto it = table_.find(key);
    if (it == table_.end() || it->second.empty())
      throw Error(Errc::StubMiss, "no fixture for template '" + key.template_name + "' prompt " + key.prompt_hash);
    auto idx = std::min<std::size_t>(static_cast<std::size_t>(request.attempt < 1 ? 1 : request.attempt),
                                     it->second.size()) - 1;
    return it->second[idx];
  }

  /// Number of requests served (or missed) for a template.
  std::size_t calls(const std::string& template_name) const {
    std::lock_guard lock(mu_);
    auto it = calls_.find(template_name);
    return it == calls_.end() ? 0 : it->second;
  }

  std::size_t total_calls() const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (const auto& [_, c] : calls_) n += c;
    return n;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return table_.size();
  }

  nlohmann::json to_json() const {
    std::lock_guard lock(mu_);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [k, v] : table_)
      entries.push_back({{"template", k.template_name}, {"prompt_hash", k.prompt_hash}, {"responses", v}});
    return {{"entries", std::move(entries)}};
  }

  static StubBackend from_json(const nlohmann::json& doc) {
    StubBackend stub;
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
      throw Error(Errc::SchemaMismatch, "stub fixture needs an \"entries\" array");
    for (const auto& e : doc["entries"]) {
      if (!e.is_object() || !e.contains("template") || !e.contains("responses"))
        throw Error(Errc::SchemaMismatch, "stub entry needs \"template\" and \"responses\"");
      StubKey key;
      key.template_name = e["template"].get<std::string>();
      if (e.contains("prompt_hash")) {
        key.prompt_hash = e["prompt_hash"].get<std::string>();
      } else if (e.contains("prompt")) {
        key.prompt_hash = hex64(fnv1a64(e["prompt"].get<std::string>()));
      } else {
        throw Error(Errc::SchemaMismatch, "stub entry needs \"prompt_hash\" or \"prompt\"");
      }
      stub.table_[std::move(key)] = e["responses"].get<std::vector<std::string>>();
    }
    return stub;
  }

  static std::shared_ptr<StubBackend> load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open stub fixture: " + path.string());
    auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw Error(Errc::SchemaMismatch, "stub fixture is not valid JSON: " + path.string());
    return std::make_shared<StubBackend>(from_json(doc));
  }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write stub fixture: " + path.string());
    out << to_json().dump(2) << "\n";
  }

  StubBackend(StubBackend&& o) noexcept : table_(std::move(o.table_)), calls_(std::move(o.calls_)) {}

 private:
  mutable std::mutex mu_;
  std::map<StubKey, std::vector<std::string>> table_;
  std::map<std::string, std::size_t> calls_;
};

/// Forwards to `inner` and records every reply into a StubBackend.
class RecordingBackend final : public ChatBackend {
 public:
  explicit RecordingBackend(std::shared_ptr<ChatBackend> inner)
      : inner_(std::move(inner)), recorded_(std::make_shared<StubBackend>()) {}

  std::string complete(const ChatRequest& request) override {
    auto reply = inner_->complete(request);
    recorded_->record(request, reply);
    return reply;
  }

  std::shared_ptr<StubBackend> recorded() const { return recorded_; }

 private:
  std::shared_ptr<ChatBackend> inner_;
  std::shared_ptr<StubBackend> recorded_;
};

}  // namespace sylo::llm
