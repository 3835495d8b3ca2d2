#pragma once

// Chat-completion requests and the backend interface that serves them.

#include <cstdint>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sylo/error.hpp"

namespace sylo::llm {

enum class Role { System, User, Assistant };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

struct Message {
  Role role = Role::User;
  std::string content;
};

inline constexpr int kDefaultContextTokens = 16384;

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_context_tokens = kDefaultContextTokens;

  // Routing metadata that never goes on the wire. Offline backends key
  // scripted responses on the template and the attempt number.
  std::string template_name;
  int attempt = 1;

  void validate() const {
    if (messages.empty()) throw Error(Errc::InvalidInput, "chat request has no messages");
    if (!(temperature >= 0.0 && temperature <= 2.0))
      throw Error(Errc::InvalidInput, "temperature must lie in [0, 2]");
    if (max_context_tokens < 1) throw Error(Errc::InvalidInput, "max_context_tokens must be positive");
  }

  /// All message contents joined, the text a stub fixture is keyed on.
  std::string prompt_text() const {
    std::string out;
    for (const auto& m : messages) {
      if (!out.empty()) out += "\n";
      out += m.content;
    }
    return out;
  }

  /// OpenAI-compatible request body.
  nlohmann::json to_wire() const {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& m : messages)
      msgs.push_back({{"role", std::string(role_name(m.role))}, {"content", m.content}});
    return {{"model", model}, {"messages", std::move(msgs)}, {"temperature", temperature}};
  }
};

inline ChatRequest user_request(std::string model, std::string prompt, double temperature,
                                std::string template_name = {}, int attempt = 1) {
  ChatRequest r;
  r.model = std::move(model);
  r.messages.push_back(Message{Role::User, std::move(prompt)});
  r.temperature = temperature;
  r.template_name = std::move(template_name);
  r.attempt = attempt;
  return r;
}

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  /// Assistant message content for `request`. Implementations are shared
  /// across worker threads and must be thread-safe.
  virtual std::string complete(const ChatRequest& request) = 0;
};

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return out;
}

/// Caps the number of requests in flight on a shared backend.
class BoundedBackend final : public ChatBackend {
 public:
  static constexpr int kDefaultLimit = 4;

  explicit BoundedBackend(std::shared_ptr<ChatBackend> inner, int limit = kDefaultLimit)
      : inner_(std::move(inner)), slots_(limit < 1 ? 1 : limit) {}

  std::string complete(const ChatRequest& request) override {
    slots_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{slots_};
    return inner_->complete(request);
  }

 private:
  std::shared_ptr<ChatBackend> inner_;
  std::counting_semaphore<> slots_;
};

}  // namespace sylo::llm
