#pragma once

// ChatBackend speaking the OpenAI-compatible chat-completions protocol.

#include <chrono>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "sylo/error.hpp"
#include "sylo/llm/chat.hpp"

namespace sylo::llm {

struct HttpConfig {
  std::string base_url;  // e.g. http://localhost:8000/v1
  std::string api_key;   // optional bearer token
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  std::chrono::milliseconds connect_timeout{std::chrono::seconds(10)};
};

namespace detail {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

inline SplitUrl split_base_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(Errc::InvalidInput, "base URL lacks a scheme: " + url);
  auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw Error(Errc::InvalidInput, "unsupported URL scheme: " + scheme);
  auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = url.substr(0, path_start);
  out.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace detail

class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpConfig cfg) : cfg_(std::move(cfg)), url_(detail::split_base_url(cfg_.base_url)) {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url_.origin.rfind("https://", 0) == 0)
      throw Error(Errc::InvalidInput, "https endpoints need a build with OpenSSL support");
#endif
  }

  std::string complete(const ChatRequest& request) override {
    request.validate();
    httplib::Client client(url_.origin);
    auto secs = [](std::chrono::milliseconds ms) {
      return std::pair<time_t, time_t>(ms.count() / 1000, (ms.count() % 1000) * 1000);
    };
    auto [cs, cus] = secs(cfg_.connect_timeout);
    auto [rs, rus] = secs(cfg_.timeout);
    client.set_connection_timeout(cs, cus);
    client.set_read_timeout(rs, rus);
    client.set_write_timeout(rs, rus);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    auto res = client.Post(url_.prefix + "/chat/completions", headers, request.to_wire().dump(), "application/json");
    if (!res) {
      auto err = res.error();
      if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout)
        throw Error(Errc::Timeout, "chat request timed out or dropped: " + httplib::to_string(err));
      throw Error(Errc::NetworkError, "chat request failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300)
      throw Error(Errc::HttpStatusError, "chat endpoint returned HTTP " + std::to_string(res->status));

    auto body = nlohmann::json::parse(res->body, nullptr, false);
    if (body.is_discarded()) throw Error(Errc::MalformedResponse, "response body is not JSON");
    try {
      const auto& content = body.at("choices").at(0).at("message").at("content");
      if (!content.is_string()) throw Error(Errc::MalformedResponse, "message content is not a string");
      return content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedResponse, std::string("missing choices[0].message.content: ") + e.what());
    }
  }

 private:
  HttpConfig cfg_;
  detail::SplitUrl url_;
};

}  // namespace sylo::llm
