#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sylo {

enum class Errc {
  // formula parsing
  EmptyInput,
  SyntaxError,
  UnboundVariable,
  AmbiguousScope,
  UnsupportedFeature,
  NameClash,
  // prover
  Unsupported,
  SpawnError,
  Timeout,
  UnparseableProverOutput,
  // llm gateway
  NetworkError,
  HttpStatusError,
  MalformedResponse,
  NoBoxedContent,
  NoJsonFound,
  SchemaMismatch,
  NotABoolean,
  IndexOutOfRange,
  ParseExhausted,
  MissingSlot,
  StubMiss,
  // evaluation and io
  IdMismatch,
  MissingLabels,
  EmptyGroup,
  InsufficientPool,
  InvalidInput,
  Io,
};

constexpr std::string_view errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnboundVariable: return "UnboundVariable";
    case Errc::AmbiguousScope: return "AmbiguousScope";
    case Errc::UnsupportedFeature: return "UnsupportedFeature";
    case Errc::NameClash: return "NameClash";
    case Errc::Unsupported: return "Unsupported";
    case Errc::SpawnError: return "SpawnError";
    case Errc::Timeout: return "Timeout";
    case Errc::UnparseableProverOutput: return "UnparseableProverOutput";
    case Errc::NetworkError: return "NetworkError";
    case Errc::HttpStatusError: return "HttpStatusError";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::NoBoxedContent: return "NoBoxedContent";
    case Errc::NoJsonFound: return "NoJsonFound";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::NotABoolean: return "NotABoolean";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ParseExhausted: return "ParseExhausted";
    case Errc::MissingSlot: return "MissingSlot";
    case Errc::StubMiss: return "StubMiss";
    case Errc::IdMismatch: return "IdMismatch";
    case Errc::MissingLabels: return "MissingLabels";
    case Errc::EmptyGroup: return "EmptyGroup";
    case Errc::InsufficientPool: return "InsufficientPool";
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Formula parse failure with the byte offset into the (unwrapped) input.
class ParseError : public Error {
 public:
  ParseError(Errc code, std::size_t position, std::vector<std::string> expected,
             const std::string& detail)
      : Error(code, format(position, expected, detail)),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(std::size_t pos, const std::vector<std::string>& expected,
                            const std::string& detail) {
    std::string msg = detail + " at position " + std::to_string(pos);
    if (!expected.empty()) {
      msg += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) msg += ", ";
        msg += expected[i];
      }
      msg += ")";
    }
    return msg;
  }

  std::size_t position_;
  std::vector<std::string> expected_;
};

}  // namespace sylo
