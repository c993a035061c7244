#pragma once

#include <stdexcept>
#include <string>

namespace p2pshare {

enum class ErrorCode {
  invalid_argument,
  domain,
  not_graphical,
  capacity,
  io,
  parse,
  numeric,
};

/// Base exception for all library failures. The code is what the C API
/// reports; the message is human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A degree sequence that no simple graph realizes.
class NotGraphicalError : public Error {
 public:
  NotGraphicalError(std::size_t prefix, const std::string& what)
      : Error(ErrorCode::not_graphical, what), prefix_(prefix) {}
  /// 1-based prefix length k at which the Erdos-Gallai inequality fails
  /// (0 when the sum of degrees is odd).
  std::size_t prefix() const noexcept { return prefix_; }

 private:
  std::size_t prefix_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::invalid_argument, what);
}

}  // namespace p2pshare
