#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace trendrank {

/// Distinguishes errors caused by bad input from numerical conditions
/// detected during computation. The CLI maps the two kinds to different
/// exit codes (2 and 3).
enum class ErrorKind { Input, Numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Stable machine-readable identifier, e.g. "SingularS00".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error input_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Input, std::move(code), message);
}

inline Error numerical_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Numerical, std::move(code), message);
}

}  // namespace trendrank
