#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace betacorm {

// Error taxonomy mirrored by the CLI exit codes: usage -> 1, data -> 2, numeric -> 3.
enum class ErrorKind { usage, data, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Input validation reports every violated invariant, not just the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(ErrorKind::data, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& violations) {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out.empty() ? std::string("validation failed") : out;
  }

  std::vector<std::string> violations_;
};

}  // namespace betacorm
