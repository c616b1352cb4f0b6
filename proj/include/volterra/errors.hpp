#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace volterra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside the set where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument or constructed object violates a documented precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input carries no usable signal (e.g. a forcing that is identically zero).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A value left the representable range. Carries the first offending index.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, std::int64_t index)
      : Error(what + " (index " + std::to_string(index) + ")"), index_(index) {}

  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

/// Configuration text failed validation. Holds every problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += "\n";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace volterra
