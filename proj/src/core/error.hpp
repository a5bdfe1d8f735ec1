#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace layercache {

// Base class for every error raised by the library. The C API maps the
// concrete subclasses onto status codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or violated precondition (index out of range, negative size...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A model or experiment description that cannot be used. Carries one message
// per offending field so callers can report all of them at once.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  explicit ConfigError(const std::string& problem)
      : ConfigError(std::vector<std::string>{problem}) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

// A computation would exceed a configured resource cap (e.g. DP table memory).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace layercache
