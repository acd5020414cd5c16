#pragma once

#include <stdexcept>
#include <string>

namespace htmab {

// Base class for every failure raised by the library. Precondition violations
// on plain arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DegenerateProbability : public Error {
 public:
  using Error::Error;
};

class RootBracketFailure : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class DegenerateAlpha : public Error {
 public:
  using Error::Error;
};

class ProjectionFailure : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string field, int line, const std::string& message)
      : Error(format(field, line, message)), field_(std::move(field)), line_(line) {}

  const std::string& field() const { return field_; }
  // 1-based line in the config file, or 0 when unknown.
  int line() const { return line_; }

 private:
  static std::string format(const std::string& field, int line, const std::string& message) {
    std::string out = "config error";
    if (line > 0) out += " at line " + std::to_string(line);
    if (!field.empty()) out += " (" + field + ")";
    return out + ": " + message;
  }

  std::string field_;
  int line_;
};

}  // namespace htmab
