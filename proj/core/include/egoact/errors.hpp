#pragma once

#include <stdexcept>
#include <string>

namespace egoact {

// Error taxonomy mirrors the CLI exit codes: config problems, malformed
// inputs, semantic validation failures, and missing pipeline artifacts.

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, long line = -1)
      : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

class MissingArtifactError : public std::runtime_error {
public:
  explicit MissingArtifactError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace egoact
