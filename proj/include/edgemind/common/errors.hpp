#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgemind {

// Coarse failure class; the CLI maps it onto its exit code.
enum class ErrorCategory { config, data, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

// Malformed input row. line() is 1-based and counts the header.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorCategory::data, source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class MissingPrediction : public Error {
 public:
  explicit MissingPrediction(const std::string& what) : Error(ErrorCategory::data, what) {}
};

// A fit touched rows tagged as test data.
class LeakageError : public Error {
 public:
  explicit LeakageError(const std::string& what) : Error(ErrorCategory::data, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class CholeskyError : public Error {
 public:
  explicit CholeskyError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

}  // namespace edgemind
