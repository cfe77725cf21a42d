#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clinpred {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// User-facing input problems: bad config, schema violations, malformed CSV.
/// The CLI maps these to exit status 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownColumnError : public ValidationError {
 public:
  explicit UnknownColumnError(const std::string& name)
      : ValidationError("unknown column '" + name + "'"), column_(name) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnfittableColumnError : public Error {
 public:
  explicit UnfittableColumnError(const std::string& column)
      : Error("cannot fit column '" + column + "': every cell is missing") {}
};

class EncodeBeforeImputeError : public Error {
 public:
  EncodeBeforeImputeError(const std::string& column, std::size_t row)
      : Error("column '" + column + "' has a missing cell at row " + std::to_string(row) +
              "; impute before encoding") {}
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("feature dimension mismatch: model expects d=" + std::to_string(expected) +
              ", got d=" + std::to_string(actual)) {}
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Artifact loading failures. Each subclass is a distinct failure mode.
class ArtifactError : public Error {
 public:
  using Error::Error;
};

class VersionError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

class TruncatedArtifactError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

class ChecksumError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

class ArtifactFormatError : public ArtifactError {
 public:
  using ArtifactError::ArtifactError;
};

}  // namespace clinpred
