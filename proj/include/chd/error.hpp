#pragma once

#include <stdexcept>
#include <string>

namespace chd {

enum class Errc {
  // schema / parsing
  SchemaError,
  MissingColumn,
  DuplicateColumn,
  UnparseableCell,
  InvalidValue,
  MissingTarget,
  NonBinaryTarget,
  // column operations
  UnknownColumn,
  EmptyColumn,
  AllMissingColumn,
  TooFewValues,
  ZeroVarianceColumn,
  MissingValue,
  LengthMismatch,
  // selection / resampling
  KOutOfRange,
  TooFewMinority,
  SingleClass,
  // models
  NonFiniteFeature,
  DimensionMismatch,
  UnknownHyperparameter,
  InvalidHyperparameter,
  // evaluation
  ClassTooSmall,
  EmptyGrid,
  InvalidArgument,
  // pipeline
  ConfigError,
  IoError,
};

const char* to_string(Errc code) noexcept;

enum class ErrorCategory { Config, Data, Io };

ErrorCategory category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  Errc code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

}  // namespace chd
