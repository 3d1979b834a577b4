#include "chd/error.hpp"

namespace chd {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SchemaError: return "SchemaError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::DuplicateColumn: return "DuplicateColumn";
    case Errc::UnparseableCell: return "UnparseableCell";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::MissingTarget: return "MissingTarget";
    case Errc::NonBinaryTarget: return "NonBinaryTarget";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::EmptyColumn: return "EmptyColumn";
    case Errc::AllMissingColumn: return "AllMissingColumn";
    case Errc::TooFewValues: return "TooFewValues";
    case Errc::ZeroVarianceColumn: return "ZeroVarianceColumn";
    case Errc::MissingValue: return "MissingValue";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::KOutOfRange: return "KOutOfRange";
    case Errc::TooFewMinority: return "TooFewMinority";
    case Errc::SingleClass: return "SingleClass";
    case Errc::NonFiniteFeature: return "NonFiniteFeature";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownHyperparameter: return "UnknownHyperparameter";
    case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
    case Errc::ClassTooSmall: return "ClassTooSmall";
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ConfigError: return "ConfigError";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

ErrorCategory category(Errc code) noexcept {
  switch (code) {
    case Errc::ConfigError:
    case Errc::UnknownHyperparameter:
    case Errc::InvalidHyperparameter:
    case Errc::EmptyGrid:
    case Errc::SchemaError:
      return ErrorCategory::Config;
    case Errc::IoError:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace chd
