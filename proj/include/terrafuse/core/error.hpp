#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace terrafuse {

enum class ErrorKind {
  InvalidArgument,
  ParseError,
  MissingProperty,
  EmptyCloud,
  IoError,
  InsufficientNeighbors,
  DegenerateNeighborhood,
  NonUnitVector,
  EmptyRoofSet,
  LengthMismatch,
  SpecError,
  CrsMismatch,
  MissingGeoreference,
  DegenerateCorrespondences,
  NoCorrespondences,
  EmptyBorder,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MissingProperty: return "MissingProperty";
    case ErrorKind::EmptyCloud: return "EmptyCloud";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InsufficientNeighbors: return "InsufficientNeighbors";
    case ErrorKind::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::EmptyRoofSet: return "EmptyRoofSet";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SpecError: return "SpecError";
    case ErrorKind::CrsMismatch: return "CrsMismatch";
    case ErrorKind::MissingGeoreference: return "MissingGeoreference";
    case ErrorKind::DegenerateCorrespondences: return "DegenerateCorrespondences";
    case ErrorKind::NoCorrespondences: return "NoCorrespondences";
    case ErrorKind::EmptyBorder: return "EmptyBorder";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace terrafuse
