#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bnlab {

// Failure kinds surfaced by the numerical modules. The CLI prints the name
// and exits with 2, or with 1 for ConfigError.
enum class ErrorKind {
  InvalidArgument,
  NonFinite,
  TooFewZeros,
  RangeError,
  UnsupportedOrder,
  DomainError,
  DegenerateProfile,
  StructureViolation,
  Degenerate,
  Indeterminate,
  InsufficientTail,
  UnknownName,
  ConfigError,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TooFewZeros: return "TooFewZeros";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateProfile: return "DegenerateProfile";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::InsufficientTail: return "InsufficientTail";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace bnlab
