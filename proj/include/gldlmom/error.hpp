#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gldlmom {

enum class ErrorKind {
  InvalidParams,
  DomainError,
  NoConvergence,
  LMomentsUndefined,
  Overflow,
  InsufficientData,
  UnknownRegion,
  AssemblyFailure,
  EmptyContour,
  DegenerateScale,
  NoFeasibleStart,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Failures of a numerical procedure, as opposed to bad input.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::NoConvergence ||
           kind_ == ErrorKind::AssemblyFailure ||
           kind_ == ErrorKind::EmptyContour ||
           kind_ == ErrorKind::DegenerateScale;
  }

 private:
  ErrorKind kind_;
};

}  // namespace gldlmom
