#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace xolap {

enum class ErrorCode {
  MalformedXml,
  SchemaViolation,
  IntegrityError,
  UnknownFactClass,
  UnknownDimension,
  UnknownLevel,
  UnknownMember,
  UnknownAttribute,
  UnknownMeasure,
  DuplicateAxis,
  DuplicateMeasure,
  EmptyMemberSet,
  NotAnAxis,
  NotCoarser,
  NotFiner,
  PulledAxis,
  InvalidPermutation,
  NotAPermutation,
  NonNumericAttribute,
  EmptySubset,
  KeyError,
  EmptyGroupError,
  InvalidSplit,
  InvalidPipeline,
  UnsupportedInDialect,
  ProcessorUnavailable,
  ProcessorFailure,
  OutputParseError,
  ArithmeticOverflow,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; `code()` is the
// machine-readable part (the API returns it verbatim).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// One finding from a validation pass: where (element path) and what.
struct Diagnostic {
  std::string location;
  std::string message;

  std::string str() const { return location + ": " + message; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

}  // namespace xolap
