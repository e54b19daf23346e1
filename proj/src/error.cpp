#include "xolap/error.hpp"

namespace xolap {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IntegrityError: return "IntegrityError";
    case ErrorCode::UnknownFactClass: return "UnknownFactClass";
    case ErrorCode::UnknownDimension: return "UnknownDimension";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::UnknownMeasure: return "UnknownMeasure";
    case ErrorCode::DuplicateAxis: return "DuplicateAxis";
    case ErrorCode::DuplicateMeasure: return "DuplicateMeasure";
    case ErrorCode::EmptyMemberSet: return "EmptyMemberSet";
    case ErrorCode::NotAnAxis: return "NotAnAxis";
    case ErrorCode::NotCoarser: return "NotCoarser";
    case ErrorCode::NotFiner: return "NotFiner";
    case ErrorCode::PulledAxis: return "PulledAxis";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::NonNumericAttribute: return "NonNumericAttribute";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::KeyError: return "KeyError";
    case ErrorCode::EmptyGroupError: return "EmptyGroupError";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::InvalidPipeline: return "InvalidPipeline";
    case ErrorCode::UnsupportedInDialect: return "UnsupportedInDialect";
    case ErrorCode::ProcessorUnavailable: return "ProcessorUnavailable";
    case ErrorCode::ProcessorFailure: return "ProcessorFailure";
    case ErrorCode::OutputParseError: return "OutputParseError";
    case ErrorCode::ArithmeticOverflow: return "ArithmeticOverflow";
  }
  return "Unknown";
}

}  // namespace xolap
