#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glue {

enum class ErrorKind {
  SyntaxError,
  UnboundVariable,
  TypeMismatch,
  ExtensionOfNonIntension,
  DuplicateLabel,
  DuplicateAttribute,
  CyclicStructure,
  MissingAttribute,
  AtomicValueOnPath,
  UnknownLabel,
  OpenVariable,
  AtomTypeMismatch,
  TensorInConclusion,
  PredMismatch,
  UnknownEntry,
  DepthLimitReached,
  NotProvable,
  NonPatternUnification,
  InvalidStep,
  IoError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::ExtensionOfNonIntension: return "ExtensionOfNonIntension";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::DuplicateAttribute: return "DuplicateAttribute";
    case ErrorKind::CyclicStructure: return "CyclicStructure";
    case ErrorKind::MissingAttribute: return "MissingAttribute";
    case ErrorKind::AtomicValueOnPath: return "AtomicValueOnPath";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::OpenVariable: return "OpenVariable";
    case ErrorKind::AtomTypeMismatch: return "AtomTypeMismatch";
    case ErrorKind::TensorInConclusion: return "TensorInConclusion";
    case ErrorKind::PredMismatch: return "PredMismatch";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::DepthLimitReached: return "DepthLimitReached";
    case ErrorKind::NotProvable: return "NotProvable";
    case ErrorKind::NonPatternUnification: return "NonPatternUnification";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this exception type; callers
// switch on kind() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // what() without the kind prefix; used when rethrowing with more context.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace glue
