#pragma once

#include <stdexcept>
#include <string>

namespace pgview {

enum class ErrorCode {
  UnknownLabel,
  MissingPrimaryKey,
  DuplicatePrimaryKey,
  NoSuchNode,
  NoSuchEdge,
  IsViewEdge,
  SyntaxError,
  UnboundVariable,
  DuplicateViewName,
  InvalidViewDefinition,
  NoSuchView,
  PlaceholderMismatch,
  UnresolvedPlaceholder,
  IncompleteMatch,
  CsvParseError,
  InsufficientEdges,
};

const char* to_string(ErrorCode code);

/// Engine-level error. `what()` carries the code name plus a detail message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pgview
