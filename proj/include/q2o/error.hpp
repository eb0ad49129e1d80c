#pragma once

#include <stdexcept>
#include <string>

namespace q2o {

enum class ErrorKind {
  MalformedInput,
  DuplicateAlias,
  UnknownAlias,
  BadSelectivity,
  EmptyGraph,
  EmptySubset,
  NotAPermutation,
  TooSmall,
  TooLarge,
  LengthMismatch,
  ConfigError,
  EndpointUnavailable,
  ReplayMissing,
  TooFewRelations,
  Malformed,
  EmptySql,
  NoSuchTable,
  ConnectionError,
  SqlError,
  Timeout,
  ParseError,
  ZeroComponent,
  EmptyInput,
  MalformedCsv,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a typed error condition alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace q2o
