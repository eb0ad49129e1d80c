#include "q2o/error.hpp"

namespace q2o {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::DuplicateAlias: return "DuplicateAlias";
    case ErrorKind::UnknownAlias: return "UnknownAlias";
    case ErrorKind::BadSelectivity: return "BadSelectivity";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorKind::ReplayMissing: return "ReplayMissing";
    case ErrorKind::TooFewRelations: return "TooFewRelations";
    case ErrorKind::Malformed: return "Malformed";
    case ErrorKind::EmptySql: return "EmptySql";
    case ErrorKind::NoSuchTable: return "NoSuchTable";
    case ErrorKind::ConnectionError: return "ConnectionError";
    case ErrorKind::SqlError: return "SqlError";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ZeroComponent: return "ZeroComponent";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
  }
  return "Error";
}

}  // namespace q2o
