#pragma once

#include <stdexcept>
#include <string>

namespace holab {

// The kind of failure, used to map an exception onto a CLI exit code and to
// let tests assert on the failure class rather than on a message string.
enum class ErrorKind {
  cut_locus,   // principal logarithm undefined or ill conditioned
  mesh,        // mesh step bound or boundary/gluing condition violated
  validation,  // matrix fails the group membership check
  parse,       // malformed word or JSON input
  usage,       // bad command line arguments
  io,          // file could not be read or written
  numeric,     // solver failure or non-finite intermediate
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::cut_locus:
      return "cut_locus";
    case ErrorKind::mesh:
      return "mesh";
    case ErrorKind::validation:
      return "validation";
    case ErrorKind::parse:
      return "parse";
    case ErrorKind::usage:
      return "usage";
    case ErrorKind::io:
      return "io";
    case ErrorKind::numeric:
      return "numeric";
  }
  return "unknown";
}

}  // namespace holab
