#ifndef TOPPUSH_ERRORS_HPP
#define TOPPUSH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toppush {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Feature/weight dimensions disagree. Message carries both d values.
struct DimensionMismatch : Error {
  using Error::Error;
};

// A dataset (or fold) has no positive or no negative instances.
struct EmptyClass : Error {
  using Error::Error;
};

// NaN or Inf where a finite value is required.
struct NonFiniteValue : Error {
  using Error::Error;
};

// Argument outside a function's mathematical domain (e.g. negative dual
// coordinate fed to a conjugate). Never clamped: it signals a bug upstream.
struct DomainViolation : Error {
  using Error::Error;
};

// Malformed input file; message names the 1-based line.
struct ParseError : Error {
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

struct UnknownLabel : Error {
  using Error::Error;
};

// Structural invariant broken on an in-memory object (unsorted indices,
// negative fraction, ...).
struct InvalidInput : Error {
  using Error::Error;
};

}  // namespace toppush

#endif  // TOPPUSH_ERRORS_HPP
