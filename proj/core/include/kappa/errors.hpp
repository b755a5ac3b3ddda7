#pragma once

#include <stdexcept>
#include <string>

namespace kappa {

// Root of the library error hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameter or malformed configuration (kappa <= 0, odd grid cells, ...).
struct ConfigError : Error {
  using Error::Error;
};

// A spectral operation would push support past the grid's v-box.
struct SupportOverflow : Error {
  using Error::Error;
};

// Strict-mode interpolation read outside the beta-box.
struct InterpolationOutOfRange : Error {
  using Error::Error;
};

// Point evaluation requested outside the represented domain.
struct EvalOutOfRange : Error {
  using Error::Error;
};

// Wedge product exceeding the top degree of the calculus (strict mode).
struct DegreeOverflow : Error {
  using Error::Error;
};

// A form of unexpected degree was passed where a fixed degree is required.
struct WrongDegree : Error {
  using Error::Error;
};

// Unknown symmetry-operator name in a composed operator expression.
struct UnknownOperator : Error {
  using Error::Error;
};

// Malformed grid container file.
struct FileFormatError : Error {
  using Error::Error;
};

// Script diagnostics carry a 1-based source location.
struct SourceLocation {
  int line = 0;
  int col = 0;
};

struct SyntaxError : Error {
  SourceLocation where;
  SyntaxError(const std::string& msg, SourceLocation loc)
      : Error(msg + " (line " + std::to_string(loc.line) + ", col " +
              std::to_string(loc.col) + ")"),
        where(loc) {}
};

struct TypeError : Error {
  SourceLocation where;
  TypeError(const std::string& msg, SourceLocation loc)
      : Error(msg + " (line " + std::to_string(loc.line) + ", col " +
              std::to_string(loc.col) + ")"),
        where(loc) {}
};

struct UnknownName : Error {
  SourceLocation where;
  UnknownName(const std::string& msg, SourceLocation loc)
      : Error(msg + " (line " + std::to_string(loc.line) + ", col " +
              std::to_string(loc.col) + ")"),
        where(loc) {}
};

}  // namespace kappa
