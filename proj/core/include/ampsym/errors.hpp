#pragma once

#include <stdexcept>
#include <string>

namespace ampsym {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible matrix/configuration dimensions, or a label outside the
// outcome space of a stage.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a kernel's hard size limit (e.g. permanents above n = 30).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// An amplitude vector whose length is not N! for any admissible N.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A sub-experiment partition that contradicts the stage's zero structure.
class BlockError : public Error {
 public:
  using Error::Error;
};

// A sequence expression violating the series/parallel/reversal rules.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (experiment files, sequence expressions). The
// message carries a line or JSON-path diagnostic.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A domain invariant violated by otherwise well-formed data.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ampsym
