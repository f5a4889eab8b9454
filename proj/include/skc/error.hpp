#pragma once

#include <stdexcept>
#include <string>

namespace skc {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A column label that is unknown or duplicated.
struct LabelError : Error {
  using Error::Error;
};

/// Row widths or column spaces that do not line up.
struct DimensionError : Error {
  using Error::Error;
};

struct ArgumentError : Error {
  using Error::Error;
};

/// The brute-force oracle was asked to enumerate more outcomes than allowed.
struct OracleScaleError : Error {
  using Error::Error;
};

/// A fractional partition outside the polytope (negative weight or a
/// terminal whose incident weights do not sum to one).
struct ConstraintViolation : Error {
  using Error::Error;
};

struct GraphError : Error {
  using Error::Error;
};

/// A tree packing or protocol that does not have the promised structure.
struct StructureError : Error {
  using Error::Error;
};

/// A checker was invoked on an input that does not satisfy its hypothesis.
struct PreconditionError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace skc
