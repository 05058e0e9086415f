#pragma once

#include <stdexcept>
#include <string>

namespace warpres {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMetric : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct DerivativeUnavailable : Error {
  using Error::Error;
};
struct NonPositiveWarp : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct FrameMismatch : Error {
  using Error::Error;
};
struct NotElliptic : Error {
  using Error::Error;
};
struct TruncationTooDeep : Error {
  using Error::Error;
};
struct ImaginaryResidue : Error {
  using Error::Error;
};
struct OddTotalDimension : Error {
  using Error::Error;
};
struct QuadratureUnconverged : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

// Expression language errors.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};
struct UnknownFunction : Error {
  using Error::Error;
};
struct UnboundVariable : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NonDifferentiable : Error {
  using Error::Error;
};

}  // namespace warpres
