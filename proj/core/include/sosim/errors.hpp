#pragma once

#include <stdexcept>
#include <string>

namespace sosim {

// Base for all domain errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// aggregation
struct EmptyHistory : Error {
  using Error::Error;
};
struct WeightLengthMismatch : Error {
  using Error::Error;
};
struct NonPositiveWeight : Error {
  using Error::Error;
};

// metrics
struct SequenceTooShort : Error {
  using Error::Error;
};
struct SeriesTooShort : Error {
  using Error::Error;
};
struct ConstantSeries : Error {
  using Error::Error;
};
struct ZeroVariance : Error {
  using Error::Error;
};

// agents
struct MissingPersona : Error {
  using Error::Error;
};
struct MissingHistory : Error {
  using Error::Error;
};
struct NoRatingFound : Error {
  using Error::Error;
};
struct TransportError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct AuthError : Error {
  using Error::Error;
};

// simulation / analysis
struct InsufficientPersonas : Error {
  using Error::Error;
};
struct ScenarioMismatch : Error {
  using Error::Error;
};
struct UnknownMovie : Error {
  using Error::Error;
};

// io / cli
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace sosim
