#pragma once

#include <stdexcept>
#include <string>

namespace wbansec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contract violations in the group/cipher layer.
struct DegenerateBase : Error {
  using Error::Error;
};
struct DegenerateExponent : Error {
  using Error::Error;
};
struct PointerOutOfRange : Error {
  using Error::Error;
};
struct EmptyKey : Error {
  using Error::Error;
};

// Out-of-domain statistics arguments (probabilities, degrees of freedom).
struct DomainError : Error {
  using Error::Error;
};

// Bad parameter sets, plans or trace files.
struct ConfigError : Error {
  using Error::Error;
};
struct InvalidPlan : Error {
  using Error::Error;
};
struct MissingTrace : Error {
  using Error::Error;
};
struct MissingTraceEntry : MissingTrace {
  using MissingTrace::MissingTrace;
};
struct ScenarioMisconfigured : Error {
  using Error::Error;
};

}  // namespace wbansec
