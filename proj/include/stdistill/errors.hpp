#pragma once

#include <stdexcept>
#include <string>

namespace stdistill {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension/shape violations in tensor ops and model wiring.
struct ShapeError : Error {
  using Error::Error;
};

// Violated API preconditions (non-scalar loss, bad indices, ...).
struct ContractError : Error {
  using Error::Error;
};

// Malformed input files; messages carry row/column or line positions.
struct IngestError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Training aborted (non-finite loss).
struct TrainingDiverged : Error {
  using Error::Error;
};

}  // namespace stdistill
