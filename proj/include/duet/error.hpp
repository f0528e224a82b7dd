#pragma once

#include <stdexcept>
#include <string>

namespace duet {

// Each error family maps onto one CLI exit code (see tools/duetrank).
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ParameterError : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct ConfigMismatchError : Error {
  using Error::Error;
};

struct ContractError : Error {
  using Error::Error;
};

}  // namespace duet
