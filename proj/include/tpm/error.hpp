#pragma once

#include <stdexcept>
#include <string>

namespace tpm {

// Runtime failure inside the pipeline (bad input data, solver failure, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration that fails validation before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tpm
