#pragma once

#include <stdexcept>
#include <string>

namespace musicmood {

// Bad invocation or configuration. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: corpus files, model files, infeasible requests against
// the data. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

// A feature vector was produced against a different vocabulary than the one
// it is being combined with.
class FingerprintMismatch : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace musicmood
