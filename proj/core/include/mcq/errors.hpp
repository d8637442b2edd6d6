#pragma once

#include <stdexcept>
#include <string>

namespace mcq {

// Thrown when sum_i (1 - e^{-lambda_i T}) = C has no finite root, i.e. the
// cache can hold every file that is ever requested.
class no_finite_root_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration is syntactically valid but outside what a scheme supports
// (e.g. non-integer coded-caching parameter t for UPO-M).
class unsupported_configuration_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fixed-point iteration failed to converge; message carries the iterate trace.
class nonconvergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mcq
