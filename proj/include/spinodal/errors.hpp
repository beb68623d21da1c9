#pragma once

#include <stdexcept>
#include <string>

namespace spinodal {

/// Bad input data, malformed files, or out-of-range configuration values.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (divergence, singular system, no convergence).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinodal
