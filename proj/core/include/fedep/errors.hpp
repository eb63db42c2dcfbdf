#pragma once

#include <stdexcept>
#include <string>

namespace fedep {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or mismatched vector dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Moment/sampling operation requested on a Gaussian with nonpositive
/// precision entries.
class NotProperError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given model kind.
class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

/// Local inference produced a non-finite loss or iterate.
class InferenceDivergedError : public Error {
 public:
  InferenceDivergedError(const std::string& what, int epoch)
      : Error(what + " (epoch " + std::to_string(epoch) + ")"),
        epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

/// Tilted precision matrix is not positive definite.
class SingularTiltedError : public Error {
 public:
  using Error::Error;
};

/// Config parse or validation failure. Message carries line/field context.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedep
