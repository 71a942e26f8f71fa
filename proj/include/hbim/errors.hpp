#pragma once

#include <stdexcept>
#include <string>

namespace hbim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error { using Error::Error; };
class AxiomError : public Error { using Error::Error; };
class SizeLimitError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class ConvergenceError : public Error { using Error::Error; };

/// A cross-check between two independent computations diverged. Signals a bug
/// or corrupted input rather than a false theorem.
class InternalError : public Error { using Error::Error; };

}  // namespace hbim
