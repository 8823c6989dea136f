#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wgqed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The linear system at a parameter point is numerically degenerate.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class ZeroExcitation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

class EmptyKeepSet : public Error {
 public:
  using Error::Error;
};

class WrongQubitCount : public Error {
 public:
  using Error::Error;
};

class InvalidWaveform : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(const std::string& what, double change) : Error(what), change_(change) {}
  /// Largest probability change observed at the last refinement.
  double change() const noexcept { return change_; }

 private:
  double change_;
};

class UnknownPair : public Error {
 public:
  using Error::Error;
};

}  // namespace wgqed
