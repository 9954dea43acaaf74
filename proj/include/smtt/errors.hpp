#pragma once

#include <stdexcept>
#include <string>

namespace smtt {

// Base class for every error raised by the library. Subclasses identify the
// category so callers (and the CLI) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed (non-finite values, unparseable text).
class InputError : public Error {
 public:
  using Error::Error;
};

// Matrix or vector dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// An iterative solver produced a non-finite objective.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iteration)
      : Error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

// A box lies (partly) outside the image it refers to.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but carries no usable signal (e.g. constant patch).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Filesystem or image codec failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smtt
