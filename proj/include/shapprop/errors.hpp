#pragma once

#include <stdexcept>
#include <string>

namespace shapprop {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor/layer dimensions do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed model/config/input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Layer kind not implemented by this engine.
class UnsupportedLayer : public Error {
 public:
  using Error::Error;
};

/// Model shape is valid but an algorithm cannot handle it
/// (e.g. DASP on a model whose first parametric layer is not linear).
class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

/// Bad parameter value (K out of range, etc.).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Exact Shapley enumeration refused: 2^N evaluations would be intractable.
class TooManyFeatures : public Error {
 public:
  using Error::Error;
};

/// Metric inputs of different lengths.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Metric undefined for the given input (e.g. rank correlation of a constant vector).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Benchmark configuration file is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Referenced file does not exist.
class FileNotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace shapprop
