#pragma once

#include <stdexcept>
#include <string>

namespace hypmin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad primitive parameters, unreadable files, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

/// Newton failure; the message carries the per-stage diagnostics.
class SolverError : public Error {
 public:
  using Error::Error;
};

class BarrierError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypmin
