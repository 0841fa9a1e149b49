// Copyright 2026 The specinv Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace specinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid STFT / stream configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operands whose shapes (bins, frames, sources, lengths) disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The window/hop pair cannot reconstruct a signal.
class ReconstructionInfeasible : public Error {
 public:
  using Error::Error;
};

/// Bad or unsupported input data (non-finite samples, malformed files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Misuse of a stream (push after close, double close).
class StreamError : public Error {
 public:
  using Error::Error;
};

}  // namespace specinv
