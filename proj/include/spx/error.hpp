#pragma once

#include <stdexcept>
#include <string>

namespace spx {

// Base class for all toolkit errors. Subclasses map onto CLI exit codes:
// usage/config -> 1, data -> 2, numerical -> 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad RIFF/WAVE container or otherwise malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Valid container but an encoding we do not read (e.g. ADPCM).
class UnsupportedCodecError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Dimension / length mismatch between signals or tensors.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value (bad hop, non power-of-two FFT, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Degenerate data input (zero-energy reference, silent signal, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Signal too short for the requested analysis.
class TooShortError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered where finite values are required.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace spx
