#pragma once

#include <stdexcept>
#include <string>

namespace bswap {

/// Base of every error the library raises. Subclasses map onto the CLI exit
/// codes (config 2, calibration 3, estimation 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Device file or experiment configuration rejected.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A root search or calibration loop could not meet its target.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// A closed-form coefficient was evaluated too close to one of its poles.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Perturbation theory hit a (near-)degenerate coupled pair.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Tomographic estimation failed (rank deficiency, optimizer did not converge).
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A fitted signal carried no usable oscillation.
class NoOscillationError : public Error {
 public:
  using Error::Error;
};

}  // namespace bswap
