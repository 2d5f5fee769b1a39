#pragma once

#include <stdexcept>
#include <string>

namespace dirac_lpt {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Quantum numbers that do not describe a physical state.
class InvalidState : public Error {
public:
  using Error::Error;
};

/// chi^2 + W0^2 - V0^2 <= 0: the point-Coulomb bound-state formula breaks down.
class SupercriticalCoupling : public Error {
public:
  using Error::Error;
};

class NoBoundState : public Error {
public:
  using Error::Error;
};

/// E0 = +-m, so the leading logarithmic derivative R0 vanishes.
class DegenerateState : public Error {
public:
  using Error::Error;
};

/// The quantization condition does not determine the next correction.
class DegenerateQuantization : public Error {
public:
  using Error::Error;
};

class SingularInput : public Error {
public:
  using Error::Error;
};

/// The shooting solver converged on a level with the wrong node count.
class WrongState : public Error {
public:
  using Error::Error;
};

/// A residue identity or a dual-path comparison failed.
class InternalConsistency : public Error {
public:
  InternalConsistency(const std::string &what, int order, double residual)
      : Error(what), order_(order), residual_(residual) {}

  int order() const noexcept { return order_; }
  double residual() const noexcept { return residual_; }

private:
  int order_;
  double residual_;
};

/// Malformed run configuration; the message carries the JSON field path.
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace dirac_lpt
