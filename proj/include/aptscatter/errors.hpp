#pragma once

#include <stdexcept>
#include <string>

#include "aptscatter/types.hpp"

namespace aptscatter {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or layout mismatch between matrices, states and lattices.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (band edge, off-locus spec).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// User-supplied parameters that fail validation (packet does not fit, negative J, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Matrix whose square is not ±identity handed to pt_parity.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

/// The scattering problem has no finite solution: the denominator of the
/// coefficients vanishes at this (spec, k).
class SpectralSingularity : public Error {
 public:
  SpectralSingularity(const std::string& what, const CenterSpec& spec, double k)
      : Error(what), spec_(spec), k_(k) {}

  const CenterSpec& spec() const noexcept { return spec_; }
  double k() const noexcept { return k_; }

 private:
  CenterSpec spec_;
  double k_;
};

}  // namespace aptscatter
