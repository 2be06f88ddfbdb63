#pragma once

#include <complex>
#include <numbers>
#include <string_view>

#include <Eigen/Dense>

namespace aptscatter {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Central coupling of the four-site center: iκ (Imaginary) or κ (Real).
enum class CouplingKind { Imaginary, Real };

std::string_view to_string(CouplingKind kind);

/// Parameters of the four-site scattering center.
///
/// All energies are in units of J; the leads and the center-lead bonds share J.
struct CenterSpec {
  CouplingKind kind = CouplingKind::Imaginary;
  double kappa = 0.0;
  double V = 0.0;
  double J = 1.0;

  /// Throws ValidationError unless J > 0 and kappa >= 0 (both finite).
  void validate() const;
};

}  // namespace aptscatter
