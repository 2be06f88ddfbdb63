#pragma once

#include <optional>

#include "aptscatter/types.hpp"

namespace aptscatter {

/// Reflection and transmission amplitudes at wave vector k.
///
/// R and T refer to left incidence; for the four-site centers |r_left| = |r_right|
/// and t_left = t_right, so they hold for either side.
struct ScatteringCoefficients {
  double k = 0.0;
  double E = 0.0;
  Complex r_left;
  Complex r_right;
  Complex t_left;
  Complex t_right;

  double R() const { return std::norm(r_left); }
  double T() const { return std::norm(t_left); }
};

/// Relative singularity tolerance: |D| <= tol * (J^2 + kappa^2 + V^2) is singular.
inline constexpr double kSingularityTolerance = 1e-9;

/// E = -2J cos k for 0 < k < pi. Band edges are rejected with DomainError.
double dispersion(double k, double J);

/// Common denominator of the closed-form coefficients.
Complex coefficient_denominator(const CenterSpec& spec, double k);

/// Closed-form r_L, r_R, t for either center kind. Throws SpectralSingularity
/// when |D| falls below the relative tolerance, DomainError for k outside (0, pi).
ScatteringCoefficients coefficients(const CenterSpec& spec, double k,
                                    double rel_tol = kSingularityTolerance);

/// R - T - 1 for the imaginary kind, R + T - 1 for the real kind.
double conservation_residual(CouplingKind kind, const ScatteringCoefficients& c);

struct SingularityPoint {
  double kappa;
  double k;
};

/// Location of the spectral singularity for fixed (J, V): kappa = sqrt(V^2 + J^2)
/// at k = pi/2 for the imaginary kind; none for the real kind.
std::optional<SingularityPoint> singularity_locus(CouplingKind kind, double J, double V);

/// Whether spec lies on the singularity locus within rel_tol * (J^2 + kappa^2 + V^2).
bool at_singularity(const CenterSpec& spec, double rel_tol = kSingularityTolerance);

enum class SingularBranch { Plus, Minus };

/// Plane-wave content of the singular scattering state: amplitude 1 in the left
/// lead at wave vector -+pi/2 and amplitude (iV -+ J)/kappa in the right lead at
/// +-pi/2. Plus is self-sustained emission, Minus is coherent absorption.
struct SingularWavefunction {
  Complex left_amplitude;
  double left_k;
  Complex right_amplitude;
  double right_k;
};

/// Throws DomainError for the real kind or a spec off the singularity locus.
SingularWavefunction singular_wavefunction(const CenterSpec& spec, SingularBranch branch,
                                           double rel_tol = kSingularityTolerance);

}  // namespace aptscatter
