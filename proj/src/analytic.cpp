#include "aptscatter/analytic.hpp"

#include <cmath>
#include <sstream>

#include "aptscatter/errors.hpp"

namespace aptscatter {

namespace {

void require_open_band(double k) {
  if (!(k > 0.0 && k < kPi)) {
    std::ostringstream os;
    os << "wave vector k = " << k << " outside the open band (0, pi)";
    throw DomainError(os.str());
  }
}

double energy_scale(const CenterSpec& spec) {
  return spec.J * spec.J + spec.kappa * spec.kappa + spec.V * spec.V;
}

}  // namespace

double dispersion(double k, double J) {
  require_open_band(k);
  return -2.0 * J * std::cos(k);
}

// The closed forms below are written term by term as they are derived; no
// algebraic simplification, so that the linear-system oracle checks them.
Complex coefficient_denominator(const CenterSpec& spec, double k) {
  const double J = spec.J;
  const double c = std::cos(k);
  const Complex eik = std::exp(kI * k);
  const Complex e2ik = std::exp(2.0 * kI * k);
  const double k2 = spec.kappa * spec.kappa;
  const double v2 = spec.V * spec.V;
  const double sign = spec.kind == CouplingKind::Imaginary ? 1.0 : -1.0;
  return 4.0 * J * J * c * c + J * J * e2ik + sign * k2 - v2 + 4.0 * J * J * c * eik;
}

ScatteringCoefficients coefficients(const CenterSpec& spec, double k, double rel_tol) {
  spec.validate();
  require_open_band(k);

  const double J = spec.J;
  const double V = spec.V;
  const double kappa = spec.kappa;
  const double s = std::sin(k);
  const double c = std::cos(k);

  const Complex d = coefficient_denominator(spec, k);
  if (std::abs(d) <= rel_tol * energy_scale(spec)) {
    std::ostringstream os;
    os << "spectral singularity: |D| = " << std::abs(d) << " at kappa = " << kappa
       << ", V = " << V << ", J = " << J << ", k = " << k;
    throw SpectralSingularity(os.str(), spec, k);
  }

  ScatteringCoefficients out;
  out.k = k;
  out.E = -2.0 * J * c;

  const Complex asym = 2.0 * kI * V * J * s;
  if (spec.kind == CouplingKind::Imaginary) {
    out.r_left = (-kappa * kappa + V * V - asym - J * J - 8.0 * J * J * c * c) / d;
    out.r_right = (-kappa * kappa + V * V + asym - J * J - 8.0 * J * J * c * c) / d;
    out.t_left = 2.0 * kappa * J * s / d;
  } else {
    out.r_left = (kappa * kappa + V * V - asym - J * J - 8.0 * J * J * c * c) / d;
    out.r_right = (kappa * kappa + V * V + asym - J * J - 8.0 * J * J * c * c) / d;
    out.t_left = -2.0 * kI * kappa * J * s / d;
  }
  out.t_right = out.t_left;
  return out;
}

double conservation_residual(CouplingKind kind, const ScatteringCoefficients& c) {
  return kind == CouplingKind::Imaginary ? c.R() - c.T() - 1.0 : c.R() + c.T() - 1.0;
}

std::optional<SingularityPoint> singularity_locus(CouplingKind kind, double J, double V) {
  if (!(J > 0.0)) throw ValidationError("singularity_locus: J must be positive");
  if (kind == CouplingKind::Real) return std::nullopt;
  return SingularityPoint{std::sqrt(V * V + J * J), kPi / 2.0};
}

bool at_singularity(const CenterSpec& spec, double rel_tol) {
  if (spec.kind != CouplingKind::Imaginary) return false;
  const double mismatch = spec.kappa * spec.kappa - spec.V * spec.V - spec.J * spec.J;
  return std::abs(mismatch) <= rel_tol * energy_scale(spec);
}

SingularWavefunction singular_wavefunction(const CenterSpec& spec, SingularBranch branch,
                                           double rel_tol) {
  spec.validate();
  if (spec.kind != CouplingKind::Imaginary) {
    throw DomainError("singular_wavefunction: the real-coupling center has no spectral singularity");
  }
  if (!at_singularity(spec, rel_tol)) {
    std::ostringstream os;
    os << "singular_wavefunction: kappa^2 - V^2 - J^2 = "
       << spec.kappa * spec.kappa - spec.V * spec.V - spec.J * spec.J << " is not zero";
    throw DomainError(os.str());
  }
  // Plus takes the upper signs: left wave at -pi/2, right amplitude (iV - J)/kappa at +pi/2.
  const double sign = branch == SingularBranch::Plus ? 1.0 : -1.0;
  SingularWavefunction wf;
  wf.left_amplitude = 1.0;
  wf.left_k = -sign * kPi / 2.0;
  wf.right_amplitude = (kI * spec.V - sign * spec.J) / spec.kappa;
  wf.right_k = sign * kPi / 2.0;
  return wf;
}

}  // namespace aptscatter
