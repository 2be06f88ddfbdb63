#pragma once

#include <span>
#include <string>
#include <vector>

#include "aptscatter/analytic.hpp"
#include "aptscatter/types.hpp"

namespace aptscatter {

enum class Incidence { FromLeft, FromRight };

/// Arbitrary n-site center between two uniform leads of hopping -J.
///
/// attach_in / attach_out are 0-based center sites bonded to the left and
/// right lead; attach_out < 0 means the last site.
struct ScatteringProblem {
  ComplexMatrix center;
  double J = 1.0;
  int attach_in = 0;
  int attach_out = -1;
  double k = kPi / 2.0;
  Incidence direction = Incidence::FromLeft;
};

struct OneWayCoefficients {
  Complex r;
  Complex t;
  double R() const { return std::norm(r); }
  double T() const { return std::norm(t); }
};

/// Reciprocal condition number below which the boundary-matched system is singular.
inline constexpr double kOracleRcondThreshold = 1e-12;

/// Solves the (n + 2) x (n + 2) boundary-matched system for (r, psi_c, t).
///
/// Lead amplitudes are eliminated with the plane-wave ansatz, whose phase
/// origin puts the attached center sites at psi_c(in) = e^{-ik} + r e^{ik}
/// and psi_c(out) = t e^{ik} for left incidence (mirrored for the right).
/// Throws SpectralSingularity for a numerically singular system and
/// StructuralError for a malformed center.
OneWayCoefficients solve_scattering(const ScatteringProblem& problem);

/// Both incidences for one center. R and T of the result refer to the left.
ScatteringCoefficients solve_both(const ComplexMatrix& center, double J, double k);

enum class SweepMethod { Analytic, Oracle };

std::string_view to_string(SweepMethod method);

struct SweepRow {
  double k = 0.0;
  double V = 0.0;
  bool singular = false;
  ScatteringCoefficients coeffs;  ///< meaningful only when !singular
  std::string note;               ///< error text for flagged rows
};

/// k-major table over (k, V); singular points are flagged rather than thrown.
std::vector<SweepRow> sweep(const CenterSpec& base, std::span<const double> k_grid,
                            std::span<const double> V_grid, SweepMethod method = SweepMethod::Oracle,
                            double rel_tol = kSingularityTolerance);

/// k sweep for an arbitrary center matrix (V column is 0).
std::vector<SweepRow> sweep(const ComplexMatrix& center, double J, std::span<const double> k_grid);

}  // namespace aptscatter
