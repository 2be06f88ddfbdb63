#include "aptscatter/oracle.hpp"

#include <cmath>
#include <sstream>

#include "aptscatter/errors.hpp"
#include "aptscatter/lattice.hpp"

namespace aptscatter {

std::string_view to_string(SweepMethod method) {
  return method == SweepMethod::Analytic ? "analytic" : "oracle";
}

OneWayCoefficients solve_scattering(const ScatteringProblem& problem) {
  const ComplexMatrix& hc = problem.center;
  const int n = static_cast<int>(hc.rows());
  if (n < 1 || hc.cols() != n) throw StructuralError("scattering center must be a non-empty square matrix");
  if (!(problem.J > 0.0)) throw ValidationError("lead coupling J must be positive");
  const int in = problem.attach_in;
  const int out = problem.attach_out < 0 ? n - 1 : problem.attach_out;
  if (in < 0 || in >= n || out < 0 || out >= n) throw StructuralError("attachment site outside center");
  if (in == out && n != 1) throw StructuralError("attach_in and attach_out coincide for n > 1");

  const double k = problem.k;
  const double E = dispersion(k, problem.J);
  const double J = problem.J;
  const Complex eik = std::exp(kI * k);
  const Complex emik = std::exp(-kI * k);
  const Complex e2ik = eik * eik;
  const Complex em2ik = emik * emik;

  const bool from_left = problem.direction == Incidence::FromLeft;
  const int src = from_left ? in : out;
  const int dst = from_left ? out : in;

  // Unknowns: x(0) = r, x(1..n) = psi_c, x(n+1) = t.
  const int dim = n + 2;
  const int r_col = 0;
  const int t_col = n + 1;
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  ComplexVector b = ComplexVector::Zero(dim);

  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) a(i, 1 + m) = hc(i, m);
    a(i, 1 + i) -= E;
  }
  // Neighbouring lead sites: incoming side psi = e^{-2ik} + r e^{2ik}, outgoing side t e^{2ik}.
  a(src, r_col) += -J * e2ik;
  b(src) += J * em2ik;
  a(dst, t_col) += -J * e2ik;

  // Lead equations at the first lead sites fix the attached center amplitudes.
  a(n, 1 + src) = 1.0;
  a(n, r_col) = -eik;
  b(n) = emik;
  a(n + 1, 1 + dst) = 1.0;
  a(n + 1, t_col) = -eik;

  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond >= kOracleRcondThreshold)) {
    std::ostringstream os;
    os << "spectral singularity: boundary-matched system has rcond = " << rcond << " at k = " << k;
    throw SpectralSingularity(os.str(), CenterSpec{}, k);
  }
  const ComplexVector x = lu.solve(b);
  return OneWayCoefficients{x(r_col), x(t_col)};
}

ScatteringCoefficients solve_both(const ComplexMatrix& center, double J, double k) {
  ScatteringProblem problem{center, J, 0, -1, k, Incidence::FromLeft};
  const OneWayCoefficients left = solve_scattering(problem);
  problem.direction = Incidence::FromRight;
  const OneWayCoefficients right = solve_scattering(problem);

  ScatteringCoefficients c;
  c.k = k;
  c.E = dispersion(k, J);
  c.r_left = left.r;
  c.t_left = left.t;
  c.r_right = right.r;
  c.t_right = right.t;
  return c;
}

std::vector<SweepRow> sweep(const CenterSpec& base, std::span<const double> k_grid,
                            std::span<const double> V_grid, SweepMethod method, double rel_tol) {
  std::vector<SweepRow> rows;
  rows.reserve(k_grid.size() * V_grid.size());
  for (double k : k_grid) {
    for (double V : V_grid) {
      SweepRow row;
      row.k = k;
      row.V = V;
      CenterSpec spec = base;
      spec.V = V;
      try {
        if (method == SweepMethod::Analytic) {
          row.coeffs = coefficients(spec, k, rel_tol);
        } else {
          row.coeffs = solve_both(build_center(spec), spec.J, k);
        }
      } catch (const SpectralSingularity& e) {
        row.singular = true;
        row.note = e.what();
      } catch (const DomainError& e) {
        row.singular = true;
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> sweep(const ComplexMatrix& center, double J, std::span<const double> k_grid) {
  std::vector<SweepRow> rows;
  rows.reserve(k_grid.size());
  for (double k : k_grid) {
    SweepRow row;
    row.k = k;
    try {
      row.coeffs = solve_both(center, J, k);
    } catch (const SpectralSingularity& e) {
      row.singular = true;
      row.note = e.what();
    } catch (const DomainError& e) {
      row.singular = true;
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace aptscatter
