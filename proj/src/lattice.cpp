#include "aptscatter/lattice.hpp"

#include <cmath>

#include "aptscatter/errors.hpp"

namespace aptscatter {

std::string_view to_string(CouplingKind kind) {
  return kind == CouplingKind::Imaginary ? "imaginary" : "real";
}

std::string_view to_string(ParityKind kind) {
  return kind == ParityKind::Even ? "even" : "odd";
}

void CenterSpec::validate() const {
  if (!std::isfinite(J) || J <= 0.0) {
    throw ValidationError("CenterSpec: J must be positive, got " + std::to_string(J));
  }
  if (!std::isfinite(kappa) || kappa < 0.0) {
    throw ValidationError("CenterSpec: kappa must be non-negative, got " + std::to_string(kappa));
  }
  if (!std::isfinite(V)) {
    throw ValidationError("CenterSpec: V must be finite");
  }
}

LatticeLayout LatticeLayout::symmetric(int n_sites) {
  const int leads = n_sites - kCenterSites;
  if (leads <= 0 || leads % 2 != 0) {
    throw StructuralError("symmetric layout needs n_sites - 4 positive and even, got n_sites = " +
                          std::to_string(n_sites));
  }
  return LatticeLayout{leads / 2, leads / 2};
}

LatticeLayout LatticeLayout::from_sites(int n_sites, int left_lead) {
  LatticeLayout layout{left_lead, n_sites - kCenterSites - left_lead};
  layout.validate();
  return layout;
}

void LatticeLayout::validate() const {
  if (left_lead <= 0 || right_lead <= 0) {
    throw StructuralError("lattice layout: lead lengths must be positive (left = " +
                          std::to_string(left_lead) + ", right = " + std::to_string(right_lead) +
                          ")");
  }
}

int LatticeLayout::lead_label(int i) const {
  if (is_left_lead(i)) return i - left_lead;
  if (is_right_lead(i)) return i - (left_lead + kCenterSites) + 1;
  if (is_center(i)) return 0;
  throw StructuralError("site index " + std::to_string(i) + " outside lattice");
}

int LatticeLayout::index_of_label(int label) const {
  if (label < 0 && -label <= left_lead) return left_lead + label;
  if (label > 0 && label <= right_lead) return left_lead + kCenterSites + label - 1;
  throw StructuralError("lead label " + std::to_string(label) + " outside lattice");
}

std::string LatticeLayout::site_name(int i) const {
  if (is_center(i)) return "C" + std::to_string(i - left_lead + 1);
  const int label = lead_label(i);
  return label < 0 ? "L" + std::to_string(label) : "R" + std::to_string(label);
}

ComplexMatrix build_center(const CenterSpec& spec) {
  spec.validate();
  const Complex iJ = kI * spec.J;
  const Complex central = spec.kind == CouplingKind::Imaginary ? kI * spec.kappa : Complex(spec.kappa);

  ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  h(0, 1) = h(1, 0) = iJ;
  h(2, 3) = h(3, 2) = iJ;
  h(1, 2) = h(2, 1) = central;
  h(1, 1) = spec.V;
  h(2, 2) = -spec.V;
  return h;
}

ComplexMatrix build_full_lattice(const ComplexMatrix& center, double J, const LatticeLayout& layout) {
  layout.validate();
  if (center.rows() != LatticeLayout::kCenterSites || center.cols() != LatticeLayout::kCenterSites) {
    throw StructuralError("center block must be 4x4");
  }
  const int n = layout.n_sites();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    h(i, i + 1) = h(i + 1, i) = -J;
  }
  h.block(layout.center_offset(), layout.center_offset(), 4, 4) = center;
  return h;
}

ComplexMatrix build_full_lattice(const CenterSpec& spec, const LatticeLayout& layout) {
  return build_full_lattice(build_center(spec), spec.J, layout);
}

ComplexMatrix parity_operator(ParityKind kind) {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  const double lower = kind == ParityKind::Even ? 1.0 : -1.0;
  p(0, 3) = 1.0;
  p(1, 2) = 1.0;
  p(2, 1) = lower;
  p(3, 0) = lower;
  return p;
}

double anti_pt_residual(const ComplexMatrix& H, const ComplexMatrix& P) {
  if (H.rows() != H.cols() || P.rows() != P.cols() || H.rows() != P.rows()) {
    throw StructuralError("check_anti_pt: H and P must be square and of equal dimension");
  }
  Eigen::FullPivLU<ComplexMatrix> lu(P);
  if (!lu.isInvertible()) {
    throw StructuralError("check_anti_pt: parity operator is singular");
  }
  const ComplexMatrix transformed = P * H.conjugate() * lu.inverse();
  return (transformed + H).cwiseAbs().maxCoeff();
}

bool check_anti_pt(const ComplexMatrix& H, const ComplexMatrix& P, double tol) {
  return anti_pt_residual(H, P) <= tol;
}

int pt_parity(const ComplexMatrix& P, double tol) {
  if (P.rows() != P.cols()) throw StructuralError("pt_parity: P must be square");
  const ComplexMatrix square = P * P.conjugate();
  const auto identity = ComplexMatrix::Identity(P.rows(), P.cols());
  if ((square - identity).cwiseAbs().maxCoeff() <= tol) return 1;
  if ((square + identity).cwiseAbs().maxCoeff() <= tol) return -1;
  throw ClassificationError("pt_parity: (PT)^2 is not proportional to +-I");
}

}  // namespace aptscatter
