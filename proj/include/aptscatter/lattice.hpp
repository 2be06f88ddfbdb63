#pragma once

#include <string>

#include "aptscatter/types.hpp"

namespace aptscatter {

/// Finite chain: left lead, the four center sites, right lead.
///
/// Flat index i runs over the left lead (labels -left_lead .. -1, ascending
/// toward the center), then center sites |1>_c..|4>_c, then the right lead
/// (labels 1 .. right_lead, ascending away from the center).
struct LatticeLayout {
  static constexpr int kCenterSites = 4;

  int left_lead = 48;
  int right_lead = 48;

  /// Layout with equal leads; n_sites - 4 must be even and positive.
  static LatticeLayout symmetric(int n_sites);
  /// Layout from total size and left lead length.
  static LatticeLayout from_sites(int n_sites, int left_lead);

  int n_sites() const noexcept { return left_lead + kCenterSites + right_lead; }
  /// Flat index of |1>_c.
  int center_offset() const noexcept { return left_lead; }

  bool is_left_lead(int i) const noexcept { return i >= 0 && i < left_lead; }
  bool is_center(int i) const noexcept { return i >= left_lead && i < left_lead + kCenterSites; }
  bool is_right_lead(int i) const noexcept {
    return i >= left_lead + kCenterSites && i < n_sites();
  }

  /// Lead label of flat index i (negative on the left, positive on the right).
  /// Center sites have no lead label; this returns 0 for them.
  int lead_label(int i) const;
  /// Flat index of a lead label (nonzero, within the lead).
  int index_of_label(int label) const;
  /// Human-readable site name: "L-3", "C2", "R7".
  std::string site_name(int i) const;

  /// Throws StructuralError for non-positive lead lengths.
  void validate() const;
};

/// 4x4 center Hamiltonian: iJ bonds on (1,2) and (3,4), iκ or κ on (2,3),
/// diagonal (0, V, -V, 0).
ComplexMatrix build_center(const CenterSpec& spec);

/// N x N Hamiltonian of leads + center. Lead-lead and lead-center bonds are -J.
ComplexMatrix build_full_lattice(const CenterSpec& spec, const LatticeLayout& layout);

/// Same chain with an arbitrary 4x4 center block (used for Hermitian controls).
ComplexMatrix build_full_lattice(const ComplexMatrix& center, double J, const LatticeLayout& layout);

enum class ParityKind { Even, Odd };

std::string_view to_string(ParityKind kind);

/// Even: plain spatial inversion (anti-diagonal ones).
/// Odd: generalized inversion with anti-diagonal (+1, +1, -1, -1), which
/// attaches a relative phase e^{iπ} between the two halves of the center.
ComplexMatrix parity_operator(ParityKind kind);

inline constexpr double kSymmetryTolerance = 1e-12;

/// True iff max |P conj(H) P^{-1} + H| <= tol, i.e. (PT) H (PT)^{-1} = -H
/// with T the complex conjugation.
bool check_anti_pt(const ComplexMatrix& H, const ComplexMatrix& P, double tol = kSymmetryTolerance);

/// Residual max |P conj(H) P^{-1} + H| behind check_anti_pt.
double anti_pt_residual(const ComplexMatrix& H, const ComplexMatrix& P);

/// Sign s with (PT)^2 = P conj(P) = s I. Throws ClassificationError otherwise.
int pt_parity(const ComplexMatrix& P, double tol = kSymmetryTolerance);

}  // namespace aptscatter
