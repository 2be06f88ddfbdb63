#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aptscatter/lattice.hpp"
#include "aptscatter/types.hpp"

namespace aptscatter {

/// Gaussian packet exp(-(j - center)^2 / 2 sigma^2) exp(i k_c j) over lead labels j.
///
/// The half width at half maximum of the intensity profile is 2 sqrt(ln 2) sigma.
/// The sign of k_c is the direction of travel.
struct WavePacket {
  int center = -25;
  double sigma = 6.0;
  double k_c = kPi / 2.0;
};

/// Amplitudes over the flat site index at a time instant.
struct LatticeState {
  ComplexVector amplitudes;
  double time = 0.0;

  double total_intensity() const { return amplitudes.squaredNorm(); }
};

struct RegionIntensities {
  double left = 0.0;
  double center = 0.0;
  double right = 0.0;
  double total() const { return left + center + right; }
};

RegionIntensities region_intensities(const LatticeState& state, const LatticeLayout& layout);

/// Support of a packet must stay this many widths away from the lead ends.
inline constexpr double kPacketSupportWidths = 3.0;

/// Unit-intensity Gaussian on the lead sites; zero on the center.
/// Throws ValidationError when the packet's 3-sigma support leaves its lead.
LatticeState gaussian_state(const WavePacket& packet, const LatticeLayout& layout);

/// e^{-i H dt} state, computed with a fresh dense matrix exponential. dt >= 0.
LatticeState evolve(const ComplexMatrix& H, const LatticeState& state, double dt);

/// Signed group velocity 2J sin k_c.
double group_velocity(double k_c, double J);

/// Eigenmodes of H with Im E above a threshold: localized self-amplifying
/// bound states of the gain/loss couplings. Continuum modes of a finite chain
/// carry Im E of order J / N, bound states of order J.
struct GrowingModes {
  std::vector<Complex> eigenvalues;
  /// Complement of the Riesz projector onto the growing modes; commutes with H.
  ComplexMatrix complement;
};

GrowingModes find_growing_modes(const ComplexMatrix& H, double growth_threshold);

/// Fixed-step propagator e^{-i H dt}, optionally confined to the invariant
/// subspace that excludes the growing bound modes.
class Propagator {
 public:
  Propagator(const ComplexMatrix& H, double dt);
  Propagator(const ComplexMatrix& H, double dt, double growth_threshold);

  double dt() const noexcept { return dt_; }
  bool filtered() const noexcept { return filtered_; }
  std::span<const Complex> removed_eigenvalues() const noexcept { return removed_; }

  /// Removes the growing-mode component (identity when unfiltered).
  LatticeState project(const LatticeState& state) const;
  LatticeState step(const LatticeState& state) const;

 private:
  double dt_;
  bool filtered_ = false;
  std::vector<Complex> removed_;
  ComplexMatrix complement_;
  ComplexMatrix step_;
};

struct SimulationOptions {
  double t_final = 25.0;
  int n_steps = 250;
  /// End-site intensity above this flags the trace (finite leads reflect).
  double leak_threshold = 1e-4;
  /// Project out eigenmodes with Im E > growth_threshold * J before and during stepping.
  bool filter_growing_modes = true;
  double growth_threshold = 0.25;
  bool record_profiles = true;
};

struct SimulationTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> profiles;  ///< |phi(t, i)|^2 per snapshot; empty if not recorded
  std::vector<double> I_left;
  std::vector<double> I_center;
  std::vector<double> I_right;
  std::vector<double> end_intensity;  ///< max of the two end-site intensities
  bool boundary_leak = false;
  double leak_time = 0.0;
  std::vector<Complex> removed_modes;
  double initial_removed_weight = 0.0;  ///< |phi - P phi|^2 of the initial state

  std::size_t size() const noexcept { return times.size(); }
  double total(std::size_t n) const { return I_left[n] + I_center[n] + I_right[n]; }
};

/// Steps an arbitrary Hamiltonian on the layout and records n_steps + 1 snapshots.
SimulationTrace simulate(const ComplexMatrix& H, const LatticeState& initial, const LatticeLayout& layout,
                         const SimulationOptions& options, double J = 1.0);

/// Scatters a single packet off the center of spec.
SimulationTrace run_scattering_sim(const CenterSpec& spec, const WavePacket& packet,
                                   const LatticeLayout& layout, const SimulationOptions& options = {});

/// Right-moving k_c = pi/2 packet that probes self-sustained emission.
LatticeState emission_initial_state(const WavePacket& packet, const LatticeLayout& layout);

/// Two counter-propagating packets at +-N_c with the coherent-absorption ratio
/// (iV + J)/kappa on the right packet, times relative_scale. Not renormalized.
LatticeState absorption_initial_state(const WavePacket& packet, const CenterSpec& spec,
                                      const LatticeLayout& layout, Complex relative_scale = 1.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// RMS residual over RMS deviation from the mean (sqrt(1 - R^2)).
  double relative_residual = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Half-open snapshot range [begin, end).
struct SnapshotWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool empty() const noexcept { return end <= begin; }
  std::size_t size() const noexcept { return empty() ? 0 : end - begin; }
};

/// Post-scattering window of an emission run: from the first snapshot at which
/// I_center has changed by at most `saturation` (relative) over the preceding
/// 1/J of time, up to the last snapshot before the boundary leak.
SnapshotWindow emission_window(const SimulationTrace& trace, double J = 1.0, double saturation = 1e-3);

struct EmissionSummary {
  SnapshotWindow window;
  LinearFit left;
  LinearFit right;
  LinearFit difference;
  double max_difference_error = 0.0;  ///< max |I_left - I_right - 1| over the window
};

EmissionSummary summarize_emission(const SimulationTrace& trace, double J = 1.0);

}  // namespace aptscatter
