#include "aptscatter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "aptscatter/analytic.hpp"
#include "aptscatter/errors.hpp"

namespace aptscatter {

namespace {

void require_dimension(const ComplexMatrix& H, const ComplexVector& v, const char* who) {
  if (H.rows() != H.cols() || H.rows() != v.size()) {
    std::ostringstream os;
    os << who << ": Hamiltonian is " << H.rows() << "x" << H.cols() << " but state has " << v.size()
       << " sites";
    throw StructuralError(os.str());
  }
}

ComplexMatrix propagator_matrix(const ComplexMatrix& H, double dt) {
  const ComplexMatrix generator = (-kI * dt) * H;
  return generator.exp();
}

}  // namespace

RegionIntensities region_intensities(const LatticeState& state, const LatticeLayout& layout) {
  if (state.amplitudes.size() != layout.n_sites()) {
    throw StructuralError("state length does not match layout");
  }
  const auto& a = state.amplitudes;
  RegionIntensities out;
  out.left = a.head(layout.left_lead).squaredNorm();
  out.center = a.segment(layout.center_offset(), LatticeLayout::kCenterSites).squaredNorm();
  out.right = a.tail(layout.right_lead).squaredNorm();
  return out;
}

LatticeState gaussian_state(const WavePacket& packet, const LatticeLayout& layout) {
  layout.validate();
  if (!(packet.sigma > 0.0)) throw ValidationError("wave packet: sigma must be positive");
  if (!(std::abs(packet.k_c) < kPi) || packet.k_c == 0.0) {
    throw ValidationError("wave packet: k_c must lie in (-pi, pi) and be nonzero");
  }
  const double reach = kPacketSupportWidths * packet.sigma;
  const double lo = packet.center - reach;
  const double hi = packet.center + reach;
  const bool in_left = packet.center < 0 && lo >= -layout.left_lead && hi <= -1.0;
  const bool in_right = packet.center > 0 && lo >= 1.0 && hi <= layout.right_lead;
  if (!in_left && !in_right) {
    std::ostringstream os;
    os << "wave packet centered at " << packet.center << " with sigma " << packet.sigma
       << " does not fit inside a lead (leads " << layout.left_lead << " + " << layout.right_lead << ")";
    throw ValidationError(os.str());
  }

  LatticeState state;
  state.amplitudes = ComplexVector::Zero(layout.n_sites());
  const double two_sigma2 = 2.0 * packet.sigma * packet.sigma;
  for (int i = 0; i < layout.n_sites(); ++i) {
    if (layout.is_center(i)) continue;
    const double j = layout.lead_label(i);
    const double d = j - packet.center;
    state.amplitudes(i) = std::exp(-d * d / two_sigma2) * std::exp(kI * (packet.k_c * j));
  }
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

LatticeState evolve(const ComplexMatrix& H, const LatticeState& state, double dt) {
  require_dimension(H, state.amplitudes, "evolve");
  if (!(dt >= 0.0)) throw DomainError("evolve: dt must be non-negative");
  if (dt == 0.0) return state;
  return LatticeState{propagator_matrix(H, dt) * state.amplitudes, state.time + dt};
}

double group_velocity(double k_c, double J) { return 2.0 * J * std::sin(k_c); }

GrowingModes find_growing_modes(const ComplexMatrix& H, double growth_threshold) {
  const Eigen::Index n = H.rows();
  GrowingModes out;
  out.complement = ComplexMatrix::Identity(n, n);

  Eigen::ComplexEigenSolver<ComplexMatrix> right(H, true);
  if (right.info() != Eigen::Success) throw Error("eigen-decomposition of the Hamiltonian failed");

  std::vector<Eigen::Index> picked;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (right.eigenvalues()(i).imag() > growth_threshold) picked.push_back(i);
  }
  if (picked.empty()) return out;

  // Left eigenvectors are right eigenvectors of H^T with the same eigenvalue.
  Eigen::ComplexEigenSolver<ComplexMatrix> left(H.transpose(), true);
  if (left.info() != Eigen::Success) throw Error("eigen-decomposition of the Hamiltonian failed");

  for (Eigen::Index i : picked) {
    const Complex lambda = right.eigenvalues()(i);
    Eigen::Index match = 0;
    (left.eigenvalues().array() - lambda).abs().minCoeff(&match);
    const ComplexVector r = right.eigenvectors().col(i);
    const ComplexVector l = left.eigenvectors().col(match);
    const Complex overlap = l.transpose() * r;
    if (std::abs(overlap) < 1e-10) throw Error("growing mode is (nearly) defective; cannot project it out");
    out.complement -= (r * l.transpose()) / overlap;
    out.eigenvalues.push_back(lambda);
  }
  return out;
}

Propagator::Propagator(const ComplexMatrix& H, double dt) : dt_(dt) {
  if (H.rows() != H.cols()) throw StructuralError("Propagator: Hamiltonian must be square");
  if (!(dt > 0.0)) throw DomainError("Propagator: dt must be positive");
  step_ = propagator_matrix(H, dt);
}

Propagator::Propagator(const ComplexMatrix& H, double dt, double growth_threshold) : Propagator(H, dt) {
  GrowingModes modes = find_growing_modes(H, growth_threshold);
  if (modes.eigenvalues.empty()) return;
  filtered_ = true;
  removed_ = std::move(modes.eigenvalues);
  complement_ = std::move(modes.complement);
  step_ = complement_ * step_;
}

LatticeState Propagator::project(const LatticeState& state) const {
  if (!filtered_) return state;
  require_dimension(complement_, state.amplitudes, "Propagator::project");
  return LatticeState{complement_ * state.amplitudes, state.time};
}

LatticeState Propagator::step(const LatticeState& state) const {
  require_dimension(step_, state.amplitudes, "Propagator::step");
  return LatticeState{step_ * state.amplitudes, state.time + dt_};
}

SimulationTrace simulate(const ComplexMatrix& H, const LatticeState& initial, const LatticeLayout& layout,
                         const SimulationOptions& options, double J) {
  layout.validate();
  require_dimension(H, initial.amplitudes, "simulate");
  if (H.rows() != layout.n_sites()) throw StructuralError("simulate: Hamiltonian does not match layout");
  if (options.n_steps < 0 || !(options.t_final >= 0.0)) {
    throw ValidationError("simulate: need t_final >= 0 and n_steps >= 0");
  }
  if (options.n_steps > 0 && options.t_final == 0.0) {
    throw ValidationError("simulate: n_steps > 0 requires t_final > 0");
  }

  SimulationTrace trace;
  const auto n = static_cast<std::size_t>(options.n_steps) + 1;
  trace.times.reserve(n);
  trace.I_left.reserve(n);
  trace.I_center.reserve(n);
  trace.I_right.reserve(n);
  trace.end_intensity.reserve(n);

  const int last = layout.n_sites() - 1;
  auto record = [&](const LatticeState& s) {
    const RegionIntensities r = region_intensities(s, layout);
    trace.times.push_back(s.time);
    trace.I_left.push_back(r.left);
    trace.I_center.push_back(r.center);
    trace.I_right.push_back(r.right);
    const double edge = std::max(std::norm(s.amplitudes(0)), std::norm(s.amplitudes(last)));
    trace.end_intensity.push_back(edge);
    if (!trace.boundary_leak && edge > options.leak_threshold) {
      trace.boundary_leak = true;
      trace.leak_time = s.time;
    }
    if (options.record_profiles) {
      std::vector<double> p(static_cast<std::size_t>(layout.n_sites()));
      for (int i = 0; i <= last; ++i) p[static_cast<std::size_t>(i)] = std::norm(s.amplitudes(i));
      trace.profiles.push_back(std::move(p));
    }
  };

  if (options.n_steps == 0) {
    record(initial);
    return trace;
  }

  const double dt = options.t_final / options.n_steps;
  const Propagator propagator = options.filter_growing_modes
                                    ? Propagator(H, dt, options.growth_threshold * J)
                                    : Propagator(H, dt);
  trace.removed_modes.assign(propagator.removed_eigenvalues().begin(), propagator.removed_eigenvalues().end());

  LatticeState state = propagator.project(initial);
  trace.initial_removed_weight = (initial.amplitudes - state.amplitudes).squaredNorm();
  record(state);
  for (int step = 1; step <= options.n_steps; ++step) {
    state = propagator.step(state);
    // Pin the clock to the grid instead of accumulating dt.
    state.time = initial.time + step * dt;
    record(state);
  }
  return trace;
}

SimulationTrace run_scattering_sim(const CenterSpec& spec, const WavePacket& packet,
                                   const LatticeLayout& layout, const SimulationOptions& options) {
  const ComplexMatrix H = build_full_lattice(spec, layout);
  return simulate(H, gaussian_state(packet, layout), layout, options, spec.J);
}

LatticeState emission_initial_state(const WavePacket& packet, const LatticeLayout& layout) {
  if (std::abs(packet.k_c - kPi / 2.0) > 1e-9) {
    throw DomainError("emission probe needs a carrier k_c = pi/2");
  }
  return gaussian_state(packet, layout);
}

LatticeState absorption_initial_state(const WavePacket& packet, const CenterSpec& spec,
                                      const LatticeLayout& layout, Complex relative_scale) {
  if (!at_singularity(spec)) {
    throw DomainError("absorption state requires an imaginary-coupling center on the singularity locus");
  }
  if (packet.center >= 0) throw ValidationError("absorption state: the incoming left packet needs N_c < 0");
  const Complex ratio = (kI * spec.V + spec.J) / spec.kappa * relative_scale;
  const LatticeState incoming_left = gaussian_state(packet, layout);
  const LatticeState incoming_right = gaussian_state(WavePacket{-packet.center, packet.sigma, -packet.k_c}, layout);
  return LatticeState{incoming_left.amplitudes + ratio * incoming_right.amplitudes, 0.0};
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need >= 2 paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += e * e;
  }
  fit.relative_residual = syy > 0.0 ? std::sqrt(sse / syy) : 0.0;
  return fit;
}

SnapshotWindow emission_window(const SimulationTrace& trace, double J, double saturation) {
  SnapshotWindow w;
  const std::size_t n = trace.size();
  if (n < 2) return w;
  const double span = trace.times[1] - trace.times[0];
  const auto lag = static_cast<std::size_t>(std::lround((1.0 / J) / span));

  w.end = n;
  if (trace.boundary_leak) {
    w.end = static_cast<std::size_t>(
        std::lower_bound(trace.times.begin(), trace.times.end(), trace.leak_time) - trace.times.begin());
  }
  w.begin = w.end;
  // The center fills while the packet arrives; once its content stops changing
  // the emission has settled into the linear regime.
  double peak = 0.0;
  for (std::size_t i = 0; i < w.end; ++i) {
    peak = std::max(peak, trace.I_center[i]);
    if (i < lag || peak <= 0.0) continue;
    const double change = std::abs(trace.I_center[i] - trace.I_center[i - lag]);
    const bool filled = trace.I_center[i] >= 0.5 * peak && trace.I_center[i] > 1e-2;
    if (filled && change <= saturation * trace.I_center[i]) {
      w.begin = i;
      break;
    }
  }
  return w;
}

EmissionSummary summarize_emission(const SimulationTrace& trace, double J) {
  EmissionSummary s;
  s.window = emission_window(trace, J);
  if (s.window.size() < 2) {
    throw ValidationError("emission run has no post-scattering window before the boundary leak");
  }
  const auto first = static_cast<std::ptrdiff_t>(s.window.begin);
  const auto count = s.window.size();
  std::span<const double> t(trace.times.data() + first, count);
  std::vector<double> diff(count);
  for (std::size_t i = 0; i < count; ++i) {
    diff[i] = trace.I_left[s.window.begin + i] - trace.I_right[s.window.begin + i];
    s.max_difference_error = std::max(s.max_difference_error, std::abs(diff[i] - 1.0));
  }
  s.left = fit_line(t, std::span<const double>(trace.I_left.data() + first, count));
  s.right = fit_line(t, std::span<const double>(trace.I_right.data() + first, count));
  s.difference = fit_line(t, diff);
  return s;
}

}  // namespace aptscatter
