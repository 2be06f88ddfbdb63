#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "aptscatter/analytic.hpp"
#include "aptscatter/cli.hpp"
#include "aptscatter/dynamics.hpp"
#include "aptscatter/errors.hpp"
#include "aptscatter/lattice.hpp"
#include "aptscatter/oracle.hpp"
#include "output.hpp"

namespace aptscatter::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view law_name(CouplingKind kind) { return kind == CouplingKind::Imaginary ? "R-T=1" : "R+T=1"; }

CenterSpec center_of(const RunConfig& c, double kappa) {
  CenterSpec spec{c.kind, kappa, c.V, c.J};
  spec.validate();
  return spec;
}

CenterSpec center_of(const RunConfig& c) { return center_of(c, c.kappa.value_or(0.0)); }

Metadata base_metadata(const RunConfig& c, const CenterSpec& spec) {
  Metadata m;
  m.add("tool", std::string(kToolName) + " " + std::string(kToolVersion));
  m.add("command", std::string(to_string(c.command)));
  m.add("label", c.label);
  m.add("kind", std::string(to_string(spec.kind)));
  m.add("kappa", spec.kappa);
  m.add("V", spec.V);
  m.add("J", spec.J);
  return m;
}

void add_simulation_metadata(Metadata& m, const RunConfig& c, const LatticeLayout& layout,
                             const SimulationOptions& opt) {
  m.add("N", layout.n_sites());
  m.add("left_lead", layout.left_lead);
  m.add("right_lead", layout.right_lead);
  m.add("Nc", c.Nc);
  m.add("sigma", c.sigma);
  m.add("kc", c.kc);
  m.add("kc_value", parse_angle(c.kc));
  m.add("dt", c.dt);
  m.add("t_final", opt.t_final);
  m.add("n_steps", opt.n_steps);
  m.add("filter_growing_modes", opt.filter_growing_modes);
  m.add("growth_threshold", opt.growth_threshold);
  m.add("leak_threshold", opt.leak_threshold);
}

SimulationOptions simulation_options(const RunConfig& c) {
  SimulationOptions opt;
  opt.t_final = c.effective_t_final();
  if (!(c.dt > 0.0)) throw ValidationError("dt must be positive");
  if (opt.t_final < 0.0) throw ValidationError("t_final must be non-negative");
  opt.n_steps = static_cast<int>(std::lround(opt.t_final / c.dt));
  if (opt.n_steps > 0 && std::abs(opt.n_steps * c.dt - opt.t_final) > 1e-9 * std::max(1.0, opt.t_final)) {
    throw ValidationError("t_final must be an integer multiple of dt");
  }
  opt.leak_threshold = c.leak_threshold;
  opt.filter_growing_modes = c.filter_growing_modes;
  opt.growth_threshold = c.growth_threshold;
  opt.record_profiles = c.profiles;
  return opt;
}

/// Summary entries appended after the trace.
using Summary = std::vector<std::pair<std::string, ojson>>;

std::string summary_text(const ojson& v) {
  if (v.is_number_float()) return fmt_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_trace(std::ostream& os, const RunConfig& c, const Metadata& meta, const LatticeLayout& layout,
                 const SimulationTrace& trace, const Summary& summary) {
  if (c.format == OutputFormat::Csv) {
    meta.write_csv(os);
    std::vector<std::string> header{"t", "I_left", "I_center", "I_right", "I_total"};
    if (!trace.profiles.empty()) {
      for (int i = 0; i < layout.n_sites(); ++i) header.push_back(layout.site_name(i));
    }
    write_csv_row(os, header);
    for (std::size_t n = 0; n < trace.size(); ++n) {
      std::vector<std::string> row{fmt_double(trace.times[n]), fmt_double(trace.I_left[n]),
                                   fmt_double(trace.I_center[n]), fmt_double(trace.I_right[n]),
                                   fmt_double(trace.total(n))};
      if (!trace.profiles.empty()) {
        for (double p : trace.profiles[n]) row.push_back(fmt_double(p));
      }
      write_csv_row(os, row);
    }
    for (const auto& [key, value] : summary) write_csv_comment(os, "summary." + key, summary_text(value));
    return;
  }

  ojson j;
  j["metadata"] = meta.to_json();
  ojson t;
  t["times"] = trace.times;
  t["I_left"] = trace.I_left;
  t["I_center"] = trace.I_center;
  t["I_right"] = trace.I_right;
  if (!trace.profiles.empty()) {
    std::vector<std::string> names;
    for (int i = 0; i < layout.n_sites(); ++i) names.push_back(layout.site_name(i));
    t["sites"] = names;
    t["profiles"] = trace.profiles;
  }
  j["trace"] = std::move(t);
  ojson s = ojson::object();
  for (const auto& [key, value] : summary) s[key] = value;
  j["summary"] = std::move(s);
  os << j.dump(2) << '\n';
}

void add_trace_summary(Summary& s, const SimulationTrace& trace) {
  const std::size_t last = trace.size() - 1;
  s.emplace_back("I_left_final", json_number(trace.I_left[last]));
  s.emplace_back("I_center_final", json_number(trace.I_center[last]));
  s.emplace_back("I_right_final", json_number(trace.I_right[last]));
  s.emplace_back("I_total_final", json_number(trace.total(last)));
  s.emplace_back("boundary_leak", trace.boundary_leak);
  s.emplace_back("leak_time", trace.boundary_leak ? json_number(trace.leak_time) : ojson(nullptr));
  s.emplace_back("removed_modes", static_cast<int>(trace.removed_modes.size()));
  for (std::size_t i = 0; i < trace.removed_modes.size(); ++i) {
    s.emplace_back("removed_mode_" + std::to_string(i) + "_im", json_number(trace.removed_modes[i].imag()));
  }
  s.emplace_back("initial_removed_weight", json_number(trace.initial_removed_weight));
}

int finish_trace(const SimulationTrace& trace, std::ostream& err) {
  if (trace.boundary_leak) {
    err << "warning: boundary_leak: end-site intensity exceeded the threshold at t = " << trace.leak_time << '\n';
    return kExitBoundaryLeak;
  }
  return kExitOk;
}

int cmd_coeffs(const RunConfig& c, std::ostream& os, std::ostream& err) {
  const CenterSpec spec = center_of(c);
  const double k = parse_angle(c.k);
  Metadata meta = base_metadata(c, spec);
  meta.add("k", c.k);
  meta.add("k_value", k);
  meta.add("singularity_tol", c.singularity_tol);

  try {
    const ScatteringCoefficients r = coefficients(spec, k, c.singularity_tol);
    const double residual = conservation_residual(spec.kind, r);
    if (c.format == OutputFormat::Csv) {
      meta.write_csv(os);
      write_csv_comment(os, "status", "ok");
      write_csv_row(os, {"k", "E", "r_left_re", "r_left_im", "r_right_re", "r_right_im", "t_re", "t_im", "R", "T",
                         "law", "residual"});
      write_csv_row(os, {fmt_double(r.k), fmt_double(r.E), fmt_double(r.r_left.real()), fmt_double(r.r_left.imag()),
                         fmt_double(r.r_right.real()), fmt_double(r.r_right.imag()), fmt_double(r.t_left.real()),
                         fmt_double(r.t_left.imag()), fmt_double(r.R()), fmt_double(r.T()),
                         std::string(law_name(spec.kind)), fmt_double(residual)});
    } else {
      ojson j;
      j["metadata"] = meta.to_json();
      j["status"] = "ok";
      j["result"] = {{"k", r.k},
                     {"E", r.E},
                     {"r_left", {r.r_left.real(), r.r_left.imag()}},
                     {"r_right", {r.r_right.real(), r.r_right.imag()}},
                     {"t", {r.t_left.real(), r.t_left.imag()}},
                     {"R", r.R()},
                     {"T", r.T()},
                     {"law", law_name(spec.kind)},
                     {"residual", residual}};
      os << j.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const SpectralSingularity& e) {
    if (c.format == OutputFormat::Csv) {
      meta.write_csv(os);
      write_csv_comment(os, "status", "spectral_singularity");
      write_csv_comment(os, "message", e.what());
    } else {
      ojson j;
      j["metadata"] = meta.to_json();
      j["status"] = "spectral_singularity";
      j["message"] = e.what();
      os << j.dump(2) << '\n';
    }
    err << "spectral_singularity: " << e.what() << '\n';
    return kExitSingularity;
  }
}

std::vector<double> k_cells(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("k_points must be >= 1");
  if (!(hi > lo)) throw ValidationError("k_max must exceed k_min");
  std::vector<double> ks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ks[static_cast<std::size_t>(i)] = lo + (i + 0.5) * (hi - lo) / n;
  return ks;
}

std::vector<double> v_values(double lo, double hi, double step) {
  if (hi < lo) throw ValidationError("V_max must not be below V_min");
  if (hi == lo) return {lo};
  if (!(step > 0.0)) throw ValidationError("V_step must be positive");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> vs(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) vs[static_cast<std::size_t>(i)] = lo + static_cast<double>(i) * step;
  return vs;
}

int cmd_sweep(const RunConfig& c, std::ostream& os, std::ostream&) {
  const CenterSpec spec = center_of(c);
  const auto ks = k_cells(parse_angle(c.k_min), parse_angle(c.k_max), c.k_points);
  const auto vs = v_values(c.V_min, c.V_max, c.V_step);
  const auto rows = sweep(spec, ks, vs, c.method, c.singularity_tol);

  Metadata meta = base_metadata(c, spec);
  meta.add("k_min", c.k_min);
  meta.add("k_max", c.k_max);
  meta.add("k_points", c.k_points);
  meta.add("V_min", c.V_min);
  meta.add("V_max", c.V_max);
  meta.add("V_step", c.V_step);
  meta.add("method", std::string(to_string(c.method)));
  meta.add("singularity_tol", c.singularity_tol);
  meta.add("law", std::string(law_name(spec.kind)));

  int singular = 0;
  double worst = 0.0;
  for (const auto& row : rows) {
    if (row.singular) {
      ++singular;
      continue;
    }
    worst = std::max(worst, std::abs(conservation_residual(spec.kind, row.coeffs)));
  }
  meta.add("rows", static_cast<int>(rows.size()));
  meta.add("singular_rows", singular);
  meta.add("max_abs_residual", worst);

  const double nan = std::nan("");
  if (c.format == OutputFormat::Csv) {
    meta.write_csv(os);
    write_csv_row(os, {"k", "V", "R", "T", "residual", "singular"});
    for (const auto& row : rows) {
      const double R = row.singular ? nan : row.coeffs.R();
      const double T = row.singular ? nan : row.coeffs.T();
      const double res = row.singular ? nan : conservation_residual(spec.kind, row.coeffs);
      write_csv_row(os, {fmt_double(row.k), fmt_double(row.V), fmt_double(R), fmt_double(T), fmt_double(res),
                         row.singular ? "1" : "0"});
    }
  } else {
    ojson j;
    j["metadata"] = meta.to_json();
    j["columns"] = {"k", "V", "R", "T", "residual", "singular"};
    ojson data = ojson::array();
    for (const auto& row : rows) {
      const double R = row.singular ? nan : row.coeffs.R();
      const double T = row.singular ? nan : row.coeffs.T();
      const double res = row.singular ? nan : conservation_residual(spec.kind, row.coeffs);
      data.push_back({row.k, row.V, json_number(R), json_number(T), json_number(res), row.singular});
    }
    j["rows"] = std::move(data);
    os << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_dynamics(const RunConfig& c, std::ostream& os, std::ostream& err) {
  const CenterSpec spec = center_of(c);
  const LatticeLayout layout = c.layout();
  const SimulationOptions opt = simulation_options(c);
  const WavePacket packet{c.Nc, c.sigma, parse_angle(c.kc)};
  const SimulationTrace trace = run_scattering_sim(spec, packet, layout, opt);

  Metadata meta = base_metadata(c, spec);
  add_simulation_metadata(meta, c, layout, opt);

  Summary s;
  add_trace_summary(s, trace);
  const std::size_t last = trace.size() - 1;
  const double residual = spec.kind == CouplingKind::Imaginary
                              ? trace.I_left[last] - trace.I_right[last] - 1.0
                              : trace.I_left[last] + trace.I_right[last] - 1.0;
  s.emplace_back("law", std::string(law_name(spec.kind)));
  s.emplace_back("conservation_residual", json_number(residual));
  s.emplace_back("settled", trace.I_center[last] < 1e-3);
  write_trace(os, c, meta, layout, trace, s);
  return finish_trace(trace, err);
}

int cmd_singularity(const RunConfig& c, std::ostream& os, std::ostream& err) {
  if (c.kind != CouplingKind::Imaginary) {
    err << "error: the real-coupling center has no spectral singularity\n";
    return kExitValidation;
  }
  const auto locus = singularity_locus(c.kind, c.J, c.V);
  double kappa = c.kappa.value_or(locus->kappa);
  const CenterSpec spec = center_of(c, kappa);
  if (!at_singularity(spec, c.singularity_tol)) {
    err << "error: kappa = " << kappa << " is off the singularity locus kappa^2 - V^2 = J^2; suggested kappa = "
        << fmt_double(locus->kappa) << '\n';
    return kExitValidation;
  }

  const LatticeLayout layout = c.layout();
  const SimulationOptions opt = simulation_options(c);
  const WavePacket packet{c.Nc, c.sigma, parse_angle(c.kc)};
  const ComplexMatrix H = build_full_lattice(spec, layout);

  Metadata meta = base_metadata(c, spec);
  meta.add("mode", std::string(to_string(c.mode)));
  add_simulation_metadata(meta, c, layout, opt);

  Summary s;
  SimulationTrace trace;
  if (c.mode == SingularityMode::Emit) {
    trace = simulate(H, emission_initial_state(packet, layout), layout, opt, spec.J);
    add_trace_summary(s, trace);
    try {
      const EmissionSummary e = summarize_emission(trace, spec.J);
      s.emplace_back("window_valid", true);
      s.emplace_back("window_t_begin", json_number(trace.times[e.window.begin]));
      s.emplace_back("window_t_end", json_number(trace.times[e.window.end - 1]));
      s.emplace_back("slope_left", json_number(e.left.slope));
      s.emplace_back("slope_right", json_number(e.right.slope));
      s.emplace_back("slope_difference", json_number(e.difference.slope));
      s.emplace_back("fit_residual_left", json_number(e.left.relative_residual));
      s.emplace_back("fit_residual_right", json_number(e.right.relative_residual));
      s.emplace_back("max_abs_difference_minus_one", json_number(e.max_difference_error));
    } catch (const ValidationError&) {
      s.emplace_back("window_valid", false);
    }
  } else {
    const Complex scale = c.amp_scale * (c.phase_flip ? -1.0 : 1.0);
    meta.add("amp_scale", c.amp_scale);
    meta.add("phase_flip", c.phase_flip);
    const LatticeState initial = absorption_initial_state(packet, spec, layout, scale);
    trace = simulate(H, initial, layout, opt, spec.J);
    add_trace_summary(s, trace);
    const Complex ratio = (kI * spec.V + spec.J) / spec.kappa * scale;
    s.emplace_back("relative_amplitude_re", json_number(ratio.real()));
    s.emplace_back("relative_amplitude_im", json_number(ratio.imag()));
    const double initial_total = initial.total_intensity();
    const double final_total = trace.total(trace.size() - 1);
    s.emplace_back("initial_total", json_number(initial_total));
    s.emplace_back("residual_total", json_number(final_total));
    s.emplace_back("residual_fraction", json_number(final_total / initial_total));
  }
  write_trace(os, c, meta, layout, trace, s);
  return finish_trace(trace, err);
}

int cmd_symmetry(const RunConfig& c, std::ostream& os, std::ostream&) {
  const CenterSpec spec = center_of(c);
  const ComplexMatrix h = build_center(spec);
  const ComplexMatrix even = parity_operator(ParityKind::Even);
  const ComplexMatrix odd = parity_operator(ParityKind::Odd);
  const double res_even = anti_pt_residual(h, even);
  const double res_odd = anti_pt_residual(h, odd);
  const bool ok_even = res_even <= c.symmetry_tol;
  const bool ok_odd = res_odd <= c.symmetry_tol;

  std::string parity = "none";
  std::string sign = "none";
  std::string law = "none";
  if (ok_even && ok_odd) {
    parity = "both";
    sign = "+1/-1";
    law = "R=1 T=0 (both laws hold)";
  } else if (ok_even) {
    parity = "even";
    sign = pt_parity(even) > 0 ? "+1" : "-1";
    law = "R-T=1";
  } else if (ok_odd) {
    parity = "odd";
    sign = pt_parity(odd) > 0 ? "+1" : "-1";
    law = "R+T=1";
  }

  Metadata meta = base_metadata(c, spec);
  meta.add("tol", c.symmetry_tol);
  Metadata report;
  report.add("anti_pt_even", ok_even);
  report.add("anti_pt_even_residual", res_even);
  report.add("anti_pt_odd", ok_odd);
  report.add("anti_pt_odd_residual", res_odd);
  report.add("parity", parity);
  report.add("pt_squared_sign", sign);
  report.add("predicted_law", law);

  if (c.format == OutputFormat::Csv) {
    meta.write_csv(os);
    write_csv_row(os, {"key", "value"});
    const ojson r = report.to_json();
    for (const auto& [key, value] : r.items()) write_csv_row(os, {key, summary_text(value)});
  } else {
    ojson j;
    j["metadata"] = meta.to_json();
    j["report"] = report.to_json();
    os << j.dump(2) << '\n';
  }
  return kExitOk;
}

int dispatch(const RunConfig& c, std::ostream& os, std::ostream& err) {
  switch (c.command) {
    case Command::Coeffs: return cmd_coeffs(c, os, err);
    case Command::Sweep: return cmd_sweep(c, os, err);
    case Command::Dynamics: return cmd_dynamics(c, os, err);
    case Command::Singularity: return cmd_singularity(c, os, err);
    case Command::Symmetry: return cmd_symmetry(c, os, err);
  }
  return kExitValidation;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.out.empty()) return dispatch(config, out, err);
    // Render fully before touching the file so a failed run leaves no partial output.
    std::ostringstream buffer;
    const int code = dispatch(config, buffer, err);
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open output file '" << config.out << "'\n";
      return kExitIoError;
    }
    file << buffer.str();
    if (!file.flush()) {
      err << "error: failed writing '" << config.out << "'\n";
      return kExitIoError;
    }
    return code;
  } catch (const SpectralSingularity& e) {
    err << "spectral_singularity: " << e.what() << '\n';
    return kExitSingularity;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace aptscatter::cli
