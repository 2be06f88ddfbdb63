#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "aptscatter/dynamics.hpp"
#include "aptscatter/oracle.hpp"
#include "aptscatter/types.hpp"

namespace aptscatter::cli {

inline constexpr std::string_view kToolName = "apt-scatter";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitIoError = 1,
  kExitValidation = 2,
  kExitSingularity = 3,
  kExitBoundaryLeak = 4,
};

enum class Command { Coeffs, Sweep, Dynamics, Singularity, Symmetry };
enum class OutputFormat { Csv, Json };
enum class SingularityMode { Emit, Absorb };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
std::string_view to_string(SingularityMode m);

/// Parses a wave vector written as decimal radians or as a multiple of pi
/// ("pi/2", "-pi/2", "2pi/3", "3*pi/4", "0.5pi"). Throws ValidationError.
double parse_angle(std::string_view text);

/// Everything a run depends on. Angles are kept as typed so they can be echoed.
struct RunConfig {
  Command command = Command::Coeffs;

  // Center.
  CouplingKind kind = CouplingKind::Imaginary;
  std::optional<double> kappa;  ///< singularity runs complete it from the locus
  double V = 0.0;
  double J = 1.0;

  // coeffs
  std::string k = "pi/2";
  double singularity_tol = 1e-6;

  // sweep: k on cell midpoints of [k_min, k_max], V inclusive in steps of V_step.
  std::string k_min = "0";
  std::string k_max = "pi";
  int k_points = 200;
  double V_min = -2.0;
  double V_max = 2.0;
  double V_step = 0.05;
  SweepMethod method = SweepMethod::Analytic;

  // dynamics / singularity
  int n_sites = 100;
  std::optional<int> left_lead;
  int Nc = -25;
  double sigma = 6.0;
  std::string kc = "pi/2";
  double dt = 0.1;
  std::optional<double> t_final;
  bool filter_growing_modes = true;
  double growth_threshold = 0.25;
  double leak_threshold = 1e-4;
  bool profiles = true;
  SingularityMode mode = SingularityMode::Emit;
  double amp_scale = 1.0;
  bool phase_flip = false;

  // symmetry
  double symmetry_tol = 1e-12;

  OutputFormat format = OutputFormat::Csv;
  std::string out;  ///< empty: standard output
  std::string label = "run";

  bool operator==(const RunConfig&) const = default;

  /// t_final default per command: 25 for dynamics and absorption, 27 for emission.
  double effective_t_final() const;
  LatticeLayout layout() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Executes an already-parsed configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace aptscatter::cli
