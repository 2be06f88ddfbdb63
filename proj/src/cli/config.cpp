#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "aptscatter/cli.hpp"
#include "aptscatter/errors.hpp"

namespace aptscatter::cli {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Coeffs: return "coeffs";
    case Command::Sweep: return "sweep";
    case Command::Dynamics: return "dynamics";
    case Command::Singularity: return "singularity";
    case Command::Symmetry: return "symmetry";
  }
  return "?";
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::string_view to_string(SingularityMode m) { return m == SingularityMode::Emit ? "emit" : "absorb"; }

namespace {

std::string trimmed(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  return s;
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ValidationError("cannot parse angle '" + std::string(whole) + "'");
  }
  return value;
}

template <typename Enum>
Enum parse_enum(std::string_view what, const std::string& text,
                std::initializer_list<std::pair<std::string_view, Enum>> table) {
  for (const auto& [name, value] : table) {
    if (text == name) return value;
  }
  throw ValidationError("unknown " + std::string(what) + " '" + text + "'");
}

CouplingKind parse_kind(const std::string& s) {
  return parse_enum<CouplingKind>("kind", s, {{"imaginary", CouplingKind::Imaginary}, {"real", CouplingKind::Real}});
}

Command parse_command(const std::string& s) {
  return parse_enum<Command>("command", s,
                             {{"coeffs", Command::Coeffs},
                              {"sweep", Command::Sweep},
                              {"dynamics", Command::Dynamics},
                              {"singularity", Command::Singularity},
                              {"symmetry", Command::Symmetry}});
}

OutputFormat parse_format(const std::string& s) {
  return parse_enum<OutputFormat>("format", s, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
}

SingularityMode parse_mode(const std::string& s) {
  return parse_enum<SingularityMode>("mode", s, {{"emit", SingularityMode::Emit}, {"absorb", SingularityMode::Absorb}});
}

SweepMethod parse_method(const std::string& s) {
  return parse_enum<SweepMethod>("method", s, {{"analytic", SweepMethod::Analytic}, {"oracle", SweepMethod::Oracle}});
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string s = trimmed(text);
  if (s.empty()) throw ValidationError("empty angle");
  const auto pi_at = s.find("pi");
  if (pi_at == std::string::npos) return parse_number(s, text);

  // [sign][coefficient][*]pi[/divisor]
  std::string head = s.substr(0, pi_at);
  std::string tail = s.substr(pi_at + 2);
  double sign = 1.0;
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    sign = head.front() == '-' ? -1.0 : 1.0;
    head.erase(0, 1);
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  const double coefficient = head.empty() ? 1.0 : parse_number(head, text);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ValidationError("cannot parse angle '" + std::string(text) + "'");
    divisor = parse_number(std::string_view(tail).substr(1), text);
    if (divisor == 0.0) throw ValidationError("angle '" + std::string(text) + "' divides by zero");
  }
  return sign * coefficient * kPi / divisor;
}

double RunConfig::effective_t_final() const {
  if (t_final) return *t_final;
  if (command == Command::Singularity && mode == SingularityMode::Emit) return 27.0;
  return 25.0;
}

LatticeLayout RunConfig::layout() const {
  if (left_lead) return LatticeLayout::from_sites(n_sites, *left_lead);
  return LatticeLayout::symmetric(n_sites);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  j["kind"] = to_string(c.kind);
  j["kappa"] = c.kappa ? nlohmann::json(*c.kappa) : nlohmann::json(nullptr);
  j["V"] = c.V;
  j["J"] = c.J;
  j["k"] = c.k;
  j["singularity_tol"] = c.singularity_tol;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["k_points"] = c.k_points;
  j["V_min"] = c.V_min;
  j["V_max"] = c.V_max;
  j["V_step"] = c.V_step;
  j["method"] = to_string(c.method);
  j["N"] = c.n_sites;
  j["left_lead"] = c.left_lead ? nlohmann::json(*c.left_lead) : nlohmann::json(nullptr);
  j["Nc"] = c.Nc;
  j["sigma"] = c.sigma;
  j["kc"] = c.kc;
  j["dt"] = c.dt;
  j["t_final"] = c.t_final ? nlohmann::json(*c.t_final) : nlohmann::json(nullptr);
  j["filter_growing_modes"] = c.filter_growing_modes;
  j["growth_threshold"] = c.growth_threshold;
  j["leak_threshold"] = c.leak_threshold;
  j["profiles"] = c.profiles;
  j["mode"] = to_string(c.mode);
  j["amp_scale"] = c.amp_scale;
  j["phase_flip"] = c.phase_flip;
  j["symmetry_tol"] = c.symmetry_tol;
  j["format"] = to_string(c.format);
  j["out"] = c.out;
  j["label"] = c.label;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") c.command = parse_command(v.get<std::string>());
      else if (key == "kind") c.kind = parse_kind(v.get<std::string>());
      else if (key == "kappa") c.kappa = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "V") c.V = v.get<double>();
      else if (key == "J") c.J = v.get<double>();
      else if (key == "k") c.k = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "singularity_tol") c.singularity_tol = v.get<double>();
      else if (key == "k_min") c.k_min = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "k_max") c.k_max = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "k_points") c.k_points = v.get<int>();
      else if (key == "V_min") c.V_min = v.get<double>();
      else if (key == "V_max") c.V_max = v.get<double>();
      else if (key == "V_step") c.V_step = v.get<double>();
      else if (key == "method") c.method = parse_method(v.get<std::string>());
      else if (key == "N") c.n_sites = v.get<int>();
      else if (key == "left_lead") c.left_lead = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
      else if (key == "Nc") c.Nc = v.get<int>();
      else if (key == "sigma") c.sigma = v.get<double>();
      else if (key == "kc") c.kc = v.is_string() ? v.get<std::string>() : v.dump();
      else if (key == "dt") c.dt = v.get<double>();
      else if (key == "t_final") c.t_final = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "filter_growing_modes") c.filter_growing_modes = v.get<bool>();
      else if (key == "growth_threshold") c.growth_threshold = v.get<double>();
      else if (key == "leak_threshold") c.leak_threshold = v.get<double>();
      else if (key == "profiles") c.profiles = v.get<bool>();
      else if (key == "mode") c.mode = parse_mode(v.get<std::string>());
      else if (key == "amp_scale") c.amp_scale = v.get<double>();
      else if (key == "phase_flip") c.phase_flip = v.get<bool>();
      else if (key == "symmetry_tol") c.symmetry_tol = v.get<double>();
      else if (key == "format") c.format = parse_format(v.get<std::string>());
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "label") c.label = v.get<std::string>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  return c;
}

namespace {

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

RunConfig load_config(std::istream& in, const std::string& path) {
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

struct Flags {
  std::string kind;
  double kappa = 0.0;
  int left_lead = 0;
  double t_final = 0.0;
  std::string method;
  std::string mode;
  std::string format;
  std::string config_path;
  bool dump_config = false;
  bool no_filter = false;
  bool no_profiles = false;
};

struct Registered {
  CLI::Option* kind = nullptr;
  CLI::Option* kappa = nullptr;
  CLI::Option* left_lead = nullptr;
  CLI::Option* t_final = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* no_filter = nullptr;
  CLI::Option* no_profiles = nullptr;
};

void add_center_options(CLI::App* sub, RunConfig& c, Flags& f, Registered& r) {
  r.kind = sub->add_option("--kind", f.kind, "central coupling: imaginary | real");
  r.kappa = sub->add_option("--kappa", f.kappa, "central coupling strength");
  sub->add_option("--V", c.V, "on-site potential");
  sub->add_option("--J", c.J, "lead and center-lead coupling");
}

void add_common_options(CLI::App* sub, RunConfig& c, Flags& f, Registered& r) {
  sub->add_option("--config", f.config_path, "JSON config mirroring the flags");
  sub->add_flag("--dump-config", f.dump_config, "print the effective config as JSON and exit");
  r.format = sub->add_option("--format", f.format, "csv | json");
  sub->add_option("--out", c.out, "output path (default: standard output)");
  sub->add_option("--label", c.label, "run label echoed in the metadata");
}

void add_lattice_options(CLI::App* sub, RunConfig& c, Flags& f, Registered& r) {
  sub->add_option("--N", c.n_sites, "total lattice sites");
  r.left_lead = sub->add_option("--left-lead", f.left_lead, "left lead length (default: symmetric)");
  sub->add_option("--Nc", c.Nc, "packet center (lead label)");
  sub->add_option("--sigma", c.sigma, "packet width");
  sub->add_option("--dt", c.dt, "time step in 1/J");
  r.t_final = sub->add_option("--t-final", f.t_final, "final time in 1/J");
  r.no_filter = sub->add_flag("--no-filter", f.no_filter, "keep growing bound modes in the evolution");
  sub->add_option("--growth-threshold", c.growth_threshold, "Im E / J above which bound modes are removed");
  sub->add_option("--leak-threshold", c.leak_threshold, "end-site intensity that flags a boundary leak");
  r.no_profiles = sub->add_flag("--no-profiles", f.no_profiles, "omit per-site intensities");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  bool from_file = false;
  try {
    if (auto path = find_config_path(args)) {
      std::ifstream in(*path);
      if (!in) {
        err << "error: cannot open config file '" << *path << "'\n";
        return kExitIoError;
      }
      config = load_config(in, *path);
      from_file = true;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  CLI::App app{"Scattering and wave-packet dynamics for anti-PT-symmetric four-site centers",
               std::string(kToolName)};
  app.require_subcommand(0, 1);
  Flags flags;
  Registered reg;
  RunConfig& c = config;

  auto* coeffs = app.add_subcommand("coeffs", "closed-form r, t, R, T at one wave vector");
  add_center_options(coeffs, c, flags, reg);
  coeffs->add_option("--k", c.k, "wave vector in (0, pi); decimal or pi fraction");
  coeffs->add_option("--singularity-tol", c.singularity_tol, "relative |D| tolerance for the singularity");
  add_common_options(coeffs, c, flags, reg);

  Registered reg_sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "R(k, V), T(k, V) table");
  add_center_options(sweep_cmd, c, flags, reg_sweep);
  sweep_cmd->add_option("--k-min", c.k_min, "lower k bound (excluded)");
  sweep_cmd->add_option("--k-max", c.k_max, "upper k bound (excluded)");
  sweep_cmd->add_option("--k-points", c.k_points, "number of k cells");
  sweep_cmd->add_option("--V-min", c.V_min, "first V");
  sweep_cmd->add_option("--V-max", c.V_max, "last V");
  sweep_cmd->add_option("--V-step", c.V_step, "V increment");
  reg_sweep.method = sweep_cmd->add_option("--method", flags.method, "analytic | oracle");
  sweep_cmd->add_option("--singularity-tol", c.singularity_tol, "relative |D| tolerance for the singularity");
  add_common_options(sweep_cmd, c, flags, reg_sweep);

  Registered reg_dyn;
  auto* dynamics = app.add_subcommand("dynamics", "Gaussian packet scattering trace");
  add_center_options(dynamics, c, flags, reg_dyn);
  add_lattice_options(dynamics, c, flags, reg_dyn);
  dynamics->add_option("--kc", c.kc, "carrier wave vector; decimal or pi fraction");
  add_common_options(dynamics, c, flags, reg_dyn);

  Registered reg_sing;
  auto* singular = app.add_subcommand("singularity", "emission / coherent absorption at the spectral singularity");
  add_center_options(singular, c, flags, reg_sing);
  add_lattice_options(singular, c, flags, reg_sing);
  reg_sing.mode = singular->add_option("--mode", flags.mode, "emit | absorb");
  singular->add_option("--amp-scale", c.amp_scale, "multiplier on the second packet's amplitude");
  singular->add_flag("--phase-flip", c.phase_flip, "multiply the second packet by e^{i pi}");
  singular->add_option("--singularity-tol", c.singularity_tol, "relative tolerance for being on the locus");
  add_common_options(singular, c, flags, reg_sing);

  Registered reg_sym;
  auto* symmetry = app.add_subcommand("symmetry", "anti-PT symmetry and parity report");
  add_center_options(symmetry, c, flags, reg_sym);
  symmetry->add_option("--tol", c.symmetry_tol, "entrywise tolerance");
  add_common_options(symmetry, c, flags, reg_sym);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    const std::pair<CLI::App*, Command> table[] = {{coeffs, Command::Coeffs},
                                                   {sweep_cmd, Command::Sweep},
                                                   {dynamics, Command::Dynamics},
                                                   {singular, Command::Singularity},
                                                   {symmetry, Command::Symmetry}};
    bool chosen = false;
    for (const auto& [sub, cmd] : table) {
      if (sub->parsed()) {
        c.command = cmd;
        chosen = true;
      }
    }
    if (!chosen && !from_file) {
      err << "error: a subcommand is required\n" << app.help();
      return kExitValidation;
    }

    for (const Registered* r : {&reg, &reg_sweep, &reg_dyn, &reg_sing, &reg_sym}) {
      if (r->kind && r->kind->count()) c.kind = parse_kind(flags.kind);
      if (r->kappa && r->kappa->count()) c.kappa = flags.kappa;
      if (r->left_lead && r->left_lead->count()) c.left_lead = flags.left_lead;
      if (r->t_final && r->t_final->count()) c.t_final = flags.t_final;
      if (r->method && r->method->count()) c.method = parse_method(flags.method);
      if (r->mode && r->mode->count()) c.mode = parse_mode(flags.mode);
      if (r->format && r->format->count()) c.format = parse_format(flags.format);
      if (r->no_filter && r->no_filter->count()) c.filter_growing_modes = false;
      if (r->no_profiles && r->no_profiles->count()) c.profiles = false;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  if (flags.dump_config) {
    out << to_json(c).dump(2) << '\n';
    return kExitOk;
  }
  return execute(c, out, err);
}

}  // namespace aptscatter::cli
