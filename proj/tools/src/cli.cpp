#include "magpol/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "magpol/core_model.hpp"
#include "magpol/csv.hpp"
#include "magpol/errors.hpp"
#include "magpol/fitting.hpp"
#include "magpol/inputoutput.hpp"
#include "magpol/multiensemble.hpp"
#include "magpol/nonhermitian.hpp"
#include "magpol/param_file.hpp"
#include "magpol/steadystate.hpp"

namespace magpol::cli {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string params_path;
  double calibration = 0.0;
  CLI::Option* calibration_opt = nullptr;
  std::string out_dir = ".";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  double tol = 0.0;
  CLI::Option* tol_opt = nullptr;
};

struct Loaded {
  HybridParams params;
  std::optional<double> calibration_c;
  std::string source;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("--params", o.params_path, "Parameter file (key = value); built-in device values if omitted");
  o.calibration_opt =
      cmd.add_option("--calibration", o.calibration, "Drive calibration c: u = c sqrt(P[W]), in 2pi MHz / sqrt(W)");
  cmd.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd.add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  cmd.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  o.tol_opt = cmd.add_option("--tol", o.tol, "Solver tolerance")->check(CLI::PositiveNumber);
}

Loaded load(const CommonOptions& o) {
  Loaded l;
  if (o.params_path.empty()) {
    l.params = device_parameters();
    l.source = "builtin";
  } else {
    const auto file = load_param_file(o.params_path);
    l.params = file.params;
    l.calibration_c = file.calibration_c;
    l.source = o.params_path;
  }
  if (o.calibration_opt->count() > 0) {
    if (!(o.calibration > 0.0)) throw ConfigError("--calibration must be > 0");
    l.calibration_c = o.calibration;
  }
  l.params.validate();
  return l;
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a point count", what, text));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

FrequencyGrid parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ConfigError(fmt::format("--grid expects start:stop:n (got '{}')", text));
  FrequencyGrid grid{parse_number(parts[0], "--grid start"), parse_number(parts[1], "--grid stop"),
                     parse_count(parts[2], "--grid n")};
  grid.validate();
  return grid;
}

DriveAxis parse_drive(std::string_view text, const std::optional<double>& calibration) {
  const auto parts = split(text, ':');
  if (parts.size() == 4 && parts[0] == "u") {
    return DriveAxis::amplitudes(parse_number(parts[1], "--drive start"), parse_number(parts[2], "--drive stop"),
                                 parse_count(parts[3], "--drive n"));
  }
  if (parts.size() != 3) {
    throw ConfigError(fmt::format("--drive expects start_dbm:stop_dbm:n or u:start:stop:n (got '{}')", text));
  }
  if (!calibration) throw ConfigError("a drive axis in dBm needs --calibration or calibration_c in the parameter file");
  return DriveAxis::powers(parse_number(parts[0], "--drive start"), parse_number(parts[1], "--drive stop"),
                           parse_count(parts[2], "--drive n"), *calibration);
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Key = value description of an output file, enough to regenerate it.
class Sidecar {
 public:
  Sidecar(std::string command, const Loaded& loaded, std::uint64_t seed) {
    add("toolkit", "magpol");
    add("toolkit_version", MAGPOL_VERSION);
    add("command", std::move(command));
    add("params_source", loaded.source);
    const auto& p = loaded.params;
    add("omega_c", num(p.omega_c));
    add("kappa_i", num(p.kappa_i));
    add("kappa_o", num(p.kappa_o));
    add("kappa_int", num(p.kappa_int));
    add("gamma", num(p.gamma));
    add("g", num(p.g));
    add("a_parallel", num(p.a_parallel));
    add("gamma_e", num(p.gamma_e));
    if (p.n_spins) add("n_spins", num(*p.n_spins));
    if (loaded.calibration_c) add("calibration_c", num(*loaded.calibration_c));
    add("seed", std::to_string(seed));
  }

  Sidecar& add(std::string key, std::string value) {
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Sidecar& add(std::string key, double value) { return add(std::move(key), num(value)); }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) fmt::print(out, "{} = {}\n", k, v);
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  body(out);
  out.flush();
  if (!out) throw ConfigError(fmt::format("write to {} failed", path.string()));
}

void write_with_sidecar(const fs::path& path, const Sidecar& meta,
                        const std::function<void(std::ostream&)>& body) {
  write_file(path, body);
  write_file(fs::path(path).concat(".meta"), [&](std::ostream& out) { meta.write(out); });
}

fs::path prepare_out_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw ConfigError(fmt::format("cannot create output directory {}", dir));
  return p;
}

std::string command_line(int argc, const char* const* argv) {
  std::string s = "magpol";
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOptions {
  CommonOptions common;
  std::string grid = "3060:3126:2001";
  double g_eff = 0.0;
  CLI::Option* g_eff_opt = nullptr;
  double omega_m = 0.0;
  CLI::Option* omega_m_opt = nullptr;
  double amplitude_scale = 1.0;
  double noise = 0.0;
};

int cmd_spectrum(const SpectrumOptions& o, const std::string& command, std::ostream& out) {
  const auto loaded = load(o.common);
  const auto grid = parse_grid(o.grid);
  if (!(o.noise >= 0.0)) throw ConfigError("--noise must be >= 0");

  TransmissionModel model = TransmissionModel::resonant(loaded.params);
  if (o.g_eff_opt->count() > 0) model.g_eff = o.g_eff;
  if (o.omega_m_opt->count() > 0) model.omega_m = o.omega_m;
  model.amplitude_scale = o.amplitude_scale;
  model.validate();

  Spectrum spec = spectrum(model, grid);
  if (o.noise > 0.0) {
    std::mt19937_64 rng(o.common.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : spec.values) v = std::abs(v * (1.0 + o.noise * gauss(rng)));
  }

  const auto dir = prepare_out_dir(o.common.out_dir);
  Sidecar meta(command, loaded, o.common.seed);
  meta.add("omega_m", model.omega_m).add("g_eff", model.g_eff).add("amplitude_scale", model.amplitude_scale);
  meta.add("grid", o.grid).add("noise_relative", o.noise);
  const auto path = dir / "spectrum.csv";
  write_with_sidecar(path, meta, [&](std::ostream& f) { write_spectrum_csv(f, spec); });

  fmt::print(out, "wrote {} ({} points)\n", path.string(), spec.values.size());
  if (spec.values.size() >= 5) {
    for (const auto& p : extract_peaks(spec).peaks) {
      fmt::print(out, "peak: omega={:.6f} height={:.6g} hwhm={:.4f}{}\n", p.position, p.height, p.hwhm,
                 p.one_sided ? " (one-sided)" : "");
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  CommonOptions common;
  std::string preset;
  std::string drive = "u:0:25:200";
  std::string grid;
  bool no_spectra = false;
  double ep_tol = 1e-6;
  std::string resonant = "zero";
  std::string driven = "zero";
  std::string cross_relaxation = "on";
  double omega_zero = 0.0;
  CLI::Option* omega_zero_opt = nullptr;
};

EnsembleScenario build_scenario(const SweepOptions& o, const HybridParams& params) {
  if (o.preset != "custom") return scenario_preset(o.preset, params);
  EnsembleScenario s;
  s.name = "custom";
  s.omega_c = params.omega_c;
  s.omega_zero = o.omega_zero_opt->count() > 0 ? o.omega_zero : params.omega_c;
  s.a_parallel = params.a_parallel;
  s.resonant = parse_species(o.resonant);
  s.driven = parse_species(o.driven);
  if (o.cross_relaxation == "on") {
    s.cross_relaxation = CrossRelaxation::On;
  } else if (o.cross_relaxation == "off") {
    s.cross_relaxation = CrossRelaxation::Off;
  } else {
    throw ConfigError(fmt::format("--cross-relaxation must be on or off (got '{}')", o.cross_relaxation));
  }
  return s;
}

int cmd_sweep(const SweepOptions& o, const std::string& command, std::ostream& out) {
  const auto loaded = load(o.common);
  const auto scenario = build_scenario(o, loaded.params);
  const auto drive = parse_drive(o.drive, loaded.calibration_c);
  const double omega_res = scenario.frequency(scenario.resonant);
  const FrequencyGrid grid =
      o.grid.empty() ? FrequencyGrid{omega_res - 50.0, omega_res + 50.0, 2001} : parse_grid(o.grid);

  SolverOptions solver;
  if (o.common.tol_opt->count() > 0) solver.tol = o.common.tol;
  std::optional<FrequencyGrid> sweep_grid;
  if (!o.no_spectra) sweep_grid = grid;
  const auto sweep = scenario_sweep(scenario, loaded.params, drive, sweep_grid, solver, o.common.jobs);
  const auto verdict = ep_present(sweep, o.ep_tol, solver);

  const auto dir = prepare_out_dir(o.common.out_dir);
  Sidecar meta(command, loaded, o.common.seed);
  meta.add("scenario", scenario.name)
      .add("scenario_omega_c", scenario.omega_c)
      .add("scenario_omega_zero", scenario.omega_zero)
      .add("resonant_species", std::string(to_string(scenario.resonant)))
      .add("driven_species", std::string(to_string(scenario.driven)))
      .add("cross_relaxation", scenario.cross_relaxation == CrossRelaxation::On ? "on" : "off")
      .add("drive", o.drive)
      .add("solver_tol", solver.tol)
      .add("ep_tol", o.ep_tol);
  write_with_sidecar(dir / "sweep.csv", meta, [&](std::ostream& f) { write_sweep_csv(f, sweep); });

  if (!o.no_spectra) {
    const auto spectra_dir = dir / "spectra";
    prepare_out_dir(spectra_dir.string());
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
      const auto& p = sweep.points[i];
      Sidecar point_meta = meta;
      point_meta.add("grid", fmt::format("{}:{}:{}", num(grid.start), num(grid.stop), grid.n_points))
          .add("sweep_row", std::to_string(i))
          .add("drive_u", p.u)
          .add("omega_c_tilde", p.cavity.omega_c_tilde)
          .add("omega_m", omega_res)
          .add("g_eff", p.g_eff);
      write_with_sidecar(spectra_dir / fmt::format("point_{:04d}.csv", i), point_meta,
                         [&](std::ostream& f) { write_spectrum_csv(f, p.spectrum); });
    }
  }

  fmt::print(out, "scenario: {} (resonant {}, driven {}, cross relaxation {})\n", scenario.name,
             to_string(scenario.resonant), to_string(scenario.driven),
             scenario.cross_relaxation == CrossRelaxation::On ? "on" : "off");
  fmt::print(out, "points: {}  wrote {}\n", sweep.points.size(), (dir / "sweep.csv").string());
  if (verdict.present) {
    fmt::print(out, "EP: present at u={:.4g} 2π·MHz", verdict.u);
    if (verdict.power_dbm) fmt::print(out, " ({:.2f} dBm)", *verdict.power_dbm);
    fmt::print(out, "\n");
  } else {
    fmt::print(out, "EP: absent\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- ep

struct EpOptions {
  CommonOptions common;
  double delta_c = 0.0;
  double delta_s = 0.0;
};

int cmd_ep(const EpOptions& o, std::ostream& out) {
  const auto loaded = load(o.common);
  const double g_ep = ep_coupling(loaded.params);
  const auto drive = ep_drive_amplitude(DetuningPair{o.delta_c, o.delta_s}, loaded.params);
  fmt::print(out, "g_EP = {:.6g} 2π·MHz\n", g_ep);
  fmt::print(out, "chi_EP = {:.6g}\n", drive.chi);
  fmt::print(out, "u_EP = {:.6g} 2π·MHz\n", drive.u);
  if (loaded.calibration_c) {
    if (drive.u > 0.0) {
      const double root_watts = drive.u / *loaded.calibration_c;
      fmt::print(out, "P_EP = {:.2f} dBm\n", watts_to_dbm(root_watts * root_watts));
    } else {
      fmt::print(out, "P_EP = -inf dBm (EP reached without drive)\n");
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- fit

struct FitCliOptions {
  CommonOptions common;
  std::string mode = "transmission";
  std::string data;
  std::string free = "kappa,gamma,g_eff";
  std::vector<std::string> init;
  std::vector<std::string> bounds;
  int max_iterations = 500;
};

std::map<std::string, std::string, std::less<>> parse_assignments(const std::vector<std::string>& items,
                                                                  std::string_view flag) {
  std::map<std::string, std::string, std::less<>> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("{} expects name=value (got '{}')", flag, item));
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double default_initial(FitParam p, const HybridParams& params) {
  switch (p) {
    case FitParam::Kappa: return params.kappa();
    case FitParam::Gamma: return params.gamma;
    case FitParam::GEff: return params.g;
    case FitParam::OmegaC:
    case FitParam::OmegaM: return params.omega_c;
    case FitParam::AmplitudeScale: return 1.0;
    case FitParam::CalibrationC: break;
  }
  return 0.0;
}

std::pair<double, double> default_bounds(FitParam p, double initial) {
  switch (p) {
    case FitParam::OmegaC:
    case FitParam::OmegaM: return {initial - 100.0, initial + 100.0};
    case FitParam::GEff: return {0.0, std::max(100.0 * initial, 1.0)};
    default: return {initial / 100.0, 100.0 * initial};
  }
}

void print_report(std::ostream& out, std::string_view mode, const FitResult& r) {
  fmt::print(out, "mode = {}\n", mode);
  fmt::print(out, "converged = {}\n", r.converged ? "true" : "false");
  fmt::print(out, "rss = {:.12g}\n", r.rss);
  fmt::print(out, "n_iterations = {}\n", r.n_iterations);
  fmt::print(out, "jacobian_condition = {:.6g}\n", r.jacobian_condition);
  fmt::print(out, "used_simplex = {}\n", r.used_simplex ? "true" : "false");
  std::string flags;
  for (const auto& f : r.flags) flags += (flags.empty() ? "" : ",") + f;
  fmt::print(out, "flags = {}\n", flags.empty() ? "none" : flags);
  for (const auto& [which, value] : r.estimates) fmt::print(out, "{} = {:.12g}\n", to_string(which), value);
}

int cmd_fit(const FitCliOptions& o, const std::string& command, std::ostream& out) {
  const auto loaded = load(o.common);
  FitResult result;
  std::string_view x_column;

  if (o.mode == "transmission") {
    constexpr std::array<std::string_view, 2> header{"omega_mhz", "s21_abs"};
    const auto table = csv::read_file(o.data, header);
    FitProblem problem;
    problem.fixed = TransmissionModel::resonant(loaded.params);
    for (const auto& row : table.rows) problem.data.push_back({row[0], row[1]});

    const auto inits = parse_assignments(o.init, "--init");
    const auto bounds = parse_assignments(o.bounds, "--bounds");
    for (const auto name : split(o.free, ',')) {
      FreeParam f;
      f.which = parse_fit_param(name);
      const auto it = inits.find(name);
      f.initial = it != inits.end() ? parse_number(it->second, "--init") : default_initial(f.which, loaded.params);
      std::tie(f.lower, f.upper) = default_bounds(f.which, f.initial);
      if (const auto b = bounds.find(name); b != bounds.end()) {
        const auto parts = split(b->second, ':');
        if (parts.size() != 2) throw ConfigError(fmt::format("--bounds expects name=lo:hi (got '{}')", b->second));
        f.lower = parse_number(parts[0], "--bounds lower");
        f.upper = parse_number(parts[1], "--bounds upper");
      }
      problem.free.push_back(f);
    }
    for (const auto& [name, value] : inits) {
      if (std::none_of(problem.free.begin(), problem.free.end(),
                       [&](const FreeParam& f) { return to_string(f.which) == name; })) {
        throw ConfigError(fmt::format("--init {} does not name a free parameter", name));
      }
    }
    FitOptions options;
    options.max_iterations = o.max_iterations;
    if (o.common.tol_opt->count() > 0) options.rss_relative_tol = o.common.tol;
    result = fit_transmission(problem, options);
    x_column = "omega_mhz";
  } else if (o.mode == "saturation") {
    constexpr std::array<std::string_view, 2> header{"power_dbm", "g_eff_mhz"};
    const auto table = csv::read_file(o.data, header);
    std::vector<SaturationSample> samples;
    for (const auto& row : table.rows) samples.push_back({row[0], row[1]});
    if (!loaded.calibration_c) throw ConfigError("saturation fit needs an initial --calibration");
    SaturationFitOptions options;
    options.initial_c = *loaded.calibration_c;
    if (o.common.tol_opt->count() > 0) options.log_tol = o.common.tol;
    result = fit_saturation(samples, loaded.params, options);
    x_column = "power_dbm";
  } else {
    throw ConfigError(fmt::format("--mode must be transmission or saturation (got '{}')", o.mode));
  }

  const auto dir = prepare_out_dir(o.common.out_dir);
  Sidecar meta(command, loaded, o.common.seed);
  meta.add("mode", o.mode).add("data", o.data);
  write_with_sidecar(dir / "fit_report.txt", meta, [&](std::ostream& f) { print_report(f, o.mode, result); });
  const std::array<std::string_view, 3> header{x_column, "observed", "predicted"};
  write_with_sidecar(dir / "fit_residuals.csv", meta, [&](std::ostream& f) {
    csv::write_header(f, header);
    for (const auto& r : result.residuals) {
      const std::array<double, 3> row{r.x, r.observed, r.predicted};
      csv::write_row(f, row);
    }
  });
  print_report(out, o.mode, result);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnon-polariton exceptional-point toolkit", "magpol"};
  app.set_version_flag("--version", MAGPOL_VERSION);
  app.require_subcommand(1);

  SpectrumOptions spec_opts;
  auto* spec_cmd = app.add_subcommand("spectrum", "Synthesize an |S21| spectrum");
  add_common(*spec_cmd, spec_opts.common);
  spec_cmd->add_option("--grid", spec_opts.grid, "start:stop:n in MHz")->capture_default_str();
  spec_opts.g_eff_opt = spec_cmd->add_option("--g-eff", spec_opts.g_eff, "Effective coupling (default g)");
  spec_opts.omega_m_opt = spec_cmd->add_option("--omega-m", spec_opts.omega_m, "Magnon frequency (default omega_c)");
  spec_cmd->add_option("--amplitude-scale", spec_opts.amplitude_scale, "Overall gain")->capture_default_str();
  spec_cmd->add_option("--noise", spec_opts.noise, "Relative Gaussian noise on |S21| (uses --seed)")
      ->capture_default_str();

  SweepOptions sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "Drive-power sweep of a three-subensemble scenario");
  add_common(*sweep_cmd, sweep_opts.common);
  sweep_cmd->add_option("--preset", sweep_opts.preset, "fig2b|fig4a..d|fig9a..d|custom")->required();
  sweep_cmd->add_option("--drive", sweep_opts.drive, "start_dbm:stop_dbm:n or u:start:stop:n")
      ->capture_default_str();
  sweep_cmd->add_option("--grid", sweep_opts.grid, "Spectrum grid start:stop:n (default resonant species +- 50)");
  sweep_cmd->add_flag("--no-spectra", sweep_opts.no_spectra, "Skip the per-point spectrum files");
  sweep_cmd->add_option("--ep-tol", sweep_opts.ep_tol, "EP coalescence and resonance tolerance")
      ->capture_default_str();
  sweep_cmd->add_option("--resonant", sweep_opts.resonant, "custom: species on resonance")->capture_default_str();
  sweep_cmd->add_option("--driven", sweep_opts.driven, "custom: driven species")->capture_default_str();
  sweep_cmd->add_option("--cross-relaxation", sweep_opts.cross_relaxation, "custom: on|off")->capture_default_str();
  sweep_opts.omega_zero_opt =
      sweep_cmd->add_option("--omega-zero", sweep_opts.omega_zero, "custom: s = 0 frequency (default omega_c)");

  EpOptions ep_opts;
  auto* ep_cmd = app.add_subcommand("ep", "Locate the exceptional point");
  add_common(*ep_cmd, ep_opts.common);
  ep_cmd->add_option("--delta-c", ep_opts.delta_c, "Drive-resonator detuning")->capture_default_str();
  ep_cmd->add_option("--delta-s", ep_opts.delta_s, "Drive-spin detuning")->capture_default_str();

  FitCliOptions fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a transmission spectrum or a saturation curve");
  add_common(*fit_cmd, fit_opts.common);
  fit_cmd->add_option("--mode", fit_opts.mode, "transmission|saturation")->capture_default_str();
  fit_cmd->add_option("--data", fit_opts.data, "Input CSV")->required();
  fit_cmd->add_option("--free", fit_opts.free, "Comma-separated free parameters")->capture_default_str();
  fit_cmd->add_option("--init", fit_opts.init, "name=value initial guess");
  fit_cmd->add_option("--bounds", fit_opts.bounds, "name=lo:hi bounds");
  fit_cmd->add_option("--max-iter", fit_opts.max_iterations, "Iteration cap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = command_line(argc, argv);
  try {
    if (*spec_cmd) return cmd_spectrum(spec_opts, command, out);
    if (*sweep_cmd) return cmd_sweep(sweep_opts, command, out);
    if (*ep_cmd) return cmd_ep(ep_opts, out);
    if (*fit_cmd) return cmd_fit(fit_opts, command, out);
  } catch (const NoExceptionalPointError& e) {
    fmt::print(err, "magpol: {}\n", e.what());
    return kExitPhysics;
  } catch (const DomainError& e) {
    fmt::print(err, "magpol: {}\n", e.what());
    return kExitPhysics;
  } catch (const DegenerateInputError& e) {
    fmt::print(err, "magpol: {}\n", e.what());
    return kExitPhysics;
  } catch (const Error& e) {
    fmt::print(err, "magpol: {}\n", e.what());
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    fmt::print(err, "magpol: {}\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace magpol::cli
