#include "magpol/multiensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "magpol/csv.hpp"
#include "magpol/errors.hpp"
#include "parallel.hpp"

namespace magpol {

EnsembleScenario EnsembleScenario::anchored(std::string name, double omega_c, SpinSpecies anchor,
                                            double omega_anchor, double a_parallel, SpinSpecies resonant,
                                            SpinSpecies driven, CrossRelaxation cross_relaxation) {
  EnsembleScenario s;
  s.name = std::move(name);
  s.omega_c = omega_c;
  s.omega_zero = omega_anchor - nuclear_projection(anchor) * a_parallel;
  s.a_parallel = a_parallel;
  s.resonant = resonant;
  s.driven = driven;
  s.cross_relaxation = cross_relaxation;
  return s;
}

PerSpecies<double> EnsembleScenario::frequencies() const noexcept {
  PerSpecies<double> out;
  for (auto s : kAllSpecies) out[s] = frequency(s);
  return out;
}

void EnsembleScenario::validate() const {
  if (!std::isfinite(omega_c) || !std::isfinite(omega_zero)) {
    throw ConfigError(fmt::format("scenario '{}': frequencies must be finite", name));
  }
  if (!(a_parallel >= 0.0) || !std::isfinite(a_parallel)) {
    throw ConfigError(fmt::format("scenario '{}': a_parallel must be finite and >= 0", name));
  }
}

OccupationTriple occupations(const EnsembleScenario& scenario, double u, const HybridParams& params,
                             const SolverOptions& options) {
  const double chi = solve_chi(u, scenario.drive_detunings(), params, options).chi;
  OccupationTriple out;
  for (auto s : kAllSpecies) {
    out[s] = (scenario.cross_relaxation == CrossRelaxation::On || s == scenario.driven) ? chi : 0.0;
  }
  return out;
}

ShiftedCavity dispersive_shift(const EnsembleScenario& scenario, const OccupationTriple& occs, double g) {
  ShiftedCavity out;
  double total = 0.0;
  for (auto s : kAllSpecies) {
    if (s == scenario.resonant) continue;
    const double delta = scenario.detuning(s);
    if (delta == 0.0) {
      throw DegenerateInputError(
          fmt::format("species {} is not the resonant species but sits on the resonator", to_string(s)));
    }
    const double g_eff = g_eff_from_chi(occs[s], g);
    if (std::abs(delta) <= g_eff) {
      out.warnings.push_back(fmt::format("species {}: |detuning| {} <= g_eff {}, outside the dispersive regime",
                                         to_string(s), std::abs(delta), g_eff));
    }
    out.contributions[s] = g_eff * g_eff / delta;
    total += out.contributions[s];
  }
  out.omega_c_tilde = scenario.omega_c + total;
  return out;
}

DriveAxis DriveAxis::amplitudes(double start, double stop, std::size_t n) {
  if (!(start >= 0.0) || !std::isfinite(stop) || stop < start || n == 0 || (n > 1 && stop == start)) {
    throw ConfigError(fmt::format("bad drive amplitude range {}:{}:{}", start, stop, n));
  }
  DriveAxis axis;
  axis.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    axis.u[i] = n == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) axis.u.back() = stop;
  return axis;
}

DriveAxis DriveAxis::powers(double start_dbm, double stop_dbm, std::size_t n, double calibration_c) {
  if (!std::isfinite(start_dbm) || !std::isfinite(stop_dbm) || stop_dbm < start_dbm || n == 0 ||
      (n > 1 && stop_dbm == start_dbm)) {
    throw ConfigError(fmt::format("bad drive power range {}:{}:{}", start_dbm, stop_dbm, n));
  }
  DriveAxis axis;
  axis.u.resize(n);
  axis.power_dbm.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dbm = start_dbm;
    if (n > 1) {
      dbm = i + 1 == n ? stop_dbm
                       : start_dbm + (stop_dbm - start_dbm) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    axis.power_dbm[i] = dbm;
    axis.u[i] = drive_amplitude(DriveSpec{0.0, DrivePower{dbm}, calibration_c});
  }
  axis.calibration_c = calibration_c;
  return axis;
}

namespace {

HybridParams scenario_params(const EnsembleScenario& scenario, HybridParams params) {
  params.omega_c = scenario.omega_c;
  return params;
}

}  // namespace

ScenarioSweep scenario_sweep(const EnsembleScenario& scenario, const HybridParams& base, const DriveAxis& drive,
                             const std::optional<FrequencyGrid>& grid, const SolverOptions& options,
                             unsigned jobs) {
  scenario.validate();
  if (drive.has_power() && drive.power_dbm.size() != drive.u.size()) {
    throw PreconditionError("drive axis power and amplitude lengths differ");
  }
  if (!std::is_sorted(drive.u.begin(), drive.u.end())) {
    throw PreconditionError("scenario_sweep needs drive amplitudes in ascending order");
  }
  if (grid) grid->validate();

  ScenarioSweep sweep{scenario, scenario_params(scenario, base), drive.calibration_c, {}};
  sweep.points.resize(drive.size());
  const HybridParams& params = sweep.params;
  const double omega_m = scenario.frequency(scenario.resonant);

  detail::parallel_for(drive.size(), jobs, [&](std::size_t i) {
    SweepPoint& p = sweep.points[i];
    p.u = drive.u[i];
    if (drive.has_power()) p.power_dbm = drive.power_dbm[i];
    p.occupations = occupations(scenario, p.u, params, options);
    p.g_eff = g_eff_from_chi(p.occupations[scenario.resonant], params.g);
    p.cavity = dispersive_shift(scenario, p.occupations, params.g);

    HybridParams shifted = params;
    shifted.omega_c = p.cavity.omega_c_tilde;
    p.modes = eigenvalues(TwoModeHamiltonian::resonator_magnon(shifted, omega_m, p.g_eff));
    if (grid) p.spectrum = spectrum(TransmissionModel{shifted, omega_m, p.g_eff, 1.0}, *grid);
  });
  return sweep;
}

EpVerdict ep_present(const ScenarioSweep& sweep, double epsilon, const SolverOptions& options) {
  EpVerdict verdict;
  const auto& sc = sweep.scenario;
  const auto& params = sweep.params;
  const auto& pts = sweep.points;
  const double target = params.gamma - params.kappa();
  const double omega_res = sc.frequency(sc.resonant);

  auto coupling_at = [&](double u) {
    return g_eff_from_chi(occupations(sc, u, params, options)[sc.resonant], params.g);
  };
  auto accept = [&](double u, std::size_t index) {
    const auto occs = occupations(sc, u, params, options);
    const double g_eff = g_eff_from_chi(occs[sc.resonant], params.g);
    const double tilde = dispersive_shift(sc, occs, params.g).omega_c_tilde;
    if (std::abs(2.0 * g_eff - target) > epsilon || std::abs(tilde - omega_res) > epsilon) return false;
    verdict.present = true;
    verdict.u = u;
    verdict.chi = occs[sc.driven];
    verdict.bracket_index = index;
    return true;
  };

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double f_i = 2.0 * pts[i].g_eff - target;
    if (std::abs(f_i) <= epsilon && accept(pts[i].u, i)) break;
    if (i + 1 == pts.size()) break;
    const double f_next = 2.0 * pts[i + 1].g_eff - target;
    if ((f_i > 0.0) == (f_next > 0.0)) continue;

    double lo = pts[i].u;
    double hi = pts[i + 1].u;
    const bool lo_positive = f_i > 0.0;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
      mid = 0.5 * (lo + hi);
      const double f_mid = 2.0 * coupling_at(mid) - target;
      if (std::abs(f_mid) <= 0.25 * epsilon || mid <= lo || mid >= hi) break;
      if ((f_mid > 0.0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (accept(mid, i)) break;
  }

  if (verdict.present && sweep.calibration_c && verdict.u > 0.0) {
    const double root_watts = verdict.u / *sweep.calibration_c;
    verdict.power_dbm = watts_to_dbm(root_watts * root_watts);
  }
  return verdict;
}

void write_sweep_csv(std::ostream& out, const ScenarioSweep& sweep) {
  constexpr std::array<std::string_view, 9> header{"drive_u_mhz", "power_dbm", "chi",   "g_eff_mhz", "omega_c_tilde_mhz",
                                                   "re_w1",       "re_w2",     "im_w1", "im_w2"};
  csv::write_header(out, header);
  for (const auto& p : sweep.points) {
    const std::array<double, 9> row{p.u,
                                    p.power_dbm.value_or(std::numeric_limits<double>::quiet_NaN()),
                                    p.occupations[sweep.scenario.driven],
                                    p.g_eff,
                                    p.cavity.omega_c_tilde,
                                    p.modes.omega1.real(),
                                    p.modes.omega2.real(),
                                    p.modes.omega1.imag(),
                                    p.modes.omega2.imag()};
    csv::write_row(out, row);
  }
}

const std::vector<std::string_view>& scenario_preset_names() {
  static const std::vector<std::string_view> names{"fig2b", "fig4a", "fig4b", "fig4c", "fig4d",
                                                   "fig9a", "fig9b", "fig9c", "fig9d"};
  return names;
}

EnsembleScenario scenario_preset(std::string_view name, const HybridParams& params) {
  using S = SpinSpecies;
  constexpr auto on = CrossRelaxation::On;
  const double a = params.a_parallel;
  auto centred = [&](S driven) {
    return EnsembleScenario::anchored(std::string(name), params.omega_c, S::Zero, params.omega_c, a, S::Zero,
                                      driven, on);
  };
  // Field set so omega_+ = 3106 with omega_c = 3095.
  auto plus_side = [&](S driven) {
    return EnsembleScenario::anchored(std::string(name), 3095.0, S::Plus, 3106.0, a, S::Plus, driven, on);
  };
  // Field set so omega_- = 3080 with omega_c = 3090.
  auto minus_side = [&](S driven) {
    return EnsembleScenario::anchored(std::string(name), 3090.0, S::Minus, 3080.0, a, S::Minus, driven, on);
  };

  if (name == "fig2b") return centred(S::Zero);
  if (name == "fig4a") return centred(S::Plus);
  if (name == "fig4b") return centred(S::Minus);
  if (name == "fig4c") return plus_side(S::Plus);
  if (name == "fig4d") return minus_side(S::Minus);
  if (name == "fig9a") return plus_side(S::Zero);
  if (name == "fig9b") return plus_side(S::Minus);
  if (name == "fig9c") return minus_side(S::Zero);
  if (name == "fig9d") return minus_side(S::Plus);
  throw ConfigError(fmt::format("unknown scenario preset '{}'", name));
}

}  // namespace magpol
