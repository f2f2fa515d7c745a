#pragma once

// Three hyperfine subensembles (s = -, 0, +) sharing one resonator.
//
// One species is tuned near the resonator and forms the polariton pair; the other
// two sit far off resonance and only pull the resonator frequency,
//
//   omega_c~ = omega_c + sum_{s non-resonant} g_eff,s^2 / (omega_c - omega_s).
//
// The driven species saturates according to the steady-state solver; cross
// relaxation either copies its occupation to all three species or leaves the others
// unexcited.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "magpol/core_model.hpp"
#include "magpol/inputoutput.hpp"
#include "magpol/nonhermitian.hpp"
#include "magpol/steadystate.hpp"

namespace magpol {

enum class CrossRelaxation { On, Off };

/// Species frequencies are stored as a hyperfine ladder omega_s = omega_zero + s A_par,
/// so omega_+ - omega_0 = omega_0 - omega_- = A_par holds by construction.
struct EnsembleScenario {
  std::string name;
  double omega_c = 0.0;     ///< bare resonator frequency for this field setting
  double omega_zero = 0.0;  ///< s = 0 transition
  double a_parallel = 0.0;
  SpinSpecies resonant = SpinSpecies::Zero;
  SpinSpecies driven = SpinSpecies::Zero;
  CrossRelaxation cross_relaxation = CrossRelaxation::On;

  /// Ladder anchored so that species `anchor` sits at `omega_anchor`.
  [[nodiscard]] static EnsembleScenario anchored(std::string name, double omega_c, SpinSpecies anchor,
                                                 double omega_anchor, double a_parallel, SpinSpecies resonant,
                                                 SpinSpecies driven, CrossRelaxation cross_relaxation);

  [[nodiscard]] double frequency(SpinSpecies s) const noexcept {
    return omega_zero + nuclear_projection(s) * a_parallel;
  }
  [[nodiscard]] PerSpecies<double> frequencies() const noexcept;

  /// omega_c - omega_s, evaluated as (omega_c - omega_zero) - s A_par so that
  /// delta_+ = -delta_- exactly whenever omega_c = omega_zero.
  [[nodiscard]] double detuning(SpinSpecies s) const noexcept {
    return (omega_c - omega_zero) - nuclear_projection(s) * a_parallel;
  }

  /// Detunings seen by the driven species: Delta_c = omega_c - omega_d, Delta_s = 0.
  [[nodiscard]] DetuningPair drive_detunings() const noexcept { return {detuning(driven), 0.0}; }

  /// Throws ConfigError for non-finite frequencies or A_par < 0.
  void validate() const;
};

using OccupationTriple = PerSpecies<double>;

/// Occupations at reduced drive amplitude u. Throws DomainError for u < 0.
[[nodiscard]] OccupationTriple occupations(const EnsembleScenario& scenario, double u,
                                           const HybridParams& params, const SolverOptions& options = {});

struct ShiftedCavity {
  double omega_c_tilde = 0.0;
  PerSpecies<double> contributions{};  ///< zero for the resonant species
  std::vector<std::string> warnings;   ///< dispersive-regime violations, |delta_s| <= g_eff,s
};

/// Dispersive pull of the non-resonant species. The contributions are summed first
/// and then added to omega_c. Throws DegenerateInputError when a non-resonant species
/// has zero detuning.
[[nodiscard]] ShiftedCavity dispersive_shift(const EnsembleScenario& scenario, const OccupationTriple& occs,
                                             double g);

/// Drive levels of a sweep. power_dbm is either empty or the same length as u.
struct DriveAxis {
  std::vector<double> u;
  std::vector<double> power_dbm;
  std::optional<double> calibration_c;  ///< set by powers()

  /// n evenly spaced amplitudes on [start, stop]. Throws ConfigError on a bad range.
  [[nodiscard]] static DriveAxis amplitudes(double start, double stop, std::size_t n);
  /// n evenly spaced powers (dBm) mapped through u = c sqrt(P[W]).
  [[nodiscard]] static DriveAxis powers(double start_dbm, double stop_dbm, std::size_t n, double calibration_c);

  [[nodiscard]] std::size_t size() const noexcept { return u.size(); }
  [[nodiscard]] bool has_power() const noexcept { return !power_dbm.empty(); }
};

struct SweepPoint {
  double u = 0.0;
  std::optional<double> power_dbm;
  OccupationTriple occupations{};
  double g_eff = 0.0;  ///< coupling of the resonant species
  ShiftedCavity cavity;
  EigenPair modes;     ///< eigenvalues with omega_c replaced by omega_c~
  Spectrum spectrum;   ///< empty values when the sweep ran without a grid
};

struct ScenarioSweep {
  EnsembleScenario scenario;
  HybridParams params;  ///< omega_c already replaced by scenario.omega_c
  std::optional<double> calibration_c;
  std::vector<SweepPoint> points;
};

/// Occupations, dispersive shift, eigenvalues and (if `grid` is set) the |S21| spectrum
/// at every drive level. `drive.u` must be ascending. Points are computed on up to
/// `jobs` threads and returned in drive order.
[[nodiscard]] ScenarioSweep scenario_sweep(const EnsembleScenario& scenario, const HybridParams& params,
                                           const DriveAxis& drive, const std::optional<FrequencyGrid>& grid,
                                           const SolverOptions& options = {}, unsigned jobs = 1);

struct EpVerdict {
  bool present = false;
  double u = 0.0;                    ///< refined coalescence amplitude
  std::optional<double> power_dbm;   ///< when the sweep carried a calibration
  double chi = 0.0;
  std::size_t bracket_index = 0;     ///< sweep point at or just below the coalescence
};

/// Looks for a drive level where 2 g_eff = gamma - kappa and omega_c~ = omega_resonant,
/// both within `epsilon`. Sign changes of 2 g_eff - (gamma - kappa) between adjacent
/// points are refined by bisection in u before the resonance test. Returns the first
/// qualifying crossing.
[[nodiscard]] EpVerdict ep_present(const ScenarioSweep& sweep, double epsilon = 1e-6,
                                   const SolverOptions& options = {});

/// Sweep table `drive_u_mhz,power_dbm,chi,g_eff_mhz,omega_c_tilde_mhz,re_w1,re_w2,im_w1,im_w2`.
/// chi is the driven species' occupation; power_dbm is nan without a power axis.
void write_sweep_csv(std::ostream& out, const ScenarioSweep& sweep);

/// Named geometries: fig2b, fig4a, fig4b, fig4c, fig4d, fig9a, fig9b, fig9c, fig9d.
/// fig2b/4a/4b use params.omega_c with the s = 0 species on resonance; the others use
/// the field settings with omega_+ = 3106, omega_c = 3095 (c, 9a, 9b) and
/// omega_- = 3080, omega_c = 3090 (d, 9c, 9d). Throws ConfigError for an unknown name.
[[nodiscard]] EnsembleScenario scenario_preset(std::string_view name, const HybridParams& params);

[[nodiscard]] const std::vector<std::string_view>& scenario_preset_names();

}  // namespace magpol
