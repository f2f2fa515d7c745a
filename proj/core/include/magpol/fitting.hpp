#pragma once

// Least-squares extraction of model parameters from |S21| spectra and of the drive
// calibration c from saturation curves g_eff(P_d).

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "magpol/core_model.hpp"
#include "magpol/inputoutput.hpp"
#include "magpol/steadystate.hpp"

namespace magpol {

enum class FitParam { Kappa, Gamma, GEff, OmegaC, OmegaM, AmplitudeScale, CalibrationC };

[[nodiscard]] std::string_view to_string(FitParam p) noexcept;
/// Accepts the to_string spellings (kappa, gamma, g_eff, omega_c, omega_m,
/// amplitude_scale, calibration_c). Throws ConfigError otherwise.
[[nodiscard]] FitParam parse_fit_param(std::string_view text);

struct FreeParam {
  FitParam which = FitParam::GEff;
  double initial = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct SpectrumSample {
  double omega = 0.0;
  double s21_abs = 0.0;
};

struct FitProblem {
  std::vector<SpectrumSample> data;
  std::vector<FreeParam> free;
  /// Supplies every parameter not listed in `free`. A free kappa is applied through
  /// HybridParams::with_total_kappa, keeping kappa_int.
  TransmissionModel fixed;

  /// Throws ConfigError when there are fewer than 2 data points per free parameter,
  /// when a parameter is listed twice or is CalibrationC, or when bounds are not
  /// finite and ordered.
  void validate() const;
};

struct FitOptions {
  double fd_relative_step = 1e-6;
  double rss_relative_tol = 1e-10;
  double step_tol = 1e-10;
  int max_iterations = 500;
  double initial_damping = 1e-3;
  double simplex_condition = 1e12;  ///< Jacobian condition number that hands over to Nelder-Mead
};

struct FitResidual {
  double x = 0.0;
  double observed = 0.0;
  double predicted = 0.0;
};

struct FitResult {
  std::vector<std::pair<FitParam, double>> estimates;
  double rss = 0.0;
  int n_iterations = 0;
  bool converged = false;
  double jacobian_condition = 0.0;
  bool used_simplex = false;
  /// "at_lower_bound:<name>", "at_upper_bound:<name>", "ill_conditioned", "max_iterations".
  std::vector<std::string> flags;
  std::vector<FitResidual> residuals;  ///< sorted by x

  /// Throws PreconditionError if `p` was not a free parameter.
  [[nodiscard]] double estimate(FitParam p) const;
  [[nodiscard]] bool has_flag(std::string_view flag) const;
};

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt diagonal scaling) on
/// sum_i (|s21(model, omega_i)| - y_i)^2. Central finite-difference Jacobian; damping
/// times 2 on a rejected step, divided by 3 on an accepted one; stops on relative RSS
/// change or relative step below tolerance, or after max_iterations. Steps are
/// projected onto the bounds. Data are sorted internally, so the result does not
/// depend on input order.
[[nodiscard]] FitResult fit_transmission(const FitProblem& problem, const FitOptions& options = {});

/// Model evaluated at a set of free-parameter values.
[[nodiscard]] TransmissionModel apply_parameters(const TransmissionModel& base, std::span<const FreeParam> free,
                                                 std::span<const double> values);

struct SaturationSample {
  double power_dbm = 0.0;
  double g_eff = 0.0;
};

struct SaturationFitOptions {
  double initial_c = 1.0;
  double bracket = 1e6;       ///< search c in [initial/bracket, initial*bracket]
  int scan_points = 241;      ///< coarse log-spaced scan before golden-section refinement
  double log_tol = 1e-12;     ///< final bracket width in ln c
  DetuningPair detuning{};    ///< drive detunings; resonant by default
  SolverOptions solver{};
};

/// Fits the calibration c (u = c sqrt(P[W])) by predicting g_eff through solve_chi.
/// A log-spaced scan locates the best region, then golden-section search on ln c
/// refines it. Throws PreconditionError for fewer than 3 points or g_eff outside
/// (0, g], UnidentifiableError when all g_eff values are equal.
[[nodiscard]] FitResult fit_saturation(std::span<const SaturationSample> data, const HybridParams& params,
                                       const SaturationFitOptions& options = {});

/// g_eff predicted at `power_dbm` for calibration c.
[[nodiscard]] double predicted_g_eff(double power_dbm, double calibration_c, const HybridParams& params,
                                     const DetuningPair& detuning = {}, const SolverOptions& solver = {});

}  // namespace magpol
