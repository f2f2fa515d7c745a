#pragma once

// Self-consistent steady-state magnon occupation of a driven subensemble.
//
// With eta = g^2 (1 - 2 chi) / (Delta_c^2 + kappa^2) and xi = (1 - 2 chi) / (1 - chi),
// the mean-field Langevin steady state obeys
//
//   [(Delta_s - eta Delta_c)^2 + (gamma + eta kappa)^2] chi - xi eta u^2 = 0,
//
// where u = Omega_d / sqrt(N) is the reduced drive amplitude. The solver works with
// that left-hand side multiplied by (1 - chi), which removes the xi pole and keeps the
// residual finite on the closed interval chi in [0, 1/2]:
//
//   G(chi) = [(Delta_s - eta Delta_c)^2 + (gamma + eta kappa)^2] chi (1 - chi)
//            - g^2 (1 - 2 chi)^2 u^2 / (Delta_c^2 + kappa^2).
//
// G(0) <= 0 and G(1/2) > 0, so a root is always bracketed.

#include <cstddef>
#include <span>
#include <vector>

#include "magpol/core_model.hpp"

namespace magpol {

/// Detunings from the drive: Delta_c = omega_c - omega_d, Delta_s = omega_s - omega_d.
struct DetuningPair {
  double delta_c = 0.0;
  double delta_s = 0.0;
};

struct OccupationSolution {
  double chi = 0.0;       ///< <b^dagger b> / N, in [0, 1/2)
  double g_eff = 0.0;     ///< g sqrt(1 - 2 chi)
  double residual = 0.0;  ///< |G(chi)| at the returned root
  double xi = 1.0;
  double eta = 0.0;
  /// More than one sign change of G was seen on the coarse scan; the smallest root
  /// (the branch connected to the undriven state) was returned.
  bool multiple_roots = false;
};

struct SolverOptions {
  double tol = 1e-12;            ///< final bracket width relative to chi (never wider than tol absolute)
  std::size_t scan_points = 1024;
};

/// G(chi) above. Throws DomainError for chi outside [0, 1/2].
[[nodiscard]] double chi_residual(double chi, double u, const DetuningPair& det, const HybridParams& params);

/// Resonant form (gamma + eta kappa)^2 chi - xi eta u^2 with eta = g_eff^2 / kappa^2,
/// multiplied by (1 - chi). Equals chi_residual at zero detuning.
[[nodiscard]] double driving_residual(double chi, double u, const HybridParams& params);

/// Smallest root of G on [0, 1/2] by coarse scan plus bisection. u = 0 gives chi = 0.
/// Throws DomainError for u < 0.
[[nodiscard]] OccupationSolution solve_chi(double u, const DetuningPair& det, const HybridParams& params,
                                           const SolverOptions& options = {});

/// g sqrt(1 - 2 chi). Throws DomainError for chi outside [0, 1/2].
[[nodiscard]] double g_eff_from_chi(double chi, double g);

/// Occupation chi_EP at which 2 g_eff = gamma - kappa, and the drive amplitude that
/// produces it.
struct EpDrive {
  double chi = 0.0;
  double u = 0.0;
};

/// Closed-form inversion of G at chi_EP = (1 - ((gamma - kappa) / 2g)^2) / 2.
/// Throws NoExceptionalPointError when gamma <= kappa or g <= (gamma - kappa)/2.
[[nodiscard]] EpDrive ep_drive_amplitude(const DetuningPair& det, const HybridParams& params);

/// u^2 that makes `chi` a root of G (the algebraic inverse used by ep_drive_amplitude).
[[nodiscard]] double drive_squared_for_chi(double chi, const DetuningPair& det, const HybridParams& params);

struct SaturationPoint {
  double u = 0.0;
  OccupationSolution solution;
};
using SaturationCurve = std::vector<SaturationPoint>;

/// solve_chi at every amplitude. `u_values` must be ascending (PreconditionError
/// otherwise). Points are independent; with jobs > 1 they are solved on worker
/// threads and returned in input order.
[[nodiscard]] SaturationCurve saturation_sweep(std::span<const double> u_values, const DetuningPair& det,
                                               const HybridParams& params, const SolverOptions& options = {},
                                               unsigned jobs = 1);

}  // namespace magpol
