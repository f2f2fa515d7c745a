#include "magpol/steadystate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "magpol/errors.hpp"
#include "parallel.hpp"

namespace magpol {

namespace {

void require_chi_in_closed_half(double chi) {
  if (!(chi >= 0.0 && chi <= 0.5)) {
    throw DomainError(fmt::format("reduced occupation must lie in [0, 1/2] (got {})", chi));
  }
}

struct Terms {
  double eta;
  double xi;
};

Terms terms(double chi, const DetuningPair& det, const HybridParams& params) {
  const double kappa = params.kappa();
  const double depol = 1.0 - 2.0 * chi;
  return {params.g * params.g * depol / (det.delta_c * det.delta_c + kappa * kappa), depol / (1.0 - chi)};
}

// Unchecked G(chi); the public wrapper validates the domain.
double residual(double chi, double u, const DetuningPair& det, const HybridParams& params) {
  const double kappa = params.kappa();
  const double depol = 1.0 - 2.0 * chi;
  const double lorentz = det.delta_c * det.delta_c + kappa * kappa;
  const double eta = params.g * params.g * depol / lorentz;
  const double shift = det.delta_s - eta * det.delta_c;
  const double width = params.gamma + eta * kappa;
  return (shift * shift + width * width) * chi * (1.0 - chi) -
         params.g * params.g * depol * depol * u * u / lorentz;
}

}  // namespace

double chi_residual(double chi, double u, const DetuningPair& det, const HybridParams& params) {
  require_chi_in_closed_half(chi);
  return residual(chi, u, det, params);
}

double driving_residual(double chi, double u, const HybridParams& params) {
  require_chi_in_closed_half(chi);
  const double kappa = params.kappa();
  const double g_eff = g_eff_from_chi(chi, params.g);
  const double eta = g_eff * g_eff / (kappa * kappa);
  const double xi = (1.0 - 2.0 * chi) / (1.0 - chi);
  const double width = params.gamma + eta * kappa;
  return (width * width * chi - xi * eta * u * u) * (1.0 - chi);
}

double g_eff_from_chi(double chi, double g) {
  require_chi_in_closed_half(chi);
  return g * std::sqrt(1.0 - 2.0 * chi);
}

OccupationSolution solve_chi(double u, const DetuningPair& det, const HybridParams& params,
                             const SolverOptions& options) {
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw DomainError(fmt::format("drive amplitude must be finite and >= 0 (got {})", u));
  }
  OccupationSolution out;
  auto finish = [&](double chi) {
    const auto t = terms(chi, det, params);
    out.chi = chi;
    out.g_eff = g_eff_from_chi(chi, params.g);
    out.residual = std::abs(residual(chi, u, det, params));
    out.eta = t.eta;
    out.xi = t.xi;
    return out;
  };
  if (u == 0.0 || params.g == 0.0) return finish(0.0);

  const std::size_t n = std::max<std::size_t>(options.scan_points, 2);
  const auto node = [n](std::size_t k) { return k + 1 == n ? 0.5 : 0.5 * static_cast<double>(k) / static_cast<double>(n - 1); };

  // G(0) < 0 here; find the first node where G turns non-negative, counting every
  // further sign change for the multiplicity flag.
  std::size_t first = 0;
  int sign_changes = 0;
  double prev = residual(0.0, u, det, params);
  for (std::size_t k = 1; k < n; ++k) {
    const double cur = residual(node(k), u, det, params);
    if ((prev < 0.0) != (cur < 0.0)) {
      ++sign_changes;
      if (first == 0) first = k;
    }
    prev = cur;
  }
  out.multiple_roots = sign_changes > 1;
  if (first == 0) {
    // Only reachable when gamma = 0 and Delta_s = 0, where G(1/2) = 0.
    throw DomainError("steady-state residual has no sign change on [0, 1/2]");
  }

  double lo = node(first - 1);
  double hi = node(first);
  if (residual(hi, u, det, params) == 0.0 && hi < 0.5) return finish(hi);
  // Width relative to the root so tiny occupations at weak drive stay resolved.
  while (hi - lo > options.tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid, u, det, params) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double chi = 0.5 * (lo + hi);
  if (chi >= 0.5) chi = lo;
  return finish(chi);
}

double drive_squared_for_chi(double chi, const DetuningPair& det, const HybridParams& params) {
  if (!(chi >= 0.0 && chi < 0.5)) {
    throw DomainError(fmt::format("target occupation must lie in [0, 1/2) (got {})", chi));
  }
  const double kappa = params.kappa();
  const double depol = 1.0 - 2.0 * chi;
  const double lorentz = det.delta_c * det.delta_c + kappa * kappa;
  const double eta = params.g * params.g * depol / lorentz;
  const double shift = det.delta_s - eta * det.delta_c;
  const double width = params.gamma + eta * kappa;
  return (shift * shift + width * width) * chi * (1.0 - chi) * lorentz /
         (params.g * params.g * depol * depol);
}

EpDrive ep_drive_amplitude(const DetuningPair& det, const HybridParams& params) {
  const double kappa = params.kappa();
  if (!(params.gamma > kappa)) {
    throw NoExceptionalPointError(
        fmt::format("no EP: gamma ({}) must exceed kappa ({})", params.gamma, kappa));
  }
  const double g_ep = 0.5 * (params.gamma - kappa);
  if (params.g < g_ep) {
    throw NoExceptionalPointError(fmt::format(
        "EP not reachable by driving: bare coupling {} is already below (gamma - kappa)/2 = {}", params.g, g_ep));
  }
  const double ratio = g_ep / params.g;
  const double chi = 0.5 * (1.0 - ratio * ratio);
  if (chi == 0.0) return {0.0, 0.0};
  return {chi, std::sqrt(drive_squared_for_chi(chi, det, params))};
}

SaturationCurve saturation_sweep(std::span<const double> u_values, const DetuningPair& det,
                                 const HybridParams& params, const SolverOptions& options, unsigned jobs) {
  if (!std::is_sorted(u_values.begin(), u_values.end())) {
    throw PreconditionError("saturation_sweep needs drive amplitudes in ascending order");
  }
  SaturationCurve curve(u_values.size());
  detail::parallel_for(u_values.size(), jobs, [&](std::size_t i) {
    curve[i] = {u_values[i], solve_chi(u_values[i], det, params, options)};
  });
  return curve;
}

}  // namespace magpol
