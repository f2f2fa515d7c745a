#include "magpol/core_model.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "magpol/errors.hpp"

namespace magpol {

namespace {

void require_positive(double value, std::string_view name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw ConfigError(fmt::format("parameter '{}' must be finite and > 0 (got {})", name, value));
  }
}

}  // namespace

void HybridParams::validate() const {
  require_positive(omega_c, "omega_c");
  require_positive(kappa_i, "kappa_i");
  require_positive(kappa_o, "kappa_o");
  if (!(std::isfinite(kappa_int) && kappa_int >= 0.0)) {
    throw ConfigError(fmt::format("parameter 'kappa_int' must be finite and >= 0 (got {})", kappa_int));
  }
  require_positive(gamma, "gamma");
  if (!(std::isfinite(g) && g >= 0.0)) {
    throw ConfigError(fmt::format("parameter 'g' must be finite and >= 0 (got {})", g));
  }
  if (!(std::isfinite(a_parallel) && a_parallel >= 0.0)) {
    throw ConfigError(fmt::format("parameter 'a_parallel' must be finite and >= 0 (got {})", a_parallel));
  }
  require_positive(gamma_e, "gamma_e");
  if (n_spins && !(std::isfinite(*n_spins) && *n_spins >= 1.0)) {
    throw ConfigError(fmt::format("parameter 'n_spins' must be >= 1 (got {})", *n_spins));
  }
}

HybridParams HybridParams::with_total_kappa(double kappa, double intrinsic) const {
  if (!(kappa > intrinsic && intrinsic >= 0.0)) {
    throw ConfigError(fmt::format("total kappa {} must exceed kappa_int {}", kappa, intrinsic));
  }
  HybridParams out = *this;
  out.kappa_int = intrinsic;
  out.kappa_i = 0.5 * (kappa - intrinsic);
  out.kappa_o = out.kappa_i;
  return out;
}

HybridParams device_parameters() {
  HybridParams p;
  p.omega_c = 3093.0;
  p.gamma = 11.9;
  p.g = 17.2;
  p.a_parallel = 94.0;
  p.gamma_e = 28.0;
  return p.with_total_kappa(0.6);
}

std::string_view to_string(SpinSpecies s) noexcept {
  switch (s) {
    case SpinSpecies::Minus: return "minus";
    case SpinSpecies::Zero: return "zero";
    case SpinSpecies::Plus: return "plus";
  }
  return "?";
}

SpinSpecies parse_species(std::string_view text) {
  if (text == "minus" || text == "-") return SpinSpecies::Minus;
  if (text == "zero" || text == "0") return SpinSpecies::Zero;
  if (text == "plus" || text == "+") return SpinSpecies::Plus;
  throw ConfigError(fmt::format("unknown spin species '{}'", text));
}

void FrequencyGrid::validate() const {
  if (!(std::isfinite(start) && std::isfinite(stop) && start < stop)) {
    throw ConfigError(fmt::format("frequency grid needs start < stop (got {}:{})", start, stop));
  }
  if (n_points < 2) {
    throw ConfigError(fmt::format("frequency grid needs >= 2 points (got {})", n_points));
  }
}

PerSpecies<double> zeeman_frequencies(double b_field_mt, const HybridParams& params) {
  if (!(b_field_mt > 0.0) || !std::isfinite(b_field_mt)) {
    throw DomainError(fmt::format("magnetic field must be > 0 (got {} mT)", b_field_mt));
  }
  const double omega_zero = params.gamma_e * b_field_mt;
  PerSpecies<double> out;
  out[SpinSpecies::Minus] = omega_zero - params.a_parallel;
  out[SpinSpecies::Zero] = omega_zero;
  out[SpinSpecies::Plus] = omega_zero + params.a_parallel;
  return out;
}

double dbm_to_watts(double dbm) noexcept { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) {
    throw DomainError(fmt::format("power must be > 0 W to express in dBm (got {})", watts));
  }
  return 10.0 * std::log10(watts / 1e-3);
}

double calibration_k_theoretical(const HybridParams& params) {
  const double kappa_si = kTwoPi * 1e6 * params.kappa();
  const double omega_c_si = kTwoPi * 1e6 * params.omega_c;
  return std::sqrt(kappa_si / (2.0 * kHbar * omega_c_si));
}

double calibration_from_k(double k_si, const HybridParams& params) {
  if (!params.n_spins) {
    throw ConfigError("n_spins is required to convert k into a reduced calibration constant");
  }
  return k_si / (kTwoPi * 1e6 * std::sqrt(*params.n_spins));
}

double drive_amplitude(const DriveSpec& spec) {
  if (const auto* amp = std::get_if<DriveAmplitude>(&spec.level)) {
    if (!(amp->u >= 0.0)) {
      throw DomainError(fmt::format("drive amplitude must be >= 0 (got {})", amp->u));
    }
    return amp->u;
  }
  const auto& power = std::get<DrivePower>(spec.level);
  if (!spec.calibration_c) {
    throw ConfigError("drive given as power but no calibration_c is configured");
  }
  return *spec.calibration_c * std::sqrt(dbm_to_watts(power.dbm));
}

double reduced_amplitude(double rabi_omega_d, const HybridParams& params) {
  if (!params.n_spins) {
    throw ConfigError("n_spins is required to reduce an absolute drive amplitude");
  }
  return rabi_omega_d / std::sqrt(*params.n_spins);
}

}  // namespace magpol
