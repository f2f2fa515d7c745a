#pragma once

// Physical parameter model shared by every module.
//
// Unit convention: all frequencies and rates are stored as f/2pi in MHz, i.e. the
// number 17.2 stands for an angular frequency of 2pi x 17.2 MHz. Only
// calibration_k_theoretical() crosses into SI units; the time-domain routines in
// nonhermitian.hpp multiply by 2pi themselves and take time in microseconds.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>

namespace magpol {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kHbar = 1.054571817e-34;  // J s

/// Full parameter set of the resonator plus spin-ensemble system.
struct HybridParams {
  double omega_c = 0.0;    ///< bare resonator frequency
  double kappa_i = 0.0;    ///< input-port decay rate
  double kappa_o = 0.0;    ///< output-port decay rate
  double kappa_int = 0.0;  ///< intrinsic resonator loss
  double gamma = 0.0;      ///< magnon damping rate (HWHM)
  double g = 0.0;          ///< collective bare coupling per subensemble
  double a_parallel = 0.0; ///< hyperfine splitting A_par
  double gamma_e = 0.0;    ///< gyromagnetic ratio, MHz per mT
  /// Spins per subensemble. Never defaulted: only u = Omega_d / sqrt(N) enters the
  /// physics, so N is needed only when converting absolute drive amplitudes.
  std::optional<double> n_spins;

  /// Total resonator decay kappa = kappa_i + kappa_o + kappa_int.
  [[nodiscard]] double kappa() const noexcept { return kappa_i + kappa_o + kappa_int; }

  /// Throws ConfigError when a rate or frequency is not strictly positive
  /// (kappa_int may be zero) or when n_spins is set but < 1.
  void validate() const;

  /// Same parameters with the resonator decay replaced by a total `kappa`, split
  /// evenly between the two ports after removing `kappa_int`.
  [[nodiscard]] HybridParams with_total_kappa(double kappa, double kappa_int = 0.0) const;
};

/// Values quoted for the P1-centre / coplanar-resonator device: omega_c = 3093,
/// kappa = 0.6 (kappa_i = kappa_o = 0.3), gamma = 11.9, g = 17.2, A_par = 94,
/// gamma_e = 28 MHz/mT. n_spins is left unset.
[[nodiscard]] HybridParams device_parameters();

enum class SpinSpecies { Minus = 0, Zero = 1, Plus = 2 };

inline constexpr std::array<SpinSpecies, 3> kAllSpecies{SpinSpecies::Minus, SpinSpecies::Zero,
                                                        SpinSpecies::Plus};

/// Nuclear projection s in {-1, 0, +1}.
[[nodiscard]] constexpr int nuclear_projection(SpinSpecies s) noexcept {
  return static_cast<int>(s) - 1;
}

[[nodiscard]] std::string_view to_string(SpinSpecies s) noexcept;
/// Accepts "minus"/"-", "zero"/"0", "plus"/"+". Throws ConfigError otherwise.
[[nodiscard]] SpinSpecies parse_species(std::string_view text);

/// Fixed-size map keyed by SpinSpecies.
template <class T>
struct PerSpecies {
  std::array<T, 3> values{};

  constexpr T& operator[](SpinSpecies s) noexcept { return values[static_cast<std::size_t>(s)]; }
  constexpr const T& operator[](SpinSpecies s) const noexcept {
    return values[static_cast<std::size_t>(s)];
  }
  friend constexpr bool operator==(const PerSpecies&, const PerSpecies&) = default;
};

struct DrivePower {
  double dbm = 0.0;
};
struct DriveAmplitude {
  double u = 0.0;  ///< reduced amplitude Omega_d / sqrt(N)
};

/// A drive tone. Exactly one of power or reduced amplitude is authoritative.
struct DriveSpec {
  double omega_d = 0.0;
  std::variant<DrivePower, DriveAmplitude> level = DriveAmplitude{};
  /// c = k / sqrt(N): maps sqrt(P [W]) to u. Required when `level` holds a power.
  std::optional<double> calibration_c;
};

/// Uniform frequency grid, both endpoints included.
struct FrequencyGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t n_points = 0;

  /// Throws ConfigError unless start < stop (both finite) and n_points >= 2.
  void validate() const;
  [[nodiscard]] double step() const noexcept {
    return (stop - start) / static_cast<double>(n_points - 1);
  }
  [[nodiscard]] double at(std::size_t i) const noexcept {
    return i + 1 == n_points ? stop : start + static_cast<double>(i) * step();
  }
};

/// Transition frequencies omega_0 = gamma_e B and omega_+- = gamma_e B +- A_par.
/// `b_field_mt` in mT. Throws DomainError for a non-positive field.
[[nodiscard]] PerSpecies<double> zeeman_frequencies(double b_field_mt, const HybridParams& params);

[[nodiscard]] double dbm_to_watts(double dbm) noexcept;
[[nodiscard]] double watts_to_dbm(double watts);

/// Theoretical drive calibration k = sqrt(kappa / (2 hbar omega_c)) in rad s^-1 W^-1/2.
[[nodiscard]] double calibration_k_theoretical(const HybridParams& params);

/// c = k / sqrt(N), expressed in (2pi MHz) per sqrt(W). Needs params.n_spins.
[[nodiscard]] double calibration_from_k(double k_si, const HybridParams& params);

/// Reduced amplitude u for a drive spec.
[[nodiscard]] double drive_amplitude(const DriveSpec& spec);

/// u = Omega_d / sqrt(N) for an absolute Rabi frequency Omega_d (2pi MHz). Needs params.n_spins.
[[nodiscard]] double reduced_amplitude(double rabi_omega_d, const HybridParams& params);

}  // namespace magpol
