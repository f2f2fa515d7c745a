#pragma once

// Transmission of the resonator with one coupled magnon mode,
//
//   S21(w) = 2 sqrt(kappa_i kappa_o) / [kappa + i(omega_c - w) + g_eff^2 / (gamma + i(omega_m - w))],
//
// plus sampling on a grid and peak/linewidth extraction. Linewidths are half widths at
// half maximum of the transmitted power |S21|^2, i.e. where |S21| falls to 1/sqrt(2) of
// the peak.

#include <complex>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "magpol/core_model.hpp"

namespace magpol {

struct TransmissionModel {
  HybridParams params;
  double omega_m = 0.0;          ///< frequency of the coupled magnon mode
  double g_eff = 0.0;
  double amplitude_scale = 1.0;  ///< overall gain of the measurement chain

  /// Resonant model omega_m = omega_c with the bare coupling g.
  [[nodiscard]] static TransmissionModel resonant(const HybridParams& params);

  /// Throws ConfigError for g_eff < 0 or amplitude_scale <= 0.
  void validate() const;
};

[[nodiscard]] std::complex<double> s21(const TransmissionModel& model, double omega);

struct Spectrum {
  FrequencyGrid grid;
  std::vector<double> values;  ///< |S21| per grid point
  std::map<std::string, double> metadata;

  [[nodiscard]] double omega(std::size_t i) const noexcept { return grid.at(i); }
};

[[nodiscard]] Spectrum spectrum(const TransmissionModel& model, const FrequencyGrid& grid);

/// Writes `omega_mhz,s21_abs` with 12 significant digits.
void write_spectrum_csv(std::ostream& out, const Spectrum& spec);

enum class PeakMethod { RawMaxima, EigenvalueInferred };

[[nodiscard]] const char* to_string(PeakMethod m) noexcept;

struct Peak {
  double position = 0.0;
  double height = 0.0;
  double hwhm = 0.0;
  /// Only one half-height crossing was available; hwhm is that one-sided distance
  /// (so the full width is its double).
  bool one_sided = false;
};

struct PeakSet {
  std::vector<Peak> peaks;  ///< ascending in position
  PeakMethod method = PeakMethod::RawMaxima;
};

/// Local maxima by three-point comparison, refined by a parabola through the three
/// bracketing samples. Each side is walked outwards until |S21| drops below
/// height / sqrt(2) (crossing located by linear interpolation); a side that leaves
/// the grid or reaches a valley first is dropped and the peak flagged one_sided.
/// Peaks with no crossing on either side are discarded. Needs >= 5 points
/// (PreconditionError otherwise).
[[nodiscard]] PeakSet extract_peaks(const Spectrum& spec);

/// Positions Re(omega_{1,2}) and widths -Im(omega_{1,2}) from the resonant eigenvalues.
/// At the EP a single coalesced entry is returned. Throws PreconditionError unless
/// omega_m == omega_c.
[[nodiscard]] PeakSet infer_linewidths(const TransmissionModel& model);

/// max_i |v_i - v_{n-1-i}| / max_i v_i over a grid that is symmetric about its midpoint.
[[nodiscard]] double mirror_asymmetry(const Spectrum& spec);

}  // namespace magpol
