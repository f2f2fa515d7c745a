#pragma once

// Flat `key = value` parameter files.
//
//   # P1 ensemble, middle anticrossing
//   omega_c   = 3093
//   kappa_i   = 0.3
//   ...
//
// Keys are the HybridParams / DriveSpec field names. Values are plain numbers in
// the library's f/2pi MHz convention; nothing is rescaled on load.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "magpol/core_model.hpp"

namespace magpol {

struct ParamFile {
  HybridParams params;
  std::optional<double> calibration_c;
  std::optional<double> omega_d;
  std::optional<double> power_dbm;
  std::optional<double> amplitude_u;
};

/// Parses a parameter file. Required keys: omega_c, kappa_i, kappa_o, gamma, g,
/// n_spins, a_parallel, gamma_e. Optional: kappa_int (default 0), calibration_c,
/// omega_d, power_dbm, amplitude_u. Unknown or duplicate keys, malformed lines and
/// non-numeric values raise ConfigError naming the line.
[[nodiscard]] ParamFile parse_param_file(std::istream& in);
[[nodiscard]] ParamFile load_param_file(const std::filesystem::path& path);

/// Writes every set field in loadable form.
void write_param_file(std::ostream& out, const ParamFile& file);

}  // namespace magpol
