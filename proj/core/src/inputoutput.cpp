#include "magpol/inputoutput.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "magpol/csv.hpp"
#include "magpol/errors.hpp"
#include "magpol/nonhermitian.hpp"

namespace magpol {

TransmissionModel TransmissionModel::resonant(const HybridParams& params) {
  return {params, params.omega_c, params.g, 1.0};
}

void TransmissionModel::validate() const {
  if (!(g_eff >= 0.0)) throw ConfigError(fmt::format("g_eff must be >= 0 (got {})", g_eff));
  if (!(amplitude_scale > 0.0)) {
    throw ConfigError(fmt::format("amplitude_scale must be > 0 (got {})", amplitude_scale));
  }
}

std::complex<double> s21(const TransmissionModel& model, double omega) {
  using C = std::complex<double>;
  const auto& p = model.params;
  const C magnon{p.gamma, model.omega_m - omega};
  const C denom = C{p.kappa(), p.omega_c - omega} + model.g_eff * model.g_eff / magnon;
  return model.amplitude_scale * 2.0 * std::sqrt(p.kappa_i * p.kappa_o) / denom;
}

Spectrum spectrum(const TransmissionModel& model, const FrequencyGrid& grid) {
  grid.validate();
  Spectrum out;
  out.grid = grid;
  out.values.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) out.values[i] = std::abs(s21(model, grid.at(i)));
  const auto& p = model.params;
  out.metadata = {{"omega_c", p.omega_c},     {"kappa_i", p.kappa_i}, {"kappa_o", p.kappa_o},
                  {"kappa_int", p.kappa_int}, {"gamma", p.gamma},     {"omega_m", model.omega_m},
                  {"g_eff", model.g_eff},     {"amplitude_scale", model.amplitude_scale}};
  return out;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec) {
  constexpr std::array<std::string_view, 2> header{"omega_mhz", "s21_abs"};
  csv::write_header(out, header);
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const std::array<double, 2> row{spec.omega(i), spec.values[i]};
    csv::write_row(out, row);
  }
}

const char* to_string(PeakMethod m) noexcept {
  return m == PeakMethod::RawMaxima ? "raw_maxima" : "eigenvalue_inferred";
}

namespace {

// Distance from `centre` to the half-power crossing walking in direction `dir`,
// or nullopt if the walk leaves the grid or turns upward before crossing.
std::optional<double> half_crossing(const Spectrum& spec, std::size_t peak, int dir, double centre,
                                    double half) {
  const auto& v = spec.values;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  auto i = static_cast<std::ptrdiff_t>(peak);
  while (true) {
    const auto j = i + dir;
    if (j < 0 || j >= n) return std::nullopt;
    if (v[j] <= half) {
      const double wi = spec.omega(static_cast<std::size_t>(i));
      const double wj = spec.omega(static_cast<std::size_t>(j));
      const double frac = (v[i] - half) / (v[i] - v[j]);
      return std::abs(wi + frac * (wj - wi) - centre);
    }
    if (v[j] > v[i] && static_cast<std::size_t>(i) != peak) return std::nullopt;
    i = j;
  }
}

}  // namespace

PeakSet extract_peaks(const Spectrum& spec) {
  const auto& v = spec.values;
  if (v.size() < 5) throw PreconditionError("extract_peaks needs at least 5 samples");
  PeakSet out;
  out.method = PeakMethod::RawMaxima;
  const double h = spec.grid.step();
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
    // Vertex of the parabola through (i-1, i, i+1).
    const double curvature = v[i - 1] - 2.0 * v[i] + v[i + 1];
    const double offset = 0.5 * (v[i - 1] - v[i + 1]) / curvature;
    const double position = spec.omega(i) + offset * h;
    const double height = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset;
    const double half = height * std::numbers::sqrt2 / 2.0;  // half power

    const auto left = half_crossing(spec, i, -1, position, half);
    const auto right = half_crossing(spec, i, +1, position, half);
    if (!left && !right) continue;
    Peak peak{position, height, 0.0, !(left && right)};
    peak.hwhm = left && right ? 0.5 * (*left + *right) : (left ? *left : *right);
    if (!(peak.hwhm > 0.0)) continue;
    out.peaks.push_back(peak);
  }
  return out;
}

PeakSet infer_linewidths(const TransmissionModel& model) {
  const auto h = TwoModeHamiltonian::resonator_magnon(model.params, model.omega_m, model.g_eff);
  if (!h.resonant()) throw PreconditionError("infer_linewidths needs a resonant model (omega_m == omega_c)");
  const auto ev = eigenvalues_resonant(h);
  PeakSet out;
  out.method = PeakMethod::EigenvalueInferred;
  auto entry = [&](std::complex<double> w) {
    return Peak{w.real(), std::abs(s21(model, w.real())), -w.imag(), false};
  };
  if (classify_regime(h) == RegimeClass::AtEP) {
    out.peaks.push_back(entry(ev.omega1));
    return out;
  }
  out.peaks.push_back(entry(ev.omega1));
  out.peaks.push_back(entry(ev.omega2));
  std::sort(out.peaks.begin(), out.peaks.end(), [](const Peak& a, const Peak& b) {
    return a.position < b.position || (a.position == b.position && a.hwhm < b.hwhm);
  });
  return out;
}

double mirror_asymmetry(const Spectrum& spec) {
  const auto& v = spec.values;
  double worst = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    worst = std::max(worst, std::abs(v[i] - v[v.size() - 1 - i]));
    peak = std::max(peak, v[i]);
  }
  return peak > 0.0 ? worst / peak : 0.0;
}

}  // namespace magpol
