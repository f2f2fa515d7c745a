#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "magpol/errors.hpp"
#include "magpol/inputoutput.hpp"
#include "magpol/nonhermitian.hpp"
#include "oracles.hpp"

using namespace magpol;

namespace {

TransmissionModel device(double g_eff) {
  auto m = TransmissionModel::resonant(device_parameters());
  m.g_eff = g_eff;
  return m;
}

// |S21| of a bare resonator, written as an amplitude Lorentzian.
double bare_lorentzian(double omega, double centre, double kappa) {
  return kappa / std::sqrt(kappa * kappa + (omega - centre) * (omega - centre));
}

}  // namespace

TEST(S21, BareResonatorOnResonanceIsUnity) {
  const auto m = device(0.0);
  EXPECT_NEAR(std::abs(s21(m, 3093.0)), 1.0, 1e-15);
}

TEST(S21, CoupledCentreValue) {
  const auto m = device(17.2);
  EXPECT_NEAR(std::abs(s21(m, 3093.0)), 0.6 / (0.6 + 17.2 * 17.2 / 11.9), 1e-15);
  EXPECT_NEAR(std::abs(s21(m, 3093.0)), 0.02356, 1e-5);
}

TEST(S21, MatchesBareLorentzian) {
  const auto m = device(0.0);
  for (double w = 3080.0; w < 3106.0; w += 0.37) EXPECT_NEAR(std::abs(s21(m, w)), bare_lorentzian(w, 3093.0, 0.6), 1e-14);
}

TEST(S21, PropertyMirrorSymmetryAndBound) {
  oracle::Gen gen(51);
  for (int i = 0; i < 2000; ++i) {
    const auto p = gen.params();
    TransmissionModel m{p, p.omega_c, gen.uniform(0.0, 40.0), gen.log_uniform(0.1, 10.0)};
    const double d = gen.uniform(0.0, 200.0);
    const double a = std::abs(s21(m, p.omega_c + d));
    const double b = std::abs(s21(m, p.omega_c - d));
    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(a, b));
    const double bound = m.amplitude_scale * 2.0 * std::sqrt(p.kappa_i * p.kappa_o) / p.kappa();
    m.omega_m = p.omega_c + gen.uniform(-100.0, 100.0);
    EXPECT_LE(std::abs(s21(m, p.omega_c + gen.uniform(-200.0, 200.0))), bound * (1.0 + 1e-12));
  }
}

TEST(TransmissionModel, Validation) {
  auto m = device(-1.0);
  EXPECT_THROW(m.validate(), ConfigError);
  m = device(1.0);
  m.amplitude_scale = 0.0;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Spectrum, TwoPointGrid) {
  const auto s = spectrum(device(17.2), FrequencyGrid{3060.0, 3126.0, 2});
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_EQ(s.omega(1), 3126.0);
  EXPECT_EQ(s.metadata.at("g_eff"), 17.2);
}

TEST(Spectrum, SymmetricAboutCavity) {
  const auto s = spectrum(device(17.2), FrequencyGrid{3060.0, 3126.0, 2001});
  EXPECT_LE(mirror_asymmetry(s), 1e-12);
  auto off = device(17.2);
  off.omega_m = 3106.0;
  EXPECT_GT(mirror_asymmetry(spectrum(off, FrequencyGrid{3060.0, 3126.0, 2001})), 0.1);
}

TEST(Spectrum, CsvLayout) {
  const auto s = spectrum(device(17.2), FrequencyGrid{3060.0, 3126.0, 3});
  std::ostringstream out;
  write_spectrum_csv(out, s);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "omega_mhz,s21_abs");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 5), "3060,");
}

TEST(ExtractPeaks, SingleLorentzian) {
  const FrequencyGrid grid{3090.0, 3096.0, 2001};
  const auto peaks = extract_peaks(spectrum(device(0.0), grid));
  ASSERT_EQ(peaks.peaks.size(), 1u);
  EXPECT_EQ(peaks.method, PeakMethod::RawMaxima);
  EXPECT_NEAR(peaks.peaks[0].position, 3093.0, grid.step() / 10.0);
  EXPECT_NEAR(peaks.peaks[0].hwhm, 0.6, 0.6 * 0.02);
  EXPECT_FALSE(peaks.peaks[0].one_sided);
}

TEST(ExtractPeaks, OffCentreLorentzianSubGridAccuracy) {
  Spectrum s;
  s.grid = FrequencyGrid{0.0, 10.0, 101};
  for (std::size_t i = 0; i < s.grid.n_points; ++i) s.values.push_back(bare_lorentzian(s.grid.at(i), 4.537, 1.0));
  const auto peaks = extract_peaks(s);
  ASSERT_EQ(peaks.peaks.size(), 1u);
  EXPECT_NEAR(peaks.peaks[0].position, 4.537, s.grid.step() / 10.0);
  EXPECT_NEAR(peaks.peaks[0].hwhm, 1.0, 0.02);
}

TEST(ExtractPeaks, OneSidedAtGridEdge) {
  Spectrum s;
  s.grid = FrequencyGrid{0.0, 5.0, 201};
  for (std::size_t i = 0; i < s.grid.n_points; ++i) s.values.push_back(bare_lorentzian(s.grid.at(i), 0.5, 1.0));
  const auto peaks = extract_peaks(s);
  ASSERT_EQ(peaks.peaks.size(), 1u);
  EXPECT_TRUE(peaks.peaks[0].one_sided);
  EXPECT_NEAR(peaks.peaks[0].hwhm, 1.0, 0.02);
}

TEST(ExtractPeaks, FlatSpectrumIsEmpty) {
  Spectrum s;
  s.grid = FrequencyGrid{0.0, 1.0, 11};
  s.values.assign(11, 0.3);
  EXPECT_TRUE(extract_peaks(s).peaks.empty());
}

TEST(ExtractPeaks, TooFewPoints) {
  EXPECT_THROW((void)extract_peaks(spectrum(device(17.2), FrequencyGrid{3060.0, 3126.0, 4})), PreconditionError);
}

TEST(ExtractPeaks, RabiPairAtZeroDrive) {
  const auto peaks = extract_peaks(spectrum(device(17.2), FrequencyGrid{3060.0, 3126.0, 2001}));
  ASSERT_EQ(peaks.peaks.size(), 2u);
  EXPECT_NEAR(peaks.peaks[0].position, 3093.0 - 16.2, 0.6);
  EXPECT_NEAR(peaks.peaks[1].position, 3093.0 + 16.2, 0.6);
  const double split = std::sqrt(4.0 * 17.2 * 17.2 - 11.3 * 11.3);
  EXPECT_NEAR((peaks.peaks[1].position - peaks.peaks[0].position) / split, 1.0, 0.03);
}

TEST(ExtractPeaks, SingleMaximumAtEp) {
  const auto peaks = extract_peaks(spectrum(device(5.65), FrequencyGrid{3060.0, 3126.0, 2001}));
  ASSERT_EQ(peaks.peaks.size(), 1u);
  EXPECT_NEAR(peaks.peaks[0].position, 3093.0, 1e-9);
}

TEST(ExtractPeaks, PropertyPositionsTrackEigenvalues) {
  oracle::Gen gen(52);
  const auto p = device_parameters();
  const double dk = p.gamma - p.kappa();
  for (int i = 0; i < 40; ++i) {
    const bool far = i % 2 == 0;
    const double g_eff = far ? gen.uniform(2.0 * dk, 60.0) : gen.uniform(0.7 * dk, 2.0 * dk);
    const auto m = device(g_eff);
    const auto ev = eigenvalues_resonant(TwoModeHamiltonian::resonator_magnon(p, p.omega_c, g_eff));
    const double reach = std::abs(ev.omega1.real() - p.omega_c) + 40.0;
    const auto peaks = extract_peaks(spectrum(m, FrequencyGrid{p.omega_c - reach, p.omega_c + reach, 4001}));
    ASSERT_EQ(peaks.peaks.size(), 2u) << "g_eff " << g_eff;
    const double tol = far ? 0.005 : 0.05;
    EXPECT_NEAR(peaks.peaks[0].position / ev.omega2.real(), 1.0, tol);
    EXPECT_NEAR(peaks.peaks[1].position / ev.omega1.real(), 1.0, tol);
  }
}

TEST(InferLinewidths, AboveEp) {
  const auto set = infer_linewidths(device(17.2));
  EXPECT_EQ(set.method, PeakMethod::EigenvalueInferred);
  ASSERT_EQ(set.peaks.size(), 2u);
  EXPECT_DOUBLE_EQ(set.peaks[0].hwhm, 6.25);
  EXPECT_DOUBLE_EQ(set.peaks[1].hwhm, 6.25);
  EXPECT_LT(set.peaks[0].position, set.peaks[1].position);
}

TEST(InferLinewidths, AtEpSingleEntry) {
  const auto set = infer_linewidths(device(5.65));
  ASSERT_EQ(set.peaks.size(), 1u);
  EXPECT_NEAR(set.peaks[0].hwhm, 6.25, 1e-6);
  EXPECT_NEAR(set.peaks[0].position, 3093.0, 1e-6);
}

TEST(InferLinewidths, BelowEpLinewidthPair) {
  const auto set = infer_linewidths(device(2.0));
  ASSERT_EQ(set.peaks.size(), 2u);
  EXPECT_EQ(set.peaks[0].position, set.peaks[1].position);
  EXPECT_NEAR(set.peaks[0].hwhm, 0.966, 0.001);
  EXPECT_NEAR(set.peaks[1].hwhm, 11.534, 0.001);
}

TEST(InferLinewidths, NeedsResonance) {
  auto m = device(2.0);
  m.omega_m = 3000.0;
  EXPECT_THROW((void)infer_linewidths(m), PreconditionError);
}
