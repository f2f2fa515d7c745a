#include <cmath>

#include <gtest/gtest.h>

#include "magpol/core_model.hpp"
#include "magpol/errors.hpp"
#include "oracles.hpp"

using namespace magpol;

namespace {

double field_for(double omega_zero, const HybridParams& p) { return omega_zero / p.gamma_e; }

}  // namespace

TEST(HybridParams, DeviceValues) {
  const auto p = device_parameters();
  EXPECT_DOUBLE_EQ(p.omega_c, 3093.0);
  EXPECT_DOUBLE_EQ(p.kappa(), 0.6);
  EXPECT_DOUBLE_EQ(p.kappa_i, p.kappa_o);
  EXPECT_DOUBLE_EQ(p.gamma, 11.9);
  EXPECT_DOUBLE_EQ(p.g, 17.2);
  EXPECT_DOUBLE_EQ(p.a_parallel, 94.0);
  EXPECT_DOUBLE_EQ(p.gamma_e, 28.0);
  EXPECT_FALSE(p.n_spins.has_value());
  EXPECT_NO_THROW(p.validate());
}

TEST(HybridParams, ValidateRejectsBadValues) {
  auto p = device_parameters();
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = device_parameters();
  p.kappa_i = -1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = device_parameters();
  p.n_spins = 0.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = device_parameters();
  p.omega_c = std::nan("");
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(HybridParams, WithTotalKappaSplitsPorts) {
  const auto p = device_parameters().with_total_kappa(2.0, 0.4);
  EXPECT_DOUBLE_EQ(p.kappa(), 2.0);
  EXPECT_DOUBLE_EQ(p.kappa_i, 0.8);
  EXPECT_DOUBLE_EQ(p.kappa_o, 0.8);
  EXPECT_THROW((void)device_parameters().with_total_kappa(0.3, 0.4), ConfigError);
}

TEST(SpinSpecies, OrderAndParsing) {
  EXPECT_LT(nuclear_projection(SpinSpecies::Minus), nuclear_projection(SpinSpecies::Zero));
  EXPECT_LT(nuclear_projection(SpinSpecies::Zero), nuclear_projection(SpinSpecies::Plus));
  for (auto s : kAllSpecies) EXPECT_EQ(parse_species(to_string(s)), s);
  EXPECT_EQ(parse_species("+"), SpinSpecies::Plus);
  EXPECT_EQ(parse_species("-"), SpinSpecies::Minus);
  EXPECT_THROW((void)parse_species("up"), ConfigError);
}

TEST(ZeemanFrequencies, MiddleAnticrossingLadder) {
  const auto p = device_parameters();
  const auto f = zeeman_frequencies(field_for(3093.0, p), p);
  EXPECT_NEAR(f[SpinSpecies::Minus], 2999.0, 1e-9);
  EXPECT_NEAR(f[SpinSpecies::Zero], 3093.0, 1e-9);
  EXPECT_NEAR(f[SpinSpecies::Plus], 3187.0, 1e-9);
}

TEST(ZeemanFrequencies, UpperFieldSettingMatchesQuotedLadder) {
  const auto p = device_parameters();
  const auto f = zeeman_frequencies(field_for(3012.0, p), p);
  EXPECT_NEAR(f[SpinSpecies::Plus], 3106.0, 1e-9);
  EXPECT_NEAR(f[SpinSpecies::Zero], 3012.0, 1e-9);
  EXPECT_NEAR(f[SpinSpecies::Minus], 2918.0, 1e-9);
}

TEST(ZeemanFrequencies, ZeroHyperfineCollapses) {
  auto p = device_parameters();
  p.a_parallel = 0.0;
  const auto f = zeeman_frequencies(100.0, p);
  EXPECT_EQ(f[SpinSpecies::Minus], f[SpinSpecies::Zero]);
  EXPECT_EQ(f[SpinSpecies::Plus], f[SpinSpecies::Zero]);
}

TEST(ZeemanFrequencies, NonPositiveFieldIsDomainError) {
  const auto p = device_parameters();
  EXPECT_THROW((void)zeeman_frequencies(0.0, p), DomainError);
  EXPECT_THROW((void)zeeman_frequencies(-1.0, p), DomainError);
}

TEST(ZeemanFrequencies, PropertyAffineWithFixedSplittings) {
  oracle::Gen gen(11);
  for (int i = 0; i < 1000; ++i) {
    auto p = device_parameters();
    p.a_parallel = gen.uniform(0.0, 200.0);
    p.gamma_e = gen.uniform(1.0, 50.0);
    const double b1 = gen.uniform(1.0, 500.0);
    const double b2 = gen.uniform(1.0, 500.0);
    const auto f1 = zeeman_frequencies(b1, p);
    const auto f2 = zeeman_frequencies(b2, p);
    EXPECT_NEAR(f1[SpinSpecies::Plus] - f1[SpinSpecies::Minus], 2.0 * p.a_parallel, 1e-9);
    EXPECT_NEAR(f1[SpinSpecies::Plus] - f1[SpinSpecies::Zero], f2[SpinSpecies::Plus] - f2[SpinSpecies::Zero], 1e-9);
    const auto mid = zeeman_frequencies(0.5 * (b1 + b2), p);
    EXPECT_NEAR(mid[SpinSpecies::Zero], 0.5 * (f1[SpinSpecies::Zero] + f2[SpinSpecies::Zero]), 1e-9);
  }
}

TEST(Power, DbmToWatts) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(0.0), 1e-3);
  EXPECT_NEAR(dbm_to_watts(-120.0), 1e-15, 1e-27);
  EXPECT_NEAR(dbm_to_watts(-93.7), 4.266e-13, 0.001e-13);
}

TEST(Power, PropertyRoundTrip) {
  oracle::Gen gen(12);
  for (int i = 0; i < 1000; ++i) {
    const double dbm = gen.uniform(-150.0, 30.0);
    EXPECT_NEAR(watts_to_dbm(dbm_to_watts(dbm)), dbm, 1e-12 * std::max(1.0, std::abs(dbm)));
    const double w = gen.log_uniform(1e-18, 1.0);
    EXPECT_NEAR(dbm_to_watts(watts_to_dbm(w)) / w, 1.0, 1e-12);
  }
  EXPECT_THROW((void)watts_to_dbm(0.0), DomainError);
}

TEST(Calibration, TheoreticalKMatchesQuotedValue) {
  const double k = calibration_k_theoretical(device_parameters());
  EXPECT_NEAR(k / 9.59e14, 1.0, 0.01);
}

TEST(Calibration, SquareRootScaling) {
  const auto p = device_parameters();
  const double k = calibration_k_theoretical(p);
  EXPECT_NEAR(calibration_k_theoretical(p.with_total_kappa(4.0 * p.kappa())) / k, 2.0, 1e-12);
  auto q = p;
  q.omega_c *= 4.0;
  EXPECT_NEAR(calibration_k_theoretical(q) / k, 0.5, 1e-12);
}

TEST(Calibration, ReducedConstantNeedsSpinCount) {
  auto p = device_parameters();
  EXPECT_THROW((void)calibration_from_k(1e14, p), ConfigError);
  p.n_spins = 1e16;
  // c = k / (2pi 1e6 sqrt(N)) in the 2pi MHz convention.
  EXPECT_NEAR(calibration_from_k(2.0 * kTwoPi * 1e14, p), 2.0, 1e-12);
}

TEST(DriveAmplitude, AmplitudeIsAuthoritative) {
  EXPECT_EQ(drive_amplitude(DriveSpec{3093.0, DriveAmplitude{0.0}, std::nullopt}), 0.0);
  EXPECT_EQ(drive_amplitude(DriveSpec{3093.0, DriveAmplitude{4.5}, 99.0}), 4.5);
  EXPECT_THROW((void)drive_amplitude(DriveSpec{3093.0, DriveAmplitude{-1.0}, std::nullopt}), DomainError);
}

TEST(DriveAmplitude, PowerUsesCalibration) {
  EXPECT_NEAR(drive_amplitude(DriveSpec{3093.0, DrivePower{0.0}, 1.0}), 0.0316227766, 1e-10);
  EXPECT_THROW((void)drive_amplitude(DriveSpec{3093.0, DrivePower{0.0}, std::nullopt}), ConfigError);
  const double c = 10.46 / std::sqrt(dbm_to_watts(-93.7));
  EXPECT_NEAR(drive_amplitude(DriveSpec{3093.0, DrivePower{-93.7}, c}), 10.46, 1e-12);
}

TEST(DriveAmplitude, ReducedAmplitudeDividesBySqrtN) {
  auto p = device_parameters();
  EXPECT_THROW((void)reduced_amplitude(1.0, p), ConfigError);
  p.n_spins = 1e6;
  EXPECT_DOUBLE_EQ(reduced_amplitude(3000.0, p), 3.0);
}

TEST(FrequencyGrid, EndpointsAndValidation) {
  const FrequencyGrid g{3060.0, 3126.0, 2001};
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.at(0), 3060.0);
  EXPECT_EQ(g.at(2000), 3126.0);
  EXPECT_NEAR(g.step(), 0.033, 1e-15);
  EXPECT_THROW((FrequencyGrid{1.0, 1.0, 5}.validate()), ConfigError);
  EXPECT_THROW((FrequencyGrid{2.0, 1.0, 5}.validate()), ConfigError);
  EXPECT_THROW((FrequencyGrid{1.0, 2.0, 1}.validate()), ConfigError);
  for (std::size_t i = 1; i < g.n_points; ++i) EXPECT_GT(g.at(i), g.at(i - 1));
}
