#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "magpol/errors.hpp"
#include "magpol/fitting.hpp"
#include "oracles.hpp"

using namespace magpol;

namespace {

TransmissionModel truth() {
  auto m = TransmissionModel::resonant(device_parameters());
  return m;
}

std::vector<SpectrumSample> synth(const TransmissionModel& m, std::size_t n = 401, double noise = 0.0,
                                  std::uint64_t seed = 0) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  const FrequencyGrid grid{3060.0, 3126.0, n};
  std::vector<SpectrumSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid.at(i);
    const double y = std::abs(s21(m, w));
    out.push_back({w, noise > 0.0 ? y * (1.0 + gauss(eng)) : y});
  }
  return out;
}

FreeParam free_around(FitParam which, double value) {
  if (which == FitParam::GEff) return {which, value, 0.0, std::max(100.0 * value, 1.0)};
  return {which, value, value / 100.0, value * 100.0};
}

FitProblem standard_problem(std::vector<SpectrumSample> data, double factor = 1.3) {
  FitProblem prob;
  prob.data = std::move(data);
  prob.fixed = truth();
  prob.free = {free_around(FitParam::Kappa, 0.6 * factor), free_around(FitParam::Gamma, 11.9 * factor),
               free_around(FitParam::GEff, 17.2 * factor)};
  return prob;
}

double rss_at(const FitProblem& prob, const std::vector<double>& x) {
  const auto model = apply_parameters(prob.fixed, prob.free, x);
  double rss = 0.0;
  for (const auto& d : prob.data) {
    const double r = std::abs(s21(model, d.omega)) - d.s21_abs;
    rss += r * r;
  }
  return rss;
}

}  // namespace

TEST(FitParam, Names) {
  for (auto p : {FitParam::Kappa, FitParam::Gamma, FitParam::GEff, FitParam::OmegaC, FitParam::OmegaM,
                 FitParam::AmplitudeScale, FitParam::CalibrationC}) {
    EXPECT_EQ(parse_fit_param(to_string(p)), p);
  }
  EXPECT_THROW((void)parse_fit_param("q"), ConfigError);
}

TEST(FitProblem, Validation) {
  auto prob = standard_problem(synth(truth(), 5));
  EXPECT_THROW(prob.validate(), ConfigError);
  prob = standard_problem(synth(truth()));
  EXPECT_NO_THROW(prob.validate());
  prob.free.push_back(free_around(FitParam::Kappa, 1.0));
  EXPECT_THROW(prob.validate(), ConfigError);
  prob = standard_problem(synth(truth()));
  prob.free[0].lower = 2.0;
  prob.free[0].upper = 1.0;
  EXPECT_THROW(prob.validate(), ConfigError);
  prob = standard_problem(synth(truth()));
  prob.free[0].upper = INFINITY;
  EXPECT_THROW(prob.validate(), ConfigError);
  prob = standard_problem(synth(truth()));
  prob.free.push_back({FitParam::CalibrationC, 1.0, 0.1, 10.0});
  EXPECT_THROW(prob.validate(), ConfigError);
}

TEST(ApplyParameters, KappaKeepsInternalLoss) {
  auto base = truth();
  base.params = base.params.with_total_kappa(0.6, 0.1);
  const std::vector<FreeParam> free{free_around(FitParam::Kappa, 1.0)};
  const std::vector<double> x{2.0};
  const auto m = apply_parameters(base, free, x);
  EXPECT_DOUBLE_EQ(m.params.kappa(), 2.0);
  EXPECT_DOUBLE_EQ(m.params.kappa_int, 0.1);
}

TEST(FitTransmission, NoiseFreeRoundTrip) {
  const auto result = fit_transmission(standard_problem(synth(truth())));
  EXPECT_TRUE(result.converged);
  EXPECT_FALSE(result.used_simplex);
  EXPECT_NEAR(result.estimate(FitParam::Kappa) / 0.6, 1.0, 1e-6);
  EXPECT_NEAR(result.estimate(FitParam::Gamma) / 11.9, 1.0, 1e-6);
  EXPECT_NEAR(result.estimate(FitParam::GEff) / 17.2, 1.0, 1e-6);
  EXPECT_GE(result.rss, 0.0);
  EXPECT_EQ(result.residuals.size(), 401u);
  EXPECT_THROW((void)result.estimate(FitParam::OmegaC), PreconditionError);
}

TEST(FitTransmission, FrequenciesAndScaleRoundTrip) {
  auto t = truth();
  t.omega_m = 3095.0;
  t.amplitude_scale = 0.8;
  auto prob = standard_problem(synth(t));
  prob.fixed.amplitude_scale = 1.0;
  prob.free.push_back({FitParam::OmegaM, 3094.0, 3044.0, 3144.0});
  prob.free.push_back({FitParam::AmplitudeScale, 1.0, 0.01, 100.0});
  const auto result = fit_transmission(prob);
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(result.estimate(FitParam::OmegaM), 3095.0, 1e-6);
  EXPECT_NEAR(result.estimate(FitParam::AmplitudeScale), 0.8, 1e-6);
  EXPECT_NEAR(result.estimate(FitParam::GEff), 17.2, 1e-5);
}

TEST(FitTransmission, NoisyMonteCarloMedianError) {
  std::vector<double> ek, eg, eh;
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = fit_transmission(standard_problem(synth(truth(), 401, 0.01, 100 + trial)));
    ek.push_back(std::abs(r.estimate(FitParam::Kappa) / 0.6 - 1.0));
    eg.push_back(std::abs(r.estimate(FitParam::Gamma) / 11.9 - 1.0));
    eh.push_back(std::abs(r.estimate(FitParam::GEff) / 17.2 - 1.0));
  }
  for (auto* v : {&ek, &eg, &eh}) {
    std::nth_element(v->begin(), v->begin() + v->size() / 2, v->end());
    EXPECT_LT((*v)[v->size() / 2], 0.05);
  }
}

TEST(FitTransmission, ConstantDataIsFlagged) {
  auto data = synth(truth());
  for (auto& d : data) d.s21_abs = 0.02;
  const auto r = fit_transmission(standard_problem(data));
  EXPECT_TRUE(!r.converged || !r.flags.empty());
  EXPECT_TRUE(!r.converged || r.has_flag("at_upper_bound:gamma") || r.has_flag("at_upper_bound:g_eff"));
}

TEST(FitTransmission, OrderInvariance) {
  const auto data = synth(truth(), 201, 0.01, 7);
  auto shuffled = data;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
  const auto a = fit_transmission(standard_problem(data));
  const auto b = fit_transmission(standard_problem(shuffled));
  EXPECT_EQ(a.rss, b.rss);
  for (std::size_t i = 0; i < a.estimates.size(); ++i) EXPECT_EQ(a.estimates[i].second, b.estimates[i].second);
}

TEST(FitTransmission, AmplitudeScalingInvariance) {
  const auto data = synth(truth(), 201, 0.01, 8);
  auto scaled = data;
  for (auto& d : scaled) d.s21_abs *= 3.0;
  auto pa = standard_problem(data);
  auto pb = standard_problem(scaled);
  pa.free.push_back({FitParam::AmplitudeScale, 1.0, 0.01, 100.0});
  pb.free.push_back({FitParam::AmplitudeScale, 3.0, 0.03, 300.0});
  const auto a = fit_transmission(pa);
  const auto b = fit_transmission(pb);
  for (auto p : {FitParam::Kappa, FitParam::Gamma, FitParam::GEff}) {
    EXPECT_NEAR(a.estimate(p) / b.estimate(p), 1.0, 1e-8) << to_string(p);
  }
}

TEST(FitTransmission, FirstOrderOptimality) {
  const auto prob = standard_problem(synth(truth(), 201, 0.01, 9));
  const auto r = fit_transmission(prob);
  std::vector<double> x;
  for (const auto& e : r.estimates) x.push_back(e.second);
  const double base = rss_at(prob, x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * std::max(std::abs(x[i]), 1e-3);
    for (double dir : {-1.0, 1.0}) {
      auto y = x;
      y[i] += dir * h;
      if (y[i] < prob.free[i].lower || y[i] > prob.free[i].upper) continue;
      EXPECT_GE((rss_at(prob, y) - base) / h, -1e-6);
    }
  }
}

TEST(FitTransmission, EstimatesStayInBounds) {
  auto prob = standard_problem(synth(truth()));
  prob.free[2].upper = 15.0;
  prob.free[2].initial = 14.0;
  const auto r = fit_transmission(prob);
  EXPECT_LE(r.estimate(FitParam::GEff), 15.0);
  EXPECT_TRUE(r.has_flag("at_upper_bound:g_eff"));
}

TEST(FitSaturation, RoundTrip) {
  const auto p = device_parameters();
  const double c = 1.6015e7;
  std::vector<SaturationSample> data;
  for (double dbm = -120.0; dbm <= -80.0; dbm += 2.0) data.push_back({dbm, predicted_g_eff(dbm, c, p)});
  SaturationFitOptions opt;
  opt.initial_c = 1e7;
  const auto r = fit_saturation(data, p, opt);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.estimate(FitParam::CalibrationC) / c, 1.0, 1e-6);
}

TEST(FitSaturation, NoisyCurveBelowNoiseFloor) {
  const auto p = device_parameters();
  const double c = 1.6015e7;
  std::mt19937_64 eng(0);
  std::normal_distribution<double> gauss(0.0, 0.2);
  std::vector<SaturationSample> data;
  double noise_rss = 0.0;
  for (double dbm = -115.0; dbm <= -90.0; dbm += 1.0) {
    const double clean = predicted_g_eff(dbm, c, p);
    const double noisy = std::clamp(clean + gauss(eng), 0.01, p.g);
    noise_rss += (noisy - clean) * (noisy - clean);
    data.push_back({dbm, noisy});
  }
  EXPECT_GT(data.front().g_eff, 16.0);
  EXPECT_LT(data.back().g_eff, 5.65);
  SaturationFitOptions opt;
  opt.initial_c = 3e6;
  const auto r = fit_saturation(data, p, opt);
  EXPECT_LE(r.rss, noise_rss);
  const double fitted = r.estimate(FitParam::CalibrationC);
  double prev = p.g + 1.0;
  for (double dbm = -115.0; dbm <= -90.0; dbm += 0.25) {
    const double g = predicted_g_eff(dbm, fitted, p);
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(FitSaturation, Errors) {
  const auto p = device_parameters();
  const std::vector<SaturationSample> two{{-100.0, 10.0}, {-90.0, 5.0}};
  EXPECT_THROW((void)fit_saturation(two, p), PreconditionError);
  const std::vector<SaturationSample> flat{{-100.0, 10.0}, {-95.0, 10.0}, {-90.0, 10.0}};
  EXPECT_THROW((void)fit_saturation(flat, p), UnidentifiableError);
  const std::vector<SaturationSample> above{{-100.0, 18.0}, {-95.0, 10.0}, {-90.0, 5.0}};
  EXPECT_THROW((void)fit_saturation(above, p), PreconditionError);
}
