#include <vector>

#include <benchmark/benchmark.h>

#include "magpol/fitting.hpp"
#include "magpol/inputoutput.hpp"
#include "magpol/multiensemble.hpp"
#include "magpol/nonhermitian.hpp"
#include "magpol/steadystate.hpp"

using namespace magpol;

static void BM_Eigenvalues(benchmark::State& state) {
  const auto h = TwoModeHamiltonian::resonator_magnon(device_parameters(), 3106.0, 17.2);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(h));
}
BENCHMARK(BM_Eigenvalues);

static void BM_Propagator(benchmark::State& state) {
  const auto h = TwoModeHamiltonian::resonator_magnon(device_parameters(), 3093.0, 5.65);
  for (auto _ : state) benchmark::DoNotOptimize(propagator(h, 0.1));
}
BENCHMARK(BM_Propagator);

static void BM_SolveChi(benchmark::State& state) {
  const auto p = device_parameters();
  const DetuningPair det{-94.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_chi(42.0, det, p));
}
BENCHMARK(BM_SolveChi);

static void BM_Spectrum(benchmark::State& state) {
  const auto m = TransmissionModel::resonant(device_parameters());
  const FrequencyGrid grid{3043.0, 3143.0, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(m, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spectrum)->Arg(2001);

static void BM_ExtractPeaks(benchmark::State& state) {
  const auto spec = spectrum(TransmissionModel::resonant(device_parameters()), FrequencyGrid{3043.0, 3143.0, 2001});
  for (auto _ : state) benchmark::DoNotOptimize(extract_peaks(spec));
}
BENCHMARK(BM_ExtractPeaks);

static void BM_ScenarioSweep(benchmark::State& state) {
  const auto p = device_parameters();
  const auto sc = scenario_preset("fig4a", p);
  const auto axis = DriveAxis::amplitudes(0.0, 400.0, 200);
  const FrequencyGrid grid{3043.0, 3143.0, 2001};
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scenario_sweep(sc, p, axis, grid, {}, jobs));
}
BENCHMARK(BM_ScenarioSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_FitTransmission(benchmark::State& state) {
  const auto truth = TransmissionModel::resonant(device_parameters());
  const FrequencyGrid grid{3060.0, 3126.0, 401};
  FitProblem prob;
  for (std::size_t i = 0; i < grid.n_points; ++i) prob.data.push_back({grid.at(i), std::abs(s21(truth, grid.at(i)))});
  prob.fixed = truth;
  prob.free = {{FitParam::Kappa, 0.78, 0.0078, 78.0},
               {FitParam::Gamma, 15.47, 0.1547, 1547.0},
               {FitParam::GEff, 22.36, 0.0, 2236.0}};
  for (auto _ : state) benchmark::DoNotOptimize(fit_transmission(prob));
}
BENCHMARK(BM_FitTransmission)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
