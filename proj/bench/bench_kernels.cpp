// Serial reference vs OpenMP kernels: Monte Carlo sweep and the property suite.

#include <vector>

#include <benchmark/benchmark.h>

#include "qe/prep.hpp"
#include "qe/sim.hpp"
#include "qe/verify.hpp"

namespace {

qe::SimConfig sweep_config() {
  qe::SimConfig config;
  config.shots_per_point = 100'000;
  config.seed = 11;
  config.theta_grid = qe::uniform_grid(0.0, 1.5707963267948966, 0.0174532925199433);
  return config;
}

qe::DensityOperator case_b() {
  return qe::to_density(qe::prepare_after_polarizer(qe::PolarizerChannel(0.3665191429188092, 0.324)).state);
}

std::vector<qe::PureState> states(std::size_t n) {
  qe::Rng rng(5);
  std::vector<qe::PureState> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(i % 2 == 0 ? qe::random_real_pure_state(rng) : qe::random_pure_state(rng));
  return out;
}

void BM_SweepSerial(benchmark::State& st) {
  const auto rho = case_b();
  const auto config = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(qe::sweep_serial(rho, config, qe::SweepMode::MonteCarlo));
}

void BM_SweepParallel(benchmark::State& st) {
  const auto rho = case_b();
  const auto config = sweep_config();
  for (auto _ : st) benchmark::DoNotOptimize(qe::sweep(rho, config, qe::SweepMode::MonteCarlo));
}

void BM_PropertiesSerial(benchmark::State& st) {
  const auto s = states(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qe::check_properties_serial(s));
}

void BM_PropertiesParallel(benchmark::State& st) {
  const auto s = states(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qe::check_properties(s));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropertiesSerial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropertiesParallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
