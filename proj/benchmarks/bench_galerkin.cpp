#include "hinge/analysis_harness.hpp"
#include "hinge/energy.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

struct Fixture {
  std::shared_ptr<const hinge::OdeSystem> system;
  hinge::ModalState state;

  explicit Fixture(int k) {
    const auto setup = hinge::benchmark_setup(k);
    system = hinge::build_system(setup);
    state = hinge::project_initial_data(setup.y, setup.z, *system);
  }
};

void BM_GammaTable(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(f.system->gamma(f.system->f2(), f.state.g));
}

void BM_GammaDirect(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(f.system->gamma_direct(f.system->f2(), f.state.g));
}

void BM_StepSplitting(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)));
  const double dt = hinge::default_dt(f.system->basis());
  for (auto _ : st) {
    benchmark::DoNotOptimize(hinge::step(*f.system, f.state, dt, hinge::Method::Splitting));
  }
}

void BM_StepRk4(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)));
  const double dt = hinge::default_dt(f.system->basis());
  for (auto _ : st) {
    benchmark::DoNotOptimize(hinge::step(*f.system, f.state, dt, hinge::Method::Rk4));
  }
}

void BM_EnergyReport(benchmark::State& st) {
  const Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hinge::energy_report(*f.system, f.state));
}

void BM_BenchmarkRun(benchmark::State& st) {
  auto setup = hinge::benchmark_setup(static_cast<int>(st.range(0)));
  setup.T = 0.5;
  for (auto _ : st) benchmark::DoNotOptimize(hinge::run(setup));
}

}  // namespace

BENCHMARK(BM_GammaTable)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_GammaDirect)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_StepSplitting)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_StepRk4)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_EnergyReport)->Arg(16);
BENCHMARK(BM_BenchmarkRun)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
