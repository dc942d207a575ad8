#include <benchmark/benchmark.h>

#include <omp.h>

#include "shortseason/concordance.hpp"
#include "shortseason/frank_wolfe.hpp"
#include "shortseason/objective.hpp"
#include "shortseason/simulator.hpp"
#include "shortseason/synthetic.hpp"

namespace ss = shortseason;

namespace {

struct Fixture {
  ss::SyntheticLeague league = ss::generateNbaLike(11);
  ss::Schedule schedule = ss::solve(ss::PwObjectiveModel::build(league.state)).bestAtom;
  ss::PcInstance saa = ss::makeSampledInstance(league.state, ss::sampleScenarios(league.state, 512, 3));
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

ss::EvalConfig evalConfig(std::int64_t replications) {
  ss::EvalConfig cfg;
  cfg.replications = replications;
  cfg.baseSeed = 5;
  cfg.simProbs = fixture().league.trueProbs;
  return cfg;
}

// range(0) = OpenMP threads for the parallel variants.
void setThreads(const benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(0))); }

void BM_SimulateSerial(benchmark::State& state) {
  const auto cfg = evalConfig(4096);
  for (auto _ : state) benchmark::DoNotOptimize(ss::simulateSerial(fixture().league.state, fixture().schedule, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}

void BM_SimulateParallel(benchmark::State& state) {
  setThreads(state);
  const auto cfg = evalConfig(4096);
  for (auto _ : state) benchmark::DoNotOptimize(ss::simulate(fixture().league.state, fixture().schedule, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.replications);
}

void BM_McEstimateSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ss::mcEstimateSerial(fixture().league.state, fixture().schedule, 1 << 14, 7));
  state.SetItemsProcessed(state.iterations() * (1 << 14));
}

void BM_McEstimateParallel(benchmark::State& state) {
  setThreads(state);
  for (auto _ : state) benchmark::DoNotOptimize(ss::mcEstimate(fixture().league.state, fixture().schedule, 1 << 14, 7));
  state.SetItemsProcessed(state.iterations() * (1 << 14));
}

void BM_PcCountsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ss::pcScenarioCountsSerial(fixture().saa, fixture().schedule));
  state.SetItemsProcessed(state.iterations() * fixture().saa.numScenarios());
}

void BM_PcCountsParallel(benchmark::State& state) {
  setThreads(state);
  for (auto _ : state) benchmark::DoNotOptimize(ss::pcScenarioCounts(fixture().saa, fixture().schedule));
  state.SetItemsProcessed(state.iterations() * fixture().saa.numScenarios());
}

void BM_FrankWolfe(benchmark::State& state) {
  const auto model = ss::PwObjectiveModel::build(fixture().league.state);
  for (auto _ : state) benchmark::DoNotOptimize(ss::solve(model));
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->RangeMultiplier(2)->Range(1, 8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McEstimateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McEstimateParallel)->RangeMultiplier(2)->Range(1, 8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PcCountsSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PcCountsParallel)->RangeMultiplier(2)->Range(1, 8)->UseRealTime()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FrankWolfe)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
