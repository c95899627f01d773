#include <benchmark/benchmark.h>

#include "smp/experiments.hpp"
#include "smp/oracle.hpp"
#include "smp/parallel.hpp"

using namespace smp;

namespace {

ProtocolConfig config(Count n) {
  ProtocolConfig c;
  c.n = n;
  c.delta = 0;
  c.rounds = 3;
  c.network = NetworkModel(0.5);
  return c;
}

// Arg 0 runs the serial reference; Arg k > 0 runs the OpenMP kernel on k workers.

void BM_EstimateEvent(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  const ProtocolConfig c = config(1000);
  serial::estimate_event_probability(c, Event::consensus(), 2000, 1);  // warm the transition cache
  for (auto _ : state) {
    if (workers == 0) {
      benchmark::DoNotOptimize(serial::estimate_event_probability(c, Event::consensus(), 2000, 1));
    } else {
      WorkerScope scope(workers);
      benchmark::DoNotOptimize(estimate_event_probability(c, Event::consensus(), 2000, 1));
    }
  }
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_EstimateEvent)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Exhaustive(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  const OpinionVector v = OpinionVector::from_counts({2, 2});
  for (auto _ : state) {
    if (workers == 0) {
      benchmark::DoNotOptimize(serial::exhaustive_pattern_counts(v));
    } else {
      WorkerScope scope(workers);
      benchmark::DoNotOptimize(exhaustive_pattern_counts(v));
    }
  }
}
BENCHMARK(BM_Exhaustive)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond)->UseRealTime();

void BM_ChainEvolve(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    if (workers == 0) {
      benchmark::DoNotOptimize(serial::evolve_chain(200, 0.5, {200, 200}, 3));
    } else {
      WorkerScope scope(workers);
      CountChain chain(200, 0.5);
      benchmark::DoNotOptimize(chain.evolve({200, 200}, 3));
    }
  }
}
BENCHMARK(BM_ChainEvolve)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
