// Serial vs OpenMP kernels and FPI vs GN estimator cost.
#include <benchmark/benchmark.h>

#include <string>

#include "polya/corpus.hpp"
#include "polya/estimators.hpp"
#include "polya/eval.hpp"
#include "polya/kernels.hpp"
#include "polya/lda.hpp"
#include "polya/synth.hpp"

using namespace polya;

namespace {

SampleSet bench_samples(long long n, long long elements) {
  Rng rng(1);
  const PolyaParams truth = sample_alpha_uniform(10, 1.0, rng);
  std::vector<CountVector> v;
  for (long long j = 0; j < n; ++j) v.push_back(sample_polya(truth, elements, rng));
  return SampleSet(std::move(v));
}

void BM_Estimate(benchmark::State& state, Method m) {
  const SampleSet s = bench_samples(state.range(0), state.range(1));
  EstimatorConfig cfg;
  cfg.max_iterations = 100000;
  long long iters = 0;
  for (auto _ : state) {
    const auto r = estimate(m, s, cfg);
    iters = r.iterations;
    benchmark::DoNotOptimize(r.final_log_likelihood);
  }
  state.counters["sweeps"] = static_cast<double>(iters);
}
BENCHMARK_CAPTURE(BM_Estimate, fpi, Method::fpi)
    ->Args({100, 1000})->Args({1000, 1000})->Args({1000, 10000})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Estimate, gn, Method::gn)
    ->Args({100, 1000})->Args({1000, 1000})->Args({1000, 10000})->Unit(benchmark::kMillisecond);

void BM_RecurrenceSums(benchmark::State& state) {
  const auto h = build_histograms(bench_samples(1000, state.range(0)));
  for (auto _ : state) {
    double acc = 0;
    for (const auto& dim : h.per_dim) acc += recurrence_sums(0.7, dim).trigamma;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_RecurrenceSums)->Arg(1000)->Arg(20000);

struct PerplexityFixture {
  Corpus train;
  Corpus test;
  TrainedModel model;

  PerplexityFixture() {
    Rng rng(2);
    TokenizedDocs raw;
    for (int d = 0; d < 400; ++d) {
      std::vector<std::string> doc;
      const int group = d % 4;
      for (int t = 0; t < 60; ++t) {
        doc.push_back("w" + std::to_string(group * 50 + static_cast<int>(rng.below(50))));
      }
      raw.docs.push_back(std::move(doc));
    }
    auto split = split_train_test(build_corpus(raw), {0.8, 1});
    train = std::move(split.train);
    test = std::move(split.test);
    TrainConfig cfg;
    cfg.topics = 8;
    cfg.iterations = 100;
    model = train_lda(train, cfg);
  }

  static const PerplexityFixture& get() {
    static const PerplexityFixture f;
    return f;
  }
};

void BM_Perplexity(benchmark::State& state, Execution exec) {
  const auto& f = PerplexityFixture::get();
  const LtrConfig cfg{static_cast<int>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(perplexity(f.model, f.test, cfg, exec));
}
BENCHMARK_CAPTURE(BM_Perplexity, serial, Execution::serial)
    ->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_Perplexity, parallel, Execution::parallel)
    ->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AccuracyBench(benchmark::State& state, Execution exec) {
  BenchGrid g;
  g.sample_counts = parse_range("50:200:50");
  g.element_counts = parse_range("500:2000:500");
  g.repeats = 2;
  for (auto _ : state) benchmark::DoNotOptimize(run_accuracy_bench(g, exec).size());
}
BENCHMARK_CAPTURE(BM_AccuracyBench, serial, Execution::serial)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(BM_AccuracyBench, parallel, Execution::parallel)
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
