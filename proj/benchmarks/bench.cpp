#include <benchmark/benchmark.h>

#include "greenmark/attack.hpp"
#include "greenmark/certify.hpp"
#include "greenmark/detect.hpp"
#include "greenmark/divergence.hpp"
#include "greenmark/model.hpp"
#include "greenmark/partition.hpp"
#include "greenmark/sampling.hpp"

using namespace greenmark;

namespace {

WatermarkKey bench_key(double gamma, std::int32_t vocab, Scheme scheme) {
  Rng entropy(99);
  return keygen(gamma, 2.0, scheme, vocab, entropy);
}

void BM_Partition(benchmark::State& state) {
  const WatermarkKey key = bench_key(0.5, static_cast<std::int32_t>(state.range(0)),
                                     Scheme::FixedSplit);
  for (auto _ : state) {
    GreenList green = partition(key);
    benchmark::DoNotOptimize(green);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Partition)->RangeMultiplier(8)->Range(1000, 512000)->Complexity();

void BM_GenerateUniform(benchmark::State& state) {
  const std::int32_t vocab = 1000;
  const ModelPtr model = uniform_lm(vocab);
  const WatermarkKey key = bench_key(0.5, vocab, Scheme::FixedSplit);
  GreenListSource source(key);
  GenerationConfig config;
  config.horizon = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    TokenSeq seq = generate(*model, {}, &source, config);
    benchmark::DoNotOptimize(seq);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateUniform)->Arg(200);

void BM_DetectFixed(benchmark::State& state) {
  const std::int32_t vocab = 1000;
  const WatermarkKey key = bench_key(0.5, vocab, Scheme::FixedSplit);
  GreenListSource source(key);
  Rng rng(7);
  TokenSeq seq;
  for (int i = 0; i < state.range(0); ++i)
    seq.push_back(static_cast<Token>(rng.next_below(vocab)));
  for (auto _ : state) {
    DetectionReport report = detect(seq, source, 6.0);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectFixed)->Arg(200)->Arg(2000);

void BM_DetectBigram(benchmark::State& state) {
  const std::int32_t vocab = 1000;
  const WatermarkKey key = bench_key(0.5, vocab, Scheme::BigramHash);
  GreenListSource source(key);
  Rng rng(8);
  TokenSeq seq;
  for (int i = 0; i < state.range(0); ++i)
    seq.push_back(static_cast<Token>(rng.next_below(vocab)));
  for (auto _ : state) {
    DetectionReport report = detect_bigram(seq, source, 6.0);
    benchmark::DoNotOptimize(report);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectBigram)->Arg(200);

void BM_EditDistance(benchmark::State& state) {
  Rng rng(9);
  TokenSeq a, b;
  for (int i = 0; i < state.range(0); ++i) {
    a.push_back(static_cast<Token>(rng.next_below(64)));
    b.push_back(static_cast<Token>(rng.next_below(64)));
  }
  for (auto _ : state) {
    int d = edit_distance(a, b);
    benchmark::DoNotOptimize(d);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_RenyiGrid(benchmark::State& state) {
  Rng rng(10);
  LogitVector logits(100);
  for (double& l : logits) l = rng.next_normal();
  const ProbVector p = softmax(logits);
  const WatermarkKey key = bench_key(0.5, 100, Scheme::FixedSplit);
  const GreenList green = partition(key);
  const std::vector<double> alphas = {0.5, 1.0, 2.0, 10.0,
                                      std::numeric_limits<double>::infinity()};
  for (auto _ : state) {
    QualityCheckReport r = verify_quality_bound(p, green, 2.0, alphas, 200);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_RenyiGrid);

void BM_CertifiedBudget(benchmark::State& state) {
  for (auto _ : state) {
    RobustnessCertificate cert = certified_edit_budget(12.0, 2000, 0.5, 6.0, Scheme::FixedSplit);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_CertifiedBudget);

}  // namespace

BENCHMARK_MAIN();
