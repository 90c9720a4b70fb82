#include <benchmark/benchmark.h>

#include <random>

#include "stemtag/sampler.h"
#include "support/fixtures.h"

namespace {

using namespace stemtag;

const Corpus& bench_corpus() {
  static const Corpus corpus = testing::sparse_synthetic_corpus(7, 5000);
  return corpus;
}

const SplitSupport& bench_support() {
  static const SplitSupport support = build_split_support(bench_corpus());
  return support;
}

void BM_Sweep(benchmark::State& st) {
  const auto variant = static_cast<Variant>(st.range(0));
  Model m(bench_corpus(), bench_support(),
          Hyperparams{0.003, 1.0, 0.003, 12, variant});
  Rng rng(1);
  auto [state, counts] = init_random(m, rng);
  for (auto _ : st) sweep(m, state, counts, rng);
  st.SetItemsProcessed(st.iterations() * bench_corpus().num_tokens());
  st.SetLabel(std::string(variant_name(variant)));
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SiteWeights(benchmark::State& st) {
  const auto variant = static_cast<Variant>(st.range(0));
  Model m(bench_corpus(), bench_support(),
          Hyperparams{0.003, 1.0, 0.003, 12, variant});
  auto [state, counts] = init_random(m, 1);
  const std::size_t i = 100;
  m.remove_token(state, counts, i);
  std::vector<double> w;
  for (auto _ : st) {
    m.site_weights(state, counts, i, w);
    benchmark::DoNotOptimize(w.data());
  }
  st.SetLabel(std::string(variant_name(variant)));
}
BENCHMARK(BM_SiteWeights)->Arg(0)->Arg(1)->Arg(2);

void BM_LogJoint(benchmark::State& st) {
  Model m(bench_corpus(), bench_support(),
          Hyperparams{0.003, 1.0, 0.003, 12, Variant::kStemSuffix});
  auto [state, counts] = init_random(m, 1);
  for (auto _ : st) benchmark::DoNotOptimize(m.log_joint(counts));
}
BENCHMARK(BM_LogJoint);

}  // namespace

BENCHMARK_MAIN();
