#include <benchmark/benchmark.h>

#include "support/synthetic.hpp"
#include "textcoherence/textcoherence.hpp"

using namespace textcoherence;

namespace {

const tc_test::World& world() {
  static const tc_test::World w = [] {
    tc_test::World out = tc_test::make_world({200, 200, 100, 1});
    segment_corpus(out.corpus);
    link_corpus(out.corpus, build_gazetteer(out.entities));
    return out;
  }();
  return w;
}

void BM_Cosine(benchmark::State& state) {
  tc_test::Rng rng(1);
  std::vector<double> u(static_cast<std::size_t>(state.range(0))), v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = rng.normal();
    v[i] = rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(cosine(u, v));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Cosine)->Arg(50)->Arg(300);

void BM_ScoreCorpus(benchmark::State& state) {
  const tc_test::World& w = world();
  static const EsaIndex esa = build_esa_index(w.kb);
  const Resources res{&w.words, &esa, &w.entities};
  const auto method = static_cast<Method>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score_corpus(w.corpus, method, res, {}, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w.corpus.documents.size()));
  state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_ScoreCorpus)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_BuildEsaIndex(benchmark::State& state) {
  const tc_test::World& w = world();
  for (auto _ : state) benchmark::DoNotOptimize(build_esa_index(w.kb));
}
BENCHMARK(BM_BuildEsaIndex)->Unit(benchmark::kMicrosecond);

void BM_WelchTTest(benchmark::State& state) {
  tc_test::Rng rng(2);
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal() + 0.1;
  }
  for (auto _ : state) benchmark::DoNotOptimize(welch_t_test(a, b));
}
BENCHMARK(BM_WelchTTest)->Arg(100)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
