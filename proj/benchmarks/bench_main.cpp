#include <benchmark/benchmark.h>

#include "lftm/baseline.hpp"
#include "lftm/evaluation.hpp"
#include "lftm/lf_models.hpp"

using namespace lftm;

namespace {

Corpus make_corpus(int docs, int vocab, int min_len, int max_len, std::uint64_t seed) {
  Rng rng(seed);
  Corpus corpus;
  std::vector<std::string> words;
  words.reserve(static_cast<std::size_t>(vocab));
  for (int i = 0; i < vocab; ++i) words.push_back("w" + std::to_string(i));
  corpus.vocab = Vocabulary::from_words(std::move(words));
  for (int d = 0; d < docs; ++d) {
    Document doc;
    const int len = min_len + rng.uniform_int(max_len - min_len + 1);
    for (int i = 0; i < len; ++i) doc.tokens.push_back(rng.uniform_int(vocab));
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

EmbeddingMatrix make_embeddings(int vocab, int dim, std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingMatrix m;
  m.dim = dim;
  m.rows.resize(vocab, dim);
  for (int w = 0; w < vocab; ++w) {
    for (int k = 0; k < dim; ++k) m.rows(w, k) = 2.0 * rng.uniform() - 1.0;
  }
  return m;
}

constexpr int kDocs = 1000;
constexpr int kVocab = 2000;
constexpr int kTopics = 20;
constexpr int kDim = 50;

const Corpus& bench_corpus() {
  static const Corpus corpus = make_corpus(kDocs, kVocab, 8, 30, 1);
  return corpus;
}

const EmbeddingMatrix& bench_embeddings() {
  static const EmbeddingMatrix omega = make_embeddings(kVocab, kDim, 2);
  return omega;
}

}  // namespace

static void BM_LdaSweep(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  Hyperparams hp;
  hp.num_topics = kTopics;
  Rng rng(3);
  CountState st = init_assignments(corpus, hp, ModelKind::Lda, rng);
  for (auto _ : state) {
    lda_sweep(st, corpus, hp, rng);
    benchmark::DoNotOptimize(st.dir_topic_total.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.total_tokens()));
}
BENCHMARK(BM_LdaSweep)->Unit(benchmark::kMillisecond);

static void BM_DmmSweep(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  Hyperparams hp;
  hp.num_topics = kTopics;
  Rng rng(4);
  CountState st = init_assignments(corpus, hp, ModelKind::Dmm, rng);
  for (auto _ : state) {
    dmm_sweep(st, corpus, hp, rng);
    benchmark::DoNotOptimize(st.docs_in_topic.data());
  }
  state.SetItemsProcessed(state.iterations() * corpus.num_docs());
}
BENCHMARK(BM_DmmSweep)->Unit(benchmark::kMillisecond);

static void BM_LfLdaSweep(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  const EmbeddingMatrix& omega = bench_embeddings();
  Hyperparams hp;
  hp.num_topics = kTopics;
  hp.lambda = 0.6;
  hp.baseline_iters = 2;
  hp.lf_iters = 1;
  hp.seed = 5;
  LfModel model = train(corpus, hp, ModelKind::LfLda, &omega);
  SweepOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  Rng rng(6);
  for (auto _ : state) {
    lflda_sweep(model, corpus, omega, opts, rng);
    benchmark::DoNotOptimize(model.tau.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.total_tokens()));
}
BENCHMARK(BM_LfLdaSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_LfDmmSweep(benchmark::State& state) {
  const Corpus& corpus = bench_corpus();
  const EmbeddingMatrix& omega = bench_embeddings();
  Hyperparams hp;
  hp.num_topics = kTopics;
  hp.lambda = 0.6;
  hp.baseline_iters = 2;
  hp.lf_iters = 1;
  hp.seed = 7;
  LfModel model = train(corpus, hp, ModelKind::LfDmm, &omega);
  SweepOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  Rng rng(8);
  for (auto _ : state) {
    lfdmm_sweep(model, corpus, omega, opts, rng);
    benchmark::DoNotOptimize(model.tau.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * corpus.num_docs());
}
BENCHMARK(BM_LfDmmSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_CateTableBuild(benchmark::State& state) {
  const EmbeddingMatrix& omega = bench_embeddings();
  Rng rng(9);
  TopicVectors tau = TopicVectors::zeros(kTopics, kDim);
  for (int t = 0; t < kTopics; ++t) {
    for (int k = 0; k < kDim; ++k) tau.rows(t, k) = 2.0 * rng.uniform() - 1.0;
  }
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    CateTable table = CateTable::build(tau, omega, threads);
    benchmark::DoNotOptimize(table.probs.data());
  }
}
BENCHMARK(BM_CateTableBuild)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_MapEstimate(benchmark::State& state) {
  const EmbeddingMatrix& omega = bench_embeddings();
  Rng rng(10);
  std::vector<int> counts(static_cast<std::size_t>(kTopics) * kVocab);
  for (auto& c : counts) c = rng.uniform_int(12);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    TopicVectors tau = TopicVectors::zeros(kTopics, kDim);  // cold start each round
    state.ResumeTiming();
    map_estimate(tau, counts, omega, 0.01, OptimizerConfig{}, threads);
    benchmark::DoNotOptimize(tau.rows.data());
  }
}
BENCHMARK(BM_MapEstimate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BuildCooccurrence(benchmark::State& state) {
  const Corpus& corpus = make_corpus(2000, 5000, 10, 60, 11);
  std::vector<std::vector<int>> docs;
  for (const auto& d : corpus.docs) docs.push_back(d.tokens);
  for (auto _ : state) {
    CooccurrenceStats stats = build_cooccurrence(docs, 5000, 10);
    benchmark::DoNotOptimize(stats.window_count);
  }
}
BENCHMARK(BM_BuildCooccurrence)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
