#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "lftm/lf_models.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace lftm;

namespace {

Hyperparams make_hp(int topics, double lambda) {
  Hyperparams hp;
  hp.num_topics = topics;
  hp.lambda = lambda;
  return hp;
}

CateTable uniform_table(int topics, int vocab) {
  TopicVectors tau = TopicVectors::zeros(topics, 2);
  EmbeddingMatrix omega;
  omega.dim = 2;
  omega.rows = Eigen::MatrixXd::Zero(vocab, 2);
  return CateTable::build(tau, omega);
}

}  // namespace

TEST_CASE("mixture conditional with lambda 0 equals the plain token conditional") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    Corpus corpus = synthetic::random_corpus(rng, 6, 8, 1, 6);
    const int T = 2 + rng.uniform_int(3);
    Rng state_rng(rng.next_u64());
    CountState st = synthetic::random_lda_state(corpus, T, state_rng);
    Hyperparams hp = make_hp(T, 0.0);
    CateTable table = uniform_table(T, 8);
    const int d = rng.uniform_int(corpus.num_docs());
    const int w = corpus.docs[d].tokens[0];
    std::vector<double> plain(static_cast<std::size_t>(T)), mixed(static_cast<std::size_t>(T));
    lda_conditional(st, hp, d, w, plain);
    lflda_conditional_topic(st, table, hp, d, w, mixed);
    for (int t = 0; t < T; ++t) CHECK(mixed[t] == doctest::Approx(plain[t]).epsilon(1e-12));
  }
}

TEST_CASE("mixture conditional with lambda 1 on a fresh corpus is proportional to the word distribution") {
  Rng rng(7);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 6, 3);
  TopicVectors tau = TopicVectors::zeros(3, 3);
  for (int t = 0; t < 3; ++t) {
    for (int k = 0; k < 3; ++k) tau.rows(t, k) = synthetic::normal(rng);
  }
  CateTable table = CateTable::build(tau, omega);
  CountState st;
  st.num_topics = 3;
  st.vocab_size = 6;
  st.dir_topic_word.assign(18, 0);
  st.dir_topic_total.assign(3, 0);
  st.dir_doc_topic.assign(3, 0);
  st.lf_topic_word.assign(18, 0);
  st.lf_topic_total.assign(3, 0);
  st.lf_doc_topic.assign(3, 0);
  Hyperparams hp = make_hp(3, 1.0);
  std::vector<double> w(3);
  lflda_conditional_topic(st, table, hp, 0, 2, w);
  for (int t = 0; t < 3; ++t) {
    CHECK(w[t] == doctest::Approx(hp.alpha * table.prob(t, 2)).epsilon(1e-12));
  }
}

TEST_CASE("mixture conditional matches the hand-computed two-topic example") {
  // document factors 2.1 and 0.1, dirichlet word term 0.5, latent term 0.25
  CountState st;
  st.num_topics = 2;
  st.vocab_size = 2;
  st.dir_topic_word.assign(4, 0);
  st.dir_topic_total.assign(2, 0);
  st.dir_doc_topic = {2, 0};
  st.lf_topic_word.assign(4, 0);
  st.lf_topic_total.assign(2, 0);
  st.lf_doc_topic = {0, 0};
  Hyperparams hp = make_hp(2, 0.6);
  hp.alpha = 0.1;
  hp.beta = 0.5;  // (0 + 0.5) / (0 + 2 * 0.5) = 0.5

  EmbeddingMatrix omega;
  omega.dim = 2;
  omega.rows.resize(2, 2);
  omega.rows << 1, 0, 0, 1;
  TopicVectors tau = TopicVectors::zeros(2, 2);
  tau.rows(0, 1) = std::log(3.0);  // scores (0, log 3) -> p(word 0) = 0.25
  tau.rows(1, 1) = std::log(3.0);
  CateTable table = CateTable::build(tau, omega);
  REQUIRE(table.prob(0, 0) == doctest::Approx(0.25).epsilon(1e-12));

  std::vector<double> w(2);
  lflda_conditional_topic(st, table, hp, 0, 0, w);
  CHECK(w[0] == doctest::Approx(0.735).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.035).epsilon(1e-12));
}

TEST_CASE("indicator probability matches the hand-computed example and its extremes") {
  CountState st;
  st.num_topics = 1;
  st.vocab_size = 2;
  st.dir_topic_word.assign(2, 0);
  st.dir_topic_total.assign(1, 0);
  st.lf_topic_word.assign(2, 0);
  st.lf_topic_total.assign(1, 0);
  EmbeddingMatrix omega;
  omega.dim = 2;
  omega.rows.resize(2, 2);
  omega.rows << 1, 0, 0, 1;
  TopicVectors tau = TopicVectors::zeros(1, 2);
  tau.rows(0, 1) = std::log(3.0);
  CateTable table = CateTable::build(tau, omega);

  Hyperparams hp = make_hp(1, 0.6);
  hp.beta = 0.5;  // dirichlet term 0.5, latent term 0.25
  CHECK(lf_indicator_prob(st, table, hp, 0, 0) == doctest::Approx(0.15 / 0.35).epsilon(1e-12));

  hp.lambda = 0.0;
  Rng rng(1);
  const auto before = rng.next_u64();
  Rng stream(1);
  CHECK_FALSE(lflda_sample_indicator(st, table, hp, 0, 0, stream));
  CHECK(stream.next_u64() == before);  // no draw consumed
  hp.lambda = 1.0;
  Rng stream2(1);
  CHECK(lflda_sample_indicator(st, table, hp, 0, 0, stream2));
  CHECK(stream2.next_u64() == before);
}

TEST_CASE("token-level mixture sweep keeps both tensor families consistent") {
  Rng rng(9);
  Corpus corpus = synthetic::random_corpus(rng, 15, 10, 1, 8);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 10, 4);
  Hyperparams hp = make_hp(3, 0.5);
  hp.baseline_iters = 3;
  hp.lf_iters = 0;
  LfModel model = train(corpus, hp, ModelKind::LfLda, &omega);
  Rng sweep_rng(42);
  for (int sweep = 0; sweep < 4; ++sweep) {
    lflda_sweep(model, corpus, omega, SweepOptions{}, sweep_rng);
    CHECK(oracles::counts_match(corpus, model.state));
  }
  CHECK(model.state.dir_token_total() + model.state.lf_token_total() ==
        static_cast<std::int64_t>(corpus.total_tokens()));
}

TEST_CASE("token-level mixture sweep at lambda 0 follows the plain sampler trajectory") {
  Rng rng(13);
  Corpus corpus = synthetic::random_corpus(rng, 12, 9, 1, 7);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 9, 3);
  Hyperparams hp = make_hp(3, 0.0);

  Rng plain_rng(7), mix_rng(7);
  CountState plain = init_assignments(corpus, hp, ModelKind::Lda, plain_rng);
  LfModel model;
  model.kind = ModelKind::LfLda;
  model.hp = hp;
  model.state = init_assignments(corpus, hp, ModelKind::LfLda, mix_rng);
  model.tau = TopicVectors::zeros(3, 3);
  for (int sweep = 0; sweep < 5; ++sweep) {
    lda_sweep(plain, corpus, hp, plain_rng);
    lflda_sweep(model, corpus, omega, SweepOptions{}, mix_rng);
    CHECK(model.state.token_topic == plain.token_topic);
  }
  CHECK(model.state.dir_topic_word == plain.dir_topic_word);
  CHECK(model.state.lf_token_total() == 0);
}

TEST_CASE("exact joint for a single-token document reduces to closed forms") {
  Rng rng(17);
  Corpus corpus = synthetic::random_corpus(rng, 6, 7, 1, 5);
  corpus.docs[0].tokens = {3};
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 7, 3);
  const int T = 3;
  Rng state_rng(5);
  CountState st = synthetic::random_dmm_state(corpus, T, state_rng, 0.4);
  TopicVectors tau = TopicVectors::zeros(T, 3);
  for (int t = 0; t < T; ++t) {
    for (int k = 0; k < 3; ++k) tau.rows(t, k) = synthetic::normal(state_rng);
  }
  CateTable table = CateTable::build(tau, omega);
  Hyperparams hp = make_hp(T, 0.3);
  st.remove_document(corpus.docs[0], 0);
  const double vbeta = hp.beta * st.vocab_size;
  for (int t = 0; t < T; ++t) {
    const std::uint8_t zero = 0, one = 1;
    const double j0 = lfdmm_exact_joint(st, table, corpus, hp, 0, t, {&zero, 1});
    const double expected0 = std::log((1 - hp.lambda) * (st.docs_in_topic[t] + hp.alpha) *
                                      (st.dir_tw(t, 3) + hp.beta) /
                                      (st.dir_topic_total[t] + vbeta));
    CHECK(j0 == doctest::Approx(expected0).epsilon(1e-10));
    const double j1 = lfdmm_exact_joint(st, table, corpus, hp, 0, t, {&one, 1});
    const double expected1 =
        std::log(hp.lambda * (st.docs_in_topic[t] + hp.alpha) * table.prob(t, 3));
    CHECK(j1 == doctest::Approx(expected1).epsilon(1e-10));
  }
}

TEST_CASE("factorized weights are exact for single-token documents") {
  Rng rng(19);
  for (int rep = 0; rep < 30; ++rep) {
    Corpus corpus = synthetic::random_corpus(rng, 6, 7, 1, 5);
    corpus.docs[0].tokens = {rng.uniform_int(7)};
    const int T = 2 + rng.uniform_int(3);
    Rng state_rng(rng.next_u64());
    CountState st = synthetic::random_dmm_state(corpus, T, state_rng, 0.4);
    EmbeddingMatrix omega = synthetic::random_embeddings(state_rng, 7, 3);
    TopicVectors tau = TopicVectors::zeros(T, 3);
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < 3; ++k) tau.rows(t, k) = synthetic::normal(state_rng);
    }
    CateTable table = CateTable::build(tau, omega);
    Hyperparams hp = make_hp(T, 0.25 + 0.5 * rng.uniform());
    st.remove_document(corpus.docs[0], 0);

    std::vector<double> logq(static_cast<std::size_t>(T));
    lfdmm_topic_log_weights(st, table, corpus, hp, 0, logq);
    std::vector<double> q(static_cast<std::size_t>(T)), p(static_cast<std::size_t>(T));
    double qz = 0, pz = 0;
    for (int t = 0; t < T; ++t) {
      q[t] = std::exp(logq[t]);
      qz += q[t];
      const std::uint8_t zero = 0, one = 1;
      p[t] = std::exp(lfdmm_exact_joint(st, table, corpus, hp, 0, t, {&zero, 1})) +
             std::exp(lfdmm_exact_joint(st, table, corpus, hp, 0, t, {&one, 1}));
      pz += p[t];
    }
    for (int t = 0; t < T; ++t) {
      CHECK(q[t] / qz == doctest::Approx(p[t] / pz).epsilon(1e-9));
    }
  }
}

TEST_CASE("factorized weights with lambda 0 equal the frozen-count document form") {
  Rng rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    Corpus corpus = synthetic::random_corpus(rng, 8, 6, 1, 6);
    const int T = 2 + rng.uniform_int(3);
    Rng state_rng(rng.next_u64());
    CountState st = synthetic::random_dmm_state(corpus, T, state_rng);
    Hyperparams hp = make_hp(T, 0.0);
    CateTable table = uniform_table(T, 6);
    const int d = rng.uniform_int(corpus.num_docs());
    st.remove_document(corpus.docs[d], d);
    std::vector<double> lw(static_cast<std::size_t>(T));
    lfdmm_topic_log_weights(st, table, corpus, hp, d, lw);

    std::vector<std::pair<int, int>> wc;
    doc_word_counts(corpus.docs[d], wc);
    const double vbeta = hp.beta * st.vocab_size;
    for (int t = 0; t < T; ++t) {
      double expected = std::log(st.docs_in_topic[t] + hp.alpha);
      for (const auto& [w, c] : wc) {
        expected += c * std::log((st.dir_tw(t, w) + hp.beta) / (st.dir_topic_total[t] + vbeta));
      }
      CHECK(lw[t] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("a repeated word squares its mixture factor") {
  Corpus corpus;
  corpus.vocab = synthetic::numbered_vocab(4);
  corpus.docs.push_back({{2, 2}, -1});
  corpus.docs.push_back({{0, 1, 3}, -1});
  const int T = 2;
  Rng rng(3);
  CountState st = synthetic::random_dmm_state(corpus, T, rng);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 4, 2);
  TopicVectors tau = TopicVectors::zeros(T, 2);
  tau.rows(0, 0) = 1.0;
  CateTable table = CateTable::build(tau, omega);
  Hyperparams hp = make_hp(T, 0.4);
  st.remove_document(corpus.docs[0], 0);
  std::vector<double> lw(2);
  lfdmm_topic_log_weights(st, table, corpus, hp, 0, lw);
  const double vbeta = hp.beta * 4;
  for (int t = 0; t < T; ++t) {
    const double factor =
        (1 - hp.lambda) * (st.dir_tw(t, 2) + hp.beta) / (st.dir_topic_total[t] + vbeta) +
        hp.lambda * table.prob(t, 2);
    const double expected = std::log(st.docs_in_topic[t] + hp.alpha) + 2.0 * std::log(factor);
    CHECK(lw[t] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("document indicator sampling is degenerate at the lambda extremes") {
  Rng rng(29);
  Corpus corpus = synthetic::random_corpus(rng, 4, 5, 3, 6);
  const int T = 2;
  Rng state_rng(7);
  CountState st = synthetic::random_dmm_state(corpus, T, state_rng);
  EmbeddingMatrix omega = synthetic::random_embeddings(state_rng, 5, 2);
  CateTable table = CateTable::build(TopicVectors::zeros(T, 2), omega);
  std::vector<std::uint8_t> s(static_cast<std::size_t>(corpus.docs[0].length()));

  Hyperparams hp = make_hp(T, 0.0);
  Rng draw(1);
  lfdmm_sample_indicators(st, table, hp, corpus.docs[0], 0, draw, s);
  for (auto v : s) CHECK(v == 0);

  hp.lambda = 1.0;
  lfdmm_sample_indicators(st, table, hp, corpus.docs[0], 0, draw, s);
  for (auto v : s) CHECK(v == 1);
}

TEST_CASE("document-level mixture sweep keeps tensors consistent, even with one topic") {
  Rng rng(31);
  Corpus corpus = synthetic::random_corpus(rng, 20, 8, 2, 7);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 8, 3);
  for (int T : {1, 3}) {
    Hyperparams hp = make_hp(T, 0.5);
    hp.baseline_iters = 2;
    hp.lf_iters = 2;
    hp.seed = 11;
    LfModel model = train(corpus, hp, ModelKind::LfDmm, &omega);
    CHECK(oracles::counts_match(corpus, model.state));
    Rng sweep_rng(3);
    lfdmm_sweep(model, corpus, omega, SweepOptions{}, sweep_rng);
    CHECK(oracles::counts_match(corpus, model.state));
    if (T == 1) {
      for (int t : model.state.doc_topic) CHECK(t == 0);
      // indicators were still resampled
      CHECK(model.state.lf_token_total() > 0);
      CHECK(model.state.dir_token_total() > 0);
    }
  }
}

TEST_CASE("training is deterministic in the seed") {
  Rng rng(37);
  Corpus corpus = synthetic::random_corpus(rng, 10, 9, 1, 6);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 9, 3);
  Hyperparams hp = make_hp(2, 0.7);
  hp.baseline_iters = 4;
  hp.lf_iters = 4;
  hp.seed = 99;
  LfModel a = train(corpus, hp, ModelKind::LfDmm, &omega);
  LfModel b = train(corpus, hp, ModelKind::LfDmm, &omega);
  CHECK(a.state.doc_topic == b.state.doc_topic);
  CHECK(a.state.from_latent == b.state.from_latent);
  CHECK((a.tau.rows - b.tau.rows).norm() == 0.0);
}

TEST_CASE("training a lambda-0 mixture reproduces the continued baseline run") {
  Rng rng(41);
  Corpus corpus = synthetic::random_corpus(rng, 14, 10, 1, 7);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 10, 3);

  Hyperparams base_hp = make_hp(3, 0.0);
  base_hp.baseline_iters = 12;
  base_hp.seed = 5;
  LfModel baseline = train(corpus, base_hp, ModelKind::Lda, nullptr);

  Hyperparams lf_hp = make_hp(3, 0.0);
  lf_hp.baseline_iters = 7;
  lf_hp.lf_iters = 5;
  lf_hp.seed = 5;
  LfModel mixture = train(corpus, lf_hp, ModelKind::LfLda, &omega);

  CHECK(mixture.state.token_topic == baseline.state.token_topic);
  CHECK(mixture.state.dir_topic_word == baseline.state.dir_topic_word);
  CHECK(mixture.state.lf_token_total() == 0);
}

TEST_CASE("count conservation holds across the phase boundary") {
  Rng rng(43);
  Corpus corpus = synthetic::random_corpus(rng, 12, 8, 1, 6);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 8, 3);
  Hyperparams hp = make_hp(3, 0.6);
  hp.baseline_iters = 3;
  hp.lf_iters = 3;
  for (ModelKind kind : {ModelKind::LfLda, ModelKind::LfDmm}) {
    LfModel model = train(corpus, hp, kind, &omega);
    CHECK(oracles::counts_match(corpus, model.state));
    CHECK(model.state.dir_token_total() + model.state.lf_token_total() ==
          static_cast<std::int64_t>(corpus.total_tokens()));
  }
}

TEST_CASE("training leaves the embedding matrix untouched") {
  Rng rng(47);
  Corpus corpus = synthetic::random_corpus(rng, 10, 7, 1, 6);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 7, 3);
  Eigen::MatrixXd before = omega.rows;
  Hyperparams hp = make_hp(2, 0.8);
  hp.baseline_iters = 3;
  hp.lf_iters = 5;
  train(corpus, hp, ModelKind::LfDmm, &omega);
  CHECK((omega.rows - before).norm() == 0.0);
}

TEST_CASE("summaries are normalized and reduce to smoothed multinomials at lambda 0") {
  Rng rng(53);
  Corpus corpus = synthetic::random_corpus(rng, 10, 8, 2, 6);
  Hyperparams hp = make_hp(3, 0.0);
  hp.baseline_iters = 5;
  LfModel model = train(corpus, hp, ModelKind::Lda, nullptr);
  PosteriorSummary summary = summarize(model, corpus, nullptr);
  const double vbeta = hp.beta * 8;
  for (int t = 0; t < 3; ++t) {
    double total = 0.0;
    for (int w = 0; w < 8; ++w) {
      CHECK(summary.topic_word[t][w] ==
            doctest::Approx((model.state.dir_tw(t, w) + hp.beta) /
                            (model.state.dir_topic_total[t] + vbeta))
                .epsilon(1e-12));
      total += summary.topic_word[t][w];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const auto& row : summary.theta) {
    double total = 0.0;
    for (double x : row) {
      CHECK(x >= 0.0);
      total += x;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }

  // mixture rows normalize too
  Rng erng(3);
  EmbeddingMatrix omega = synthetic::random_embeddings(erng, 8, 3);
  Hyperparams lf_hp = make_hp(3, 0.7);
  lf_hp.baseline_iters = 3;
  lf_hp.lf_iters = 3;
  LfModel lf_model = train(corpus, lf_hp, ModelKind::LfDmm, &omega);
  PosteriorSummary lf_summary = summarize(lf_model, corpus, &omega);
  for (const auto& row : lf_summary.topic_word) {
    double total = 0.0;
    for (double x : row) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  for (const auto& row : lf_summary.theta) {
    double total = 0.0;
    for (double x : row) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("document-level theta equals the normalized removed-document weights") {
  Rng rng(59);
  Corpus corpus = synthetic::random_corpus(rng, 8, 7, 1, 6);
  Hyperparams hp = make_hp(3, 0.0);
  hp.baseline_iters = 4;
  hp.seed = 2;
  LfModel model = train(corpus, hp, ModelKind::Dmm, nullptr);
  PosteriorSummary summary = summarize(model, corpus, nullptr);

  for (int d = 0; d < corpus.num_docs(); ++d) {
    CountState work = model.state;
    work.remove_document(corpus.docs[d], d);
    std::vector<double> lw(3);
    dmm_log_weights(work, corpus, hp, d, lw);
    const auto expected = oracles::softmax_direct(lw);
    for (int t = 0; t < 3; ++t) {
      CHECK(summary.theta[d][t] == doctest::Approx(expected[t]).epsilon(1e-9));
    }
  }
  // the mutated copy did not leak back
  CHECK(oracles::counts_match(corpus, model.state));
}

TEST_CASE("top words are ranked by probability with id tie-breaking") {
  Rng rng(61);
  Corpus corpus = synthetic::random_corpus(rng, 6, 20, 2, 6);
  Hyperparams hp = make_hp(2, 0.0);
  hp.baseline_iters = 3;
  LfModel model = train(corpus, hp, ModelKind::Lda, nullptr);
  PosteriorSummary summary = summarize(model, corpus, nullptr, 15);
  for (int t = 0; t < 2; ++t) {
    REQUIRE(summary.top_words[t].size() == 15);
    // sort oracle over the full row
    std::vector<TopWord> all;
    for (int w = 0; w < 20; ++w) all.push_back({w, summary.topic_word[t][w]});
    std::sort(all.begin(), all.end(), [](const TopWord& a, const TopWord& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.word < b.word;
    });
    for (int k = 0; k < 15; ++k) {
      CHECK(summary.top_words[t][k].word == all[k].word);
      if (k > 0) CHECK(summary.top_words[t][k].prob <= summary.top_words[t][k - 1].prob);
    }
  }
}

TEST_CASE("snapshot round trip rebuilds identical counts") {
  Rng rng(67);
  Corpus corpus = synthetic::random_corpus(rng, 10, 9, 1, 6);
  EmbeddingMatrix omega = synthetic::random_embeddings(rng, 9, 3);
  Hyperparams hp = make_hp(3, 0.5);
  hp.baseline_iters = 3;
  hp.lf_iters = 3;
  hp.seed = 8;
  for (ModelKind kind : {ModelKind::Lda, ModelKind::Dmm, ModelKind::LfLda, ModelKind::LfDmm}) {
    Hyperparams run_hp = hp;
    run_hp.lambda = is_latent_kind(kind) ? 0.5 : 0.0;
    LfModel model = train(corpus, run_hp, kind, is_latent_kind(kind) ? &omega : nullptr);
    const std::string path =
        (std::filesystem::temp_directory_path() / "lftm_snapshot_test.json").string();
    save_model(model, corpus, path);
    LfModel loaded = load_model(path, corpus);
    CHECK(loaded.kind == model.kind);
    CHECK(loaded.state.dir_topic_word == model.state.dir_topic_word);
    CHECK(loaded.state.lf_topic_word == model.state.lf_topic_word);
    CHECK(loaded.state.dir_topic_total == model.state.dir_topic_total);
    if (is_dmm_family(kind)) {
      CHECK(loaded.state.doc_topic == model.state.doc_topic);
      CHECK(loaded.state.docs_in_topic == model.state.docs_in_topic);
    } else {
      CHECK(loaded.state.token_topic == model.state.token_topic);
    }
    if (is_latent_kind(kind)) {
      CHECK((loaded.tau.rows - model.tau.rows).norm() == 0.0);
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("snapshot load rejects a different corpus") {
  Rng rng(71);
  Corpus corpus = synthetic::random_corpus(rng, 8, 7, 1, 5);
  Hyperparams hp = make_hp(2, 0.0);
  hp.baseline_iters = 2;
  LfModel model = train(corpus, hp, ModelKind::Lda, nullptr);
  const std::string path =
      (std::filesystem::temp_directory_path() / "lftm_snapshot_mismatch.json").string();
  save_model(model, corpus, path);
  Corpus other = synthetic::random_corpus(rng, 8, 7, 1, 5);
  other.vocab = Vocabulary::from_words({"completely", "different", "words", "here", "x", "y", "z"});
  try {
    load_model(path, other);
    FAIL("expected a mismatch error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
  }
  std::remove(path.c_str());
}
