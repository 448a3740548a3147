#include "lftm/baseline.hpp"

#include <cmath>

namespace lftm {

void lda_conditional(const CountState& st, const Hyperparams& hp, int d, int word,
                     std::span<double> weights_out) {
  const double vbeta = hp.beta * st.vocab_size;
  for (int t = 0; t < st.num_topics; ++t) {
    const double word_term = (st.dir_tw(t, word) + hp.beta) / (st.dir_topic_total[t] + vbeta);
    weights_out[t] = (st.dir_dt(d, t) + hp.alpha) * word_term;
  }
}

void dmm_log_weights(const CountState& st, const Corpus& corpus, const Hyperparams& hp, int d,
                     std::span<double> log_weights_out) {
  const double vbeta = hp.beta * st.vocab_size;
  const int nd = corpus.docs[d].length();
  std::vector<std::pair<int, int>> wc;
  doc_word_counts(corpus.docs[d], wc);
  for (int t = 0; t < st.num_topics; ++t) {
    double lw = std::log(st.docs_in_topic[t] + hp.alpha) +
                std::lgamma(st.dir_topic_total[t] + vbeta) -
                std::lgamma(st.dir_topic_total[t] + nd + vbeta);
    for (const auto& [w, c] : wc) {
      lw += std::lgamma(st.dir_tw(t, w) + c + hp.beta) - std::lgamma(st.dir_tw(t, w) + hp.beta);
    }
    log_weights_out[t] = lw;
  }
}

void lda_sweep(CountState& st, const Corpus& corpus, const Hyperparams& hp, Rng& rng) {
  std::vector<double> weights(static_cast<std::size_t>(hp.num_topics));
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const auto& toks = corpus.docs[d].tokens;
    for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
      const int w = toks[i];
      st.remove_token(d, i, w);
      lda_conditional(st, hp, d, w, weights);
      const int t = sample_unnormalized(weights, rng);
      st.assign_token(d, i, w, t, false);
    }
  }
}

void dmm_sweep(CountState& st, const Corpus& corpus, const Hyperparams& hp, Rng& rng) {
  std::vector<double> logw(static_cast<std::size_t>(hp.num_topics));
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const Document& doc = corpus.docs[d];
    st.remove_document(doc, d);
    dmm_log_weights(st, corpus, hp, d, logw);
    const int t = sample_log_unnormalized(logw, rng);
    st.assign_document(doc, d, t, st.from_latent[d]);
  }
}

CountState train_baseline(const Corpus& corpus, const Hyperparams& hp, ModelKind kind, int iters,
                          Rng& rng) {
  hp.validate();
  CountState st = init_assignments(corpus, hp, kind, rng);
  for (int iter = 0; iter < iters; ++iter) {
    if (st.per_document) {
      dmm_sweep(st, corpus, hp, rng);
    } else {
      lda_sweep(st, corpus, hp, rng);
    }
  }
  return st;
}

}  // namespace lftm
