#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lftm/baseline.hpp"
#include "lftm/latent_feature.hpp"

namespace lftm {

struct LfModel {
  ModelKind kind = ModelKind::Lda;
  Hyperparams hp;
  CountState state;
  TopicVectors tau;  // empty for baseline kinds
};

struct SweepOptions {
  OptimizerConfig optimizer;
  int threads = 1;
};

// Unnormalized topic weights for one token whose counts are already removed:
// document factor times the two-component mixture of the Dirichlet word term
// and the latent-feature word probability.
void lflda_conditional_topic(const CountState& state, const CateTable& cate,
                             const Hyperparams& hp, int d, int word,
                             std::span<double> weights_out);

// P(indicator = 1 | topic) for one token; shared by the token-level and
// document-level samplers.
double lf_indicator_prob(const CountState& state, const CateTable& cate, const Hyperparams& hp,
                         int word, int topic);

bool lflda_sample_indicator(const CountState& state, const CateTable& cate, const Hyperparams& hp,
                            int word, int topic, Rng& rng);

// One outer iteration: MAP step over all topics, then for every token
// resample its topic and indicator.
MapReport lflda_sweep(LfModel& model, const Corpus& corpus, const EmbeddingMatrix& omega,
                      const SweepOptions& opts, Rng& rng);

// Exact log joint of (topic, indicator vector) for one removed document.
// The factorized weights below approximate it; kept as a test oracle.
double lfdmm_exact_joint(const CountState& state, const CateTable& cate, const Corpus& corpus,
                         const Hyperparams& hp, int d, int topic,
                         std::span<const std::uint8_t> indicators);

// Log topic weights for one removed document under the factorized surrogate
// whose per-word mixture factors are raised to the word's in-document count.
void lfdmm_topic_log_weights(const CountState& state, const CateTable& cate, const Corpus& corpus,
                             const Hyperparams& hp, int d, std::span<double> log_weights_out);

void lfdmm_sample_indicators(const CountState& state, const CateTable& cate,
                             const Hyperparams& hp, const Document& doc, int topic, Rng& rng,
                             std::span<std::uint8_t> indicators_out);

MapReport lfdmm_sweep(LfModel& model, const Corpus& corpus, const EmbeddingMatrix& omega,
                      const SweepOptions& opts, Rng& rng);

struct TrainProgress {
  bool latent_phase = false;
  int iteration = 0;  // 1-based within phase
  int total_iterations = 0;
  double map_objective = 0.0;  // latent phase only
  int topics_not_converged = 0;
};

struct TrainOptions {
  OptimizerConfig optimizer;
  int threads = 1;
  std::function<void(const TrainProgress&)> progress;
};

// Baseline kinds: init + baseline_iters sweeps. Latent kinds: baseline init
// phase, indicators drawn Bernoulli(lambda) moving sampled tokens to the
// latent tensors, then lf_iters latent-feature sweeps.
LfModel train(const Corpus& corpus, const Hyperparams& hp, ModelKind kind,
              const EmbeddingMatrix* omega, const TrainOptions& opts = {});

struct TopWord {
  int word = 0;
  double prob = 0.0;
};

struct PosteriorSummary {
  std::vector<std::vector<double>> theta;       // D x T
  std::vector<std::vector<double>> topic_word;  // T x V
  std::vector<std::vector<TopWord>> top_words;  // T x top_n, ties broken by word id
};

PosteriorSummary summarize(const LfModel& model, const Corpus& corpus,
                           const EmbeddingMatrix* omega, int top_n = 15);

// JSON snapshot of assignments, indicators and topic vectors. Counts are not
// stored; they are rebuilt from the assignments on load.
void save_model(const LfModel& model, const Corpus& corpus, const std::string& path);
LfModel load_model(const std::string& path, const Corpus& corpus);

}  // namespace lftm
