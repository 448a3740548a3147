#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lftm/corpus.hpp"
#include "lftm/rng.hpp"

namespace lftm {

enum class ModelKind { Lda, Dmm, LfLda, LfDmm };

bool is_dmm_family(ModelKind kind);
bool is_latent_kind(ModelKind kind);
const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct Hyperparams {
  int num_topics = 0;
  double alpha = 0.1;
  double beta = 0.01;
  double lambda = 0.0;  // probability of the latent feature component
  double mu = 0.01;     // L2 regularizer on topic vectors
  std::uint64_t seed = 1;
  int baseline_iters = 2000;
  int lf_iters = 500;

  void validate() const;  // throws Error(ErrorKind::Input)
};

// Mutable sampler state: topic assignments, component indicators and the
// count tensors derived from them. dir_* tensors count tokens credited to the
// Dirichlet multinomial component, lf_* tensors tokens credited to the latent
// feature component. Tensors indexed [t * V + w] and [d * T + t].
struct CountState {
  int num_topics = 0;
  int vocab_size = 0;
  bool per_document = false;  // document-level topics (mixture family)

  std::vector<std::vector<int>> token_topic;           // [d][i], token-level family
  std::vector<int> doc_topic;                          // [d], document-level family
  std::vector<std::vector<std::uint8_t>> from_latent;  // [d][i] indicator

  std::vector<int> dir_topic_word;   // T*V
  std::vector<int> dir_topic_total;  // T
  std::vector<int> dir_doc_topic;    // D*T, token-level family only
  std::vector<int> lf_topic_word;    // T*V
  std::vector<int> lf_topic_total;   // T
  std::vector<int> lf_doc_topic;     // D*T, token-level family only
  std::vector<int> docs_in_topic;    // T, document-level family only

  int dir_tw(int t, int w) const { return dir_topic_word[static_cast<std::size_t>(t) * vocab_size + w]; }
  int lf_tw(int t, int w) const { return lf_topic_word[static_cast<std::size_t>(t) * vocab_size + w]; }
  int dir_dt(int d, int t) const { return dir_doc_topic[static_cast<std::size_t>(d) * num_topics + t]; }
  int lf_dt(int d, int t) const { return lf_doc_topic[static_cast<std::size_t>(d) * num_topics + t]; }

  // token-level family
  void remove_token(int d, int i, int word);
  void assign_token(int d, int i, int word, int topic, bool latent);

  // document-level family; remove reads the stored topic and indicators
  void remove_document(const Document& doc, int d);
  void assign_document(const Document& doc, int d, int topic,
                       std::span<const std::uint8_t> indicators);

  // moves one token between components, keeping its topic
  void set_token_component(const Document& doc, int d, int i, bool latent);

  std::int64_t dir_token_total() const;
  std::int64_t lf_token_total() const;
};

// Uniform topic per token (token-level family) or per document (document-level
// family); all indicators start at 0.
CountState init_assignments(const Corpus& corpus, const Hyperparams& hp, ModelKind kind, Rng& rng);

// Rebuilds every tensor from stored assignments (snapshot load path). Exactly
// one of token_topic / doc_topic is consulted depending on the family;
// from_latent may be empty, meaning all indicators are 0.
CountState rebuild_state(const Corpus& corpus, int num_topics, ModelKind kind,
                         const std::vector<std::vector<int>>& token_topic,
                         const std::vector<int>& doc_topic,
                         const std::vector<std::vector<std::uint8_t>>& from_latent);

// (word, count) pairs for one document, in first-appearance order.
void doc_word_counts(const Document& doc, std::vector<std::pair<int, int>>& out);

}  // namespace lftm
