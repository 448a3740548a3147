#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lftm/lf_models.hpp"

namespace lftm {

// Sliding-window co-occurrence counts over a reference corpus. Windows
// advance one token at a time and never cross document boundaries; documents
// shorter than the window contribute one window; a word or pair counts at
// most once per window.
struct CooccurrenceStats {
  std::int64_t window_count = 0;
  std::vector<std::int64_t> word_windows;
  std::unordered_map<std::uint64_t, std::int64_t> pair_windows;

  static std::uint64_t pair_key(int a, int b);
  std::int64_t pair_count(int a, int b) const;
};

CooccurrenceStats build_cooccurrence(const std::vector<std::vector<int>>& docs, int vocab_size,
                                     int window = 10);

// Normalized pointwise mutual information of a word pair from window
// fractions. Pairs that never co-occur score -1 (the analytic limit); pairs
// where either marginal is zero are unscorable and return 0.
double npmi_pair(const CooccurrenceStats& stats, int wi, int wj);

// Sum over all unordered pairs among the first top_n ids. Ids may be -1 for
// words absent from the reference corpus; those and zero-marginal words are
// skipped. Fewer than two scorable words yields 0 with a warning on stderr.
double npmi_topic(const CooccurrenceStats& stats, std::span<const int> top_word_ids,
                  int top_n = 15);

// Mean per-topic score; top words are mapped from the model vocabulary into
// the reference vocabulary by string.
double npmi_model(const CooccurrenceStats& stats, const PosteriorSummary& summary,
                  const Vocabulary& model_vocab, const Vocabulary& ref_vocab, int top_n = 15);

// One document per line, tokenized with the standard cleaning rules but no
// stopword, length or frequency filtering.
Corpus load_reference_corpus(const std::string& path);

// Cache keyed by (corpus fingerprint, window); load returns false on any key
// or version mismatch.
void save_cooccurrence(const CooccurrenceStats& stats, std::uint64_t corpus_fingerprint,
                       int window, const std::string& path);
bool load_cooccurrence(const std::string& path, std::uint64_t corpus_fingerprint, int window,
                       CooccurrenceStats* out);

// Highest-probability topic per document, lowest index on ties.
std::vector<int> cluster_assign(const PosteriorSummary& summary);

struct ContingencyTable {
  std::vector<std::int64_t> counts;  // clusters x labels, flat
  int num_clusters = 0;
  int num_labels = 0;
  std::int64_t total = 0;

  std::int64_t at(int cluster, int label) const {
    return counts[static_cast<std::size_t>(cluster) * num_labels + label];
  }
  static ContingencyTable from_assignments(std::span<const int> clusters,
                                           std::span<const int> labels, int num_clusters,
                                           int num_labels);
};

double purity(const ContingencyTable& table);

// Mutual information normalized by the arithmetic mean of the two entropies;
// 1 when both partitions are single blocks.
double nmi(const ContingencyTable& table);

double macro_f1(std::span<const int> gold, std::span<const int> predicted, int num_labels);

// Stratified k-fold cross-validation of a one-vs-rest L2-regularized logistic
// regression on the per-document topic proportions; pooled predictions give
// the macro-F1. Folds are reduced (with a warning) when the smallest class
// has fewer members than requested.
double classify(const PosteriorSummary& summary, std::span<const int> labels, int num_labels,
                int folds = 10, std::uint64_t seed = 1);

}  // namespace lftm
