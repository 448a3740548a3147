#include "lftm/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>

#include "json.hpp"

namespace lftm {

std::uint64_t CooccurrenceStats::pair_key(int a, int b) {
  const std::uint64_t lo = static_cast<std::uint64_t>(std::min(a, b));
  const std::uint64_t hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

std::int64_t CooccurrenceStats::pair_count(int a, int b) const {
  auto it = pair_windows.find(pair_key(a, b));
  return it == pair_windows.end() ? 0 : it->second;
}

CooccurrenceStats build_cooccurrence(const std::vector<std::vector<int>>& docs, int vocab_size,
                                     int window) {
  if (window < 2) throw Error(ErrorKind::Input, "co-occurrence window must be >= 2");
  CooccurrenceStats stats;
  stats.word_windows.assign(static_cast<std::size_t>(vocab_size), 0);
  std::vector<int> uniq;
  for (const auto& doc : docs) {
    const int len = static_cast<int>(doc.size());
    if (len == 0) continue;
    const int span = std::min(len, window);
    const int num_windows = len <= window ? 1 : len - window + 1;
    for (int start = 0; start < num_windows; ++start) {
      uniq.assign(doc.begin() + start, doc.begin() + start + span);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      ++stats.window_count;
      for (std::size_t a = 0; a < uniq.size(); ++a) {
        ++stats.word_windows[static_cast<std::size_t>(uniq[a])];
        for (std::size_t b = a + 1; b < uniq.size(); ++b) {
          ++stats.pair_windows[CooccurrenceStats::pair_key(uniq[a], uniq[b])];
        }
      }
    }
  }
  return stats;
}

double npmi_pair(const CooccurrenceStats& stats, int wi, int wj) {
  const std::int64_t ci = stats.word_windows[static_cast<std::size_t>(wi)];
  const std::int64_t cj = stats.word_windows[static_cast<std::size_t>(wj)];
  if (ci == 0 || cj == 0) return 0.0;
  const std::int64_t cij = stats.pair_count(wi, wj);
  if (cij == 0) return -1.0;
  if (cij == stats.window_count) return 1.0;  // co-occur in every window
  const double n = static_cast<double>(stats.window_count);
  const double pij = cij / n;
  const double pi = ci / n;
  const double pj = cj / n;
  return std::log(pij / (pi * pj)) / (-std::log(pij));
}

double npmi_topic(const CooccurrenceStats& stats, std::span<const int> top_word_ids, int top_n) {
  const int n = std::min<int>(top_n, static_cast<int>(top_word_ids.size()));
  std::vector<int> scorable;
  for (int k = 0; k < n; ++k) {
    const int id = top_word_ids[k];
    if (id >= 0 && stats.word_windows[static_cast<std::size_t>(id)] > 0) scorable.push_back(id);
  }
  if (scorable.size() < 2) {
    std::cerr << "warning: fewer than 2 scorable words in topic, coherence set to 0\n";
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t a = 0; a < scorable.size(); ++a) {
    for (std::size_t b = a + 1; b < scorable.size(); ++b) {
      total += npmi_pair(stats, scorable[a], scorable[b]);
    }
  }
  return total;
}

double npmi_model(const CooccurrenceStats& stats, const PosteriorSummary& summary,
                  const Vocabulary& model_vocab, const Vocabulary& ref_vocab, int top_n) {
  double total = 0.0;
  std::vector<int> ids;
  for (const auto& topic : summary.top_words) {
    ids.clear();
    for (const TopWord& tw : topic) {
      ids.push_back(ref_vocab.id_of(model_vocab.words[static_cast<std::size_t>(tw.word)]));
    }
    total += npmi_topic(stats, ids, top_n);
  }
  return total / static_cast<double>(summary.top_words.size());
}

Corpus load_reference_corpus(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<std::string>> docs;
  docs.reserve(lines.size());
  const std::unordered_set<std::string> no_stopwords;
  for (const auto& line : lines) {
    docs.push_back(tokenize_and_clean(line, no_stopwords, 1));
  }
  return build_corpus(docs, nullptr, 1);
}

void save_cooccurrence(const CooccurrenceStats& stats, std::uint64_t corpus_fingerprint,
                       int window, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["corpus_fingerprint"] = corpus_fingerprint;
  j["window"] = window;
  j["window_count"] = stats.window_count;
  j["word_windows"] = stats.word_windows;
  std::vector<std::array<std::int64_t, 3>> pairs;
  pairs.reserve(stats.pair_windows.size());
  for (const auto& [key, count] : stats.pair_windows) {
    pairs.push_back({static_cast<std::int64_t>(key >> 32),
                     static_cast<std::int64_t>(key & 0xffffffffull), count});
  }
  std::sort(pairs.begin(), pairs.end());
  j["pairs"] = pairs;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write co-occurrence cache: " + path);
  out << j.dump() << '\n';
}

bool load_cooccurrence(const std::string& path, std::uint64_t corpus_fingerprint, int window,
                       CooccurrenceStats* out) {
  std::ifstream in(path);
  if (!in) return false;
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("version").get<int>() != 1) return false;
    if (j.at("corpus_fingerprint").get<std::uint64_t>() != corpus_fingerprint) return false;
    if (j.at("window").get<int>() != window) return false;
    CooccurrenceStats stats;
    stats.window_count = j.at("window_count").get<std::int64_t>();
    stats.word_windows = j.at("word_windows").get<std::vector<std::int64_t>>();
    for (const auto& entry : j.at("pairs")) {
      const int a = entry.at(0).get<int>();
      const int b = entry.at(1).get<int>();
      stats.pair_windows[CooccurrenceStats::pair_key(a, b)] = entry.at(2).get<std::int64_t>();
    }
    *out = std::move(stats);
    return true;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

std::vector<int> cluster_assign(const PosteriorSummary& summary) {
  std::vector<int> clusters(summary.theta.size());
  for (std::size_t d = 0; d < summary.theta.size(); ++d) {
    const auto& row = summary.theta[d];
    int best = 0;
    for (int t = 1; t < static_cast<int>(row.size()); ++t) {
      if (row[t] > row[best]) best = t;
    }
    clusters[d] = best;
  }
  return clusters;
}

ContingencyTable ContingencyTable::from_assignments(std::span<const int> clusters,
                                                    std::span<const int> labels, int num_clusters,
                                                    int num_labels) {
  ContingencyTable table;
  table.num_clusters = num_clusters;
  table.num_labels = num_labels;
  table.total = static_cast<std::int64_t>(clusters.size());
  table.counts.assign(static_cast<std::size_t>(num_clusters) * num_labels, 0);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    ++table.counts[static_cast<std::size_t>(clusters[i]) * num_labels + labels[i]];
  }
  return table;
}

double purity(const ContingencyTable& table) {
  std::int64_t majority_sum = 0;
  for (int c = 0; c < table.num_clusters; ++c) {
    std::int64_t best = 0;
    for (int l = 0; l < table.num_labels; ++l) best = std::max(best, table.at(c, l));
    majority_sum += best;
  }
  return static_cast<double>(majority_sum) / static_cast<double>(table.total);
}

double nmi(const ContingencyTable& table) {
  const double n = static_cast<double>(table.total);
  std::vector<std::int64_t> cluster_sizes(static_cast<std::size_t>(table.num_clusters), 0);
  std::vector<std::int64_t> label_sizes(static_cast<std::size_t>(table.num_labels), 0);
  for (int c = 0; c < table.num_clusters; ++c) {
    for (int l = 0; l < table.num_labels; ++l) {
      cluster_sizes[static_cast<std::size_t>(c)] += table.at(c, l);
      label_sizes[static_cast<std::size_t>(l)] += table.at(c, l);
    }
  }
  auto entropy = [n](const std::vector<std::int64_t>& sizes) {
    double h = 0.0;
    for (std::int64_t s : sizes) {
      if (s > 0) {
        const double p = s / n;
        h -= p * std::log(p);
      }
    }
    return h;
  };
  const double h_clusters = entropy(cluster_sizes);
  const double h_labels = entropy(label_sizes);
  if (h_clusters == 0.0 && h_labels == 0.0) return 1.0;  // both single blocks

  double mi = 0.0;
  for (int c = 0; c < table.num_clusters; ++c) {
    for (int l = 0; l < table.num_labels; ++l) {
      const std::int64_t joint = table.at(c, l);
      if (joint > 0) {
        const double pij = joint / n;
        mi += pij * std::log(n * joint / (static_cast<double>(cluster_sizes[c]) *
                                          static_cast<double>(label_sizes[l])));
      }
    }
  }
  return mi / (0.5 * (h_clusters + h_labels));
}

double macro_f1(std::span<const int> gold, std::span<const int> predicted, int num_labels) {
  std::vector<std::int64_t> tp(static_cast<std::size_t>(num_labels), 0);
  std::vector<std::int64_t> fp(static_cast<std::size_t>(num_labels), 0);
  std::vector<std::int64_t> fn(static_cast<std::size_t>(num_labels), 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) {
      ++tp[static_cast<std::size_t>(gold[i])];
    } else {
      ++fp[static_cast<std::size_t>(predicted[i])];
      ++fn[static_cast<std::size_t>(gold[i])];
    }
  }
  double total = 0.0;
  for (int c = 0; c < num_labels; ++c) {
    const double p_denom = static_cast<double>(tp[c] + fp[c]);
    const double r_denom = static_cast<double>(tp[c] + fn[c]);
    const double precision = p_denom > 0 ? tp[c] / p_denom : 0.0;
    const double recall = r_denom > 0 ? tp[c] / r_denom : 0.0;
    total += (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return total / static_cast<double>(num_labels);
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Full-batch gradient descent; features used raw, bias unregularized.
void train_binary_lr(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& train_idx, std::span<const int> labels,
                     int positive_class, std::vector<double>& w, double& b) {
  constexpr double kLearningRate = 0.1;
  constexpr double kL2 = 1.0;
  constexpr int kEpochs = 200;
  const int dim = static_cast<int>(features[0].size());
  const double n = static_cast<double>(train_idx.size());
  w.assign(static_cast<std::size_t>(dim), 0.0);
  b = 0.0;
  std::vector<double> gw(static_cast<std::size_t>(dim));
  for (int epoch = 0; epoch < kEpochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (int i : train_idx) {
      const auto& x = features[static_cast<std::size_t>(i)];
      double score = b;
      for (int k = 0; k < dim; ++k) score += w[k] * x[k];
      const double diff = sigmoid(score) - (labels[static_cast<std::size_t>(i)] == positive_class ? 1.0 : 0.0);
      for (int k = 0; k < dim; ++k) gw[k] += diff * x[k];
      gb += diff;
    }
    for (int k = 0; k < dim; ++k) {
      w[k] -= kLearningRate * (gw[k] / n + (kL2 / n) * w[k]);
    }
    b -= kLearningRate * (gb / n);
  }
}

}  // namespace

double classify(const PosteriorSummary& summary, std::span<const int> labels, int num_labels,
                int folds, std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  if (num_labels < 2) {
    throw Error(ErrorKind::Input, "classification needs at least two classes");
  }
  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(num_labels));
  for (int i = 0; i < n; ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  std::size_t min_class = by_class[0].size();
  for (const auto& members : by_class) min_class = std::min(min_class, members.size());
  if (min_class < 2) {
    throw Error(ErrorKind::Input, "every class needs at least 2 documents for cross-validation");
  }
  int folds_eff = std::min<int>(folds, static_cast<int>(min_class));
  if (folds_eff < folds) {
    std::cerr << "warning: smallest class has " << min_class << " documents, reducing folds to "
              << folds_eff << "\n";
  }

  // stratified assignment: shuffle each class, deal round-robin
  Rng rng(seed);
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (auto& members : by_class) {
    for (int i = static_cast<int>(members.size()) - 1; i > 0; --i) {
      std::swap(members[static_cast<std::size_t>(i)],
                members[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
    }
    for (std::size_t j = 0; j < members.size(); ++j) {
      fold_of[static_cast<std::size_t>(members[j])] = static_cast<int>(j % folds_eff);
    }
  }

  std::vector<int> predictions(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(num_labels));
  std::vector<double> b(static_cast<std::size_t>(num_labels));
  for (int fold = 0; fold < folds_eff; ++fold) {
    std::vector<int> train_idx;
    train_idx.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] != fold) train_idx.push_back(i);
    }
    for (int c = 0; c < num_labels; ++c) {
      train_binary_lr(summary.theta, train_idx, labels, c, w[static_cast<std::size_t>(c)],
                      b[static_cast<std::size_t>(c)]);
    }
    for (int i = 0; i < n; ++i) {
      if (fold_of[static_cast<std::size_t>(i)] != fold) continue;
      const auto& x = summary.theta[static_cast<std::size_t>(i)];
      int best = 0;
      double best_score = 0.0;
      for (int c = 0; c < num_labels; ++c) {
        double score = b[static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < x.size(); ++k) score += w[static_cast<std::size_t>(c)][k] * x[k];
        if (c == 0 || score > best_score) {
          best = c;
          best_score = score;
        }
      }
      predictions[static_cast<std::size_t>(i)] = best;
    }
  }
  return macro_f1(labels, predictions, num_labels);
}

}  // namespace lftm
