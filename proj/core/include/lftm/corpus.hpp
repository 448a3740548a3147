#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lftm/error.hpp"

namespace lftm {

struct Vocabulary {
  std::vector<std::string> words;
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(words.size()); }
  bool contains(const std::string& word) const { return index.count(word) != 0; }
  // -1 when absent
  int id_of(const std::string& word) const;
  std::uint64_t fingerprint() const;

  static Vocabulary from_words(std::vector<std::string> word_list);
};

struct Document {
  std::vector<int> tokens;
  int label = -1;  // -1 when the corpus is unlabeled

  int length() const { return static_cast<int>(tokens.size()); }
};

struct Corpus {
  Vocabulary vocab;
  std::vector<Document> docs;
  int num_labels = 0;

  int num_docs() const { return static_cast<int>(docs.size()); }
  bool has_labels() const { return num_labels > 0; }
  std::size_t total_tokens() const;
};

std::uint64_t corpus_fingerprint(const Corpus& corpus);

// Lowercases, trims non-alphabetic edge characters from each whitespace
// token, then drops tokens that still contain a non-alphabetic character,
// stopwords, and tokens shorter than min_len. norm_dict, when given, rewrites
// raw tokens before cleaning; replacements may expand to several words.
std::vector<std::string> tokenize_and_clean(
    std::string_view line, const std::unordered_set<std::string>& stopwords,
    int min_len,
    const std::unordered_map<std::string, std::string>* norm_dict = nullptr);

struct BuildStats {
  int docs_in = 0;
  int docs_kept = 0;
  int types_seen = 0;
  int types_removed = 0;
  std::size_t tokens_kept = 0;
  double avg_doc_len = 0.0;
};

// Builds the vocabulary from tokens with corpus frequency >= min_count (and,
// when embedding_words is given, present in that set), re-encodes documents
// to ids and drops documents that became empty together with their labels.
// Label strings are mapped to dense ids by first appearance among kept
// documents. Throws Error(EmptyResult) when nothing survives.
Corpus build_corpus(const std::vector<std::vector<std::string>>& doc_tokens,
                    const std::vector<std::string>* labels, int min_count,
                    const std::unordered_set<std::string>* embedding_words = nullptr,
                    BuildStats* stats = nullptr);

std::vector<std::string> read_lines(const std::string& path);
std::unordered_set<std::string> read_word_set(const std::string& path);
std::unordered_map<std::string, std::string> read_normalization_dict(const std::string& path);

// {"vocab": [words...], "docs": [[ids...]...], "labels": [ids...] | null}
void save_corpus_json(const Corpus& corpus, const std::string& path);
Corpus load_corpus_json(const std::string& path);

}  // namespace lftm
