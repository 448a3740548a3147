#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>

#include "lftm/corpus.hpp"

namespace lftm {

using EmbeddingTable = std::unordered_map<std::string, Eigen::VectorXd>;

// V x d matrix of pre-trained word vectors, row i aligned to vocabulary id i.
// Fixed for the lifetime of a model; nothing downstream writes to it.
struct EmbeddingMatrix {
  int dim = 0;
  Eigen::MatrixXd rows;  // V x dim

  int vocab_size() const { return static_cast<int>(rows.rows()); }
};

// Plain-text format: one "word v1 v2 ... vd" entry per line. A first line of
// exactly two integers is treated as a "count dim" header and skipped.
// Duplicate words keep the first occurrence. expected_dim = 0 derives the
// dimensionality from the first entry.
EmbeddingTable parse_embedding_file(const std::string& path, int expected_dim = 0);

std::unordered_set<std::string> embedding_word_set(const EmbeddingTable& table);

// Vectors are used verbatim, no renormalization. Throws Error(Mismatch)
// listing the vocabulary words absent from the table.
EmbeddingMatrix align_to_vocab(const EmbeddingTable& table, const Vocabulary& vocab);

}  // namespace lftm
