#include "lftm/embeddings.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>

namespace lftm {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_component(const std::string& field, long line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + field.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Input, "non-numeric vector component '" + field +
                                      "' at line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

EmbeddingTable parse_embedding_file(const std::string& path, int expected_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open embedding file: " + path);

  EmbeddingTable table;
  std::string line;
  long line_no = 0;
  int dim = expected_dim;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (first_content_line) {
      first_content_line = false;
      if (fields.size() == 2 && all_digits(fields[0]) && all_digits(fields[1])) {
        const int header_dim = std::atoi(fields[1].c_str());
        if (expected_dim > 0 && header_dim != expected_dim) {
          throw Error(ErrorKind::Input,
                      "embedding header at line " + std::to_string(line_no) + " declares dim " +
                          std::to_string(header_dim) + ", expected " + std::to_string(expected_dim));
        }
        if (dim == 0) dim = header_dim;
        continue;
      }
    }
    const int line_dim = static_cast<int>(fields.size()) - 1;
    if (line_dim < 1) {
      throw Error(ErrorKind::Input,
                  "embedding entry with no components at line " + std::to_string(line_no));
    }
    if (dim == 0) dim = line_dim;
    if (line_dim != dim) {
      throw Error(ErrorKind::Input, "embedding dimension mismatch at line " +
                                        std::to_string(line_no) + ": expected " +
                                        std::to_string(dim) + ", got " + std::to_string(line_dim));
    }
    if (table.count(fields[0])) continue;  // keep first occurrence
    Eigen::VectorXd vec(dim);
    for (int k = 0; k < dim; ++k) vec[k] = parse_component(fields[k + 1], line_no);
    table.emplace(fields[0], std::move(vec));
  }
  if (table.empty()) throw Error(ErrorKind::Input, "embedding file has no entries: " + path);
  return table;
}

std::unordered_set<std::string> embedding_word_set(const EmbeddingTable& table) {
  std::unordered_set<std::string> words;
  words.reserve(table.size());
  for (const auto& [word, vec] : table) words.insert(word);
  return words;
}

EmbeddingMatrix align_to_vocab(const EmbeddingTable& table, const Vocabulary& vocab) {
  std::vector<std::string> missing;
  for (const auto& w : vocab.words) {
    if (table.count(w) == 0) missing.push_back(w);
  }
  if (!missing.empty()) {
    std::string listed;
    const std::size_t cap = 20;
    for (std::size_t i = 0; i < missing.size() && i < cap; ++i) {
      if (i > 0) listed += ", ";
      listed += missing[i];
    }
    if (missing.size() > cap) listed += ", ...";
    throw Error(ErrorKind::Mismatch, std::to_string(missing.size()) +
                                         " vocabulary words missing from embeddings: " + listed);
  }

  EmbeddingMatrix m;
  m.dim = table.empty() ? 0 : static_cast<int>(table.begin()->second.size());
  m.rows.resize(vocab.size(), m.dim);
  for (int i = 0; i < vocab.size(); ++i) {
    m.rows.row(i) = table.at(vocab.words[i]).transpose();
  }
  return m;
}

}  // namespace lftm
