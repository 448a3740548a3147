#include "lftm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lftm {

namespace {

using nlohmann::json;

bool is_lower_alpha(char c) { return c >= 'a' && c <= 'z'; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim_non_alpha(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && !is_lower_alpha(s[b])) ++b;
  while (e > b && !is_lower_alpha(s[e - 1])) --e;
  return s.substr(b, e - b);
}

// dictionary keys may contain digits ("2day"), so only punctuation edges are
// stripped for the lookup
std::string trim_non_alnum(const std::string& s) {
  auto is_alnum = [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && !is_alnum(s[b])) ++b;
  while (e > b && !is_alnum(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool all_alpha(const std::string& s) {
  return std::all_of(s.begin(), s.end(), is_lower_alpha);
}

std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

int Vocabulary::id_of(const std::string& word) const {
  auto it = index.find(word);
  return it == index.end() ? -1 : it->second;
}

std::uint64_t Vocabulary::fingerprint() const {
  // FNV-1a over the word list with separators
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](char c) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  };
  for (const auto& w : words) {
    for (char c : w) mix(c);
    mix('\n');
  }
  return h;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> word_list) {
  Vocabulary v;
  v.words = std::move(word_list);
  v.index.reserve(v.words.size());
  for (int i = 0; i < static_cast<int>(v.words.size()); ++i) {
    if (!v.index.emplace(v.words[i], i).second) {
      throw Error(ErrorKind::Input, "duplicate vocabulary word: " + v.words[i]);
    }
  }
  return v;
}

std::size_t Corpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.tokens.size();
  return n;
}

std::uint64_t corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t h = corpus.vocab.fingerprint();
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(corpus.docs.size()));
  for (const auto& d : corpus.docs) {
    mix(static_cast<std::uint64_t>(d.tokens.size()));
    for (int w : d.tokens) mix(static_cast<std::uint64_t>(w) + 1);
    mix(static_cast<std::uint64_t>(d.label) + 2);
  }
  return h;
}

std::vector<std::string> tokenize_and_clean(
    std::string_view line, const std::unordered_set<std::string>& stopwords,
    int min_len, const std::unordered_map<std::string, std::string>* norm_dict) {
  std::vector<std::string> out;
  auto clean_one = [&](const std::string& raw) {
    std::string t = trim_non_alpha(raw);
    if (t.empty() || !all_alpha(t)) return;
    if (stopwords.count(t)) return;
    if (static_cast<int>(t.size()) < min_len) return;
    out.push_back(std::move(t));
  };
  for (const std::string& piece : split_whitespace(line)) {
    std::string raw = lowercase(piece);
    if (norm_dict != nullptr) {
      auto it = norm_dict->find(raw);
      if (it == norm_dict->end()) it = norm_dict->find(trim_non_alnum(raw));
      if (it != norm_dict->end()) {
        for (const std::string& rep : split_whitespace(it->second)) clean_one(rep);
        continue;
      }
    }
    clean_one(raw);
  }
  return out;
}

Corpus build_corpus(const std::vector<std::vector<std::string>>& doc_tokens,
                    const std::vector<std::string>* labels, int min_count,
                    const std::unordered_set<std::string>* embedding_words,
                    BuildStats* stats) {
  if (labels != nullptr && labels->size() != doc_tokens.size()) {
    throw Error(ErrorKind::Input, "label count (" + std::to_string(labels->size()) +
                                      ") does not match document count (" +
                                      std::to_string(doc_tokens.size()) + ")");
  }

  std::unordered_map<std::string, int> freq;
  for (const auto& doc : doc_tokens) {
    for (const auto& tok : doc) ++freq[tok];
  }

  // vocabulary ids in order of first appearance
  Vocabulary vocab;
  auto keep_word = [&](const std::string& w) {
    if (freq[w] < min_count) return false;
    if (embedding_words != nullptr && embedding_words->count(w) == 0) return false;
    return true;
  };
  for (const auto& doc : doc_tokens) {
    for (const auto& tok : doc) {
      if (vocab.index.count(tok) || !keep_word(tok)) continue;
      vocab.index.emplace(tok, static_cast<int>(vocab.words.size()));
      vocab.words.push_back(tok);
    }
  }

  Corpus corpus;
  corpus.vocab = std::move(vocab);
  std::unordered_map<std::string, int> label_ids;
  std::size_t tokens_kept = 0;
  for (std::size_t d = 0; d < doc_tokens.size(); ++d) {
    Document doc;
    for (const auto& tok : doc_tokens[d]) {
      int id = corpus.vocab.id_of(tok);
      if (id >= 0) doc.tokens.push_back(id);
    }
    if (doc.tokens.empty()) continue;
    if (labels != nullptr) {
      const std::string& name = (*labels)[d];
      auto [it, inserted] = label_ids.emplace(name, static_cast<int>(label_ids.size()));
      doc.label = it->second;
      (void)inserted;
    }
    tokens_kept += doc.tokens.size();
    corpus.docs.push_back(std::move(doc));
  }
  corpus.num_labels = static_cast<int>(label_ids.size());

  if (stats != nullptr) {
    stats->docs_in = static_cast<int>(doc_tokens.size());
    stats->docs_kept = corpus.num_docs();
    stats->types_seen = static_cast<int>(freq.size());
    stats->types_removed = static_cast<int>(freq.size()) - corpus.vocab.size();
    stats->tokens_kept = tokens_kept;
    stats->avg_doc_len =
        corpus.docs.empty() ? 0.0 : static_cast<double>(tokens_kept) / corpus.num_docs();
  }
  if (corpus.docs.empty()) {
    throw Error(ErrorKind::EmptyResult, "no documents survived preprocessing");
  }
  return corpus;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::unordered_set<std::string> read_word_set(const std::string& path) {
  std::unordered_set<std::string> words;
  for (const auto& line : read_lines(path)) {
    for (const auto& w : split_whitespace(line)) words.insert(lowercase(w));
  }
  return words;
}

std::unordered_map<std::string, std::string> read_normalization_dict(const std::string& path) {
  std::unordered_map<std::string, std::string> dict;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto fields = split_whitespace(lines[i]);
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw Error(ErrorKind::Input, "normalization dictionary line " + std::to_string(i + 1) +
                                        " needs two columns: " + path);
    }
    std::string replacement = lowercase(fields[1]);
    for (std::size_t k = 2; k < fields.size(); ++k) replacement += " " + lowercase(fields[k]);
    dict.emplace(lowercase(fields[0]), std::move(replacement));
  }
  return dict;
}

void save_corpus_json(const Corpus& corpus, const std::string& path) {
  json j;
  j["vocab"] = corpus.vocab.words;
  json docs = json::array();
  for (const auto& d : corpus.docs) docs.push_back(d.tokens);
  j["docs"] = std::move(docs);
  if (corpus.has_labels()) {
    json labels = json::array();
    for (const auto& d : corpus.docs) labels.push_back(d.label);
    j["labels"] = std::move(labels);
  } else {
    j["labels"] = nullptr;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write file: " + path);
  out << j.dump() << '\n';
}

Corpus load_corpus_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open corpus file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Input, "malformed corpus JSON (" + path + "): " + e.what());
  }
  if (!j.is_object() || !j.contains("vocab") || !j.contains("docs") || !j.contains("labels")) {
    throw Error(ErrorKind::Input, "corpus JSON must contain vocab, docs and labels: " + path);
  }

  Corpus corpus;
  corpus.vocab = Vocabulary::from_words(j["vocab"].get<std::vector<std::string>>());
  const int V = corpus.vocab.size();

  const json& docs = j["docs"];
  const json& labels = j["labels"];
  const bool labeled = !labels.is_null();
  if (labeled && labels.size() != docs.size()) {
    throw Error(ErrorKind::Input, "corpus JSON labels do not align with docs: " + path);
  }
  int max_label = -1;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Document doc;
    doc.tokens = docs[d].get<std::vector<int>>();
    if (doc.tokens.empty()) {
      throw Error(ErrorKind::Input, "corpus JSON contains an empty document: " + path);
    }
    for (int w : doc.tokens) {
      if (w < 0 || w >= V) {
        throw Error(ErrorKind::Input, "corpus JSON token id out of range: " + path);
      }
    }
    if (labeled) {
      doc.label = labels[d].get<int>();
      if (doc.label < 0) throw Error(ErrorKind::Input, "negative label id: " + path);
      max_label = std::max(max_label, doc.label);
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (corpus.docs.empty()) throw Error(ErrorKind::Input, "corpus JSON has no documents: " + path);
  if (labeled) {
    corpus.num_labels = max_label + 1;
    std::vector<char> seen(static_cast<std::size_t>(corpus.num_labels), 0);
    for (const auto& d : corpus.docs) seen[static_cast<std::size_t>(d.label)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw Error(ErrorKind::Input, "corpus JSON label ids are not dense: " + path);
    }
  }
  return corpus;
}

}  // namespace lftm
