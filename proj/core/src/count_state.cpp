#include "lftm/count_state.hpp"

#include <numeric>

namespace lftm {

bool is_dmm_family(ModelKind kind) {
  return kind == ModelKind::Dmm || kind == ModelKind::LfDmm;
}

bool is_latent_kind(ModelKind kind) {
  return kind == ModelKind::LfLda || kind == ModelKind::LfDmm;
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Lda: return "lda";
    case ModelKind::Dmm: return "dmm";
    case ModelKind::LfLda: return "lf-lda";
    case ModelKind::LfDmm: return "lf-dmm";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "lda") return ModelKind::Lda;
  if (name == "dmm") return ModelKind::Dmm;
  if (name == "lf-lda") return ModelKind::LfLda;
  if (name == "lf-dmm") return ModelKind::LfDmm;
  throw Error(ErrorKind::Input, "unknown model kind: " + name +
                                    " (expected lda, dmm, lf-lda or lf-dmm)");
}

void Hyperparams::validate() const {
  if (num_topics < 1) throw Error(ErrorKind::Input, "number of topics must be >= 1");
  if (!(alpha > 0.0)) throw Error(ErrorKind::Input, "alpha must be > 0");
  if (!(beta > 0.0)) throw Error(ErrorKind::Input, "beta must be > 0");
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::Input, "lambda must lie in [0, 1]");
  }
  if (!(mu >= 0.0)) throw Error(ErrorKind::Input, "mu must be >= 0");
  if (baseline_iters < 0 || lf_iters < 0) {
    throw Error(ErrorKind::Input, "iteration counts must be >= 0");
  }
}

void CountState::remove_token(int d, int i, int word) {
  const int t = token_topic[d][i];
  if (from_latent[d][i]) {
    --lf_topic_word[static_cast<std::size_t>(t) * vocab_size + word];
    --lf_topic_total[t];
    --lf_doc_topic[static_cast<std::size_t>(d) * num_topics + t];
  } else {
    --dir_topic_word[static_cast<std::size_t>(t) * vocab_size + word];
    --dir_topic_total[t];
    --dir_doc_topic[static_cast<std::size_t>(d) * num_topics + t];
  }
}

void CountState::assign_token(int d, int i, int word, int topic, bool latent) {
  token_topic[d][i] = topic;
  from_latent[d][i] = latent ? 1 : 0;
  if (latent) {
    ++lf_topic_word[static_cast<std::size_t>(topic) * vocab_size + word];
    ++lf_topic_total[topic];
    ++lf_doc_topic[static_cast<std::size_t>(d) * num_topics + topic];
  } else {
    ++dir_topic_word[static_cast<std::size_t>(topic) * vocab_size + word];
    ++dir_topic_total[topic];
    ++dir_doc_topic[static_cast<std::size_t>(d) * num_topics + topic];
  }
}

void CountState::remove_document(const Document& doc, int d) {
  const int t = doc_topic[d];
  --docs_in_topic[t];
  for (int i = 0; i < doc.length(); ++i) {
    const int w = doc.tokens[i];
    if (from_latent[d][i]) {
      --lf_topic_word[static_cast<std::size_t>(t) * vocab_size + w];
      --lf_topic_total[t];
    } else {
      --dir_topic_word[static_cast<std::size_t>(t) * vocab_size + w];
      --dir_topic_total[t];
    }
  }
}

void CountState::assign_document(const Document& doc, int d, int topic,
                                 std::span<const std::uint8_t> indicators) {
  doc_topic[d] = topic;
  ++docs_in_topic[topic];
  for (int i = 0; i < doc.length(); ++i) {
    const int w = doc.tokens[i];
    const std::uint8_t s = indicators[i];
    from_latent[d][i] = s;
    if (s) {
      ++lf_topic_word[static_cast<std::size_t>(topic) * vocab_size + w];
      ++lf_topic_total[topic];
    } else {
      ++dir_topic_word[static_cast<std::size_t>(topic) * vocab_size + w];
      ++dir_topic_total[topic];
    }
  }
}

void CountState::set_token_component(const Document& doc, int d, int i, bool latent) {
  if (static_cast<bool>(from_latent[d][i]) == latent) return;
  const int w = doc.tokens[i];
  if (per_document) {
    const int t = doc_topic[d];
    const std::size_t tw = static_cast<std::size_t>(t) * vocab_size + w;
    if (latent) {
      --dir_topic_word[tw]; --dir_topic_total[t];
      ++lf_topic_word[tw]; ++lf_topic_total[t];
    } else {
      --lf_topic_word[tw]; --lf_topic_total[t];
      ++dir_topic_word[tw]; ++dir_topic_total[t];
    }
    from_latent[d][i] = latent ? 1 : 0;
  } else {
    const int t = token_topic[d][i];
    remove_token(d, i, w);
    assign_token(d, i, w, t, latent);
  }
}

std::int64_t CountState::dir_token_total() const {
  return std::accumulate(dir_topic_total.begin(), dir_topic_total.end(), std::int64_t{0});
}

std::int64_t CountState::lf_token_total() const {
  return std::accumulate(lf_topic_total.begin(), lf_topic_total.end(), std::int64_t{0});
}

namespace {

CountState make_empty_state(const Corpus& corpus, int num_topics, ModelKind kind) {
  CountState st;
  st.num_topics = num_topics;
  st.vocab_size = corpus.vocab.size();
  st.per_document = is_dmm_family(kind);
  const int D = corpus.num_docs();
  const std::size_t tv = static_cast<std::size_t>(num_topics) * st.vocab_size;

  st.dir_topic_word.assign(tv, 0);
  st.dir_topic_total.assign(static_cast<std::size_t>(num_topics), 0);
  st.lf_topic_word.assign(tv, 0);
  st.lf_topic_total.assign(static_cast<std::size_t>(num_topics), 0);
  st.from_latent.resize(static_cast<std::size_t>(D));
  for (int d = 0; d < D; ++d) {
    st.from_latent[d].assign(static_cast<std::size_t>(corpus.docs[d].length()), 0);
  }
  if (st.per_document) {
    st.doc_topic.assign(static_cast<std::size_t>(D), 0);
    st.docs_in_topic.assign(static_cast<std::size_t>(num_topics), 0);
  } else {
    st.token_topic.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
      st.token_topic[d].assign(static_cast<std::size_t>(corpus.docs[d].length()), 0);
    }
    st.dir_doc_topic.assign(static_cast<std::size_t>(D) * num_topics, 0);
    st.lf_doc_topic.assign(static_cast<std::size_t>(D) * num_topics, 0);
  }
  return st;
}

}  // namespace

CountState init_assignments(const Corpus& corpus, const Hyperparams& hp, ModelKind kind,
                            Rng& rng) {
  CountState st = make_empty_state(corpus, hp.num_topics, kind);
  const int D = corpus.num_docs();
  if (st.per_document) {
    for (int d = 0; d < D; ++d) {
      const int t = rng.uniform_int(hp.num_topics);
      st.assign_document(corpus.docs[d], d, t, st.from_latent[d]);
    }
  } else {
    for (int d = 0; d < D; ++d) {
      const auto& toks = corpus.docs[d].tokens;
      for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
        const int t = rng.uniform_int(hp.num_topics);
        st.assign_token(d, i, toks[i], t, false);
      }
    }
  }
  return st;
}

CountState rebuild_state(const Corpus& corpus, int num_topics, ModelKind kind,
                         const std::vector<std::vector<int>>& token_topic,
                         const std::vector<int>& doc_topic,
                         const std::vector<std::vector<std::uint8_t>>& from_latent) {
  CountState st = make_empty_state(corpus, num_topics, kind);
  const int D = corpus.num_docs();
  auto check_topic = [&](int t) {
    if (t < 0 || t >= num_topics) {
      throw Error(ErrorKind::Input, "stored topic assignment out of range");
    }
  };
  auto indicators_for = [&](int d) -> std::span<const std::uint8_t> {
    if (from_latent.empty()) return st.from_latent[d];  // zeros
    if (static_cast<int>(from_latent.size()) != D ||
        from_latent[d].size() != static_cast<std::size_t>(corpus.docs[d].length())) {
      throw Error(ErrorKind::Mismatch, "stored indicators do not align with the corpus");
    }
    return from_latent[d];
  };
  if (st.per_document) {
    if (static_cast<int>(doc_topic.size()) != D) {
      throw Error(ErrorKind::Mismatch, "stored assignments do not align with the corpus");
    }
    for (int d = 0; d < D; ++d) {
      check_topic(doc_topic[d]);
      st.assign_document(corpus.docs[d], d, doc_topic[d], indicators_for(d));
    }
  } else {
    if (static_cast<int>(token_topic.size()) != D) {
      throw Error(ErrorKind::Mismatch, "stored assignments do not align with the corpus");
    }
    for (int d = 0; d < D; ++d) {
      const auto& toks = corpus.docs[d].tokens;
      if (token_topic[d].size() != toks.size()) {
        throw Error(ErrorKind::Mismatch, "stored assignments do not align with the corpus");
      }
      auto ind = indicators_for(d);
      for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
        check_topic(token_topic[d][i]);
        st.assign_token(d, i, toks[i], token_topic[d][i], ind[i] != 0);
      }
    }
  }
  return st;
}

void doc_word_counts(const Document& doc, std::vector<std::pair<int, int>>& out) {
  out.clear();
  for (int w : doc.tokens) {
    bool found = false;
    for (auto& [word, count] : out) {
      if (word == w) {
        ++count;
        found = true;
        break;
      }
    }
    if (!found) out.emplace_back(w, 1);
  }
}

}  // namespace lftm
