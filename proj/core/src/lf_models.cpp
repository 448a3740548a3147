#include "lftm/lf_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"

namespace lftm {

namespace {

using nlohmann::json;

double dirichlet_word_term(const CountState& st, const Hyperparams& hp, int topic, int word) {
  const double vbeta = hp.beta * st.vocab_size;
  return (st.dir_tw(topic, word) + hp.beta) / (st.dir_topic_total[topic] + vbeta);
}

}  // namespace

void lflda_conditional_topic(const CountState& st, const CateTable& cate, const Hyperparams& hp,
                             int d, int word, std::span<double> weights_out) {
  const double lam = hp.lambda;
  for (int t = 0; t < st.num_topics; ++t) {
    const double mix =
        (1.0 - lam) * dirichlet_word_term(st, hp, t, word) + lam * cate.prob(t, word);
    weights_out[t] = (st.dir_dt(d, t) + st.lf_dt(d, t) + hp.alpha) * mix;
  }
}

double lf_indicator_prob(const CountState& st, const CateTable& cate, const Hyperparams& hp,
                         int word, int topic) {
  const double dir_part = (1.0 - hp.lambda) * dirichlet_word_term(st, hp, topic, word);
  const double lf_part = hp.lambda * cate.prob(topic, word);
  const double total = dir_part + lf_part;
  if (total <= 0.0) return hp.lambda;  // lambda = 1 with an underflowed word probability
  return lf_part / total;
}

bool lflda_sample_indicator(const CountState& st, const CateTable& cate, const Hyperparams& hp,
                            int word, int topic, Rng& rng) {
  return rng.bernoulli(lf_indicator_prob(st, cate, hp, word, topic));
}

MapReport lflda_sweep(LfModel& model, const Corpus& corpus, const EmbeddingMatrix& omega,
                      const SweepOptions& opts, Rng& rng) {
  CountState& st = model.state;
  const Hyperparams& hp = model.hp;
  const MapReport report =
      map_estimate(model.tau, st.lf_topic_word, omega, hp.mu, opts.optimizer, opts.threads);
  const CateTable cate = CateTable::build(model.tau, omega, opts.threads);

  std::vector<double> weights(static_cast<std::size_t>(hp.num_topics));
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const auto& toks = corpus.docs[d].tokens;
    for (int i = 0; i < static_cast<int>(toks.size()); ++i) {
      const int w = toks[i];
      st.remove_token(d, i, w);
      lflda_conditional_topic(st, cate, hp, d, w, weights);
      const int t = sample_unnormalized(weights, rng);
      const bool latent = lflda_sample_indicator(st, cate, hp, w, t, rng);
      st.assign_token(d, i, w, t, latent);
    }
  }
  return report;
}

double lfdmm_exact_joint(const CountState& st, const CateTable& cate, const Corpus& corpus,
                         const Hyperparams& hp, int d, int topic,
                         std::span<const std::uint8_t> indicators) {
  const Document& doc = corpus.docs[d];
  const double vbeta = hp.beta * st.vocab_size;

  // split the proposed document by component
  std::vector<std::pair<int, int>> dir_counts, lf_counts;
  int dir_total = 0;
  int lf_total = 0;
  auto bump = [](std::vector<std::pair<int, int>>& counts, int w) {
    for (auto& [word, c] : counts) {
      if (word == w) {
        ++c;
        return;
      }
    }
    counts.emplace_back(w, 1);
  };
  for (int i = 0; i < doc.length(); ++i) {
    if (indicators[i]) {
      bump(lf_counts, doc.tokens[i]);
      ++lf_total;
    } else {
      bump(dir_counts, doc.tokens[i]);
      ++dir_total;
    }
  }

  double lw = std::log(st.docs_in_topic[topic] + hp.alpha);
  if (lf_total > 0) lw += lf_total * std::log(hp.lambda);
  if (dir_total > 0) lw += dir_total * std::log(1.0 - hp.lambda);
  lw += std::lgamma(st.dir_topic_total[topic] + vbeta) -
        std::lgamma(st.dir_topic_total[topic] + dir_total + vbeta);
  for (const auto& [w, c] : dir_counts) {
    lw += std::lgamma(st.dir_tw(topic, w) + c + hp.beta) -
          std::lgamma(st.dir_tw(topic, w) + hp.beta);
  }
  for (const auto& [w, c] : lf_counts) {
    lw += c * cate.log_prob(topic, w);
  }
  return lw;
}

void lfdmm_topic_log_weights(const CountState& st, const CateTable& cate, const Corpus& corpus,
                             const Hyperparams& hp, int d, std::span<double> log_weights_out) {
  const double lam = hp.lambda;
  std::vector<std::pair<int, int>> wc;
  doc_word_counts(corpus.docs[d], wc);
  for (int t = 0; t < st.num_topics; ++t) {
    double lw = std::log(st.docs_in_topic[t] + hp.alpha);
    for (const auto& [w, c] : wc) {
      const double mix = (1.0 - lam) * dirichlet_word_term(st, hp, t, w) + lam * cate.prob(t, w);
      lw += c * std::log(mix);
    }
    log_weights_out[t] = lw;
  }
}

void lfdmm_sample_indicators(const CountState& st, const CateTable& cate, const Hyperparams& hp,
                             const Document& doc, int topic, Rng& rng,
                             std::span<std::uint8_t> indicators_out) {
  for (int i = 0; i < doc.length(); ++i) {
    indicators_out[i] =
        rng.bernoulli(lf_indicator_prob(st, cate, hp, doc.tokens[i], topic)) ? 1 : 0;
  }
}

MapReport lfdmm_sweep(LfModel& model, const Corpus& corpus, const EmbeddingMatrix& omega,
                      const SweepOptions& opts, Rng& rng) {
  CountState& st = model.state;
  const Hyperparams& hp = model.hp;
  const MapReport report =
      map_estimate(model.tau, st.lf_topic_word, omega, hp.mu, opts.optimizer, opts.threads);
  const CateTable cate = CateTable::build(model.tau, omega, opts.threads);

  std::vector<double> logw(static_cast<std::size_t>(hp.num_topics));
  std::vector<std::uint8_t> indicators;
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const Document& doc = corpus.docs[d];
    st.remove_document(doc, d);
    lfdmm_topic_log_weights(st, cate, corpus, hp, d, logw);
    const int t = sample_log_unnormalized(logw, rng);
    indicators.resize(static_cast<std::size_t>(doc.length()));
    lfdmm_sample_indicators(st, cate, hp, doc, t, rng, indicators);
    st.assign_document(doc, d, t, indicators);
  }
  return report;
}

LfModel train(const Corpus& corpus, const Hyperparams& hp_in, ModelKind kind,
              const EmbeddingMatrix* omega, const TrainOptions& opts) {
  Hyperparams hp = hp_in;
  hp.validate();
  const bool latent = is_latent_kind(kind);
  if (!latent && hp.lambda != 0.0) {
    throw Error(ErrorKind::Input, "baseline kinds run with lambda = 0");
  }
  if (latent) {
    if (omega == nullptr) {
      throw Error(ErrorKind::Input, "latent-feature kinds require embeddings");
    }
    if (omega->vocab_size() != corpus.vocab.size()) {
      throw Error(ErrorKind::Mismatch, "embedding rows (" + std::to_string(omega->vocab_size()) +
                                           ") do not match vocabulary size (" +
                                           std::to_string(corpus.vocab.size()) + ")");
    }
  }

  Rng rng(hp.seed);
  LfModel model;
  model.kind = kind;
  model.hp = hp;
  model.state = init_assignments(corpus, hp, kind, rng);
  const bool dmm = model.state.per_document;

  for (int iter = 1; iter <= hp.baseline_iters; ++iter) {
    if (dmm) {
      dmm_sweep(model.state, corpus, hp, rng);
    } else {
      lda_sweep(model.state, corpus, hp, rng);
    }
    if (opts.progress) {
      opts.progress({false, iter, hp.baseline_iters, 0.0, 0});
    }
  }
  if (!latent) return model;

  // phase boundary: draw each token's component from the indicator prior
  for (int d = 0; d < corpus.num_docs(); ++d) {
    const Document& doc = corpus.docs[d];
    for (int i = 0; i < doc.length(); ++i) {
      if (rng.bernoulli(hp.lambda)) {
        model.state.set_token_component(doc, d, i, true);
      }
    }
  }

  model.tau = TopicVectors::zeros(hp.num_topics, omega->dim);
  const SweepOptions sweep_opts{opts.optimizer, opts.threads};
  for (int iter = 1; iter <= hp.lf_iters; ++iter) {
    const MapReport rep = dmm ? lfdmm_sweep(model, corpus, *omega, sweep_opts, rng)
                              : lflda_sweep(model, corpus, *omega, sweep_opts, rng);
    if (opts.progress) {
      opts.progress({true, iter, hp.lf_iters, rep.total_objective, rep.topics_not_converged});
    }
  }
  return model;
}

PosteriorSummary summarize(const LfModel& model, const Corpus& corpus,
                           const EmbeddingMatrix* omega, int top_n) {
  const Hyperparams& hp = model.hp;
  const CountState& st = model.state;
  const int T = hp.num_topics;
  const int V = st.vocab_size;
  const int D = corpus.num_docs();
  const bool latent = is_latent_kind(model.kind);
  if (latent && omega == nullptr) {
    throw Error(ErrorKind::Input, "latent-feature kinds require embeddings to summarize");
  }

  CateTable cate;
  if (latent) cate = CateTable::build(model.tau, *omega);
  const double lam = latent ? hp.lambda : 0.0;

  PosteriorSummary out;
  out.topic_word.assign(static_cast<std::size_t>(T), std::vector<double>(static_cast<std::size_t>(V)));
  for (int t = 0; t < T; ++t) {
    for (int w = 0; w < V; ++w) {
      const double dir = dirichlet_word_term(st, hp, t, w);
      out.topic_word[t][w] = latent ? (1.0 - lam) * dir + lam * cate.prob(t, w) : dir;
    }
  }

  out.theta.assign(static_cast<std::size_t>(D), std::vector<double>(static_cast<std::size_t>(T)));
  if (!st.per_document) {
    for (int d = 0; d < D; ++d) {
      const double denom = corpus.docs[d].length() + T * hp.alpha;
      for (int t = 0; t < T; ++t) {
        out.theta[d][t] = (st.dir_dt(d, t) + st.lf_dt(d, t) + hp.alpha) / denom;
      }
    }
  } else {
    // full conditional of the document topic at the final state, with the
    // document's own counts removed
    CountState work = model.state;
    std::vector<double> logw(static_cast<std::size_t>(T));
    std::vector<std::uint8_t> saved;
    for (int d = 0; d < D; ++d) {
      const Document& doc = corpus.docs[d];
      const int t0 = work.doc_topic[d];
      saved.assign(work.from_latent[d].begin(), work.from_latent[d].end());
      work.remove_document(doc, d);
      if (latent) {
        lfdmm_topic_log_weights(work, cate, corpus, hp, d, logw);
      } else {
        dmm_log_weights(work, corpus, hp, d, logw);
      }
      const double mx = *std::max_element(logw.begin(), logw.end());
      double total = 0.0;
      for (int t = 0; t < T; ++t) {
        out.theta[d][t] = std::exp(logw[t] - mx);
        total += out.theta[d][t];
      }
      for (int t = 0; t < T; ++t) out.theta[d][t] /= total;
      work.assign_document(doc, d, t0, saved);
    }
  }

  out.top_words.resize(static_cast<std::size_t>(T));
  const int n = std::min(top_n, V);
  std::vector<TopWord> items(static_cast<std::size_t>(V));
  for (int t = 0; t < T; ++t) {
    for (int w = 0; w < V; ++w) items[w] = {w, out.topic_word[t][w]};
    std::partial_sort(items.begin(), items.begin() + n, items.end(),
                      [](const TopWord& a, const TopWord& b) {
                        if (a.prob != b.prob) return a.prob > b.prob;
                        return a.word < b.word;
                      });
    out.top_words[t].assign(items.begin(), items.begin() + n);
  }
  return out;
}

namespace {

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string hex64(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace

void save_model(const LfModel& model, const Corpus& corpus, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["kind"] = to_string(model.kind);
  j["created_at"] = iso8601_now();
  j["vocab_fingerprint"] = hex64(corpus.vocab.fingerprint());
  j["hyperparams"] = {
      {"num_topics", model.hp.num_topics},   {"alpha", model.hp.alpha},
      {"beta", model.hp.beta},               {"lambda", model.hp.lambda},
      {"mu", model.hp.mu},                   {"seed", model.hp.seed},
      {"baseline_iters", model.hp.baseline_iters}, {"lf_iters", model.hp.lf_iters},
  };
  if (model.state.per_document) {
    j["z"] = model.state.doc_topic;
  } else {
    json z = json::array();
    for (const auto& row : model.state.token_topic) z.push_back(row);
    j["z"] = std::move(z);
  }
  if (is_latent_kind(model.kind)) {
    json s = json::array();
    for (const auto& row : model.state.from_latent) s.push_back(row);
    j["s"] = std::move(s);
    json tau;
    tau["dim"] = model.tau.dim();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(model.tau.num_topics()) * model.tau.dim());
    for (int t = 0; t < model.tau.num_topics(); ++t) {
      for (int k = 0; k < model.tau.dim(); ++k) flat.push_back(model.tau.rows(t, k));
    }
    tau["rows"] = std::move(flat);
    j["tau"] = std::move(tau);
  } else {
    j["s"] = nullptr;
    j["tau"] = nullptr;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Input, "cannot write model file: " + path);
  out << j.dump() << '\n';
}

LfModel load_model(const std::string& path, const Corpus& corpus) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Input, "cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Input, "malformed model JSON (" + path + "): " + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw Error(ErrorKind::Input, "unsupported model schema version in " + path);
    }
    LfModel model;
    model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (j.at("vocab_fingerprint").get<std::string>() != hex64(corpus.vocab.fingerprint())) {
      throw Error(ErrorKind::Mismatch,
                  "model was trained on a different vocabulary than this corpus");
    }
    const json& h = j.at("hyperparams");
    model.hp.num_topics = h.at("num_topics").get<int>();
    model.hp.alpha = h.at("alpha").get<double>();
    model.hp.beta = h.at("beta").get<double>();
    model.hp.lambda = h.at("lambda").get<double>();
    model.hp.mu = h.at("mu").get<double>();
    model.hp.seed = h.at("seed").get<std::uint64_t>();
    model.hp.baseline_iters = h.at("baseline_iters").get<int>();
    model.hp.lf_iters = h.at("lf_iters").get<int>();
    model.hp.validate();

    std::vector<std::vector<int>> token_topic;
    std::vector<int> doc_topic;
    if (is_dmm_family(model.kind)) {
      doc_topic = j.at("z").get<std::vector<int>>();
    } else {
      token_topic = j.at("z").get<std::vector<std::vector<int>>>();
    }
    std::vector<std::vector<std::uint8_t>> from_latent;
    if (is_latent_kind(model.kind)) {
      from_latent = j.at("s").get<std::vector<std::vector<std::uint8_t>>>();
      const json& tau = j.at("tau");
      const int dim = tau.at("dim").get<int>();
      const auto flat = tau.at("rows").get<std::vector<double>>();
      if (static_cast<int>(flat.size()) != model.hp.num_topics * dim) {
        throw Error(ErrorKind::Input, "topic vector payload has the wrong size in " + path);
      }
      model.tau = TopicVectors::zeros(model.hp.num_topics, dim);
      for (int t = 0; t < model.hp.num_topics; ++t) {
        for (int k = 0; k < dim; ++k) {
          model.tau.rows(t, k) = flat[static_cast<std::size_t>(t) * dim + k];
        }
      }
    }
    model.state =
        rebuild_state(corpus, model.hp.num_topics, model.kind, token_topic, doc_topic, from_latent);
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Input, "malformed model JSON (" + path + "): " + e.what());
  }
}

}  // namespace lftm
