// Command-line frontend: preprocessing, training, topic inspection and the
// evaluation harness, wired for reproducible seeded runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lftm/embeddings.hpp"
#include "lftm/evaluation.hpp"
#include "lftm/lf_models.hpp"
#include "lftm/parallel.hpp"

using namespace lftm;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return 2;
    case ErrorKind::EmptyResult: return 3;
    case ErrorKind::Mismatch: return 4;
  }
  return 1;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct PreprocessOpts {
  std::string input, labels, stopwords, norm_dict, embeddings, output;
  int min_len = 3;
  int min_count = 10;
};

struct TrainOpts {
  std::string corpus, embeddings, output;
  std::string model;
  int topics = 0;
  double alpha = 0.1;
  double beta = 0.01;
  double lambda = 0.0;
  bool lambda_given = false;
  double mu = 0.01;
  std::uint64_t seed = 1;
  int baseline_iters = -1;  // -1: kind-dependent default
  int lf_iters = -1;
  double opt_tol = 1e-5;
  int opt_max_iter = 100;
  int threads = 1;
};

struct EvalOpts {
  TrainOpts train;
  int repeat = 1;
  std::string ref_corpus, ref_cache;
  int window = 10;
  int top = 15;
  int folds = 10;
};

void add_train_flags(CLI::App* cmd, TrainOpts& o) {
  cmd->add_option("--corpus", o.corpus, "encoded corpus JSON")->required();
  cmd->add_option("--model", o.model, "lda | dmm | lf-lda | lf-dmm")->required();
  cmd->add_option("--topics", o.topics, "number of topics")->required();
  cmd->add_option("--alpha", o.alpha, "document-topic concentration")->capture_default_str();
  cmd->add_option("--beta", o.beta, "topic-word concentration")->capture_default_str();
  auto* lam = cmd->add_option("--lambda", o.lambda,
                              "latent-feature mixture weight in [0, 1]; required for lf kinds");
  lam->each([&o](const std::string&) { o.lambda_given = true; });
  cmd->add_option("--mu", o.mu, "L2 regularizer on topic vectors")->capture_default_str();
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--baseline-iters", o.baseline_iters,
                  "baseline sweeps (default 2000, or 1500 before a latent phase)");
  cmd->add_option("--lf-iters", o.lf_iters, "latent-feature sweeps (default 500)");
  cmd->add_option("--embeddings", o.embeddings, "pre-trained word vector file (lf kinds)");
  cmd->add_option("--opt-tol", o.opt_tol, "MAP gradient-norm tolerance")->capture_default_str();
  cmd->add_option("--opt-max-iter", o.opt_max_iter, "MAP iteration cap per topic")
      ->capture_default_str();
  cmd->add_option("--threads", o.threads, "worker threads for repetitions and the MAP step")
      ->capture_default_str();
}

Hyperparams resolve_hyperparams(const TrainOpts& o, ModelKind kind) {
  Hyperparams hp;
  hp.num_topics = o.topics;
  hp.alpha = o.alpha;
  hp.beta = o.beta;
  hp.mu = o.mu;
  hp.seed = o.seed;
  if (is_latent_kind(kind)) {
    if (!o.lambda_given) {
      throw Error(ErrorKind::Input, "latent-feature kinds require an explicit --lambda");
    }
    if (o.embeddings.empty()) {
      throw Error(ErrorKind::Input, "latent-feature kinds require --embeddings");
    }
    hp.lambda = o.lambda;
    hp.baseline_iters = o.baseline_iters >= 0 ? o.baseline_iters : 1500;
    hp.lf_iters = o.lf_iters >= 0 ? o.lf_iters : 500;
  } else {
    if (o.lambda_given) {
      throw Error(ErrorKind::Input, "--lambda applies only to lf-lda and lf-dmm");
    }
    hp.lambda = 0.0;
    hp.baseline_iters = o.baseline_iters >= 0 ? o.baseline_iters : 2000;
    hp.lf_iters = 0;
  }
  hp.validate();
  return hp;
}

// every run logs its resolved configuration so reported numbers can be
// regenerated bit-identically
void print_header(const std::string& command,
                  const std::vector<std::pair<std::string, std::string>>& flags) {
  std::cerr << "# lftm " << command;
  for (const auto& [key, value] : flags) {
    if (!value.empty()) std::cerr << " --" << key << " " << value;
  }
  std::cerr << "\n";
}

std::vector<std::pair<std::string, std::string>> train_header_flags(const TrainOpts& o,
                                                                    const Hyperparams& hp,
                                                                    ModelKind kind) {
  return {
      {"corpus", o.corpus},
      {"model", to_string(kind)},
      {"topics", std::to_string(hp.num_topics)},
      {"alpha", fmt(hp.alpha)},
      {"beta", fmt(hp.beta)},
      {"lambda", is_latent_kind(kind) ? fmt(hp.lambda) : std::string{}},
      {"mu", fmt(hp.mu)},
      {"seed", std::to_string(hp.seed)},
      {"baseline-iters", std::to_string(hp.baseline_iters)},
      {"lf-iters", is_latent_kind(kind) ? std::to_string(hp.lf_iters) : std::string{}},
      {"embeddings", o.embeddings},
      {"opt-tol", fmt(o.opt_tol)},
      {"opt-max-iter", std::to_string(o.opt_max_iter)},
      {"threads", std::to_string(o.threads)},
  };
}

int cmd_preprocess(const PreprocessOpts& o) {
  print_header("preprocess", {{"input", o.input},
                              {"labels", o.labels},
                              {"stopwords", o.stopwords},
                              {"norm-dict", o.norm_dict},
                              {"embeddings", o.embeddings},
                              {"min-len", std::to_string(o.min_len)},
                              {"min-count", std::to_string(o.min_count)},
                              {"output", o.output}});
  const auto lines = read_lines(o.input);
  std::vector<std::string> labels;
  if (!o.labels.empty()) labels = read_lines(o.labels);
  std::unordered_set<std::string> stopwords;
  if (!o.stopwords.empty()) stopwords = read_word_set(o.stopwords);
  std::unordered_map<std::string, std::string> norm_dict;
  if (!o.norm_dict.empty()) norm_dict = read_normalization_dict(o.norm_dict);
  std::unordered_set<std::string> embedding_words;
  if (!o.embeddings.empty()) {
    embedding_words = embedding_word_set(parse_embedding_file(o.embeddings));
  }

  std::vector<std::vector<std::string>> docs;
  docs.reserve(lines.size());
  for (const auto& line : lines) {
    docs.push_back(
        tokenize_and_clean(line, stopwords, o.min_len, norm_dict.empty() ? nullptr : &norm_dict));
  }
  BuildStats stats;
  Corpus corpus = build_corpus(docs, o.labels.empty() ? nullptr : &labels, o.min_count,
                               o.embeddings.empty() ? nullptr : &embedding_words, &stats);
  save_corpus_json(corpus, o.output);

  std::printf("docs_in\tdocs_kept\tvocab_size\ttypes_removed\ttokens\tavg_len\n");
  std::printf("%d\t%d\t%d\t%d\t%zu\t%s\n", stats.docs_in, stats.docs_kept, corpus.vocab.size(),
              stats.types_removed, stats.tokens_kept, fmt(stats.avg_doc_len).c_str());
  return 0;
}

EmbeddingMatrix load_embeddings_for(const Corpus& corpus, const std::string& path) {
  return align_to_vocab(parse_embedding_file(path), corpus.vocab);
}

int cmd_train(const TrainOpts& o) {
  const ModelKind kind = model_kind_from_string(o.model);
  const Hyperparams hp = resolve_hyperparams(o, kind);
  print_header("train", train_header_flags(o, hp, kind));

  const Corpus corpus = load_corpus_json(o.corpus);
  EmbeddingMatrix omega;
  const bool latent = is_latent_kind(kind);
  if (latent) omega = load_embeddings_for(corpus, o.embeddings);

  TrainOptions opts;
  opts.optimizer.grad_tol = o.opt_tol;
  opts.optimizer.max_iters = o.opt_max_iter;
  opts.threads = o.threads;
  opts.progress = [](const TrainProgress& p) {
    if (p.latent_phase) {
      std::fprintf(stderr, "# iter %d/%d map_nll %.6f%s\n", p.iteration, p.total_iterations,
                   p.map_objective,
                   p.topics_not_converged > 0 ? " (some topics hit the iteration cap)" : "");
    } else {
      std::fprintf(stderr, "# iter %d/%d\n", p.iteration, p.total_iterations);
    }
  };

  const LfModel model = train(corpus, hp, kind, latent ? &omega : nullptr, opts);
  save_model(model, corpus, o.output);
  std::fprintf(stderr, "# model written to %s\n", o.output.c_str());
  return 0;
}

struct TopicsOpts {
  std::string model, corpus, embeddings;
  int top = 15;
};

int cmd_topics(const TopicsOpts& o) {
  print_header("topics", {{"model", o.model},
                          {"corpus", o.corpus},
                          {"embeddings", o.embeddings},
                          {"top", std::to_string(o.top)}});
  const Corpus corpus = load_corpus_json(o.corpus);
  const LfModel model = load_model(o.model, corpus);
  EmbeddingMatrix omega;
  const bool latent = is_latent_kind(model.kind);
  if (latent) {
    if (o.embeddings.empty()) {
      throw Error(ErrorKind::Input, "this model kind requires --embeddings");
    }
    omega = load_embeddings_for(corpus, o.embeddings);
  }
  const PosteriorSummary summary = summarize(model, corpus, latent ? &omega : nullptr, o.top);
  std::printf("topic\trank\tword\tprob\n");
  for (std::size_t t = 0; t < summary.top_words.size(); ++t) {
    for (std::size_t r = 0; r < summary.top_words[t].size(); ++r) {
      const TopWord& tw = summary.top_words[t][r];
      std::printf("%zu\t%zu\t%s\t%s\n", t, r + 1, corpus.vocab.words[tw.word].c_str(),
                  fmt(tw.prob).c_str());
    }
  }
  return 0;
}

struct MetricAccumulator {
  std::vector<std::string> names;
  std::vector<std::vector<double>> per_run;  // run x metric
};

void report_metrics(const MetricAccumulator& acc, std::uint64_t base_seed) {
  const int runs = static_cast<int>(acc.per_run.size());
  for (int r = 0; r < runs; ++r) {
    std::fprintf(stderr, "# run %d seed %llu:", r,
                 static_cast<unsigned long long>(base_seed + static_cast<std::uint64_t>(r)));
    for (std::size_t m = 0; m < acc.names.size(); ++m) {
      std::fprintf(stderr, " %s=%s", acc.names[m].c_str(), fmt(acc.per_run[r][m]).c_str());
    }
    std::fprintf(stderr, "\n");
  }
  std::printf("metric\tmean\tsd\truns\n");
  for (std::size_t m = 0; m < acc.names.size(); ++m) {
    double mean = 0.0;
    for (int r = 0; r < runs; ++r) mean += acc.per_run[r][m];
    mean /= runs;
    double sd = 0.0;
    if (runs > 1) {
      double ss = 0.0;
      for (int r = 0; r < runs; ++r) {
        const double d = acc.per_run[r][m] - mean;
        ss += d * d;
      }
      sd = std::sqrt(ss / (runs - 1));
    }
    std::printf("%s\t%s\t%s\t%d\n", acc.names[m].c_str(), fmt(mean).c_str(), fmt(sd).c_str(),
                runs);
  }
}

enum class EvalMode { Coherence, Clustering, Classify };

int cmd_eval(const EvalOpts& o, EvalMode mode) {
  const ModelKind kind = model_kind_from_string(o.train.model);
  const Hyperparams hp = resolve_hyperparams(o.train, kind);
  auto flags = train_header_flags(o.train, hp, kind);
  flags.push_back({"repeat", std::to_string(o.repeat)});
  if (mode == EvalMode::Coherence) {
    flags.push_back({"ref-corpus", o.ref_corpus});
    flags.push_back({"window", std::to_string(o.window)});
    flags.push_back({"top", std::to_string(o.top)});
  }
  if (mode == EvalMode::Classify) flags.push_back({"folds", std::to_string(o.folds)});
  const char* mode_name = mode == EvalMode::Coherence    ? "eval coherence"
                          : mode == EvalMode::Clustering ? "eval clustering"
                                                         : "eval classify";
  print_header(mode_name, flags);
  if (o.repeat < 1) throw Error(ErrorKind::Input, "--repeat must be >= 1");

  const Corpus corpus = load_corpus_json(o.train.corpus);
  const bool latent = is_latent_kind(kind);
  EmbeddingMatrix omega;
  if (latent) omega = load_embeddings_for(corpus, o.train.embeddings);

  std::vector<int> labels;
  if (mode != EvalMode::Coherence) {
    if (!corpus.has_labels()) {
      throw Error(ErrorKind::Input, "this evaluation needs a corpus with gold labels");
    }
    labels.reserve(corpus.docs.size());
    for (const auto& d : corpus.docs) labels.push_back(d.label);
  }

  Corpus ref;
  CooccurrenceStats stats;
  if (mode == EvalMode::Coherence) {
    if (o.ref_corpus.empty()) {
      throw Error(ErrorKind::Input, "coherence evaluation needs --ref-corpus");
    }
    ref = load_reference_corpus(o.ref_corpus);
    const std::uint64_t key = corpus_fingerprint(ref);
    bool cached = false;
    if (!o.ref_cache.empty()) cached = load_cooccurrence(o.ref_cache, key, o.window, &stats);
    if (!cached) {
      std::vector<std::vector<int>> ref_docs;
      ref_docs.reserve(ref.docs.size());
      for (const auto& d : ref.docs) ref_docs.push_back(d.tokens);
      stats = build_cooccurrence(ref_docs, ref.vocab.size(), o.window);
      if (!o.ref_cache.empty()) save_cooccurrence(stats, key, o.window, o.ref_cache);
    }
  }

  MetricAccumulator acc;
  switch (mode) {
    case EvalMode::Coherence: acc.names = {"npmi"}; break;
    case EvalMode::Clustering: acc.names = {"purity", "nmi"}; break;
    case EvalMode::Classify: acc.names = {"macro_f1"}; break;
  }
  acc.per_run.assign(static_cast<std::size_t>(o.repeat),
                     std::vector<double>(acc.names.size(), 0.0));

  const int outer_threads = o.repeat > 1 ? o.train.threads : 1;
  const int inner_threads = o.repeat > 1 ? 1 : o.train.threads;
  TrainOptions topts;
  topts.optimizer.grad_tol = o.train.opt_tol;
  topts.optimizer.max_iters = o.train.opt_max_iter;
  topts.threads = inner_threads;

  parallel_for(o.repeat, outer_threads, [&](int r) {
    Hyperparams run_hp = hp;
    run_hp.seed = hp.seed + static_cast<std::uint64_t>(r);
    const LfModel model = train(corpus, run_hp, kind, latent ? &omega : nullptr, topts);
    const PosteriorSummary summary =
        summarize(model, corpus, latent ? &omega : nullptr, std::max(o.top, 15));
    switch (mode) {
      case EvalMode::Coherence:
        acc.per_run[r][0] = npmi_model(stats, summary, corpus.vocab, ref.vocab, o.top);
        break;
      case EvalMode::Clustering: {
        const auto clusters = cluster_assign(summary);
        const auto table = ContingencyTable::from_assignments(clusters, labels, hp.num_topics,
                                                              corpus.num_labels);
        acc.per_run[r][0] = purity(table);
        acc.per_run[r][1] = nmi(table);
        break;
      }
      case EvalMode::Classify:
        acc.per_run[r][0] = classify(summary, labels, corpus.num_labels, o.folds, run_hp.seed);
        break;
    }
  });

  report_metrics(acc, hp.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic models with Dirichlet multinomial and latent feature mixture components"};
  app.require_subcommand(1);

  PreprocessOpts pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "clean raw text into an encoded corpus");
  pre_cmd->add_option("--input", pre.input, "one document per line")->required();
  pre_cmd->add_option("--labels", pre.labels, "one label per line, aligned with --input");
  pre_cmd->add_option("--stopwords", pre.stopwords, "stopword list, one word per line");
  pre_cmd->add_option("--norm-dict", pre.norm_dict, "two-column token normalization mapping");
  pre_cmd->add_option("--embeddings", pre.embeddings,
                      "keep only words present in this vector file");
  pre_cmd->add_option("--min-len", pre.min_len, "minimum token length")->capture_default_str();
  pre_cmd->add_option("--min-count", pre.min_count, "minimum corpus frequency")
      ->capture_default_str();
  pre_cmd->add_option("--output", pre.output, "encoded corpus JSON path")->required();

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "train a model and write a snapshot");
  add_train_flags(train_cmd, train_opts);
  train_cmd->add_option("--output", train_opts.output, "model snapshot path")->required();

  TopicsOpts topics_opts;
  auto* topics_cmd = app.add_subcommand("topics", "print the most probable words per topic");
  topics_cmd->add_option("--model", topics_opts.model, "model snapshot")->required();
  topics_cmd->add_option("--corpus", topics_opts.corpus, "encoded corpus JSON")->required();
  topics_cmd->add_option("--embeddings", topics_opts.embeddings, "word vectors (lf kinds)");
  topics_cmd->add_option("--top", topics_opts.top, "words per topic")->capture_default_str();

  EvalOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "train seeded repetitions and report metrics");
  eval_cmd->require_subcommand(1);
  auto* coh_cmd = eval_cmd->add_subcommand("coherence", "topic coherence against a reference corpus");
  auto* clu_cmd = eval_cmd->add_subcommand("clustering", "purity and NMI of document clusters");
  auto* cls_cmd = eval_cmd->add_subcommand("classify", "macro-F1 of topic-proportion classification");
  for (CLI::App* sub : {coh_cmd, clu_cmd, cls_cmd}) {
    add_train_flags(sub, eval_opts.train);
    sub->add_option("--repeat", eval_opts.repeat, "seeded repetitions")->capture_default_str();
  }
  coh_cmd->add_option("--ref-corpus", eval_opts.ref_corpus, "reference corpus, one doc per line");
  coh_cmd->add_option("--ref-cache", eval_opts.ref_cache, "co-occurrence cache file");
  coh_cmd->add_option("--window", eval_opts.window, "sliding window size")->capture_default_str();
  coh_cmd->add_option("--top", eval_opts.top, "top words per topic")->capture_default_str();
  cls_cmd->add_option("--folds", eval_opts.folds, "cross-validation folds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (pre_cmd->parsed()) return cmd_preprocess(pre);
    if (train_cmd->parsed()) return cmd_train(train_opts);
    if (topics_cmd->parsed()) return cmd_topics(topics_opts);
    if (eval_cmd->parsed()) {
      if (coh_cmd->parsed()) return cmd_eval(eval_opts, EvalMode::Coherence);
      if (clu_cmd->parsed()) return cmd_eval(eval_opts, EvalMode::Clustering);
      if (cls_cmd->parsed()) return cmd_eval(eval_opts, EvalMode::Classify);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
