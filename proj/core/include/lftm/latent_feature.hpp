#pragma once

#include <functional>
#include <span>

#include <Eigen/Dense>

#include "lftm/embeddings.hpp"

namespace lftm {

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TopicVectors {
  Eigen::MatrixXd rows;  // T x dim

  int num_topics() const { return static_cast<int>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }

  static TopicVectors zeros(int num_topics, int dim);
};

// Softmax over the vocabulary of the scores omega * topic_vec, computed with
// max subtraction.
Eigen::VectorXd cate_distribution(const Eigen::VectorXd& topic_vec, const EmbeddingMatrix& omega);

// log p(w | t) for every topic and word under the current topic vectors.
// Rebuilt after each MAP step; topic vectors are constant within a sweep.
struct CateTable {
  RowMatrixXd log_probs;  // T x V, each row log-sum-exps to 0
  RowMatrixXd probs;      // exp(log_probs), cached for the mixture weights

  double prob(int t, int w) const { return probs(t, w); }
  double log_prob(int t, int w) const { return log_probs(t, w); }

  static CateTable build(const TopicVectors& tau, const EmbeddingMatrix& omega, int threads = 1);
};

// Regularized negative log likelihood of one topic's latent-feature word
// counts, and its gradient.
double topic_nll(const Eigen::VectorXd& topic_vec, std::span<const int> word_counts,
                 const EmbeddingMatrix& omega, double mu);
Eigen::VectorXd topic_nll_gradient(const Eigen::VectorXd& topic_vec,
                                   std::span<const int> word_counts, const EmbeddingMatrix& omega,
                                   double mu);

struct OptimizerConfig {
  int history = 10;
  double grad_tol = 1e-5;
  int max_iters = 100;
};

struct OptimizerReport {
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Evaluates the objective at x and writes the gradient.
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

// Limited-memory quasi-Newton descent with backtracking line search. The
// objective never increases; on a convex objective the returned point meets
// grad_tol or max_iters.
OptimizerReport lbfgs_minimize(Eigen::VectorXd& x, const ObjectiveFn& fg,
                               const OptimizerConfig& cfg);

struct MapReport {
  double total_objective = 0.0;
  double max_grad_norm = 0.0;
  int topics_not_converged = 0;
};

// One MAP step: each row of tau independently minimizes its regularized
// negative log likelihood, warm-started from the current value. Rows whose
// counts are all zero jump straight to the zero vector, the exact minimizer.
// lf_topic_word is the flat T x V latent-feature count tensor.
MapReport map_estimate(TopicVectors& tau, std::span<const int> lf_topic_word,
                       const EmbeddingMatrix& omega, double mu, const OptimizerConfig& cfg,
                       int threads = 1);

}  // namespace lftm
