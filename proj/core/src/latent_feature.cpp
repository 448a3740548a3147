#include "lftm/latent_feature.hpp"

#include <cmath>
#include <deque>
#include <vector>

#include "lftm/parallel.hpp"

namespace lftm {

TopicVectors TopicVectors::zeros(int num_topics, int dim) {
  TopicVectors tv;
  tv.rows = Eigen::MatrixXd::Zero(num_topics, dim);
  return tv;
}

Eigen::VectorXd cate_distribution(const Eigen::VectorXd& topic_vec, const EmbeddingMatrix& omega) {
  Eigen::VectorXd scores = omega.rows * topic_vec;
  const double mx = scores.maxCoeff();
  Eigen::ArrayXd e = (scores.array() - mx).exp();
  return (e / e.sum()).matrix();
}

CateTable CateTable::build(const TopicVectors& tau, const EmbeddingMatrix& omega, int threads) {
  CateTable table;
  const int T = tau.num_topics();
  const int V = omega.vocab_size();
  table.log_probs.resize(T, V);
  table.probs.resize(T, V);
  parallel_for(T, threads, [&](int t) {
    Eigen::VectorXd scores = omega.rows * tau.rows.row(t).transpose();
    const double mx = scores.maxCoeff();
    const double log_z = mx + std::log((scores.array() - mx).exp().sum());
    table.log_probs.row(t) = (scores.array() - log_z).transpose();
    table.probs.row(t) = table.log_probs.row(t).array().exp();
  });
  return table;
}

namespace {

double log_partition(const Eigen::VectorXd& scores) {
  const double mx = scores.maxCoeff();
  return mx + std::log((scores.array() - mx).exp().sum());
}

}  // namespace

double topic_nll(const Eigen::VectorXd& topic_vec, std::span<const int> word_counts,
                 const EmbeddingMatrix& omega, double mu) {
  Eigen::VectorXd scores = omega.rows * topic_vec;
  const double log_z = log_partition(scores);
  double data = 0.0;
  double count_total = 0.0;
  for (int w = 0; w < static_cast<int>(word_counts.size()); ++w) {
    if (word_counts[w] != 0) {
      data += word_counts[w] * scores[w];
      count_total += word_counts[w];
    }
  }
  return -(data - count_total * log_z) + mu * topic_vec.squaredNorm();
}

Eigen::VectorXd topic_nll_gradient(const Eigen::VectorXd& topic_vec,
                                   std::span<const int> word_counts, const EmbeddingMatrix& omega,
                                   double mu) {
  Eigen::VectorXd scores = omega.rows * topic_vec;
  const double mx = scores.maxCoeff();
  Eigen::ArrayXd e = (scores.array() - mx).exp();
  Eigen::VectorXd p = (e / e.sum()).matrix();
  Eigen::VectorXd counts(word_counts.size());
  double count_total = 0.0;
  for (int w = 0; w < static_cast<int>(word_counts.size()); ++w) {
    counts[w] = word_counts[w];
    count_total += word_counts[w];
  }
  return -(omega.rows.transpose() * counts) + count_total * (omega.rows.transpose() * p) +
         2.0 * mu * topic_vec;
}

OptimizerReport lbfgs_minimize(Eigen::VectorXd& x, const ObjectiveFn& fg,
                               const OptimizerConfig& cfg) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd grad(n), grad_new(n), x_new(n), dir(n);

  OptimizerReport report;
  double f = fg(x, grad);

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  int iter = 0;
  while (true) {
    report.objective = f;
    report.grad_norm = grad.norm();
    report.iterations = iter;
    if (report.grad_norm <= cfg.grad_tol) {
      report.converged = true;
      return report;
    }
    if (iter >= cfg.max_iters) return report;

    // two-loop recursion
    dir = -grad;
    const int k = static_cast<int>(s_hist.size());
    std::vector<double> alpha(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(dir);
      dir -= alpha[i] * y_hist[i];
    }
    if (k > 0) {
      dir *= 1.0 / (rho_hist.back() * y_hist.back().squaredNorm());
    }
    for (int i = 0; i < k; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(dir);
      dir += (alpha[i] - beta) * s_hist[i];
    }

    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = grad.dot(dir);
      if (!(slope < 0.0)) return report;  // gradient numerically zero
    }

    // backtracking with Armijo sufficient decrease
    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = fg(x_new, grad_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return report;

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == cfg.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
    ++iter;
  }
}

MapReport map_estimate(TopicVectors& tau, std::span<const int> lf_topic_word,
                       const EmbeddingMatrix& omega, double mu, const OptimizerConfig& cfg,
                       int threads) {
  const int T = tau.num_topics();
  const int V = omega.vocab_size();
  std::vector<OptimizerReport> reports(static_cast<std::size_t>(T));
  parallel_for(T, threads, [&](int t) {
    const std::span<const int> counts =
        lf_topic_word.subspan(static_cast<std::size_t>(t) * V, static_cast<std::size_t>(V));
    double count_total = 0.0;
    for (int c : counts) count_total += c;
    if (count_total == 0.0) {
      if (mu > 0.0) tau.rows.row(t).setZero();
      reports[t].objective = mu * tau.rows.row(t).squaredNorm();
      reports[t].converged = true;
      return;
    }
    Eigen::VectorXd count_vec(V);
    for (int w = 0; w < V; ++w) count_vec[w] = counts[w];
    const Eigen::VectorXd weighted_words = omega.rows.transpose() * count_vec;

    auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) -> double {
      Eigen::VectorXd scores = omega.rows * v;
      const double mx = scores.maxCoeff();
      Eigen::ArrayXd e = (scores.array() - mx).exp();
      const double z = e.sum();
      const double log_z = mx + std::log(z);
      Eigen::VectorXd p = (e / z).matrix();
      g = -weighted_words + count_total * (omega.rows.transpose() * p) + 2.0 * mu * v;
      return -(count_vec.dot(scores) - count_total * log_z) + mu * v.squaredNorm();
    };

    Eigen::VectorXd x = tau.rows.row(t).transpose();
    reports[t] = lbfgs_minimize(x, fg, cfg);
    tau.rows.row(t) = x.transpose();
  });

  MapReport out;
  for (const auto& r : reports) {
    out.total_objective += r.objective;
    out.max_grad_norm = std::max(out.max_grad_norm, r.grad_norm);
    if (!r.converged) ++out.topics_not_converged;
  }
  return out;
}

}  // namespace lftm
