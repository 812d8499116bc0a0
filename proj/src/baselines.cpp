#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "slangvar/distinction.hpp"
#include "slangvar/error.hpp"

namespace slangvar {

namespace {

// Dense symmetric positive definite solve via Cholesky. Matrices here are
// tiny (embedding dimension squared), so plain loops are fine.
class SpdMatrix {
 public:
  explicit SpdMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  void add_ridge(double lambda) {
    for (std::size_t i = 0; i < n_; ++i) at(i, i) += lambda;
  }

  // In-place lower Cholesky factor. Throws if the matrix is not SPD.
  void factor() {
    for (std::size_t j = 0; j < n_; ++j) {
      double diag = at(j, j);
      for (std::size_t k = 0; k < j; ++k) diag -= at(j, k) * at(j, k);
      if (diag <= 0.0) throw data_error("covariance factorization failed");
      at(j, j) = std::sqrt(diag);
      for (std::size_t i = j + 1; i < n_; ++i) {
        double v = at(i, j);
        for (std::size_t k = 0; k < j; ++k) v -= at(i, k) * at(j, k);
        at(i, j) = v / at(j, j);
      }
    }
  }

  // Solves A x = b given the Cholesky factor.
  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double v = b[i];
      for (std::size_t k = 0; k < i; ++k) v -= at(i, k) * y[k];
      y[i] = v / at(i, i);
    }
    std::vector<double> x(n_, 0.0);
    for (std::size_t ii = n_; ii-- > 0;) {
      double v = y[ii];
      for (std::size_t k = ii + 1; k < n_; ++k) v -= at(k, ii) * x[k];
      x[ii] = v / at(ii, ii);
    }
    return x;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

constexpr double kLdaRidge = 1e-3;
constexpr double kLogRegStrength = 1.0;
constexpr double kLogRegTolerance = 1e-6;
constexpr int kLogRegMaxIterations = 20000;

Region sense_frequency_predict(const HistoricalSenseSet& hist) {
  RegionScores counts;
  for (const auto& [region, list] : hist.per_region) {
    counts.scores.emplace_back(region, static_cast<double>(list.size()));
  }
  return argmax_region(counts);
}

// Gaussian classes with a shared pooled covariance, ridge-regularized, equal
// priors: argmax of the linear discriminant.
Region lda_predict(const EmbeddingVector& query, const HistoricalSenseSet& hist) {
  const std::size_t dim = query.size();
  const std::size_t n_classes = hist.per_region.size();

  std::vector<EmbeddingVector> means;
  std::size_t total = 0;
  for (const auto& [region, list] : hist.per_region) {
    EmbeddingVector mean(dim, 0.0);
    for (const auto& member : list) {
      for (std::size_t i = 0; i < dim; ++i) mean[i] += member.embedding[i];
    }
    for (double& v : mean) v /= static_cast<double>(list.size());
    means.push_back(std::move(mean));
    total += list.size();
  }

  SpdMatrix cov(dim);
  if (total > n_classes) {
    std::size_t c = 0;
    for (const auto& [region, list] : hist.per_region) {
      for (const auto& member : list) {
        for (std::size_t i = 0; i < dim; ++i) {
          const double di = member.embedding[i] - means[c][i];
          for (std::size_t j = 0; j <= i; ++j) {
            cov.at(i, j) += di * (member.embedding[j] - means[c][j]);
          }
        }
      }
      ++c;
    }
    const double denom = static_cast<double>(total - n_classes);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        cov.at(i, j) /= denom;
        cov.at(j, i) = cov.at(i, j);
      }
    }
  }
  cov.add_ridge(kLdaRidge);
  cov.factor();

  RegionScores discriminants;
  std::size_t c = 0;
  for (const auto& [region, list] : hist.per_region) {
    const std::vector<double> w = cov.solve(means[c]);
    double score = 0.0;
    for (std::size_t i = 0; i < dim; ++i) score += w[i] * query[i];
    double mu_term = 0.0;
    for (std::size_t i = 0; i < dim; ++i) mu_term += w[i] * means[c][i];
    discriminants.scores.emplace_back(region, score - 0.5 * mu_term);
    ++c;
  }
  return argmax_region(discriminants);
}

// Multinomial logistic regression, full-batch gradient descent with
// backtracking. The L2 penalty covers weights but not intercepts.
class LogisticModel {
 public:
  LogisticModel(std::size_t dim, std::size_t n_classes)
      : dim_(dim), n_classes_(n_classes), w_(n_classes * (dim + 1), 0.0) {}

  void fit(const std::vector<const EmbeddingVector*>& xs, const std::vector<std::size_t>& ys) {
    std::vector<double> grad(w_.size());
    double step = 1.0;
    double value = objective(xs, ys, w_, grad);
    for (int iter = 0; iter < kLogRegMaxIterations; ++iter) {
      double max_grad = 0.0;
      for (const double g : grad) max_grad = std::max(max_grad, std::abs(g));
      if (max_grad <= kLogRegTolerance) break;

      std::vector<double> trial(w_.size());
      for (;;) {
        for (std::size_t i = 0; i < w_.size(); ++i) trial[i] = w_[i] - step * grad[i];
        std::vector<double> trial_grad(w_.size());
        const double trial_value = objective(xs, ys, trial, trial_grad);
        if (trial_value <= value - 0.5 * step * max_grad * max_grad || step < 1e-12) {
          w_ = trial;
          grad = trial_grad;
          value = trial_value;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
    }
  }

  std::vector<double> probabilities(const EmbeddingVector& x) const {
    std::vector<double> logits(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c) {
      double z = w_[c * (dim_ + 1) + dim_];
      for (std::size_t i = 0; i < dim_; ++i) z += w_[c * (dim_ + 1) + i] * x[i];
      logits[c] = z;
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& z : logits) {
      z = std::exp(z - top);
      total += z;
    }
    for (double& z : logits) z /= total;
    return logits;
  }

 private:
  double objective(const std::vector<const EmbeddingVector*>& xs,
                   const std::vector<std::size_t>& ys, const std::vector<double>& w,
                   std::vector<double>& grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    std::vector<double> logits(n_classes_);
    for (std::size_t n = 0; n < xs.size(); ++n) {
      const EmbeddingVector& x = *xs[n];
      for (std::size_t c = 0; c < n_classes_; ++c) {
        double z = w[c * (dim_ + 1) + dim_];
        for (std::size_t i = 0; i < dim_; ++i) z += w[c * (dim_ + 1) + i] * x[i];
        logits[c] = z;
      }
      const double top = *std::max_element(logits.begin(), logits.end());
      double total = 0.0;
      for (std::size_t c = 0; c < n_classes_; ++c) total += std::exp(logits[c] - top);
      value += std::log(total) + top - logits[ys[n]];
      for (std::size_t c = 0; c < n_classes_; ++c) {
        const double p = std::exp(logits[c] - top) / total;
        const double delta = p - (c == ys[n] ? 1.0 : 0.0);
        for (std::size_t i = 0; i < dim_; ++i) grad[c * (dim_ + 1) + i] += delta * x[i];
        grad[c * (dim_ + 1) + dim_] += delta;
      }
    }
    for (std::size_t c = 0; c < n_classes_; ++c) {
      for (std::size_t i = 0; i < dim_; ++i) {
        const double wi = w[c * (dim_ + 1) + i];
        value += 0.5 * kLogRegStrength * wi * wi;
        grad[c * (dim_ + 1) + i] += kLogRegStrength * wi;
      }
    }
    return value;
  }

  std::size_t dim_;
  std::size_t n_classes_;
  std::vector<double> w_;
};

Region logreg_predict(const EmbeddingVector& query, const HistoricalSenseSet& hist) {
  std::vector<const EmbeddingVector*> xs;
  std::vector<std::size_t> ys;
  std::size_t c = 0;
  for (const auto& [region, list] : hist.per_region) {
    for (const auto& member : list) {
      xs.push_back(&member.embedding);
      ys.push_back(c);
    }
    ++c;
  }
  LogisticModel model(query.size(), hist.per_region.size());
  model.fit(xs, ys);
  const std::vector<double> probs = model.probabilities(query);
  RegionScores scores;
  for (std::size_t i = 0; i < hist.per_region.size(); ++i) {
    scores.scores.emplace_back(hist.per_region[i].first, probs[i]);
  }
  return argmax_region(scores);
}

}  // namespace

Region baseline_predict(BaselineKind kind, const EmbeddingVector& query,
                        const HistoricalSenseSet& hist, const RegionList& universe) {
  if (hist.per_region.size() != universe.size()) {
    throw config_error("baseline_predict: history does not cover the universe");
  }
  if (hist.nonempty_regions() == 0) {
    throw data_error("baseline_predict: no historical senses");
  }
  if (kind == BaselineKind::sense_frequency ||
      hist.nonempty_regions() < hist.per_region.size()) {
    return sense_frequency_predict(hist);
  }
  if (kind == BaselineKind::lda) return lda_predict(query, hist);
  return logreg_predict(query, hist);
}

}  // namespace slangvar
