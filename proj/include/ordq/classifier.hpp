#pragma once

#include <cstdint>
#include <vector>

#include "ordq/dataset.hpp"

namespace ordq {

enum class ClassWeighting { Uniform, Balanced };

// Per-column z-scoring fitted on training data. Constant columns map to 0.
struct Standardizer {
  Vector mean;
  Vector stdev;  // 0 marks a constant column

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

// L2-regularized multinomial logistic regression (bias unregularized),
// trained by full-batch gradient descent with Armijo backtracking.
struct TrainControl {
  int max_iter = 1000;
  double grad_tol = 1e-5;
};

struct FitReport {
  int iterations = 0;
  double final_loss = 0.0;
  double grad_norm = 0.0;
  std::vector<double> loss_trace;  // one entry per accepted step, non-increasing
};

// Weighted objective pieces, exposed so the gradient can be checked against
// finite differences. theta is (d+1) x n_classes with the bias in the last
// row; the loss is sum_i w_i * ce_i / sum_i w_i + (reg/2)*||W||_F^2.
double lr_objective(const Matrix& x_std, const std::vector<int>& labels0,
                    const Vector& sample_weight, int n_classes, double reg, const Matrix& theta,
                    Matrix* grad = nullptr);

// Per-instance weights: all ones (Uniform) or N / (n_present * count(class))
// (Balanced).
Vector class_weights(const std::vector<int>& labels, int n_classes, ClassWeighting weighting);

class ProbClassifier {
 public:
  ProbClassifier(Matrix weights, Vector bias, Standardizer pre, int n_classes);

  // Row-wise posteriors; each row is floored into [1e-9, 1 - 1e-9] and
  // renormalized, so downstream ratios and logs are safe.
  Matrix predict_proba(const Matrix& x) const;

  // Argmax labels in 1..n; ties resolve to the lowest class index.
  std::vector<int> predict(const Matrix& x) const;

  int n_classes() const { return n_classes_; }
  int n_features() const { return static_cast<int>(weights_.rows()); }

  const Matrix& weights() const { return weights_; }
  const Vector& bias() const { return bias_; }
  const Standardizer& standardizer() const { return pre_; }

 private:
  Matrix weights_;  // d x n_classes
  Vector bias_;     // n_classes
  Standardizer pre_;
  int n_classes_;
};

// Errors: "degenerate-training" when fewer than 2 distinct labels,
// "parameter-error" for reg < 0.
ProbClassifier fit_classifier(const Dataset& train, double reg, ClassWeighting weighting,
                              const TrainControl& control = {}, FitReport* report = nullptr);

struct CvResult {
  Matrix posteriors;  // one row per training instance, in input order
  ProbClassifier full_model;  // refit on the complete training set
  int folds_used = 0;
};

// Stratified k-fold cross-validated posteriors plus fold bookkeeping. k drops
// to the smallest per-class count when a class is rarer than k, never below 2.
CvResult cv_posteriors(const Dataset& train, int folds, double reg, ClassWeighting weighting,
                       std::uint64_t seed, const TrainControl& control = {});

}  // namespace ordq
