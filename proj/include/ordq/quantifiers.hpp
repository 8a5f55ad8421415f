#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ordq/classifier.hpp"
#include "ordq/dataset.hpp"

namespace ordq {

enum class QuantifierKind { CC, PACC, EMQ, MLPE };

std::string to_string(QuantifierKind kind);
QuantifierKind quantifier_kind_from_string(const std::string& s);

struct EmqOptions {
  int max_iter = 1000;
  double eps = 1e-6;  // L1 change in the prior estimate between iterations
};

struct EmqDiagnostics {
  bool converged = false;
  int iterations = 0;
  std::vector<double> step_sizes;  // L1 prior movement per iteration
};

// A fitted prevalence estimator. estimate() maps a test feature matrix to a
// distribution over the ordinal classes; implementations are immutable and
// safe for concurrent use.
class Quantifier {
 public:
  virtual ~Quantifier() = default;
  virtual QuantifierKind kind() const = 0;
  virtual PrevalenceVector estimate(const Matrix& x) const = 0;
  const PrevalenceVector& train_prior() const { return train_prior_; }
  virtual int n_features() const = 0;

 protected:
  explicit Quantifier(PrevalenceVector prior) : train_prior_(std::move(prior)) {}
  PrevalenceVector train_prior_;
};

// Classify-and-count: empirical prevalence of argmax labels.
class CcQuantifier : public Quantifier {
 public:
  CcQuantifier(ProbClassifier clf, PrevalenceVector prior);
  QuantifierKind kind() const override { return QuantifierKind::CC; }
  PrevalenceVector estimate(const Matrix& x) const override;
  int n_features() const override { return clf_.n_features(); }
  const ProbClassifier& classifier() const { return clf_; }

 private:
  ProbClassifier clf_;
};

// Probabilistic adjusted classify-and-count: solves ‖Corr·p − q̄‖₂ over the
// simplex, where Corr column c is the mean out-of-fold posterior of class c.
class PaccQuantifier : public Quantifier {
 public:
  PaccQuantifier(ProbClassifier clf, Matrix correction, PrevalenceVector prior);
  QuantifierKind kind() const override { return QuantifierKind::PACC; }
  PrevalenceVector estimate(const Matrix& x) const override;
  int n_features() const override { return clf_.n_features(); }
  const ProbClassifier& classifier() const { return clf_; }
  const Matrix& correction() const { return correction_; }

 private:
  ProbClassifier clf_;
  Matrix correction_;  // n x n, column-stochastic up to posterior flooring
};

// Saerens-Latinne-Decaestecker expectation maximization, initialized at the
// training prior, iterating on the unadjusted test posteriors.
class EmqQuantifier : public Quantifier {
 public:
  EmqQuantifier(ProbClassifier clf, PrevalenceVector prior, EmqOptions options);
  QuantifierKind kind() const override { return QuantifierKind::EMQ; }
  PrevalenceVector estimate(const Matrix& x) const override;
  PrevalenceVector estimate_with(const Matrix& x, EmqDiagnostics* diag) const;
  int n_features() const override { return clf_.n_features(); }
  const ProbClassifier& classifier() const { return clf_; }
  const EmqOptions& options() const { return options_; }

 private:
  ProbClassifier clf_;
  EmqOptions options_;
};

// Maximum-likelihood prevalence estimator baseline: always answers the
// training prevalence, ignoring the test features.
class MlpeQuantifier : public Quantifier {
 public:
  explicit MlpeQuantifier(PrevalenceVector prior) : Quantifier(std::move(prior)) {}
  QuantifierKind kind() const override { return QuantifierKind::MLPE; }
  PrevalenceVector estimate(const Matrix& x) const override;
  int n_features() const override { return -1; }  // feature-free
};

// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

// min ‖A·p − b‖₂ s.t. p on the simplex, by projected gradient descent
// (step 1/L, L = largest eigenvalue of AᵀA; 10000 iterations max, L1 step
// tolerance 1e-10). Always returns a valid simplex point.
Vector solve_simplex_least_squares(const Matrix& a, const Vector& b);

struct QuantifierOptions {
  double reg = 1.0;
  ClassWeighting weighting = ClassWeighting::Uniform;
  int cv_folds = 10;       // PACC only
  EmqOptions emq{};        // EMQ only
  TrainControl train{};
  std::uint64_t seed = 0;  // CV fold assignment
};

std::unique_ptr<Quantifier> fit_quantifier(QuantifierKind kind, const Dataset& train,
                                           const QuantifierOptions& options);

}  // namespace ordq
