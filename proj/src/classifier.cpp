#include "ordq/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ordq/error.hpp"
#include "ordq/rng.hpp"

namespace ordq {

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() == 0) fail("empty-input", "cannot standardize an empty matrix");
  Standardizer s;
  s.mean = x.colwise().mean().transpose();
  Matrix centered = x.rowwise() - s.mean.transpose();
  Vector var = (centered.array().square().colwise().sum() / static_cast<double>(x.rows())).transpose();
  s.stdev = var.array().sqrt();
  for (Eigen::Index j = 0; j < s.stdev.size(); ++j)
    if (s.stdev(j) < 1e-12) s.stdev(j) = 0.0;
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size())
    fail("shape-error", "matrix has " + std::to_string(x.cols()) + " columns, standardizer expects " +
                            std::to_string(mean.size()));
  Matrix out = x.rowwise() - mean.transpose();
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    if (stdev(j) == 0.0)
      out.col(j).setZero();
    else
      out.col(j) /= stdev(j);
  }
  return out;
}

Vector class_weights(const std::vector<int>& labels, int n_classes, ClassWeighting weighting) {
  Vector w = Vector::Ones(static_cast<Eigen::Index>(labels.size()));
  if (weighting == ClassWeighting::Uniform) return w;
  std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
  for (int y : labels) counts[static_cast<std::size_t>(y - 1)] += 1;
  int present = 0;
  for (int c : counts) present += (c > 0) ? 1 : 0;
  const double n = static_cast<double>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int c = counts[static_cast<std::size_t>(labels[i] - 1)];
    w(static_cast<Eigen::Index>(i)) = n / (static_cast<double>(present) * static_cast<double>(c));
  }
  return w;
}

double lr_objective(const Matrix& x_std, const std::vector<int>& labels0,
                    const Vector& sample_weight, int n_classes, double reg, const Matrix& theta,
                    Matrix* grad) {
  const Eigen::Index n_rows = x_std.rows();
  const Eigen::Index d = x_std.cols();
  if (theta.rows() != d + 1 || theta.cols() != n_classes)
    fail("shape-error", "theta must be (d+1) x n_classes");
  if (static_cast<Eigen::Index>(labels0.size()) != n_rows || sample_weight.size() != n_rows)
    fail("shape-error", "labels/weights do not match the matrix rows");

  const Matrix w_mat = theta.topRows(d);
  Matrix z = x_std * w_mat;
  z.rowwise() += theta.row(d);

  Vector zmax = z.rowwise().maxCoeff();
  Matrix e = (z.colwise() - zmax).array().exp();
  Vector esum = e.rowwise().sum();

  const double wsum = sample_weight.sum();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    int y = labels0[static_cast<std::size_t>(i)];
    loss += sample_weight(i) * (std::log(esum(i)) + zmax(i) - z(i, y));
  }
  loss = loss / wsum + 0.5 * reg * w_mat.squaredNorm();

  if (grad) {
    Matrix p = e.array().colwise() / esum.array();  // row-wise softmax
    for (Eigen::Index i = 0; i < n_rows; ++i) {
      p.row(i) *= sample_weight(i);
      p(i, labels0[static_cast<std::size_t>(i)]) -= sample_weight(i);
    }
    p /= wsum;
    grad->resize(d + 1, n_classes);
    grad->topRows(d) = x_std.transpose() * p + reg * w_mat;
    grad->row(d) = p.colwise().sum();
  }
  return loss;
}

ProbClassifier::ProbClassifier(Matrix weights, Vector bias, Standardizer pre, int n_classes)
    : weights_(std::move(weights)), bias_(std::move(bias)), pre_(std::move(pre)), n_classes_(n_classes) {
  if (bias_.size() != n_classes_ || weights_.cols() != n_classes_)
    fail("shape-error", "weight/bias dimensions do not match the class count");
}

Matrix ProbClassifier::predict_proba(const Matrix& x) const {
  Matrix xs = pre_.apply(x);
  Matrix z = xs * weights_;
  z.rowwise() += bias_.transpose();
  Vector zmax = z.rowwise().maxCoeff();
  Matrix p = (z.colwise() - zmax).array().exp();
  Vector esum = p.rowwise().sum();
  p.array().colwise() /= esum.array();
  // Floor and renormalize so no posterior is exactly 0 or 1.
  p = p.array().max(1e-9).min(1.0 - 1e-9);
  Vector rs = p.rowwise().sum();
  p.array().colwise() /= rs.array();
  return p;
}

std::vector<int> ProbClassifier::predict(const Matrix& x) const {
  Matrix p = predict_proba(x);
  std::vector<int> out(static_cast<std::size_t>(p.rows()));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < n_classes_; ++c)
      if (p(i, c) > p(i, best)) best = c;  // strict: ties keep the lowest index
    out[static_cast<std::size_t>(i)] = best + 1;
  }
  return out;
}

ProbClassifier fit_classifier(const Dataset& train, double reg, ClassWeighting weighting,
                              const TrainControl& control, FitReport* report) {
  if (reg < 0.0) fail("parameter-error", "regularization strength must be >= 0");
  if (train.rows() == 0) fail("empty-input", "empty training set");
  std::set<int> distinct(train.labels().begin(), train.labels().end());
  if (distinct.size() < 2)
    fail("degenerate-training", "training set has " + std::to_string(distinct.size()) +
                                    " distinct label(s), need at least 2");

  const int n = train.n_classes();
  Standardizer pre = Standardizer::fit(train.features());
  Matrix xs = pre.apply(train.features());
  std::vector<int> y0(train.labels().size());
  for (std::size_t i = 0; i < y0.size(); ++i) y0[i] = train.labels()[i] - 1;
  Vector w = class_weights(train.labels(), n, weighting);

  Matrix theta = Matrix::Zero(xs.cols() + 1, n);
  Matrix grad;
  double f = lr_objective(xs, y0, w, n, reg, theta, &grad);

  FitReport local;
  local.loss_trace.push_back(f);
  double step = 1.0;
  int it = 0;
  for (; it < control.max_iter; ++it) {
    double gnorm = grad.norm();
    if (gnorm <= control.grad_tol) break;
    double gsq = grad.squaredNorm();
    step = std::min(step * 4.0, 1e6);  // let the step recover after backtracks
    bool accepted = false;
    Matrix cand;
    double fc = f;
    while (step >= 1e-18) {
      cand = theta - step * grad;
      fc = lr_objective(xs, y0, w, n, reg, cand);
      if (fc <= f - 1e-4 * step * gsq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // at the numerical floor, nothing more to gain
    theta = std::move(cand);
    f = lr_objective(xs, y0, w, n, reg, theta, &grad);
    local.loss_trace.push_back(f);
  }
  local.iterations = it;
  local.final_loss = f;
  local.grad_norm = grad.norm();
  if (report) *report = std::move(local);

  Matrix wgt = theta.topRows(theta.rows() - 1);
  Vector bias = theta.row(theta.rows() - 1).transpose();
  return ProbClassifier(std::move(wgt), std::move(bias), std::move(pre), n);
}

CvResult cv_posteriors(const Dataset& train, int folds, double reg, ClassWeighting weighting,
                       std::uint64_t seed, const TrainControl& control) {
  if (folds < 2) fail("parameter-error", "fold count must be >= 2");
  const int n = train.n_classes();
  const int n_rows = train.rows();
  if (n_rows == 0) fail("empty-input", "empty training set");

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(n));
  for (int i = 0; i < n_rows; ++i)
    by_class[static_cast<std::size_t>(train.labels()[static_cast<std::size_t>(i)] - 1)].push_back(i);

  int min_present = n_rows;
  for (const auto& v : by_class)
    if (!v.empty()) min_present = std::min(min_present, static_cast<int>(v.size()));
  int k = std::min(folds, min_present);
  if (k < 2) k = 2;

  // Stratified assignment: shuffle each class, deal round-robin over folds.
  Rng rng(seed, {0xCF0135});
  std::vector<int> fold_of(static_cast<std::size_t>(n_rows), 0);
  for (int c = 0; c < n; ++c) {
    auto idx = by_class[static_cast<std::size_t>(c)];
    if (idx.empty()) continue;
    Rng class_rng = rng.stream(static_cast<std::uint64_t>(c));
    class_rng.shuffle(idx);
    for (std::size_t j = 0; j < idx.size(); ++j)
      fold_of[static_cast<std::size_t>(idx[j])] = static_cast<int>(j % static_cast<std::size_t>(k));
  }

  Matrix posteriors = Matrix::Zero(n_rows, n);
  for (int f = 0; f < k; ++f) {
    std::vector<int> fit_rows;
    std::vector<int> held_rows;
    for (int i = 0; i < n_rows; ++i)
      (fold_of[static_cast<std::size_t>(i)] == f ? held_rows : fit_rows).push_back(i);
    if (held_rows.empty()) continue;
    Dataset sub = train.subset(fit_rows);
    std::set<int> distinct(sub.labels().begin(), sub.labels().end());
    // A fold complement can collapse to one class on tiny inputs; fall back to
    // the full fit rather than crash (the posteriors are degenerate anyway).
    ProbClassifier model =
        distinct.size() >= 2 ? fit_classifier(sub, reg, weighting, control)
                             : fit_classifier(train, reg, weighting, control);
    Matrix held(static_cast<Eigen::Index>(held_rows.size()), train.cols());
    for (std::size_t i = 0; i < held_rows.size(); ++i)
      held.row(static_cast<Eigen::Index>(i)) = train.features().row(held_rows[i]);
    Matrix p = model.predict_proba(held);
    for (std::size_t i = 0; i < held_rows.size(); ++i)
      posteriors.row(held_rows[i]) = p.row(static_cast<Eigen::Index>(i));
  }

  ProbClassifier full = fit_classifier(train, reg, weighting, control);
  return CvResult{std::move(posteriors), std::move(full), k};
}

}  // namespace ordq
