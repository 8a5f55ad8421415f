#include "ordq/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ordq/error.hpp"

namespace ordq {

std::string to_string(QuantifierKind kind) {
  switch (kind) {
    case QuantifierKind::CC: return "cc";
    case QuantifierKind::PACC: return "pacc";
    case QuantifierKind::EMQ: return "emq";
    case QuantifierKind::MLPE: return "mlpe";
  }
  fail("parameter-error", "unknown quantifier kind");
}

QuantifierKind quantifier_kind_from_string(const std::string& s) {
  if (s == "cc") return QuantifierKind::CC;
  if (s == "pacc") return QuantifierKind::PACC;
  if (s == "emq") return QuantifierKind::EMQ;
  if (s == "mlpe") return QuantifierKind::MLPE;
  fail("parameter-error", "unknown quantifier: " + s + " (expected cc|pacc|emq|mlpe)");
}

namespace {

void require_rows(const Matrix& x) {
  if (x.rows() == 0) fail("empty-input", "cannot quantify an empty test set");
}

}  // namespace

CcQuantifier::CcQuantifier(ProbClassifier clf, PrevalenceVector prior)
    : Quantifier(std::move(prior)), clf_(std::move(clf)) {}

PrevalenceVector CcQuantifier::estimate(const Matrix& x) const {
  require_rows(x);
  return empirical_prevalence(clf_.predict(x), clf_.n_classes());
}

PaccQuantifier::PaccQuantifier(ProbClassifier clf, Matrix correction, PrevalenceVector prior)
    : Quantifier(std::move(prior)), clf_(std::move(clf)), correction_(std::move(correction)) {
  if (correction_.rows() != clf_.n_classes() || correction_.cols() != clf_.n_classes())
    fail("shape-error", "correction matrix must be n_classes x n_classes");
}

PrevalenceVector PaccQuantifier::estimate(const Matrix& x) const {
  require_rows(x);
  Matrix p = clf_.predict_proba(x);
  Vector mean_posterior = p.colwise().mean().transpose();
  Vector est = solve_simplex_least_squares(correction_, mean_posterior);
  return PrevalenceVector::normalized(std::move(est));
}

EmqQuantifier::EmqQuantifier(ProbClassifier clf, PrevalenceVector prior, EmqOptions options)
    : Quantifier(std::move(prior)), clf_(std::move(clf)), options_(options) {
  if (options_.max_iter < 1) fail("parameter-error", "EMQ needs at least one iteration");
  if (!(options_.eps >= 0.0)) fail("parameter-error", "EMQ tolerance must be >= 0 (inf allowed)");
}

PrevalenceVector EmqQuantifier::estimate(const Matrix& x) const { return estimate_with(x, nullptr); }

PrevalenceVector EmqQuantifier::estimate_with(const Matrix& x, EmqDiagnostics* diag) const {
  require_rows(x);
  const int n = clf_.n_classes();
  const Matrix posteriors = clf_.predict_proba(x);  // floored away from 0
  Vector prior = train_prior_.values().array().max(1e-9);
  prior /= prior.sum();

  Matrix current = posteriors;
  Vector p = prior;
  EmqDiagnostics local;
  for (int it = 0; it < options_.max_iter; ++it) {
    // E step: the prior estimate is the mean of the current posteriors.
    Vector p_next = current.colwise().mean().transpose();
    double step = (p_next - p).cwiseAbs().sum();
    local.step_sizes.push_back(step);
    local.iterations = it + 1;
    p = p_next;
    if (step < options_.eps) {
      local.converged = true;
      break;
    }
    // M step: reweight the original posteriors by the prior ratio.
    current = posteriors;
    for (int c = 0; c < n; ++c) current.col(c) *= p(c) / prior(c);
    Vector rs = current.rowwise().sum();
    for (Eigen::Index i = 0; i < rs.size(); ++i)
      if (rs(i) <= 0.0) {
        current.row(i) = posteriors.row(i);
        rs(i) = 1.0;
      }
    current.array().colwise() /= rs.array();
  }
  if (diag) *diag = std::move(local);
  return PrevalenceVector::normalized(std::move(p));
}

PrevalenceVector MlpeQuantifier::estimate(const Matrix& x) const {
  require_rows(x);
  return train_prior_;
}

Vector project_to_simplex(const Vector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) fail("shape-error", "cannot project an empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += u[static_cast<std::size_t>(i)];
    double t = (running - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  return out;
}

Vector solve_simplex_least_squares(const Matrix& a, const Vector& b) {
  if (a.rows() != b.size()) fail("shape-error", "system dimensions do not match");
  const Eigen::Index n = a.cols();
  Matrix ata = a.transpose() * a;
  Vector atb = a.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ata);
  double lipschitz = eig.eigenvalues().maxCoeff();
  if (!(lipschitz > 0.0)) return Vector::Constant(n, 1.0 / static_cast<double>(n));
  const double step = 1.0 / lipschitz;

  Vector p = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < 10000; ++it) {
    Vector g = ata * p - atb;
    Vector p_next = project_to_simplex(p - step * g);
    double moved = (p_next - p).cwiseAbs().sum();
    p = std::move(p_next);
    if (moved < 1e-10) break;
  }
  return p;
}

namespace {

PrevalenceVector floored_prior(const Dataset& train) { return train.prevalence(); }

}  // namespace

std::unique_ptr<Quantifier> fit_quantifier(QuantifierKind kind, const Dataset& train,
                                           const QuantifierOptions& options) {
  if (train.rows() == 0) fail("empty-input", "empty training set");
  PrevalenceVector prior = floored_prior(train);
  switch (kind) {
    case QuantifierKind::MLPE:
      return std::make_unique<MlpeQuantifier>(std::move(prior));
    case QuantifierKind::CC: {
      ProbClassifier clf = fit_classifier(train, options.reg, options.weighting, options.train);
      return std::make_unique<CcQuantifier>(std::move(clf), std::move(prior));
    }
    case QuantifierKind::EMQ: {
      ProbClassifier clf = fit_classifier(train, options.reg, options.weighting, options.train);
      return std::make_unique<EmqQuantifier>(std::move(clf), std::move(prior), options.emq);
    }
    case QuantifierKind::PACC: {
      CvResult cv = cv_posteriors(train, options.cv_folds, options.reg, options.weighting,
                                  options.seed, options.train);
      const int n = train.n_classes();
      Matrix corr(n, n);
      std::vector<int> counts(static_cast<std::size_t>(n), 0);
      for (int y : train.labels()) counts[static_cast<std::size_t>(y - 1)] += 1;
      for (int c = 0; c < n; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
          // No instances to estimate this column from; identity keeps the
          // system solvable without inventing information.
          corr.col(c) = Vector::Unit(n, c);
          continue;
        }
        Vector acc = Vector::Zero(n);
        for (int i = 0; i < train.rows(); ++i)
          if (train.labels()[static_cast<std::size_t>(i)] == c + 1)
            acc += cv.posteriors.row(i).transpose();
        corr.col(c) = acc / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
      return std::make_unique<PaccQuantifier>(std::move(cv.full_model), std::move(corr),
                                              std::move(prior));
    }
  }
  fail("parameter-error", "unknown quantifier kind");
}

}  // namespace ordq
