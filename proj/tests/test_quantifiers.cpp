#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ordq/error.hpp"
#include "ordq/quantifiers.hpp"
#include "ordq/rng.hpp"
#include "ordq/schema.hpp"

using namespace ordq;

namespace {

FeatureSchema flat_schema(int width) {
  return FeatureSchema::from_groups({{"G", {{"X", width}}}});
}

// A classifier that always emits the same posterior row regardless of input.
ProbClassifier constant_classifier(const Vector& posterior) {
  int n = static_cast<int>(posterior.size());
  Matrix w = Matrix::Zero(1, n);
  Vector b(n);
  for (int c = 0; c < n; ++c) b(c) = std::log(posterior(c));
  Standardizer pre;
  pre.mean = Vector::Zero(1);
  pre.stdev = Vector::Ones(1);
  return ProbClassifier(w, b, pre, n);
}

Dataset separable_train(int per_class, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(2 * per_class, 1);
  std::vector<int> y(2 * per_class);
  std::vector<std::string> ids(2 * per_class);
  for (int i = 0; i < 2 * per_class; ++i) {
    int cls = i < per_class ? 1 : 2;
    x(i, 0) = (cls == 1 ? -4.0 : 4.0) + rng.gaussian();
    y[i] = cls;
    ids[i] = "r" + std::to_string(i);
  }
  return Dataset(x, y, ids, flat_schema(1), 2);
}

}  // namespace

TEST_CASE("quantifier kind strings round-trip") {
  for (auto kind : {QuantifierKind::CC, QuantifierKind::PACC, QuantifierKind::EMQ,
                    QuantifierKind::MLPE})
    CHECK(quantifier_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_WITH_AS(quantifier_kind_from_string("acc"), doctest::Contains("parameter-error"),
                       Error);
}

TEST_CASE("simplex projection hand values") {
  Vector v(2);
  v << 2.0, 0.0;
  Vector p = project_to_simplex(v);
  CHECK(p(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p(1) == doctest::Approx(0.0).epsilon(1e-12));

  Vector w(2);
  w << 0.3, 0.3;
  Vector q = project_to_simplex(w);
  CHECK(q(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q(1) == doctest::Approx(0.5).epsilon(1e-12));

  Vector z(3);
  z << 1.0, -5.0, 1.0;
  Vector r = project_to_simplex(z);
  CHECK(r(1) == 0.0);
  CHECK(r(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simplex least squares solves the binary closed form") {
  // With correction [[a, b], [1-a, 1-b]] and target mean posterior q, the
  // interior solution is p1 = (q1 - b) / (a - b).
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    double a = 0.6 + 0.3 * rng.uniform();
    double b = 0.1 + 0.3 * rng.uniform();
    double p1 = 0.05 + 0.9 * rng.uniform();
    Matrix corr(2, 2);
    corr << a, b, 1 - a, 1 - b;
    Vector target = corr * (Vector(2) << p1, 1 - p1).finished();
    Vector sol = solve_simplex_least_squares(corr, target);
    CHECK(sol(0) == doctest::Approx(p1).epsilon(1e-8));
  }
}

TEST_CASE("simplex least squares clips exterior targets to a vertex") {
  Matrix corr(2, 2);
  corr << 0.8, 0.2, 0.2, 0.8;
  // Mean posterior more extreme than any achievable mixture -> boundary.
  Vector target(2);
  target << 0.95, 0.05;
  Vector sol = solve_simplex_least_squares(corr, target);
  CHECK(sol(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cc counts argmax labels") {
  Dataset train = separable_train(60, 21);
  auto q = fit_quantifier(QuantifierKind::CC, train, {});
  // Test pool: 30 of class 1, 70 of class 2, fully separated.
  Rng rng(22);
  Matrix x(100, 1);
  for (int i = 0; i < 100; ++i) x(i, 0) = (i < 30 ? -4.0 : 4.0) + rng.gaussian();
  PrevalenceVector est = q->estimate(x);
  CHECK(est[0] == doctest::Approx(0.3).epsilon(0.05));
  CHECK(est[0] + est[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cc with a blind classifier collapses to one class") {
  Vector post(2);
  post << 0.7, 0.3;
  CcQuantifier cc(constant_classifier(post), PrevalenceVector::uniform(2));
  Matrix x = Matrix::Zero(10, 1);
  PrevalenceVector est = cc.estimate(x);
  CHECK(est[0] == 1.0);
  CHECK(est[1] == 0.0);
}

TEST_CASE("pacc with identity correction equals the mean posterior") {
  Vector post(3);
  post << 0.5, 0.3, 0.2;
  PaccQuantifier pacc(constant_classifier(post), Matrix::Identity(3, 3),
                      PrevalenceVector::uniform(3));
  Matrix x = Matrix::Zero(7, 1);
  PrevalenceVector est = pacc.estimate(x);
  for (int c = 0; c < 3; ++c) CHECK(est[c] == doctest::Approx(post(c)).epsilon(1e-10));
}

TEST_CASE("emq with a huge tolerance stops at the mean posterior") {
  Vector post(2);
  post << 0.6, 0.4;
  EmqOptions opt;
  opt.eps = 100.0;  // first E-step always converges
  EmqQuantifier emq(constant_classifier(post), PrevalenceVector::uniform(2), opt);
  Matrix x = Matrix::Zero(5, 1);
  EmqDiagnostics diag;
  PrevalenceVector est = emq.estimate_with(x, &diag);
  CHECK(est[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(diag.converged);
  CHECK(diag.iterations == 1);
  CHECK(diag.step_sizes.size() == 1);
}

TEST_CASE("emq fixed point at the training prior") {
  // Posteriors identically equal to the training prior: the E-step mean is
  // the prior itself, so the loop converges immediately and stays put.
  Vector prior(3);
  prior << 0.5, 0.3, 0.2;
  EmqQuantifier emq(constant_classifier(prior), PrevalenceVector::checked(prior), {});
  Matrix x = Matrix::Zero(9, 1);
  PrevalenceVector est = emq.estimate(x);
  for (int c = 0; c < 3; ++c) CHECK(est[c] == doctest::Approx(prior(c)).epsilon(1e-9));
}

TEST_CASE("emq recovers a shifted prior on separable data") {
  Dataset train = separable_train(80, 31);
  // Light regularization, as grid search would pick here: heavy shrinkage
  // leaves the posteriors underconfident, and the mixture MLE that EMQ chases
  // then sits at a simplex corner instead of the true prevalence.
  QuantifierOptions opts;
  opts.reg = 0.001;
  auto q = fit_quantifier(QuantifierKind::EMQ, train, opts);
  Rng rng(32);
  // Test prevalence 0.85 / 0.15, far from the balanced training prior.
  Matrix x(200, 1);
  for (int i = 0; i < 200; ++i) x(i, 0) = (i < 170 ? -4.0 : 4.0) + rng.gaussian();
  PrevalenceVector est = q->estimate(x);
  CHECK(est[0] == doctest::Approx(0.85).epsilon(0.06));
}

TEST_CASE("mlpe answers the training prevalence and rejects empty input") {
  Dataset train = separable_train(10, 41);
  auto q = fit_quantifier(QuantifierKind::MLPE, train, {});
  Matrix x = Matrix::Zero(3, 1);
  PrevalenceVector est = q->estimate(x);
  CHECK(est[0] == 0.5);
  CHECK(est[1] == 0.5);
  Matrix empty(0, 1);
  CHECK_THROWS_WITH_AS(q->estimate(empty), doctest::Contains("empty-input"), Error);
}

TEST_CASE("all quantifiers output simplex points on random data") {
  Dataset train = separable_train(40, 51);
  Rng rng(52);
  Matrix x(64, 1);
  for (int i = 0; i < 64; ++i) x(i, 0) = 8.0 * rng.uniform() - 4.0;
  for (auto kind : {QuantifierKind::CC, QuantifierKind::PACC, QuantifierKind::EMQ,
                    QuantifierKind::MLPE}) {
    auto q = fit_quantifier(kind, train, {});
    PrevalenceVector est = q->estimate(x);
    double sum = 0.0;
    for (int c = 0; c < est.size(); ++c) {
      CHECK(est[c] >= 0.0);
      sum += est[c];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q->kind() == kind);
  }
}

TEST_CASE("pacc handles an absent training class via the identity column") {
  // Class 2 of 3 never appears; its correction column defaults to the unit
  // vector so the system stays invertible.
  FeatureSchema s = flat_schema(1);
  Matrix x(40, 1);
  std::vector<int> y(40);
  std::vector<std::string> ids(40);
  Rng rng(61);
  for (int i = 0; i < 40; ++i) {
    int cls = i < 20 ? 1 : 3;
    x(i, 0) = (cls == 1 ? -3.0 : 3.0) + rng.gaussian();
    y[i] = cls;
    ids[i] = "r" + std::to_string(i);
  }
  Dataset train(x, y, ids, s, 3);
  auto q = fit_quantifier(QuantifierKind::PACC, train, {});
  PrevalenceVector est = q->estimate(x);
  CHECK(est.size() == 3);
  double sum = est[0] + est[1] + est[2];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}
