#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ordq/classifier.hpp"
#include "ordq/error.hpp"
#include "ordq/rng.hpp"
#include "ordq/schema.hpp"

using namespace ordq;

namespace {

FeatureSchema flat_schema(int width) {
  return FeatureSchema::from_groups({{"G", {{"X", width}}}});
}

// Two well-separated Gaussian clouds in 2d.
Dataset two_clouds(int per_class, double gap, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(2 * per_class, 2);
  std::vector<int> y(2 * per_class);
  std::vector<std::string> ids(2 * per_class);
  for (int i = 0; i < 2 * per_class; ++i) {
    int cls = i < per_class ? 1 : 2;
    double mu = cls == 1 ? -gap / 2 : gap / 2;
    x(i, 0) = mu + rng.gaussian();
    x(i, 1) = rng.gaussian();
    y[i] = cls;
    ids[i] = "r" + std::to_string(i);
  }
  return Dataset(x, y, ids, flat_schema(2), 2);
}

}  // namespace

TEST_CASE("standardizer centers and scales, zeroing constant columns") {
  Matrix x(4, 2);
  x << 1, 7, 3, 7, 5, 7, 7, 7;
  Standardizer s = Standardizer::fit(x);
  CHECK(s.mean(0) == 4.0);
  CHECK(s.mean(1) == 7.0);
  CHECK(s.stdev(1) == 0.0);  // constant column marker
  Matrix z = s.apply(x);
  CHECK(z.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));
  // Population standard deviation: sqrt(mean((x - mean)^2)) = sqrt(5).
  CHECK(s.stdev(0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  for (int i = 0; i < 4; ++i) CHECK(z(i, 1) == 0.0);
}

TEST_CASE("lr objective gradient matches central differences") {
  Rng rng(11);
  const int d = 3, n = 3, N = 25;
  Matrix x(N, d);
  std::vector<int> y0(N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.gaussian();
    y0[i] = static_cast<int>(rng.below(n));
  }
  Vector w = class_weights(std::vector<int>(y0.begin(), y0.end()), n, ClassWeighting::Uniform);
  for (int i = 0; i < N; ++i) w(i) = 0.5 + rng.uniform();  // arbitrary positive weights

  Matrix theta(d + 1, n);
  for (int r = 0; r < d + 1; ++r)
    for (int c = 0; c < n; ++c) theta(r, c) = rng.gaussian() * 0.5;

  Matrix grad;
  lr_objective(x, y0, w, n, 0.3, theta, &grad);

  const double h = 1e-6;
  for (int r = 0; r < d + 1; ++r) {
    for (int c = 0; c < n; ++c) {
      Matrix tp = theta, tm = theta;
      tp(r, c) += h;
      tm(r, c) -= h;
      double fp = lr_objective(x, y0, w, n, 0.3, tp);
      double fm = lr_objective(x, y0, w, n, 0.3, tm);
      double fd = (fp - fm) / (2 * h);
      CHECK(grad(r, c) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("balanced class weights follow N over class count") {
  // 6 instances: class 1 x4, class 2 x2 -> weights 6/(2*4) and 6/(2*2).
  Vector w = class_weights({1, 1, 1, 1, 2, 2}, 2, ClassWeighting::Balanced);
  CHECK(w(0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w(4) == doctest::Approx(1.5).epsilon(1e-12));
  Vector u = class_weights({1, 2}, 2, ClassWeighting::Uniform);
  CHECK(u(0) == 1.0);
  // Absent classes do not enter the count of present classes.
  Vector v = class_weights({1, 1, 3}, 3, ClassWeighting::Balanced);
  CHECK(v(0) == doctest::Approx(3.0 / (2 * 2)).epsilon(1e-12));
  CHECK(v(2) == doctest::Approx(3.0 / (2 * 1)).epsilon(1e-12));
}

TEST_CASE("softmax posterior hand value") {
  // Scores (ln 2, 0) -> posterior (2/3, 1/3).
  Matrix w(1, 2);
  w << 0.0, 0.0;
  Vector b(2);
  b << std::log(2.0), 0.0;
  Standardizer pre;
  pre.mean = Vector::Zero(1);
  pre.stdev = Vector::Ones(1);
  ProbClassifier clf(w, b, pre, 2);
  Matrix x = Matrix::Zero(1, 1);
  Matrix p = clf.predict_proba(x);
  CHECK(p(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(p(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(clf.predict(x) == std::vector<int>{1});
}

TEST_CASE("fit separates two gaussian clouds") {
  Dataset train = two_clouds(100, 6.0, 5);
  FitReport report;
  ProbClassifier clf = fit_classifier(train, 0.01, ClassWeighting::Uniform, {}, &report);
  std::vector<int> pred = clf.predict(train.features());
  int correct = 0;
  for (int i = 0; i < train.rows(); ++i) correct += pred[i] == train.labels()[i];
  CHECK(correct >= 195);  // 3-sigma separation
  CHECK(report.iterations > 0);
  for (std::size_t i = 1; i < report.loss_trace.size(); ++i)
    CHECK(report.loss_trace[i] <= report.loss_trace[i - 1] + 1e-12);
  // Posteriors live on the simplex after flooring.
  Matrix p = clf.predict_proba(train.features());
  for (int i = 0; i < p.rows(); ++i) {
    CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.row(i).minCoeff() >= 1e-9);
  }
}

TEST_CASE("fit rejects degenerate input") {
  FeatureSchema s = flat_schema(1);
  Matrix x = Matrix::Random(5, 1);
  Dataset one_class(x, {2, 2, 2, 2, 2}, {"a", "b", "c", "d", "e"}, s, 3);
  CHECK_THROWS_WITH_AS(fit_classifier(one_class, 1.0, ClassWeighting::Uniform),
                       doctest::Contains("degenerate-training"), Error);
  Dataset ok(x, {1, 2, 1, 2, 1}, {"a", "b", "c", "d", "e"}, s, 2);
  CHECK_THROWS_WITH_AS(fit_classifier(ok, -1.0, ClassWeighting::Uniform),
                       doctest::Contains("parameter-error"), Error);
}

TEST_CASE("stronger regularization shrinks weights") {
  Dataset train = two_clouds(50, 4.0, 9);
  ProbClassifier weak = fit_classifier(train, 0.001, ClassWeighting::Uniform);
  ProbClassifier strong = fit_classifier(train, 100.0, ClassWeighting::Uniform);
  CHECK(strong.weights().norm() < weak.weights().norm());
}

TEST_CASE("cv posteriors are out of fold") {
  // 3 instances per class, k=3: every instance is scored by a model fitted on
  // the other two thirds, so its own row cannot be memorized. With x == label
  // position and no noise the full model is near-perfect on train, while the
  // out-of-fold posterior of a held-out singleton stays clearly softer.
  FeatureSchema s = flat_schema(1);
  Matrix x(6, 1);
  x << -1.0, -1.1, -0.9, 1.0, 1.1, 0.9;
  Dataset train(x, {1, 1, 1, 2, 2, 2}, {"a", "b", "c", "d", "e", "f"}, s, 2);
  CvResult cv = cv_posteriors(train, 3, 0.1, ClassWeighting::Uniform, 0);
  CHECK(cv.folds_used == 3);
  CHECK(cv.posteriors.rows() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(cv.posteriors.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
    // Still classifies correctly out of fold in this easy geometry.
    int cls = train.labels()[i] - 1;
    CHECK(cv.posteriors(i, cls) > 0.5);
  }
}

TEST_CASE("cv fold count drops to the rarest class") {
  FeatureSchema s = flat_schema(1);
  Matrix x(4, 1);
  x << -1, -2, 1, 2;
  Dataset train(x, {1, 1, 2, 2}, {"a", "b", "c", "d"}, s, 2);
  CvResult cv = cv_posteriors(train, 10, 1.0, ClassWeighting::Uniform, 0);
  CHECK(cv.folds_used == 2);

  CHECK_THROWS_WITH_AS(cv_posteriors(train, 1, 1.0, ClassWeighting::Uniform, 0),
                       doctest::Contains("parameter-error"), Error);
}

TEST_CASE("cv copes with a single-instance class") {
  // Class 3 has one instance; slicing it out never starves the complements.
  FeatureSchema s = flat_schema(1);
  Matrix x(5, 1);
  x << -1, -2, 1, 2, 5;
  Dataset train(x, {1, 1, 2, 2, 3}, {"a", "b", "c", "d", "e"}, s, 3);
  CvResult cv = cv_posteriors(train, 5, 1.0, ClassWeighting::Uniform, 0);
  CHECK(cv.folds_used == 2);
  for (int i = 0; i < 5; ++i)
    CHECK(cv.posteriors.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cv falls back to the full fit when a fold complement degenerates") {
  // With 2 instances of class 1 and 1 of class 2, one fold's complement holds
  // a single class; that fold must be scored by the full-data model instead of
  // failing the whole cross-validation.
  FeatureSchema s = flat_schema(1);
  Matrix x(3, 1);
  x << -1, -2, 5;
  Dataset train(x, {1, 1, 2}, {"a", "b", "c"}, s, 2);
  CvResult cv = cv_posteriors(train, 2, 1.0, ClassWeighting::Uniform, 0);
  CHECK(cv.folds_used == 2);
  for (int i = 0; i < 3; ++i)
    CHECK(cv.posteriors.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cv posteriors are reproducible for a fixed seed") {
  Dataset train = two_clouds(20, 3.0, 17);
  CvResult a = cv_posteriors(train, 5, 0.5, ClassWeighting::Balanced, 33);
  CvResult b = cv_posteriors(train, 5, 0.5, ClassWeighting::Balanced, 33);
  CHECK((a.posteriors - b.posteriors).cwiseAbs().maxCoeff() == 0.0);
  CvResult c = cv_posteriors(train, 5, 0.5, ClassWeighting::Balanced, 34);
  CHECK((a.posteriors - c.posteriors).cwiseAbs().maxCoeff() > 0.0);
}
