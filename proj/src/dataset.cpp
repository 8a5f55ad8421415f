#include "ordq/dataset.hpp"

#include <cmath>

#include "ordq/error.hpp"

namespace ordq {

PrevalenceVector PrevalenceVector::checked(Vector p) {
  if (p.size() == 0) fail("invalid-prevalence", "empty vector");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) < 0.0)
      fail("invalid-prevalence", "component " + std::to_string(i + 1) + " is negative or non-finite");
    sum += p(i);
  }
  if (std::abs(sum - 1.0) > 1e-8)
    fail("invalid-prevalence", "components sum to " + std::to_string(sum) + ", expected 1");
  return PrevalenceVector(std::move(p));
}

PrevalenceVector PrevalenceVector::normalized(Vector p) {
  if (p.size() == 0) fail("invalid-prevalence", "empty vector");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i))) fail("invalid-prevalence", "non-finite component");
    if (p(i) < 0.0) p(i) = 0.0;
    sum += p(i);
  }
  if (sum <= 0.0) fail("invalid-prevalence", "all components are zero");
  p /= sum;
  return PrevalenceVector(std::move(p));
}

PrevalenceVector PrevalenceVector::uniform(int n) {
  if (n <= 0) fail("invalid-prevalence", "class count must be positive");
  return PrevalenceVector(Vector::Constant(n, 1.0 / n));
}

Vector PrevalenceVector::cumulative() const {
  Vector c(v_.size());
  double run = 0.0;
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    run += v_(i);
    c(i) = run;
  }
  return c;
}

PrevalenceVector empirical_prevalence(const std::vector<int>& labels, int n_classes) {
  if (n_classes <= 0) fail("parameter-error", "n_classes must be positive");
  if (labels.empty()) fail("empty-input", "no labels to compute a prevalence from");
  Vector counts = Vector::Zero(n_classes);
  for (int y : labels) {
    if (y < 1 || y > n_classes)
      fail("label-out-of-range",
           "label " + std::to_string(y) + " outside 1.." + std::to_string(n_classes));
    counts(y - 1) += 1.0;
  }
  counts /= static_cast<double>(labels.size());
  return PrevalenceVector::checked(std::move(counts));
}

Dataset::Dataset(Matrix features, std::vector<int> labels, std::vector<std::string> ids,
                 FeatureSchema schema, int n_classes)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      schema_(std::move(schema)),
      n_classes_(n_classes) {
  if (n_classes_ <= 0) fail("parameter-error", "n_classes must be positive");
  const auto n = static_cast<std::size_t>(features_.rows());
  if (labels_.size() != n || ids_.size() != n)
    fail("shape-error", "features have " + std::to_string(n) + " rows but got " +
                            std::to_string(labels_.size()) + " labels and " +
                            std::to_string(ids_.size()) + " ids");
  if (schema_.total_columns() != features_.cols())
    fail("schema-mismatch", "schema covers " + std::to_string(schema_.total_columns()) +
                                " columns but the matrix has " + std::to_string(features_.cols()));
  for (int y : labels_)
    if (y < 1 || y > n_classes_)
      fail("label-out-of-range",
           "label " + std::to_string(y) + " outside 1.." + std::to_string(n_classes_));
  if (!features_.allFinite()) fail("ingestion-error", "feature matrix contains NaN or infinity");
  // Row ids may repeat: samples drawn with replacement are still valid
  // datasets. Uniqueness is enforced where tables are ingested or joined.
}

Dataset Dataset::subset(const std::vector<int>& row_idx) const {
  Matrix f(static_cast<Eigen::Index>(row_idx.size()), features_.cols());
  std::vector<int> y;
  std::vector<std::string> id;
  y.reserve(row_idx.size());
  id.reserve(row_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    int r = row_idx[i];
    if (r < 0 || r >= rows()) fail("shape-error", "row index out of range: " + std::to_string(r));
    f.row(static_cast<Eigen::Index>(i)) = features_.row(r);
    y.push_back(labels_[static_cast<std::size_t>(r)]);
    id.push_back(ids_[static_cast<std::size_t>(r)]);
  }
  return Dataset(std::move(f), std::move(y), std::move(id), schema_, n_classes_);
}

Dataset project(const Dataset& data, const BlockSelection& selection) {
  auto [sub_schema, cols] = project_columns(data.schema(), selection);
  Matrix f(data.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    f.col(static_cast<Eigen::Index>(j)) = data.features().col(cols[j]);
  return Dataset(std::move(f), data.labels(), data.ids(), std::move(sub_schema), data.n_classes());
}

}  // namespace ordq
