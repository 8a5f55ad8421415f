#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ordq/schema.hpp"

namespace ordq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A point on the probability simplex over ordinal classes 1..n. Immutable;
// both constructors live behind named factories so the validation policy is
// explicit at every call site.
class PrevalenceVector {
 public:
  PrevalenceVector() = default;  // empty placeholder; factories make real ones

  // Requires entries >= 0 and |sum - 1| <= 1e-8; error "invalid-prevalence".
  static PrevalenceVector checked(Vector p);
  // Clamps negatives to 0 and renormalizes; error if the result sums to 0.
  static PrevalenceVector normalized(Vector p);
  static PrevalenceVector uniform(int n);

  int size() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_(i); }
  const Vector& values() const { return v_; }

  // Cumulative sums (c_1, ..., c_n); c_n == sum == 1 up to rounding.
  Vector cumulative() const;

 private:
  explicit PrevalenceVector(Vector v) : v_(std::move(v)) {}
  Vector v_;
};

// Class counts / N over labels in 1..n_classes. Errors: "empty-input" on an
// empty label vector, "label-out-of-range" otherwise.
PrevalenceVector empirical_prevalence(const std::vector<int>& labels, int n_classes);

// Feature matrix + ordinal labels + row ids + the schema describing columns.
class Dataset {
 public:
  Dataset(Matrix features, std::vector<int> labels, std::vector<std::string> ids,
          FeatureSchema schema, int n_classes = 5);

  int rows() const { return static_cast<int>(features_.rows()); }
  int cols() const { return static_cast<int>(features_.cols()); }
  int n_classes() const { return n_classes_; }

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const FeatureSchema& schema() const { return schema_; }

  PrevalenceVector prevalence() const { return empirical_prevalence(labels_, n_classes_); }

  // Row subset in the given order; indices must be in range.
  Dataset subset(const std::vector<int>& row_idx) const;

 private:
  Matrix features_;
  std::vector<int> labels_;
  std::vector<std::string> ids_;
  FeatureSchema schema_;
  int n_classes_;
};

// Keeps only the columns of the selected subgroups (schema order), leaving
// rows, labels and ids untouched. Errors as in project_columns.
Dataset project(const Dataset& data, const BlockSelection& selection);

}  // namespace ordq
