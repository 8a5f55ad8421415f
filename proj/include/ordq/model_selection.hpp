#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordq/quantifiers.hpp"

namespace ordq {

struct HyperGrid {
  std::vector<double> regs{0.001, 0.01, 0.1, 1.0, 10.0, 100.0};
  std::vector<ClassWeighting> weightings{ClassWeighting::Uniform, ClassWeighting::Balanced};

  bool single_point() const { return regs.size() == 1 && weightings.size() == 1; }
  void validate() const;
};

struct GridPoint {
  double reg = 1.0;
  ClassWeighting weighting = ClassWeighting::Uniform;
};

struct ModelSelectionConfig {
  double train_fraction = 0.6;  // sub-train share of the training set
  int samples = 100;            // validation samples
  int sample_size = 250;
};

// Quantification-oriented hyperparameter search: split the training set,
// evaluate every grid point by mean NMD over shifted validation samples (one
// shared set of samples for all points), return the argmin. Ties go to the
// stronger regularization. Grid points whose fit fails are skipped with a
// warning; "model-selection-failed" if none survive.
GridPoint grid_search(const Dataset& train, const HyperGrid& grid, QuantifierKind kind,
                      const QuantifierOptions& base, const ModelSelectionConfig& cfg,
                      std::uint64_t seed, int threads,
                      std::vector<std::string>* warnings = nullptr);

}  // namespace ordq
