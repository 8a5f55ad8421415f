#pragma once

#include <vector>

#include "ordq/dataset.hpp"
#include "ordq/rng.hpp"

namespace ordq {

// Uniform draw from the n-class probability simplex (Kraemer construction:
// sorted uniforms, consecutive differences). Each marginal is Beta(1, n-1).
PrevalenceVector kraemer_sample(int n_classes, Rng& rng);

// Exact integer class counts for a target prevalence at a given sample size,
// by largest-remainder apportionment (ties go to the lower class index).
// Counts sum to size exactly.
std::vector<int> prevalence_counts(const PrevalenceVector& target, int size);

// Draws row indices realizing `target` at `size` from a labelled pool:
// per class, sampling without replacement when the pool suffices, with
// replacement when it is short. A class with a positive count but an empty
// pool raises "infeasible-sample". Order: class-major, draw order within.
std::vector<int> draw_at_prevalence(const std::vector<int>& labels, int n_classes,
                                    const PrevalenceVector& target, int size, Rng& rng);

// Dataset-level convenience wrapper around the index version.
Dataset draw_at_prevalence(const Dataset& pool, const PrevalenceVector& target, int size, Rng& rng);

}  // namespace ordq
