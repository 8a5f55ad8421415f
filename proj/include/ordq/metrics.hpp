#pragma once

#include "ordq/dataset.hpp"

namespace ordq {

// Earth-mover distance between two distributions over the ordinal classes
// with unit cost between adjacent classes: sum_{i=1}^{n-1} |cumP_i - cumQ_i|.
// Error "shape-error" if sizes differ, "parameter-error" if n < 2.
double match_distance(const PrevalenceVector& p, const PrevalenceVector& q);

// match_distance / (n - 1), normalized into [0, 1].
double nmd(const PrevalenceVector& p, const PrevalenceVector& q);

// Relative improvement of `with` over `without`: (without - with) / with.
// Error "undefined-rie" when with == 0.
double rie(double mnmd_without, double mnmd_with);

}  // namespace ordq
