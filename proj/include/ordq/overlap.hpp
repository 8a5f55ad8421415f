#pragma once

#include <set>
#include <string>
#include <vector>

namespace ordq {

// |A ∩ B| / |A ∪ B|; two empty sets count as identical (1).
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Extrapolated rank-biased overlap between two rankings (no ties, no
// duplicates) with persistence in (0, 1). Identical rankings give 1, fully
// disjoint ones 0; two empty rankings count as identical, one empty as
// disjoint. Errors: "parameter-error" on duplicates or bad persistence.
double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b,
           double persistence);

// Gini coefficient of non-negative values: sum_ij |v_i - v_j| / (2 n^2 mean).
// All-equal values (including all-zero) give 0. Errors: "empty-input",
// "parameter-error" on negative values.
double gini(const std::vector<double>& values);

}  // namespace ordq
