#include "ordq/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordq/error.hpp"

namespace ordq {

PrevalenceVector kraemer_sample(int n_classes, Rng& rng) {
  if (n_classes <= 0) fail("parameter-error", "class count must be positive");
  if (n_classes == 1) return PrevalenceVector::checked(Vector::Ones(1));
  std::vector<double> cuts(static_cast<std::size_t>(n_classes - 1));
  for (auto& c : cuts) c = rng.uniform();
  std::sort(cuts.begin(), cuts.end());
  Vector p(n_classes);
  double prev = 0.0;
  for (int i = 0; i < n_classes - 1; ++i) {
    p(i) = cuts[static_cast<std::size_t>(i)] - prev;
    prev = cuts[static_cast<std::size_t>(i)];
  }
  p(n_classes - 1) = 1.0 - prev;
  return PrevalenceVector::normalized(std::move(p));
}

std::vector<int> prevalence_counts(const PrevalenceVector& target, int size) {
  if (size <= 0) fail("parameter-error", "sample size must be positive");
  const int n = target.size();
  std::vector<int> counts(static_cast<std::size_t>(n));
  std::vector<double> remainder(static_cast<std::size_t>(n));
  int assigned = 0;
  for (int i = 0; i < n; ++i) {
    double exact = target[i] * size;
    counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(exact));
    remainder[static_cast<std::size_t>(i)] = exact - std::floor(exact);
    assigned += counts[static_cast<std::size_t>(i)];
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return remainder[static_cast<std::size_t>(a)] > remainder[static_cast<std::size_t>(b)];
  });
  for (int k = 0; k < size - assigned; ++k)
    counts[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] += 1;
  return counts;
}

std::vector<int> draw_at_prevalence(const std::vector<int>& labels, int n_classes,
                                    const PrevalenceVector& target, int size, Rng& rng) {
  if (target.size() != n_classes)
    fail("shape-error", "target has " + std::to_string(target.size()) + " classes, pool has " +
                            std::to_string(n_classes));
  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int y = labels[i];
    if (y < 1 || y > n_classes)
      fail("label-out-of-range", "label " + std::to_string(y) + " outside 1.." + std::to_string(n_classes));
    by_class[static_cast<std::size_t>(y - 1)].push_back(static_cast<int>(i));
  }
  std::vector<int> counts = prevalence_counts(target, size);
  std::vector<int> rows;
  rows.reserve(static_cast<std::size_t>(size));
  for (int c = 0; c < n_classes; ++c) {
    int want = counts[static_cast<std::size_t>(c)];
    if (want == 0) continue;
    auto& avail = by_class[static_cast<std::size_t>(c)];
    if (avail.empty())
      fail("infeasible-sample",
           "class " + std::to_string(c + 1) + " needs " + std::to_string(want) +
               " instances but the pool has none");
    if (want <= static_cast<int>(avail.size())) {
      // Partial Fisher-Yates: first `want` slots become a uniform draw
      // without replacement.
      std::vector<int> tmp = avail;
      for (int i = 0; i < want; ++i) {
        std::size_t j = static_cast<std::size_t>(i) +
                        static_cast<std::size_t>(rng.below(tmp.size() - static_cast<std::size_t>(i)));
        std::swap(tmp[static_cast<std::size_t>(i)], tmp[j]);
        rows.push_back(tmp[static_cast<std::size_t>(i)]);
      }
    } else {
      for (int i = 0; i < want; ++i)
        rows.push_back(avail[static_cast<std::size_t>(rng.below(avail.size()))]);
    }
  }
  return rows;
}

Dataset draw_at_prevalence(const Dataset& pool, const PrevalenceVector& target, int size, Rng& rng) {
  auto rows = draw_at_prevalence(pool.labels(), pool.n_classes(), target, size, rng);
  return pool.subset(rows);
}

}  // namespace ordq
