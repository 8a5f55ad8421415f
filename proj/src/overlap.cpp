#include "ordq/overlap.hpp"

#include <algorithm>
#include <unordered_set>

#include "ordq/error.hpp"

namespace ordq {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double rbo(const std::vector<std::string>& a, const std::vector<std::string>& b,
           double persistence) {
  if (!(persistence > 0.0 && persistence < 1.0))
    fail("parameter-error", "persistence must lie in (0, 1)");
  for (const auto* r : {&a, &b}) {
    std::unordered_set<std::string> seen;
    for (const auto& x : *r)
      if (!seen.insert(x).second) fail("parameter-error", "ranking contains duplicate: " + x);
  }
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;

  const auto& s_rank = a.size() <= b.size() ? a : b;  // shorter
  const auto& l_rank = a.size() <= b.size() ? b : a;
  const std::size_t s = s_rank.size();
  const std::size_t l = l_rank.size();
  const double p = persistence;

  // Webber et al.'s extrapolated RBO for uneven rankings: overlap X_d between
  // the depth-d prefixes (the shorter ranking capped at s), assuming the
  // shorter list would continue to agree at its observed rate.
  std::unordered_set<std::string> s_seen, l_seen;
  std::size_t x = 0;      // running prefix overlap
  std::size_t x_s = 0;    // overlap at depth s
  std::size_t x_l = 0;    // overlap at depth l
  double sum = 0.0;
  double pd = 1.0;        // p^d
  for (std::size_t d = 1; d <= l; ++d) {
    pd *= p;
    if (d <= s) {
      const auto& e = s_rank[d - 1];
      if (l_seen.count(e)) ++x;
      s_seen.insert(e);
    }
    const auto& f = l_rank[d - 1];
    if (s_seen.count(f)) ++x;
    l_seen.insert(f);
    sum += static_cast<double>(x) / static_cast<double>(d) * pd;
    if (d > s)
      sum += static_cast<double>(x_s) * static_cast<double>(d - s) /
             (static_cast<double>(s) * static_cast<double>(d)) * pd;
    if (d == s) x_s = x;
  }
  x_l = x;
  double tail = (static_cast<double>(x_l - x_s) / static_cast<double>(l) +
                 static_cast<double>(x_s) / static_cast<double>(s)) *
                pd;  // pd == p^l here
  return (1.0 - p) / p * sum + tail;
}

double gini(const std::vector<double>& values) {
  if (values.empty()) fail("empty-input", "no values");
  double total = 0.0;
  for (double v : values) {
    if (v < 0.0) fail("parameter-error", "gini expects non-negative values");
    total += v;
  }
  if (total == 0.0) return 0.0;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    acc += (2.0 * static_cast<double>(i) - n + 1.0) * sorted[i];
  return acc / (n * total);
}

}  // namespace ordq
