#include "ordq/metrics.hpp"

#include <cmath>

#include "ordq/error.hpp"

namespace ordq {

double match_distance(const PrevalenceVector& p, const PrevalenceVector& q) {
  if (p.size() != q.size())
    fail("shape-error", "distributions have " + std::to_string(p.size()) + " and " +
                            std::to_string(q.size()) + " classes");
  if (p.size() < 2) fail("parameter-error", "need at least 2 classes");
  Vector cp = p.cumulative();
  Vector cq = q.cumulative();
  double d = 0.0;
  for (int i = 0; i < p.size() - 1; ++i) d += std::abs(cp(i) - cq(i));
  return d;
}

double nmd(const PrevalenceVector& p, const PrevalenceVector& q) {
  return match_distance(p, q) / static_cast<double>(p.size() - 1);
}

double rie(double mnmd_without, double mnmd_with) {
  if (!(std::isfinite(mnmd_without) && std::isfinite(mnmd_with)))
    fail("undefined-rie", "non-finite inputs");
  if (mnmd_with == 0.0) fail("undefined-rie", "reference error is zero");
  return (mnmd_without - mnmd_with) / mnmd_with;
}

}  // namespace ordq
