#include "ordq/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordq/error.hpp"
#include "ordq/metrics.hpp"
#include "ordq/parallel.hpp"
#include "ordq/sampling.hpp"

namespace ordq {

namespace {

constexpr std::uint64_t kTagSplit = 0xA110;
constexpr std::uint64_t kTagTarget = 0xA111;
constexpr std::uint64_t kTagDraw = 0xA112;

std::string weighting_name(ClassWeighting w) {
  return w == ClassWeighting::Uniform ? "uniform" : "balanced";
}

}  // namespace

void HyperGrid::validate() const {
  if (regs.empty() || weightings.empty()) fail("parameter-error", "hyperparameter grid is empty");
  for (double r : regs)
    if (!(r >= 0.0)) fail("parameter-error", "negative regularization in grid");
}

GridPoint grid_search(const Dataset& train, const HyperGrid& grid, QuantifierKind kind,
                      const QuantifierOptions& base, const ModelSelectionConfig& cfg,
                      std::uint64_t seed, int threads, std::vector<std::string>* warnings) {
  grid.validate();
  if (grid.single_point()) return GridPoint{grid.regs[0], grid.weightings[0]};
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    fail("parameter-error", "train_fraction must lie in (0, 1)");
  if (cfg.samples < 1 || cfg.sample_size < 1)
    fail("parameter-error", "validation sample counts must be positive");
  if (train.rows() < 2) fail("degenerate-training", "cannot split fewer than 2 instances");

  const int n = train.n_classes();
  std::vector<int> perm(static_cast<std::size_t>(train.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  Rng(seed, {kTagSplit}).shuffle(perm);
  int n_sub = static_cast<int>(std::lround(cfg.train_fraction * train.rows()));
  n_sub = std::max(1, std::min(n_sub, train.rows() - 1));
  std::vector<int> sub_rows(perm.begin(), perm.begin() + n_sub);
  std::vector<int> val_rows(perm.begin() + n_sub, perm.end());
  Dataset sub = train.subset(sub_rows);
  Dataset val = train.subset(val_rows);

  // One shared set of shifted validation samples for every grid point.
  struct ValSample {
    std::vector<int> rows;  // into val
    PrevalenceVector realized;
  };
  std::vector<ValSample> samples;
  samples.reserve(static_cast<std::size_t>(cfg.samples));
  for (int s = 0; s < cfg.samples; ++s) {
    Rng target_rng(seed, {kTagTarget, static_cast<std::uint64_t>(s)});
    PrevalenceVector target = kraemer_sample(n, target_rng);
    Rng draw_rng(seed, {kTagDraw, static_cast<std::uint64_t>(s)});
    try {
      auto rows = draw_at_prevalence(val.labels(), n, target, cfg.sample_size, draw_rng);
      std::vector<int> drawn_labels;
      drawn_labels.reserve(rows.size());
      for (int r : rows) drawn_labels.push_back(val.labels()[static_cast<std::size_t>(r)]);
      samples.push_back(ValSample{std::move(rows), empirical_prevalence(drawn_labels, n)});
    } catch (const Error& e) {
      if (e.category() != "infeasible-sample") throw;
      // Validation pool lacks a class this target needs; skip the sample.
    }
  }
  if (samples.empty())
    fail("model-selection-failed", "no feasible validation samples; validation pool too degenerate");

  // Candidate order fixes the final tie-break scan.
  std::vector<GridPoint> points;
  for (ClassWeighting w : grid.weightings)
    for (double r : grid.regs) points.push_back(GridPoint{r, w});

  bool have_best = false;
  GridPoint best;
  double best_score = 0.0;
  for (const auto& point : points) {
    QuantifierOptions opt = base;
    opt.reg = point.reg;
    opt.weighting = point.weighting;
    std::unique_ptr<Quantifier> q;
    try {
      q = fit_quantifier(kind, sub, opt);
    } catch (const Error& e) {
      if (warnings)
        warnings->push_back("grid point reg=" + std::to_string(point.reg) + " weighting=" +
                            weighting_name(point.weighting) + " failed: " + e.what());
      continue;
    }
    std::vector<double> errs(samples.size(), 0.0);
    parallel_for(samples.size(), threads, [&](std::size_t s) {
      const auto& sample = samples[s];
      Matrix x(static_cast<Eigen::Index>(sample.rows.size()), val.cols());
      for (std::size_t i = 0; i < sample.rows.size(); ++i)
        x.row(static_cast<Eigen::Index>(i)) = val.features().row(sample.rows[i]);
      errs[s] = nmd(sample.realized, q->estimate(x));
    });
    double score = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
    if (!have_best || score < best_score ||
        (score == best_score && point.reg > best.reg)) {
      have_best = true;
      best = point;
      best_score = score;
    }
  }
  if (!have_best) fail("model-selection-failed", "every grid point failed to fit");
  return best;
}

}  // namespace ordq
