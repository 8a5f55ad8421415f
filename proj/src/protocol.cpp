#include "ordq/protocol.hpp"

#include <numeric>

#include "ordq/error.hpp"
#include "ordq/metrics.hpp"
#include "ordq/parallel.hpp"
#include "ordq/sampling.hpp"

namespace ordq {

namespace {

constexpr std::uint64_t kTagShuffle = 0xB201;
constexpr std::uint64_t kTagTarget = 0xB202;
constexpr std::uint64_t kTagDraw = 0xB203;
constexpr std::uint64_t kTagGrid = 0xB204;
constexpr std::uint64_t kTagFit = 0xB205;

std::uint64_t derive_u64(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return Rng(seed, path).next_u64();
}

}  // namespace

void ProtocolConfig::validate() const {
  if (repetitions < 1) fail("parameter-error", "repetitions must be >= 1");
  if (batch_size < 1 || batch_count < 1) fail("parameter-error", "batch shape must be positive");
  if (train_pool_size != batch_size * batch_count)
    fail("parameter-error", "train_pool_size (" + std::to_string(train_pool_size) +
                                ") must equal batch_size * batch_count (" +
                                std::to_string(batch_size * batch_count) + ")");
  if (app_samples < 1 || app_sample_size < 1)
    fail("parameter-error", "APP sample counts must be positive");
  if (!(max_skip_fraction >= 0.0 && max_skip_fraction <= 1.0))
    fail("parameter-error", "max_skip_fraction must lie in [0, 1]");
  grid.validate();
  if (quantifier.cv_folds < 2) fail("parameter-error", "cv_folds must be >= 2");
}

EvalResult::EvalResult(std::vector<EvalRecord> records, std::vector<int> train_sizes,
                       int skipped_samples)
    : records_(std::move(records)), train_sizes_(std::move(train_sizes)), skipped_(skipped_samples) {
  for (const auto& r : records_) {
    auto& agg = by_size_[r.train_size];
    agg.first += r.nmd_value;
    agg.second += 1;
  }
}

double EvalResult::mean_nmd(int train_size) const {
  auto it = by_size_.find(train_size);
  if (it == by_size_.end() || it->second.second == 0)
    fail("parameter-error", "no records at training size " + std::to_string(train_size));
  return it->second.first / static_cast<double>(it->second.second);
}

double EvalResult::mnmd() const {
  if (train_sizes_.empty()) fail("empty-input", "result has no training sizes");
  double acc = 0.0;
  for (int s : train_sizes_) acc += mean_nmd(s);
  return acc / static_cast<double>(train_sizes_.size());
}

EvalResult run_protocol(const Dataset& data, const BlockSelection& selection, QuantifierKind kind,
                        const ProtocolConfig& cfg) {
  cfg.validate();
  if (data.rows() <= cfg.train_pool_size)
    fail("parameter-error", "dataset has " + std::to_string(data.rows()) +
                                " rows; need more than the training pool size " +
                                std::to_string(cfg.train_pool_size));
  Dataset proj = project(data, selection);
  const int n = proj.n_classes();

  std::vector<int> train_sizes;
  for (int t = 1; t <= cfg.batch_count; ++t) train_sizes.push_back(t * cfg.batch_size);

  std::vector<EvalRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.repetitions) *
                  static_cast<std::size_t>(cfg.batch_count) *
                  static_cast<std::size_t>(cfg.app_samples));
  int total_skipped = 0;

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const auto urep = static_cast<std::uint64_t>(rep);
    std::vector<int> perm(static_cast<std::size_t>(proj.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    Rng(cfg.seed, {urep, kTagShuffle}).shuffle(perm);
    std::vector<int> pool_rows(perm.begin(), perm.begin() + cfg.train_pool_size);
    std::vector<int> test_rows(perm.begin() + cfg.train_pool_size, perm.end());
    std::vector<int> test_labels;
    test_labels.reserve(test_rows.size());
    for (int r : test_rows) test_labels.push_back(proj.labels()[static_cast<std::size_t>(r)]);

    // Test samples are fixed per repetition and reused at every training size.
    struct AppSample {
      bool feasible = false;
      std::vector<int> rows;  // absolute row indices into proj
      PrevalenceVector realized;
    };
    std::vector<AppSample> samples(static_cast<std::size_t>(cfg.app_samples));
    parallel_for(samples.size(), cfg.threads, [&](std::size_t s) {
      Rng target_rng(cfg.seed, {urep, kTagTarget, static_cast<std::uint64_t>(s)});
      PrevalenceVector target = kraemer_sample(n, target_rng);
      Rng draw_rng(cfg.seed, {urep, kTagDraw, static_cast<std::uint64_t>(s)});
      try {
        auto rel = draw_at_prevalence(test_labels, n, target, cfg.app_sample_size, draw_rng);
        auto& out = samples[s];
        out.rows.reserve(rel.size());
        std::vector<int> drawn_labels;
        drawn_labels.reserve(rel.size());
        for (int r : rel) {
          out.rows.push_back(test_rows[static_cast<std::size_t>(r)]);
          drawn_labels.push_back(test_labels[static_cast<std::size_t>(r)]);
        }
        out.realized = empirical_prevalence(drawn_labels, n);
        out.feasible = true;
      } catch (const Error& e) {
        if (e.category() != "infeasible-sample") throw;
      }
    });
    int skipped = 0;
    for (const auto& s : samples) skipped += s.feasible ? 0 : 1;
    total_skipped += skipped;
    if (skipped > cfg.max_skip_fraction * cfg.app_samples)
      fail("protocol-infeasible",
           std::to_string(skipped) + " of " + std::to_string(cfg.app_samples) +
               " test samples infeasible in repetition " + std::to_string(rep));

    for (int t = 1; t <= cfg.batch_count; ++t) {
      std::vector<int> train_rows(pool_rows.begin(),
                                  pool_rows.begin() + static_cast<std::size_t>(t) *
                                                          static_cast<std::size_t>(cfg.batch_size));
      Dataset train = proj.subset(train_rows);
      const auto ut = static_cast<std::uint64_t>(t);
      GridPoint point =
          cfg.grid.single_point()
              ? GridPoint{cfg.grid.regs[0], cfg.grid.weightings[0]}
              : grid_search(train, cfg.grid, kind, cfg.quantifier, cfg.model_selection,
                            derive_u64(cfg.seed, {urep, kTagGrid, ut}), cfg.threads);
      QuantifierOptions opt = cfg.quantifier;
      opt.reg = point.reg;
      opt.weighting = point.weighting;
      opt.seed = derive_u64(cfg.seed, {urep, kTagFit, ut});
      std::unique_ptr<Quantifier> q = fit_quantifier(kind, train, opt);

      struct Slot {
        bool used = false;
        PrevalenceVector est;
        double err = 0.0;
      };
      std::vector<Slot> slots(samples.size());
      parallel_for(samples.size(), cfg.threads, [&](std::size_t s) {
        const auto& sample = samples[s];
        if (!sample.feasible) return;
        Matrix x(static_cast<Eigen::Index>(sample.rows.size()), proj.cols());
        for (std::size_t i = 0; i < sample.rows.size(); ++i)
          x.row(static_cast<Eigen::Index>(i)) = proj.features().row(sample.rows[i]);
        auto& slot = slots[s];
        slot.est = q->estimate(x);
        slot.err = nmd(sample.realized, slot.est);
        slot.used = true;
      });
      for (std::size_t s = 0; s < slots.size(); ++s) {
        if (!slots[s].used) continue;
        records.push_back(EvalRecord{rep, t * cfg.batch_size, static_cast<int>(s),
                                     samples[s].realized, slots[s].est, slots[s].err});
      }
    }
  }
  return EvalResult(std::move(records), std::move(train_sizes), total_skipped);
}

}  // namespace ordq
