#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ordq/model_selection.hpp"
#include "ordq/quantifiers.hpp"

namespace ordq {

// Artificial-prevalence-protocol stress test over incremental training sizes:
// per repetition, shuffle the data into a training pool and a held-out test
// pool; evaluate the quantifier trained on each cumulative batch against test
// samples drawn at Kraemer-uniform prevalences.
struct ProtocolConfig {
  int repetitions = 5;
  int train_pool_size = 8000;
  int batch_size = 500;
  int batch_count = 16;
  int app_samples = 1000;
  int app_sample_size = 500;
  std::uint64_t seed = 0;
  int threads = 0;  // <= 0: all hardware threads
  double max_skip_fraction = 0.1;
  HyperGrid grid{};
  QuantifierOptions quantifier{};  // reg/weighting come from the grid search
  ModelSelectionConfig model_selection{};

  void validate() const;
};

struct EvalRecord {
  int repetition = 0;  // 0-based
  int train_size = 0;
  int sample_idx = 0;  // 0-based, within the repetition
  PrevalenceVector true_prev;
  PrevalenceVector est_prev;
  double nmd_value = 0.0;
};

class EvalResult {
 public:
  EvalResult(std::vector<EvalRecord> records, std::vector<int> train_sizes, int skipped_samples);

  const std::vector<EvalRecord>& records() const { return records_; }
  const std::vector<int>& train_sizes() const { return train_sizes_; }
  int skipped_samples() const { return skipped_; }

  // Mean NMD over all records at one training size ("parameter-error" if the
  // size was not part of the run).
  double mean_nmd(int train_size) const;

  // Mean of the per-size means, the protocol's scalar loss.
  double mnmd() const;

 private:
  std::vector<EvalRecord> records_;
  std::vector<int> train_sizes_;
  std::map<int, std::pair<double, int>> by_size_;  // size -> (nmd sum, count)
  int skipped_ = 0;
};

EvalResult run_protocol(const Dataset& data, const BlockSelection& selection, QuantifierKind kind,
                        const ProtocolConfig& cfg);

}  // namespace ordq
