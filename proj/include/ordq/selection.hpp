#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ordq/protocol.hpp"

namespace ordq {

// Loss oracle mapping a candidate selection to its protocol MNMD. Throws on
// evaluation failure; the engine treats candidate failures as rejections.
using LossFn = std::function<double(const BlockSelection&)>;

enum class TraceAction { Add, Remove, Reject };

std::string to_string(TraceAction a);

struct TraceEntry {
  int round = 0;
  std::string block;
  TraceAction action = TraceAction::Reject;
  double loss_before = 0.0;  // best loss going into the toggle
  double loss_after = 0.0;   // candidate loss (inf when evaluation failed)
};

struct SelectionTrace {
  std::vector<TraceEntry> entries;
  BlockSelection start;
  double initial_loss = 0.0;
  BlockSelection final;
  double final_loss = 0.0;
  int rounds = 0;               // sweeps performed, including the improvement-free last one
  int initial_evaluations = 0;  // candidate supersets tried before round 0
  int toggle_evaluations = 0;   // add/remove/reject entries
};

struct GreedyOptions {
  int add_rounds = 3;    // additions allowed while round < add_rounds
  double epsilon = 0.0;  // accept when loss < best - epsilon
  std::optional<BlockSelection> start;  // overrides the group exploration
  int max_rounds = 1000;                // safety stop, never binding in practice
};

// Per-block isolated losses, worst first. Blocks whose evaluation throws rank
// first with infinite loss; ties keep schema order.
std::vector<std::string> order_blocks(const FeatureSchema& schema, const LossFn& loss,
                                      std::vector<std::pair<std::string, double>>* scores = nullptr);

// Best of {all blocks} ∪ {each group's blocks} by loss; count of evaluations
// out through evals_out. Errors: "selection-failed" when every candidate fails.
BlockSelection initial_configuration(const FeatureSchema& schema, const LossFn& loss,
                                     int* evals_out = nullptr,
                                     std::vector<std::pair<std::string, double>>* group_scores = nullptr);

// Greedy add/remove search: start from the initial configuration, sweep blocks
// in worst-first order, toggle membership (additions only in the first
// add_rounds rounds), keep a toggle iff it strictly lowers the loss, repeat
// while a sweep improved anything.
std::pair<BlockSelection, SelectionTrace> greedy_select(const FeatureSchema& schema,
                                                        const LossFn& loss,
                                                        const GreedyOptions& options = {});

struct BlockImportance {
  std::string block;
  double rie_value = 0.0;  // NaN when undefined
  bool defined = false;    // false: ablation would empty the selection
};

struct ImportanceReport {
  std::vector<BlockImportance> blocks;  // selection order (sorted names)
  double gini_value = 0.0;              // over non-negative-clamped defined RIEs
  double mnmd_with = 0.0;               // loss of the full final selection
};

ImportanceReport importance_report(const BlockSelection& final_selection, const LossFn& loss);

// Ranking of a report's blocks by descending RIE (undefined-dominant entries
// first, then ties by name). Input order of equals is the sorted block order.
std::vector<std::string> importance_ranking(const ImportanceReport& report);

struct TaskSelection {
  std::string task;
  BlockSelection selection;
  std::vector<std::string> ranking;  // blocks by descending importance
};

struct OverlapEntry {
  std::string task_a;
  std::string task_b;
  double jaccard_value = 0.0;
  double rbo_value = 0.0;
};

std::vector<OverlapEntry> cross_task_overlap(const std::vector<TaskSelection>& tasks,
                                             double persistence = 0.9);

// Production loss oracle: protocol MNMD for a candidate selection, memoized by
// selection (the config, including its seed, is fixed per instance).
class ProtocolLoss {
 public:
  ProtocolLoss(const Dataset& data, QuantifierKind kind, ProtocolConfig cfg);
  double operator()(const BlockSelection& selection) const;
  int evaluations() const { return evaluations_; }  // cache misses only

 private:
  const Dataset& data_;
  QuantifierKind kind_;
  ProtocolConfig cfg_;
  mutable std::unordered_map<std::string, double> cache_;
  mutable int evaluations_ = 0;
};

// Dataset-level conveniences wiring the protocol loss into the engine.
std::vector<std::string> order_blocks(const Dataset& data, QuantifierKind kind,
                                      const ProtocolConfig& cfg);
BlockSelection initial_configuration(const Dataset& data, QuantifierKind kind,
                                     const ProtocolConfig& cfg);
std::pair<BlockSelection, SelectionTrace> greedy_select(const Dataset& data, QuantifierKind kind,
                                                        const ProtocolConfig& cfg,
                                                        const GreedyOptions& options = {});
ImportanceReport importance_report(const Dataset& data, const BlockSelection& final_selection,
                                   QuantifierKind kind, const ProtocolConfig& cfg);

}  // namespace ordq
