#include "ordq/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ordq/error.hpp"
#include "ordq/metrics.hpp"
#include "ordq/overlap.hpp"

namespace ordq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluate, mapping any failure to +inf so the caller can treat the candidate
// as strictly worse than anything real.
double eval_or_inf(const LossFn& loss, const BlockSelection& sel) {
  try {
    return loss(sel);
  } catch (...) {
    return kInf;
  }
}

}  // namespace

std::string to_string(TraceAction a) {
  switch (a) {
    case TraceAction::Add: return "add";
    case TraceAction::Remove: return "remove";
    case TraceAction::Reject: return "reject";
  }
  fail("parameter-error", "unknown trace action");
}

std::vector<std::string> order_blocks(const FeatureSchema& schema, const LossFn& loss,
                                      std::vector<std::pair<std::string, double>>* scores) {
  if (schema.block_count() < 1) fail("schema-invalid", "schema has no blocks");
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(static_cast<std::size_t>(schema.block_count()));
  for (const auto& b : schema.blocks())
    scored.emplace_back(b.name, eval_or_inf(loss, BlockSelection::of({b.name})));
  if (scores) *scores = scored;
  // Worst first; stable sort keeps schema order on ties.
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (const auto& [name, s] : scored) out.push_back(name);
  return out;
}

BlockSelection initial_configuration(const FeatureSchema& schema, const LossFn& loss,
                                     int* evals_out,
                                     std::vector<std::pair<std::string, double>>* group_scores) {
  std::vector<std::pair<std::string, BlockSelection>> candidates;
  candidates.emplace_back("ALL", BlockSelection::all(schema));
  for (const auto& g : schema.group_names())
    candidates.emplace_back(g, BlockSelection::of(schema.blocks_of_group(g)));

  int evals = 0;
  bool have_best = false;
  BlockSelection best;
  double best_loss = kInf;
  if (group_scores) group_scores->clear();
  for (const auto& [name, sel] : candidates) {
    double l = eval_or_inf(loss, sel);
    ++evals;
    if (group_scores) group_scores->emplace_back(name, l);
    if (std::isfinite(l) && (!have_best || l < best_loss)) {
      have_best = true;
      best = sel;
      best_loss = l;
    }
  }
  if (evals_out) *evals_out = evals;
  if (!have_best) fail("selection-failed", "every initial candidate configuration failed");
  return best;
}

std::pair<BlockSelection, SelectionTrace> greedy_select(const FeatureSchema& schema,
                                                        const LossFn& loss,
                                                        const GreedyOptions& options) {
  SelectionTrace trace;
  std::vector<std::string> ordered = order_blocks(schema, loss, nullptr);

  BlockSelection current;
  if (options.start) {
    for (const auto& n : options.start->names())
      if (!schema.has_block(n)) fail("schema-mismatch", "unknown subgroup in start: " + n);
    if (options.start->empty()) fail("invalid-selection", "start selection is empty");
    current = *options.start;
    trace.initial_evaluations = 0;
  } else {
    current = initial_configuration(schema, loss, &trace.initial_evaluations, nullptr);
  }

  double best = eval_or_inf(loss, current);
  if (!std::isfinite(best))
    fail("selection-failed", "start configuration cannot be evaluated");
  trace.start = current;
  trace.initial_loss = best;

  int round = 0;
  bool improvement = true;
  while (improvement && round < options.max_rounds) {
    improvement = false;
    for (const auto& block : ordered) {
      BlockSelection candidate;
      TraceAction on_accept;
      if (current.contains(block)) {
        candidate = current.without(block);
        on_accept = TraceAction::Remove;
      } else {
        if (round >= options.add_rounds) continue;  // additions closed
        candidate = current.with(block);
        on_accept = TraceAction::Add;
      }
      double cand_loss = candidate.empty() ? kInf : eval_or_inf(loss, candidate);
      ++trace.toggle_evaluations;
      if (cand_loss < best - options.epsilon) {
        trace.entries.push_back(TraceEntry{round, block, on_accept, best, cand_loss});
        current = std::move(candidate);
        best = cand_loss;
        improvement = true;
      } else {
        trace.entries.push_back(TraceEntry{round, block, TraceAction::Reject, best, cand_loss});
      }
    }
    ++round;
  }

  trace.final = current;
  trace.final_loss = best;
  trace.rounds = round;
  return {std::move(current), std::move(trace)};
}

ImportanceReport importance_report(const BlockSelection& final_selection, const LossFn& loss) {
  if (final_selection.empty()) fail("invalid-selection", "final selection is empty");
  ImportanceReport report;
  report.mnmd_with = loss(final_selection);
  std::vector<double> clamped;
  for (const auto& block : final_selection.names()) {
    BlockImportance imp;
    imp.block = block;
    BlockSelection ablated = final_selection.without(block);
    if (ablated.empty()) {
      // Removing the only block leaves nothing to evaluate; the block is
      // trivially dominant and its RIE is reported as undefined.
      imp.defined = false;
      imp.rie_value = std::numeric_limits<double>::quiet_NaN();
    } else {
      imp.defined = true;
      imp.rie_value = rie(loss(ablated), report.mnmd_with);
      clamped.push_back(std::max(imp.rie_value, 0.0));
    }
    report.blocks.push_back(std::move(imp));
  }
  report.gini_value = clamped.empty() ? 0.0 : gini(clamped);
  return report;
}

std::vector<std::string> importance_ranking(const ImportanceReport& report) {
  std::vector<const BlockImportance*> items;
  items.reserve(report.blocks.size());
  for (const auto& b : report.blocks) items.push_back(&b);
  std::stable_sort(items.begin(), items.end(), [](const BlockImportance* a, const BlockImportance* b) {
    if (a->defined != b->defined) return !a->defined;  // undefined-dominant first
    if (!a->defined) return false;
    return a->rie_value > b->rie_value;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto* b : items) out.push_back(b->block);
  return out;
}

std::vector<OverlapEntry> cross_task_overlap(const std::vector<TaskSelection>& tasks,
                                             double persistence) {
  std::vector<OverlapEntry> out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = i + 1; j < tasks.size(); ++j) {
      OverlapEntry e;
      e.task_a = tasks[i].task;
      e.task_b = tasks[j].task;
      e.jaccard_value = jaccard(tasks[i].selection.names(), tasks[j].selection.names());
      e.rbo_value = rbo(tasks[i].ranking, tasks[j].ranking, persistence);
      out.push_back(std::move(e));
    }
  }
  return out;
}

ProtocolLoss::ProtocolLoss(const Dataset& data, QuantifierKind kind, ProtocolConfig cfg)
    : data_(data), kind_(kind), cfg_(std::move(cfg)) {}

double ProtocolLoss::operator()(const BlockSelection& selection) const {
  const std::string key = selection.key();
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  double value = run_protocol(data_, selection, kind_, cfg_).mnmd();
  ++evaluations_;
  cache_.emplace(key, value);
  return value;
}

std::vector<std::string> order_blocks(const Dataset& data, QuantifierKind kind,
                                      const ProtocolConfig& cfg) {
  ProtocolLoss loss(data, kind, cfg);
  return order_blocks(data.schema(), std::cref(loss), nullptr);
}

BlockSelection initial_configuration(const Dataset& data, QuantifierKind kind,
                                     const ProtocolConfig& cfg) {
  ProtocolLoss loss(data, kind, cfg);
  return initial_configuration(data.schema(), std::cref(loss), nullptr, nullptr);
}

std::pair<BlockSelection, SelectionTrace> greedy_select(const Dataset& data, QuantifierKind kind,
                                                        const ProtocolConfig& cfg,
                                                        const GreedyOptions& options) {
  ProtocolLoss loss(data, kind, cfg);
  return greedy_select(data.schema(), std::cref(loss), options);
}

ImportanceReport importance_report(const Dataset& data, const BlockSelection& final_selection,
                                   QuantifierKind kind, const ProtocolConfig& cfg) {
  ProtocolLoss loss(data, kind, cfg);
  return importance_report(final_selection, std::cref(loss));
}

}  // namespace ordq
