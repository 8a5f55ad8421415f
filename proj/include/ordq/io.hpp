#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ordq/dataset.hpp"
#include "ordq/labelling.hpp"
#include "ordq/protocol.hpp"
#include "ordq/quantifiers.hpp"
#include "ordq/selection.hpp"

namespace ordq {

// Canonical shortest-exact decimal text for a double; round-trips bit-exactly.
std::string format_double(double v);
std::string format_timestamp(std::int64_t seconds);  // ISO-8601, UTC, Z suffix
std::string format_date(std::int64_t days);

struct LoadedMatrix {
  Matrix features;
  std::vector<std::string> ids;
};

// Feature CSV: header `id,col_0,...,col_{M-1}`, one row per user. Duplicate
// ids, ragged rows, and non-finite values raise "ingestion-error" with line
// numbers.
LoadedMatrix load_feature_matrix(const std::string& path);
void save_feature_matrix(const std::string& path, const Matrix& features,
                         const std::vector<std::string>& ids);

// Label CSV: header `id,label`, labels are positive integers.
std::vector<std::pair<std::string, int>> load_labels(const std::string& path);
void save_labels(const std::string& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels);

// Schema text file: `group <NAME>` lines introduce groups, `<NAME> <WIDTH>`
// lines add subgroups to the current group. '#' starts a comment.
FeatureSchema load_schema(const std::string& path);
void save_schema(const std::string& path, const FeatureSchema& schema);

struct JoinStats {
  int matrix_rows = 0;
  int label_rows = 0;
  int joined = 0;
  int matrix_without_label = 0;
  int label_without_matrix = 0;
};

// Joins features and labels on id (feature-file row order), validates against
// the schema.
Dataset join_dataset(const LoadedMatrix& matrix,
                     const std::vector<std::pair<std::string, int>>& labels,
                     const FeatureSchema& schema, int n_classes = 5, JoinStats* stats = nullptr);
Dataset load_dataset(const std::string& features_path, const std::string& labels_path,
                     const std::string& schema_path, int n_classes = 5,
                     JoinStats* stats = nullptr);

// Comments as JSONL: {"user_id": …, "timestamp": ISO-8601 string,
// "community_id": …, "toxicity": number in [0,1]} per line.
std::vector<CommentRecord> load_comments_jsonl(const std::string& path);
void save_comments_jsonl(const std::string& path, const std::vector<CommentRecord>& comments);

// Flat text model dump; load reconstructs the concrete quantifier.
void save_model(const std::string& path, const Quantifier& quantifier);
std::unique_ptr<Quantifier> load_model(const std::string& path);

// EvalResult CSV: repetition,train_size,sample_idx,true_prev_1..n,
// est_prev_1..n,nmd. Loading reconstructs records and the size list (skipped
// counts are not serialized).
void save_eval_csv(const std::string& path, const EvalResult& result);
EvalResult load_eval_csv(const std::string& path);

// One block name per line, canonical (sorted) order.
void save_selection(const std::string& path, const BlockSelection& selection);
BlockSelection load_selection(const std::string& path);

void save_trace_csv(const std::string& path, const SelectionTrace& trace);

// block,rie,status rows; status is "ok" or "undefined-dominant".
void save_importance_csv(const std::string& path, const ImportanceReport& report);
std::vector<BlockImportance> load_importance_csv(const std::string& path);

void save_overlap_csv(const std::string& path, const std::vector<OverlapEntry>& entries);

// task,block,rie_percent rows for external heatmap plotting.
void save_heatmap_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::vector<BlockImportance>>>& tasks);

}  // namespace ordq
