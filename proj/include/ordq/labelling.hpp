#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordq/dataset.hpp"

namespace ordq {

// Civil-calendar helpers (proleptic Gregorian, UTC). Days count from
// 1970-01-01.
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// Adds whole months, clamping the day-of-month to the target month's length
// (e.g. Jan 31 + 1 month = Feb 28/29).
std::int64_t add_months(std::int64_t days, int months);

// "YYYY-MM-DD" -> days since epoch; error "ingestion-error".
std::int64_t parse_date(const std::string& s);

// ISO-8601 "YYYY-MM-DD[THH:MM:SS][Z]" (space also accepted as separator)
// -> seconds since epoch, UTC.
std::int64_t parse_timestamp(const std::string& s);

struct CommentRecord {
  std::string user_id;
  std::int64_t timestamp = 0;  // seconds since epoch
  std::string community_id;
  double toxicity = 0.0;  // [0, 1]
};

enum class Period { Pre, Post, Excluded };

// Observation window around an intervention date. The intervention day itself
// is excluded; pre is [start, intervention), post is (intervention, end], in
// whole days.
struct LabellingWindow {
  std::int64_t intervention_day = 0;
  std::int64_t pre_start_day = 0;
  std::int64_t post_end_day = 0;

  // Default ±7 calendar months around the intervention.
  static LabellingWindow around(std::int64_t intervention_day, int months_before = 7,
                                int months_after = 7);
  Period classify(std::int64_t timestamp) const;
};

// Behavioural measures over one user's comments restricted to one period.
// Comment count in the period; 0 when empty.
double activity_measure(const std::vector<CommentRecord>& comments, Period period,
                        const LabellingWindow& window);
// 75th percentile of toxicity scores, linear interpolation between order
// statistics. Empty period -> "undefined-measure".
double toxicity_measure(const std::vector<CommentRecord>& comments, Period period,
                        const LabellingWindow& window);
// Hill-number diversity of the community distribution, order q (default 1.5):
// (sum_i p_i^q)^(1/(1-q)). Empty period -> "undefined-measure"; q == 1 ->
// "parameter-error".
double hill_diversity(const std::vector<CommentRecord>& comments, Period period,
                      const LabellingWindow& window, double q = 1.5);

// Percentile in [0, 100] with linear interpolation; "empty-input" on no data.
double percentile(std::vector<double> values, double pct);

// Relative behavioural change (post - pre) / pre; "undefined-effect" when
// pre <= 0.
double effect_size(double pre, double post);

// Five-class ordinal label from an effect and the two thresholds; boundary
// values go to the milder class:
//   1 HighlyDecreased   e < -d_high
//   2 ModeratelyDecreased  -d_high <= e < -d_mod
//   3 NoVariation       -d_mod <= e <= d_mod
//   4 ModeratelyIncreased  d_mod < e <= d_high
//   5 HighlyIncreased   e > d_high
int label_effect(double effect, double d_mod, double d_high);

std::string label_name(int label);

enum class TaskKind { Activity, Toxicity, Diversity };

std::string to_string(TaskKind task);
TaskKind task_from_string(const std::string& s);

struct LabellingConfig {
  TaskKind task = TaskKind::Activity;
  double delta_moderate = 0.2;
  double delta_high = 0.55;
  int min_post_comments = 10;  // eligibility for toxicity/diversity; 0 for activity
  double hill_q = 1.5;
  LabellingWindow window;

  static LabellingConfig for_task(TaskKind task, std::int64_t intervention_day);
  void validate() const;
};

struct LabellingStats {
  int users_in_matrix = 0;
  int labelled = 0;
  int no_comments = 0;        // in the matrix but no comments at all
  int ineligible = 0;         // failed the min post-comment rule
  int undefined_measure = 0;  // empty pre/post period for the measure
  int undefined_effect = 0;   // pre-measure <= 0
  int comments_unmatched = 0; // comment user_ids absent from the matrix
};

// Joins a feature matrix with raw comments and produces the labelled dataset
// for one task. Row order follows the feature matrix; users that cannot be
// labelled are dropped and counted. Duplicate matrix ids -> "ingestion-error".
Dataset build_labelled_dataset(const std::vector<CommentRecord>& comments, const Matrix& features,
                               const std::vector<std::string>& ids, const FeatureSchema& schema,
                               const LabellingConfig& cfg, LabellingStats* stats = nullptr);

}  // namespace ordq
