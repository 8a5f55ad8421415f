#include "ordq/labelling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "ordq/error.hpp"

namespace ordq {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
  static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return lengths[month - 1];
}

std::int64_t floor_div_day(std::int64_t seconds) {
  return seconds >= 0 ? seconds / kSecondsPerDay
                      : (seconds - (kSecondsPerDay - 1)) / kSecondsPerDay;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t to) {
  int v = 0;
  for (std::size_t i = from; i < to; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

}  // namespace

std::int64_t days_from_civil(int year, int month, int day) {
  year -= month <= 2;
  const int era = (year >= 0 ? year : year - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(year - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(day) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t days, int& year, int& month, int& day) {
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460u + doe / 36524u - doe / 146096u) / 365u;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
  const unsigned mp = (5u * doy + 2u) / 153u;
  day = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
  month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  year = static_cast<int>(y + (month <= 2));
}

std::int64_t add_months(std::int64_t days, int months) {
  int y = 0, m = 0, d = 0;
  civil_from_days(days, y, m, d);
  int total = y * 12 + (m - 1) + months;
  int y2 = total / 12;
  int m2 = total % 12;
  if (m2 < 0) {
    m2 += 12;
    y2 -= 1;
  }
  m2 += 1;
  d = std::min(d, days_in_month(y2, m2));
  return days_from_civil(y2, m2, d);
}

std::int64_t parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !all_digits(s, 0, 4) ||
      !all_digits(s, 5, 7) || !all_digits(s, 8, 10))
    fail("ingestion-error", "bad date (want YYYY-MM-DD): " + s);
  int y = to_int(s, 0, 4), m = to_int(s, 5, 7), d = to_int(s, 8, 10);
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m))
    fail("ingestion-error", "date out of range: " + s);
  return days_from_civil(y, m, d);
}

std::int64_t parse_timestamp(const std::string& s) {
  if (s.size() < 10) fail("ingestion-error", "bad timestamp: " + s);
  std::int64_t day = parse_date(s.substr(0, 10));
  std::string rest = s.substr(10);
  if (!rest.empty() && rest.back() == 'Z') rest.pop_back();
  std::int64_t sec = 0;
  if (!rest.empty()) {
    if (rest.size() != 9 || (rest[0] != 'T' && rest[0] != ' ') || rest[3] != ':' ||
        rest[6] != ':' || !all_digits(rest, 1, 3) || !all_digits(rest, 4, 6) ||
        !all_digits(rest, 7, 9))
      fail("ingestion-error", "bad timestamp (want YYYY-MM-DDTHH:MM:SS): " + s);
    int h = to_int(rest, 1, 3), mi = to_int(rest, 4, 6), se = to_int(rest, 7, 9);
    if (h > 23 || mi > 59 || se > 59) fail("ingestion-error", "time out of range: " + s);
    sec = h * 3600 + mi * 60 + se;
  }
  return day * kSecondsPerDay + sec;
}

LabellingWindow LabellingWindow::around(std::int64_t intervention_day, int months_before,
                                        int months_after) {
  if (months_before < 1 || months_after < 1)
    fail("parameter-error", "window must extend at least one month each way");
  LabellingWindow w;
  w.intervention_day = intervention_day;
  w.pre_start_day = add_months(intervention_day, -months_before);
  w.post_end_day = add_months(intervention_day, months_after);
  return w;
}

Period LabellingWindow::classify(std::int64_t timestamp) const {
  std::int64_t day = floor_div_day(timestamp);
  if (day >= pre_start_day && day < intervention_day) return Period::Pre;
  if (day > intervention_day && day <= post_end_day) return Period::Post;
  return Period::Excluded;  // the intervention day itself lands here too
}

namespace {

template <typename Fn>
void for_period(const std::vector<CommentRecord>& comments, Period period,
                const LabellingWindow& window, Fn&& fn) {
  for (const auto& c : comments)
    if (window.classify(c.timestamp) == period) fn(c);
}

}  // namespace

double activity_measure(const std::vector<CommentRecord>& comments, Period period,
                        const LabellingWindow& window) {
  double count = 0.0;
  for_period(comments, period, window, [&](const CommentRecord&) { count += 1.0; });
  return count;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) fail("empty-input", "percentile of no values");
  if (!(pct >= 0.0 && pct <= 100.0)) fail("parameter-error", "percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
  auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

double toxicity_measure(const std::vector<CommentRecord>& comments, Period period,
                        const LabellingWindow& window) {
  std::vector<double> scores;
  for_period(comments, period, window, [&](const CommentRecord& c) { scores.push_back(c.toxicity); });
  if (scores.empty()) fail("undefined-measure", "no comments in the requested period");
  return percentile(std::move(scores), 75.0);
}

double hill_diversity(const std::vector<CommentRecord>& comments, Period period,
                      const LabellingWindow& window, double q) {
  if (q == 1.0) fail("parameter-error", "Hill index of order 1 needs the exponential form");
  std::map<std::string, double> counts;
  double total = 0.0;
  for_period(comments, period, window, [&](const CommentRecord& c) {
    counts[c.community_id] += 1.0;
    total += 1.0;
  });
  if (total == 0.0) fail("undefined-measure", "no comments in the requested period");
  double acc = 0.0;
  for (const auto& [community, n] : counts) acc += std::pow(n / total, q);
  return std::pow(acc, 1.0 / (1.0 - q));
}

double effect_size(double pre, double post) {
  if (!(pre > 0.0)) fail("undefined-effect", "pre-period measure must be positive");
  return (post - pre) / pre;
}

int label_effect(double effect, double d_mod, double d_high) {
  if (!(d_mod > 0.0 && d_mod < d_high)) fail("parameter-error", "need 0 < d_mod < d_high");
  if (!std::isfinite(effect)) fail("parameter-error", "effect must be finite");
  if (effect < -d_high) return 1;
  if (effect < -d_mod) return 2;   // -d_high <= e < -d_mod
  if (effect <= d_mod) return 3;   // -d_mod <= e <= d_mod
  if (effect <= d_high) return 4;  // d_mod < e <= d_high
  return 5;
}

std::string label_name(int label) {
  switch (label) {
    case 1: return "HighlyDecreased";
    case 2: return "ModeratelyDecreased";
    case 3: return "NoVariation";
    case 4: return "ModeratelyIncreased";
    case 5: return "HighlyIncreased";
  }
  fail("label-out-of-range", "label " + std::to_string(label) + " outside 1..5");
}

std::string to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Activity: return "activity";
    case TaskKind::Toxicity: return "toxicity";
    case TaskKind::Diversity: return "diversity";
  }
  fail("parameter-error", "unknown task");
}

TaskKind task_from_string(const std::string& s) {
  if (s == "activity") return TaskKind::Activity;
  if (s == "toxicity") return TaskKind::Toxicity;
  if (s == "diversity") return TaskKind::Diversity;
  fail("parameter-error", "unknown task: " + s + " (expected activity|toxicity|diversity)");
}

LabellingConfig LabellingConfig::for_task(TaskKind task, std::int64_t intervention_day) {
  LabellingConfig cfg;
  cfg.task = task;
  cfg.min_post_comments = task == TaskKind::Activity ? 0 : 10;
  cfg.window = LabellingWindow::around(intervention_day);
  return cfg;
}

void LabellingConfig::validate() const {
  if (!(delta_moderate > 0.0 && delta_moderate < delta_high))
    fail("parameter-error", "need 0 < delta_moderate < delta_high");
  if (min_post_comments < 0) fail("parameter-error", "min_post_comments must be >= 0");
  if (hill_q == 1.0) fail("parameter-error", "hill_q must differ from 1");
  if (window.pre_start_day >= window.intervention_day ||
      window.post_end_day <= window.intervention_day)
    fail("parameter-error", "window must straddle the intervention day");
}

Dataset build_labelled_dataset(const std::vector<CommentRecord>& comments, const Matrix& features,
                               const std::vector<std::string>& ids, const FeatureSchema& schema,
                               const LabellingConfig& cfg, LabellingStats* stats) {
  cfg.validate();
  if (static_cast<Eigen::Index>(ids.size()) != features.rows())
    fail("shape-error", "feature matrix rows and id count differ");

  std::unordered_map<std::string, int> row_of;
  row_of.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (!row_of.emplace(ids[i], static_cast<int>(i)).second)
      fail("ingestion-error", "duplicate user id in feature matrix: " + ids[i]);

  // Group comments by user. Keyed aggregation makes the result independent of
  // the input stream order.
  std::unordered_map<std::string, std::vector<CommentRecord>> by_user;
  LabellingStats local;
  local.users_in_matrix = static_cast<int>(ids.size());
  for (const auto& c : comments) {
    if (!row_of.count(c.user_id)) {
      local.comments_unmatched += 1;
      continue;
    }
    by_user[c.user_id].push_back(c);
  }

  std::vector<int> keep_rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto it = by_user.find(ids[i]);
    if (it == by_user.end()) {
      local.no_comments += 1;
      continue;
    }
    const auto& user_comments = it->second;
    double post_count = activity_measure(user_comments, Period::Post, cfg.window);
    if (cfg.min_post_comments > 0 && post_count < cfg.min_post_comments) {
      local.ineligible += 1;
      continue;
    }
    double pre = 0.0, post = 0.0;
    try {
      switch (cfg.task) {
        case TaskKind::Activity:
          pre = activity_measure(user_comments, Period::Pre, cfg.window);
          post = post_count;
          break;
        case TaskKind::Toxicity:
          pre = toxicity_measure(user_comments, Period::Pre, cfg.window);
          post = toxicity_measure(user_comments, Period::Post, cfg.window);
          break;
        case TaskKind::Diversity:
          pre = hill_diversity(user_comments, Period::Pre, cfg.window, cfg.hill_q);
          post = hill_diversity(user_comments, Period::Post, cfg.window, cfg.hill_q);
          break;
      }
    } catch (const Error& e) {
      if (e.category() != "undefined-measure") throw;
      local.undefined_measure += 1;
      continue;
    }
    double eff;
    try {
      eff = effect_size(pre, post);
    } catch (const Error& e) {
      if (e.category() != "undefined-effect") throw;
      local.undefined_effect += 1;
      continue;
    }
    keep_rows.push_back(static_cast<int>(i));
    labels.push_back(label_effect(eff, cfg.delta_moderate, cfg.delta_high));
  }
  local.labelled = static_cast<int>(keep_rows.size());
  if (stats) *stats = local;
  if (keep_rows.empty()) fail("empty-input", "no user could be labelled for this task");

  Matrix kept(static_cast<Eigen::Index>(keep_rows.size()), features.cols());
  std::vector<std::string> kept_ids;
  kept_ids.reserve(keep_rows.size());
  for (std::size_t i = 0; i < keep_rows.size(); ++i) {
    kept.row(static_cast<Eigen::Index>(i)) = features.row(keep_rows[i]);
    kept_ids.push_back(ids[static_cast<std::size_t>(keep_rows[i])]);
  }
  return Dataset(std::move(kept), std::move(labels), std::move(kept_ids), schema, 5);
}

}  // namespace ordq
