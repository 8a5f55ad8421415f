#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ordq/error.hpp"
#include "ordq/labelling.hpp"
#include "ordq/rng.hpp"
#include "ordq/schema.hpp"

using namespace ordq;

namespace {

FeatureSchema one_col_schema() {
  return FeatureSchema::from_groups({{"G", {{"X", 1}}}});
}

CommentRecord comment(const std::string& user, const std::string& date, double tox = 0.0,
                      const std::string& community = "c1") {
  CommentRecord r;
  r.user_id = user;
  r.timestamp = parse_timestamp(date + "T12:00:00Z");
  r.community_id = community;
  r.toxicity = tox;
  return r;
}

}  // namespace

TEST_CASE("civil date arithmetic") {
  CHECK(days_from_civil(1970, 1, 1) == 0);
  CHECK(days_from_civil(1970, 1, 2) == 1);
  CHECK(days_from_civil(1969, 12, 31) == -1);
  CHECK(days_from_civil(2000, 3, 1) == days_from_civil(2000, 2, 29) + 1);  // leap year
  int y, m, d;
  civil_from_days(days_from_civil(2024, 2, 29), y, m, d);
  CHECK(y == 2024);
  CHECK(m == 2);
  CHECK(d == 29);

  // Month addition clamps the day to the target month.
  CHECK(add_months(days_from_civil(2020, 1, 31), 1) == days_from_civil(2020, 2, 29));
  CHECK(add_months(days_from_civil(2021, 1, 31), 1) == days_from_civil(2021, 2, 28));
  CHECK(add_months(days_from_civil(2020, 6, 15), -7) == days_from_civil(2019, 11, 15));
  CHECK(add_months(days_from_civil(2020, 10, 31), -1) == days_from_civil(2020, 9, 30));
}

TEST_CASE("date and timestamp parsing") {
  CHECK(parse_date("1970-01-01") == 0);
  CHECK(parse_date("2020-06-01") == days_from_civil(2020, 6, 1));
  CHECK_THROWS_WITH_AS(parse_date("2020/06/01"), doctest::Contains("ingestion-error"), Error);
  CHECK_THROWS_WITH_AS(parse_date("2020-13-01"), doctest::Contains("ingestion-error"), Error);

  CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_timestamp("1970-01-02T01:02:03") == 86400 + 3723);
  CHECK(parse_timestamp("1970-01-02 01:02:03") == 86400 + 3723);
  CHECK(parse_timestamp("2020-06-01") == days_from_civil(2020, 6, 1) * 86400);
  CHECK_THROWS_WITH_AS(parse_timestamp("yesterday"), doctest::Contains("ingestion-error"), Error);
}

TEST_CASE("window classification excludes the intervention day") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  LabellingWindow w = LabellingWindow::around(pivot);
  CHECK(w.pre_start_day == days_from_civil(2019, 11, 1));
  CHECK(w.post_end_day == days_from_civil(2021, 1, 1));

  auto at = [](const std::string& s) { return parse_timestamp(s); };
  CHECK(w.classify(at("2020-06-01T00:00:00Z")) == Period::Excluded);
  CHECK(w.classify(at("2020-06-01T23:59:59Z")) == Period::Excluded);
  CHECK(w.classify(at("2020-05-31T23:59:59Z")) == Period::Pre);
  CHECK(w.classify(at("2020-06-02T00:00:00Z")) == Period::Post);
  CHECK(w.classify(at("2019-11-01T00:00:00Z")) == Period::Pre);    // first pre day
  CHECK(w.classify(at("2019-10-31T23:59:59Z")) == Period::Excluded);
  CHECK(w.classify(at("2021-01-01T12:00:00Z")) == Period::Post);   // last post day
  CHECK(w.classify(at("2021-01-02T00:00:00Z")) == Period::Excluded);
}

TEST_CASE("activity measure counts period comments, empty is zero") {
  LabellingWindow w = LabellingWindow::around(days_from_civil(2020, 6, 1));
  std::vector<CommentRecord> cs = {
      comment("u", "2020-05-20"), comment("u", "2020-05-21"), comment("u", "2020-07-01"),
      comment("u", "2020-06-01"),  // intervention day, never counted
  };
  CHECK(activity_measure(cs, Period::Pre, w) == 2.0);
  CHECK(activity_measure(cs, Period::Post, w) == 1.0);
  CHECK(activity_measure({}, Period::Pre, w) == 0.0);
}

TEST_CASE("percentile interpolates between order statistics") {
  CHECK(percentile({0.1, 0.2, 0.3, 0.4}, 75.0) == doctest::Approx(0.325).epsilon(1e-12));
  CHECK(percentile({0.4, 0.1, 0.3, 0.2}, 75.0) == doctest::Approx(0.325).epsilon(1e-12));
  CHECK(percentile({5.0}, 75.0) == 5.0);
  CHECK(percentile({1.0, 2.0}, 0.0) == 1.0);
  CHECK(percentile({1.0, 2.0}, 100.0) == 2.0);
  CHECK(percentile({1.0, 2.0}, 50.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(percentile({}, 75.0), doctest::Contains("empty-input"), Error);

  // Monotone in the requested percentile.
  Rng rng(3);
  std::vector<double> values;
  for (int i = 0; i < 17; ++i) values.push_back(rng.uniform());
  double last = 0.0;
  for (double p : {0.0, 10.0, 25.0, 50.0, 75.0, 90.0, 100.0}) {
    double v = percentile(values, p);
    CHECK(v >= last);
    last = v;
  }
}

TEST_CASE("toxicity measure is the 75th percentile of period scores") {
  LabellingWindow w = LabellingWindow::around(days_from_civil(2020, 6, 1));
  std::vector<CommentRecord> cs = {
      comment("u", "2020-05-10", 0.1), comment("u", "2020-05-11", 0.2),
      comment("u", "2020-05-12", 0.3), comment("u", "2020-05-13", 0.4),
      comment("u", "2020-07-13", 0.9),
  };
  CHECK(toxicity_measure(cs, Period::Pre, w) == doctest::Approx(0.325).epsilon(1e-12));
  CHECK(toxicity_measure(cs, Period::Post, w) == doctest::Approx(0.9).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(toxicity_measure({}, Period::Pre, w),
                       doctest::Contains("undefined-measure"), Error);
}

TEST_CASE("hill diversity hand values") {
  LabellingWindow w = LabellingWindow::around(days_from_civil(2020, 6, 1));
  // 4 communities, one comment each: effective number is exactly 4.
  std::vector<CommentRecord> four = {
      comment("u", "2020-05-10", 0, "a"), comment("u", "2020-05-11", 0, "b"),
      comment("u", "2020-05-12", 0, "c"), comment("u", "2020-05-13", 0, "d")};
  CHECK(hill_diversity(four, Period::Pre, w, 1.5) == doctest::Approx(4.0).epsilon(1e-12));
  // Two communities at 50/50 -> 2; a single community -> 1.
  std::vector<CommentRecord> two = {comment("u", "2020-05-10", 0, "a"),
                                    comment("u", "2020-05-11", 0, "b")};
  CHECK(hill_diversity(two, Period::Pre, w, 1.5) == doctest::Approx(2.0).epsilon(1e-12));
  std::vector<CommentRecord> one = {comment("u", "2020-05-10", 0, "a")};
  CHECK(hill_diversity(one, Period::Pre, w, 1.5) == doctest::Approx(1.0).epsilon(1e-12));
  // Skew lowers the effective number below the raw count.
  std::vector<CommentRecord> skew = {
      comment("u", "2020-05-10", 0, "a"), comment("u", "2020-05-11", 0, "a"),
      comment("u", "2020-05-12", 0, "a"), comment("u", "2020-05-13", 0, "b")};
  double h = hill_diversity(skew, Period::Pre, w, 1.5);
  CHECK(h > 1.0);
  CHECK(h < 2.0);
  CHECK_THROWS_WITH_AS(hill_diversity(four, Period::Pre, w, 1.0),
                       doctest::Contains("parameter-error"), Error);
  CHECK_THROWS_WITH_AS(hill_diversity({}, Period::Pre, w, 1.5),
                       doctest::Contains("undefined-measure"), Error);
}

TEST_CASE("effect size is the relative change") {
  CHECK(effect_size(100.0, 180.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(effect_size(100.0, 20.0) == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(effect_size(50.0, 50.0) == 0.0);
  CHECK_THROWS_WITH_AS(effect_size(0.0, 10.0), doctest::Contains("undefined-effect"), Error);
  CHECK_THROWS_WITH_AS(effect_size(-1.0, 10.0), doctest::Contains("undefined-effect"), Error);
}

TEST_CASE("labels split at the thresholds with boundaries to the milder class") {
  const double dm = 0.2, dh = 0.55;
  CHECK(label_effect(-0.56, dm, dh) == 1);
  CHECK(label_effect(-0.55, dm, dh) == 2);  // boundary stays moderate
  CHECK(label_effect(-0.30, dm, dh) == 2);
  CHECK(label_effect(-0.20, dm, dh) == 3);  // boundary stays no-variation
  CHECK(label_effect(0.0, dm, dh) == 3);
  CHECK(label_effect(0.20, dm, dh) == 3);
  CHECK(label_effect(0.21, dm, dh) == 4);
  CHECK(label_effect(0.55, dm, dh) == 4);
  CHECK(label_effect(0.56, dm, dh) == 5);

  // Mirror symmetry and monotonicity in the effect.
  int prev = 1;
  for (double e = -1.0; e <= 1.0; e += 0.01) {
    int l = label_effect(e, dm, dh);
    CHECK(l >= prev);
    prev = l;
    CHECK(label_effect(-e, dm, dh) == 6 - l);
  }

  CHECK_THROWS_WITH_AS(label_effect(0.1, 0.0, 0.5), doctest::Contains("parameter-error"), Error);
  CHECK_THROWS_WITH_AS(label_effect(0.1, 0.5, 0.5), doctest::Contains("parameter-error"), Error);
  CHECK_THROWS_WITH_AS(label_effect(0.1, 0.6, 0.5), doctest::Contains("parameter-error"), Error);

  CHECK(label_name(1) == "HighlyDecreased");
  CHECK(label_name(3) == "NoVariation");
  CHECK(label_name(5) == "HighlyIncreased");
}

TEST_CASE("widening the no-variation band absorbs moderate labels") {
  CHECK(label_effect(0.3, 0.2, 0.55) == 4);
  CHECK(label_effect(0.3, 0.35, 0.55) == 3);
}

TEST_CASE("task config defaults") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  CHECK(LabellingConfig::for_task(TaskKind::Activity, pivot).min_post_comments == 0);
  CHECK(LabellingConfig::for_task(TaskKind::Toxicity, pivot).min_post_comments == 10);
  CHECK(LabellingConfig::for_task(TaskKind::Diversity, pivot).min_post_comments == 10);
  for (auto t : {TaskKind::Activity, TaskKind::Toxicity, TaskKind::Diversity})
    CHECK(task_from_string(to_string(t)) == t);
  CHECK_THROWS_WITH_AS(task_from_string("sentiment"), doctest::Contains("parameter-error"), Error);
}

TEST_CASE("labelled dataset joins users against the matrix") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  LabellingConfig cfg = LabellingConfig::for_task(TaskKind::Activity, pivot);

  std::vector<CommentRecord> cs;
  // u1: 2 pre, 4 post -> effect 1.0 -> HighlyIncreased (5).
  cs.push_back(comment("u1", "2020-05-01"));
  cs.push_back(comment("u1", "2020-05-02"));
  for (int i = 1; i <= 4; ++i) cs.push_back(comment("u1", "2020-07-0" + std::to_string(i)));
  // u2: 4 pre, 4 post -> NoVariation (3).
  for (int i = 1; i <= 4; ++i) {
    cs.push_back(comment("u2", "2020-05-0" + std::to_string(i)));
    cs.push_back(comment("u2", "2020-07-0" + std::to_string(i)));
  }
  // u3: no pre comments -> undefined effect, dropped.
  cs.push_back(comment("u3", "2020-07-05"));
  // u9 is not in the matrix at all.
  cs.push_back(comment("u9", "2020-05-05"));

  Matrix x(4, 1);
  x << 1, 2, 3, 4;
  std::vector<std::string> ids{"u1", "u2", "u3", "u4"};  // u4 never comments
  LabellingStats stats;
  Dataset d = build_labelled_dataset(cs, x, ids, one_col_schema(), cfg, &stats);

  CHECK(d.rows() == 2);
  CHECK(d.ids() == std::vector<std::string>{"u1", "u2"});
  CHECK(d.labels() == std::vector<int>{5, 3});
  CHECK(d.features()(0, 0) == 1.0);
  CHECK(d.features()(1, 0) == 2.0);
  CHECK(stats.users_in_matrix == 4);
  CHECK(stats.labelled == 2);
  CHECK(stats.no_comments == 1);
  CHECK(stats.undefined_effect == 1);
  CHECK(stats.comments_unmatched == 1);
  CHECK(stats.ineligible == 0);
}

TEST_CASE("post-comment eligibility applies to toxicity but not activity") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  std::vector<CommentRecord> cs;
  // 10 pre comments, 9 post comments (one short of the default threshold).
  for (int i = 1; i <= 10; ++i)
    cs.push_back(comment("u1", "2020-05-" + std::string(i < 10 ? "0" : "") + std::to_string(i), 0.4));
  for (int i = 1; i <= 9; ++i) cs.push_back(comment("u1", "2020-07-0" + std::to_string(i), 0.4));

  Matrix x(1, 1);
  x << 1;
  std::vector<std::string> ids{"u1"};

  LabellingStats tox_stats;
  LabellingConfig tox = LabellingConfig::for_task(TaskKind::Toxicity, pivot);
  CHECK_THROWS_WITH_AS(build_labelled_dataset(cs, x, ids, one_col_schema(), tox, &tox_stats),
                       doctest::Contains("empty-input"), Error);
  CHECK(tox_stats.ineligible == 1);

  LabellingConfig act = LabellingConfig::for_task(TaskKind::Activity, pivot);
  Dataset d = build_labelled_dataset(cs, x, ids, one_col_schema(), act);
  CHECK(d.labels() == std::vector<int>{3});  // 10 -> 9 is a -10% change
}

TEST_CASE("duplicate matrix ids are rejected") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  LabellingConfig cfg = LabellingConfig::for_task(TaskKind::Activity, pivot);
  Matrix x(2, 1);
  x << 1, 2;
  CHECK_THROWS_WITH_AS(
      build_labelled_dataset({comment("u1", "2020-05-01")}, x, {"u1", "u1"}, one_col_schema(), cfg),
      doctest::Contains("ingestion-error"), Error);
}

TEST_CASE("labelling is invariant to comment stream order") {
  std::int64_t pivot = days_from_civil(2020, 6, 1);
  LabellingConfig cfg = LabellingConfig::for_task(TaskKind::Diversity, pivot);

  std::vector<CommentRecord> cs;
  for (int i = 0; i < 12; ++i) {
    cs.push_back(comment("u1", "2020-05-" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1), 0,
                         i % 2 ? "a" : "b"));
    cs.push_back(comment("u1", "2020-07-" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1), 0,
                         std::string(1, static_cast<char>('a' + i % 4))));
  }
  Matrix x(1, 1);
  x << 1;

  Dataset fwd = build_labelled_dataset(cs, x, {"u1"}, one_col_schema(), cfg);
  std::reverse(cs.begin(), cs.end());
  Dataset rev = build_labelled_dataset(cs, x, {"u1"}, one_col_schema(), cfg);
  CHECK(fwd.labels() == rev.labels());
}
