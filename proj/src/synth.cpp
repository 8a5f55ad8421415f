#include "ordq/synth.hpp"

#include <cstdio>

#include "ordq/error.hpp"
#include "ordq/rng.hpp"
#include "ordq/sampling.hpp"

namespace ordq {

namespace {

constexpr std::uint64_t kTagRow = 0x5E11;
constexpr std::uint64_t kTagUser = 0x5E12;

std::string row_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%06d", index);
  return buf;
}

}  // namespace

void SynthSpec::validate() const {
  if (n_classes < 2) fail("parameter-error", "need at least 2 classes");
  if (blocks.empty()) fail("parameter-error", "need at least one block");
  if (instances_per_class < 1) fail("parameter-error", "instances_per_class must be positive");
  for (const auto& b : blocks) {
    if (b.dim < 1) fail("parameter-error", "block dimension must be positive: " + b.name);
    if (b.signal && !(b.separation > 0.0))
      fail("parameter-error", "signal block needs separation > 0: " + b.name);
  }
}

Dataset generate(const SynthSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>> groups;
  for (const auto& b : spec.blocks) {
    if (groups.empty() || groups.back().first != b.group)
      groups.emplace_back(b.group, std::vector<std::pair<std::string, int>>{});
    groups.back().second.emplace_back(b.name, b.dim);
  }
  FeatureSchema schema = FeatureSchema::from_groups(groups);

  const int rows = spec.n_classes * spec.instances_per_class;
  Matrix x(rows, schema.total_columns());
  std::vector<int> labels(static_cast<std::size_t>(rows));
  std::vector<std::string> ids(static_cast<std::size_t>(rows));
  const double center = (static_cast<double>(spec.n_classes) + 1.0) / 2.0;

  for (int r = 0; r < rows; ++r) {
    int cls = r / spec.instances_per_class + 1;  // class-major layout
    labels[static_cast<std::size_t>(r)] = cls;
    ids[static_cast<std::size_t>(r)] = row_id(r);
    Rng rng(spec.seed, {kTagRow, static_cast<std::uint64_t>(r)});
    int col = 0;
    for (const auto& b : spec.blocks) {
      double mean = b.signal ? (static_cast<double>(cls) - center) * b.separation : 0.0;
      for (int j = 0; j < b.dim; ++j) x(r, col++) = mean + rng.gaussian();
    }
  }
  return Dataset(std::move(x), std::move(labels), std::move(ids), std::move(schema),
                 spec.n_classes);
}

void CommentsSpec::validate() const {
  if (window_days < 1) fail("parameter-error", "window_days must be positive");
  for (const auto& c : cohorts) {
    if (c.users < 1) fail("parameter-error", "cohort needs at least one user: " + c.name);
    if (c.pre_comments < 0 || c.post_comments < 0)
      fail("parameter-error", "comment counts must be non-negative: " + c.name);
    for (double t : {c.pre_toxicity, c.post_toxicity})
      if (!(t >= 0.0 && t <= 1.0))
        fail("parameter-error", "toxicity must lie in [0, 1]: " + c.name);
    if (c.pre_comments > 0 && c.pre_communities.empty())
      fail("parameter-error", "cohort has pre comments but no community weights: " + c.name);
    if (c.post_comments > 0 && c.post_communities.empty())
      fail("parameter-error", "cohort has post comments but no community weights: " + c.name);
  }
}

int CommentsSpec::total_users() const {
  int n = 0;
  for (const auto& c : cohorts) n += c.users;
  return n;
}

namespace {

// Expands weights into exact per-community counts, then into a flat list of
// community labels, one per comment.
std::vector<std::string> community_plan(const std::vector<double>& weights, int count) {
  if (count == 0) return {};
  Vector w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) fail("parameter-error", "community weights must be non-negative");
    w(static_cast<Eigen::Index>(i)) = weights[i];
  }
  auto counts = prevalence_counts(PrevalenceVector::normalized(std::move(w)), count);
  std::vector<std::string> plan;
  plan.reserve(static_cast<std::size_t>(count));
  for (std::size_t c = 0; c < counts.size(); ++c)
    for (int k = 0; k < counts[c]; ++k) plan.push_back("comm" + std::to_string(c + 1));
  return plan;
}

}  // namespace

std::vector<CommentRecord> generate_comments(const CommentsSpec& spec) {
  spec.validate();
  std::vector<CommentRecord> out;
  int user_index = 0;
  for (const auto& cohort : spec.cohorts) {
    for (int u = 0; u < cohort.users; ++u, ++user_index) {
      std::string uid = row_id(user_index);
      Rng rng(spec.seed, {kTagUser, static_cast<std::uint64_t>(user_index)});
      auto emit = [&](int count, double toxicity, const std::vector<double>& weights, bool post) {
        auto plan = community_plan(weights, count);
        for (int i = 0; i < count; ++i) {
          int day_offset = 1 + i % spec.window_days;
          std::int64_t day = post ? spec.intervention_day + day_offset
                                  : spec.intervention_day - day_offset;
          std::int64_t ts = day * 86400 + 12 * 3600 + static_cast<std::int64_t>(rng.below(3600));
          out.push_back(CommentRecord{uid, ts, plan[static_cast<std::size_t>(i)], toxicity});
        }
      };
      emit(cohort.pre_comments, cohort.pre_toxicity, cohort.pre_communities, false);
      emit(cohort.post_comments, cohort.post_toxicity, cohort.post_communities, true);
    }
  }
  return out;
}

}  // namespace ordq
