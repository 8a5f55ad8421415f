#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordq/dataset.hpp"
#include "ordq/labelling.hpp"

namespace ordq {

// One feature block in a synthetic dataset. Signal blocks carry the ordinal
// class structure: every coordinate of the block gets the class mean
// (class - (n+1)/2) * separation plus unit Gaussian noise, so adjacent
// classes overlap more than distant ones. Noise blocks are standard Gaussian,
// independent of the class.
struct SynthBlock {
  std::string group;
  std::string name;
  int dim = 1;
  bool signal = false;
  double separation = 1.0;  // only meaningful for signal blocks
};

struct SynthSpec {
  int n_classes = 5;
  std::vector<SynthBlock> blocks;
  int instances_per_class = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

// Class-major rows (all class-1 instances first), ids "u000000", "u000001", …
// Byte-deterministic for a fixed spec; every row draws from its own derived
// RNG stream, so generation order is irrelevant.
Dataset generate(const SynthSpec& spec);

// A cohort of users sharing one behavioural profile: comment counts, constant
// per-period toxicity, and a community allocation per period. Constructed so
// the labelling rules recover exact, known effects.
struct CohortSpec {
  std::string name;
  int users = 1;
  int pre_comments = 0;
  int post_comments = 0;
  double pre_toxicity = 0.0;
  double post_toxicity = 0.0;
  std::vector<double> pre_communities;   // relative weights; exact counts by largest remainder
  std::vector<double> post_communities;
};

struct CommentsSpec {
  std::vector<CohortSpec> cohorts;
  std::int64_t intervention_day = 0;
  int window_days = 180;  // comments spread over this many days each side
  std::uint64_t seed = 0;

  void validate() const;
  int total_users() const;
};

// User ids "u000000"… numbered across cohorts in order, matching generate()'s
// ids so feature fixtures join directly. Empty cohort list -> empty stream.
std::vector<CommentRecord> generate_comments(const CommentsSpec& spec);

}  // namespace ordq
