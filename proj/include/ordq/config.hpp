#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordq/labelling.hpp"
#include "ordq/protocol.hpp"
#include "ordq/selection.hpp"
#include "ordq/synth.hpp"

namespace ordq {

// INI-style key-value file: [section] headers, key = value lines, '#' comments.
// Keys are addressed as "section.key"; keys before any section header have no
// prefix. Errors: "config-not-found" for a missing file, "ingestion-error" for
// malformed lines, "parameter-error" for values of the wrong type.
class ConfigFile {
 public:
  ConfigFile() = default;
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& origin = "<text>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  // Overrides win over file contents; set() is how CLI flags are layered in.
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;

  // Keys "prefix.0", "prefix.1", ... in index order; stops at the first gap.
  std::vector<std::string> indexed(const std::string& prefix) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string to_string(ClassWeighting weighting);
ClassWeighting weighting_from_string(const std::string& s);

// Fully materialized run settings: the config file with defaults applied and
// compound fields (grid, cohorts, blocks) decoded.
struct RunConfig {
  std::string task = "activity";
  std::string quantifier = "emq";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;  // 0: all hardware threads

  std::string features_path;
  std::string labels_path;
  std::string schema_path;
  std::string comments_path;
  std::string test_path;

  ProtocolConfig protocol;  // carries grid, quantifier options, model selection
  LabellingConfig labelling;
  double report_persistence = 0.9;

  GreedyOptions greedy;
  std::optional<std::vector<std::string>> selection_start;

  SynthSpec synth;
  CommentsSpec synth_comments;

  static RunConfig from(const ConfigFile& cfg);
};

}  // namespace ordq
