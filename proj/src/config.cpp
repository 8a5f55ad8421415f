#include "ordq/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ordq/error.hpp"
#include "ordq/io.hpp"

namespace ordq {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(',', start);
    std::string item = trim(pos == std::string::npos ? s.substr(start) : s.substr(start, pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double to_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v))
    fail("parameter-error", "config key '" + key + "': bad number '" + value + "'");
  return v;
}

long to_long(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE)
    fail("parameter-error", "config key '" + key + "': bad integer '" + value + "'");
  return v;
}

// "k1=v1 k2=v2 ..." with values free of spaces; used by block.N / cohort.N.
std::map<std::string, std::string> parse_kv_list(const std::string& key, const std::string& value) {
  std::map<std::string, std::string> out;
  std::istringstream is(value);
  std::string token;
  while (is >> token) {
    std::size_t eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
      fail("parameter-error", "config key '" + key + "': expected k=v tokens, got '" + token + "'");
    out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

std::string kv_require(const std::map<std::string, std::string>& kv, const std::string& key,
                       const std::string& field) {
  auto it = kv.find(field);
  if (it == kv.end()) fail("parameter-error", "config key '" + key + "': missing '" + field + "='");
  return it->second;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config-not-found", path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_text(text.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string s = trim(line);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        fail("ingestion-error", origin + ":" + std::to_string(line_no) + ": bad section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        fail("ingestion-error", origin + ":" + std::to_string(line_no) + ": empty section name");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail("ingestion-error", origin + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      fail("ingestion-error", origin + ":" + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = value;
  }
  return cfg;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : static_cast<int>(to_long(key, it->second));
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

std::vector<std::string> ConfigFile::indexed(const std::string& prefix) const {
  std::vector<std::string> out;
  for (int i = 0;; ++i) {
    auto it = values_.find(prefix + "." + std::to_string(i));
    if (it == values_.end()) return out;
    out.push_back(it->second);
  }
}

std::string to_string(ClassWeighting weighting) {
  return weighting == ClassWeighting::Uniform ? "uniform" : "balanced";
}

ClassWeighting weighting_from_string(const std::string& s) {
  if (s == "uniform") return ClassWeighting::Uniform;
  if (s == "balanced") return ClassWeighting::Balanced;
  fail("parameter-error", "unknown class weighting '" + s + "' (uniform|balanced)");
}

RunConfig RunConfig::from(const ConfigFile& cfg) {
  RunConfig rc;
  rc.task = cfg.get_string("run.task", rc.task);
  rc.quantifier = cfg.get_string("run.quantifier", rc.quantifier);
  rc.out_dir = cfg.get_string("run.out", rc.out_dir);
  rc.seed = static_cast<std::uint64_t>(cfg.get_int("run.seed", 0));
  rc.threads = cfg.get_int("run.threads", 0);

  rc.features_path = cfg.get_string("paths.features", "");
  rc.labels_path = cfg.get_string("paths.labels", "");
  rc.schema_path = cfg.get_string("paths.schema", "");
  rc.comments_path = cfg.get_string("paths.comments", "");
  rc.test_path = cfg.get_string("paths.test", "");

  ProtocolConfig& p = rc.protocol;
  p.repetitions = cfg.get_int("protocol.repetitions", p.repetitions);
  p.batch_size = cfg.get_int("protocol.batch_size", p.batch_size);
  p.batch_count = cfg.get_int("protocol.batch_count", p.batch_count);
  p.train_pool_size = cfg.get_int("protocol.train_pool_size", p.batch_size * p.batch_count);
  p.app_samples = cfg.get_int("protocol.app_samples", p.app_samples);
  p.app_sample_size = cfg.get_int("protocol.app_sample_size", p.app_sample_size);
  p.max_skip_fraction = cfg.get_double("protocol.max_skip_fraction", p.max_skip_fraction);
  p.seed = rc.seed;
  p.threads = rc.threads;

  if (cfg.has("grid.regs")) {
    p.grid.regs.clear();
    for (const auto& item : split_list(cfg.get_string("grid.regs", "")))
      p.grid.regs.push_back(to_double("grid.regs", item));
  }
  if (cfg.has("grid.weightings")) {
    p.grid.weightings.clear();
    for (const auto& item : split_list(cfg.get_string("grid.weightings", "")))
      p.grid.weightings.push_back(weighting_from_string(item));
  }

  ModelSelectionConfig& ms = p.model_selection;
  ms.train_fraction = cfg.get_double("model_selection.train_fraction", ms.train_fraction);
  ms.samples = cfg.get_int("model_selection.samples", ms.samples);
  ms.sample_size = cfg.get_int("model_selection.sample_size", ms.sample_size);

  QuantifierOptions& q = p.quantifier;
  q.cv_folds = cfg.get_int("classifier.cv_folds", q.cv_folds);
  q.train.max_iter = cfg.get_int("classifier.max_iter", q.train.max_iter);
  q.train.grad_tol = cfg.get_double("classifier.grad_tol", q.train.grad_tol);
  q.emq.max_iter = cfg.get_int("emq.max_iter", q.emq.max_iter);
  q.emq.eps = cfg.get_double("emq.eps", q.emq.eps);

  std::int64_t intervention_day = 0;
  if (cfg.has("labelling.intervention_date"))
    intervention_day = parse_date(cfg.get_string("labelling.intervention_date", ""));
  rc.labelling = LabellingConfig::for_task(task_from_string(rc.task), intervention_day);
  rc.labelling.delta_moderate = cfg.get_double("labelling.delta_moderate", rc.labelling.delta_moderate);
  rc.labelling.delta_high = cfg.get_double("labelling.delta_high", rc.labelling.delta_high);
  rc.labelling.min_post_comments =
      cfg.get_int("labelling.min_post_comments", rc.labelling.min_post_comments);
  rc.labelling.hill_q = cfg.get_double("labelling.hill_q", rc.labelling.hill_q);
  rc.labelling.window = LabellingWindow::around(intervention_day,
                                                cfg.get_int("labelling.months_before", 7),
                                                cfg.get_int("labelling.months_after", 7));

  rc.report_persistence = cfg.get_double("report.persistence", rc.report_persistence);

  rc.greedy.add_rounds = cfg.get_int("selection.add_rounds", rc.greedy.add_rounds);
  rc.greedy.epsilon = cfg.get_double("selection.epsilon", rc.greedy.epsilon);
  rc.greedy.max_rounds = cfg.get_int("selection.max_rounds", rc.greedy.max_rounds);
  if (cfg.has("selection.start"))
    rc.selection_start = split_list(cfg.get_string("selection.start", ""));

  SynthSpec& sy = rc.synth;
  sy.n_classes = cfg.get_int("synth.n_classes", sy.n_classes);
  sy.instances_per_class = cfg.get_int("synth.instances_per_class", sy.instances_per_class);
  sy.seed = rc.seed;
  int block_idx = 0;
  for (const auto& value : cfg.indexed("synth.block")) {
    const std::string key = "synth.block." + std::to_string(block_idx++);
    auto kv = parse_kv_list(key, value);
    SynthBlock b;
    b.group = kv_require(kv, key, "group");
    b.name = kv_require(kv, key, "name");
    b.dim = static_cast<int>(to_long(key, kv_require(kv, key, "dim")));
    std::string kind = kv.count("kind") ? kv.at("kind") : "noise";
    if (kind == "signal")
      b.signal = true;
    else if (kind == "noise")
      b.signal = false;
    else
      fail("parameter-error", "config key '" + key + "': kind must be signal|noise");
    if (kv.count("sep")) b.separation = to_double(key, kv.at("sep"));
    sy.blocks.push_back(std::move(b));
  }

  CommentsSpec& cs = rc.synth_comments;
  cs.intervention_day = intervention_day;
  cs.window_days = cfg.get_int("synth.window_days", cs.window_days);
  cs.seed = rc.seed;
  int cohort_idx = 0;
  for (const auto& value : cfg.indexed("synth.cohort")) {
    const std::string key = "synth.cohort." + std::to_string(cohort_idx++);
    auto kv = parse_kv_list(key, value);
    CohortSpec c;
    c.name = kv_require(kv, key, "name");
    c.users = static_cast<int>(to_long(key, kv_require(kv, key, "users")));
    c.pre_comments = static_cast<int>(to_long(key, kv_require(kv, key, "pre")));
    c.post_comments = static_cast<int>(to_long(key, kv_require(kv, key, "post")));
    if (kv.count("pretox")) c.pre_toxicity = to_double(key, kv.at("pretox"));
    if (kv.count("posttox")) c.post_toxicity = to_double(key, kv.at("posttox"));
    for (const auto& w : split_list(kv.count("precomm") ? kv.at("precomm") : "1"))
      c.pre_communities.push_back(to_double(key, w));
    for (const auto& w : split_list(kv.count("postcomm") ? kv.at("postcomm") : "1"))
      c.post_communities.push_back(to_double(key, w));
    cs.cohorts.push_back(std::move(c));
  }

  return rc;
}

}  // namespace ordq
