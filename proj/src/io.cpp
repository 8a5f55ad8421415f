#include "ordq/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "ordq/error.hpp"

namespace ordq {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io-error", "cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("io-error", "cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& token, const std::string& path, int line,
                    bool allow_nonfinite = false) {
  const std::string t = trim(token);
  if (t.empty()) fail("ingestion-error", path + ":" + std::to_string(line) + ": empty number");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    fail("ingestion-error", path + ":" + std::to_string(line) + ": bad number '" + t + "'");
  if (!allow_nonfinite && !std::isfinite(v))
    fail("ingestion-error", path + ":" + std::to_string(line) + ": non-finite value '" + t + "'");
  return v;
}

long parse_long(const std::string& token, const std::string& path, int line) {
  const std::string t = trim(token);
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    fail("ingestion-error", path + ":" + std::to_string(line) + ": bad integer '" + t + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  // Shortest text that still round-trips exactly. Scanning all precisions
  // matters: "%.1g" turns 50 into "5e+01", which round-trips but is longer
  // than the "%.2g" rendering "50".
  char buf[40];
  std::string best;
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) != v) continue;
    if (best.empty() || std::strlen(buf) < best.size()) best = buf;
  }
  if (!best.empty()) return best;
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_timestamp(std::int64_t seconds) {
  std::int64_t day = seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
  std::int64_t rem = seconds - day * 86400;
  int y = 0, m = 0, d = 0;
  civil_from_days(day, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string format_date(std::int64_t days) {
  int y = 0, m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
  return buf;
}

LoadedMatrix load_feature_matrix(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail("ingestion-error", path + ": empty file");
  auto header = split(trim(line), ',');
  if (header.size() < 2 || header[0] != "id")
    fail("ingestion-error", path + ":1: header must be id,col_0,...");
  for (std::size_t j = 1; j < header.size(); ++j)
    if (header[j] != "col_" + std::to_string(j - 1))
      fail("ingestion-error", path + ":1: unexpected column header '" + header[j] + "'");
  const std::size_t n_cols = header.size() - 1;

  std::vector<std::string> ids;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != n_cols + 1)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(n_cols + 1) + " fields, got " +
                                  std::to_string(parts.size()));
    std::string id = trim(parts[0]);
    if (id.empty()) fail("ingestion-error", path + ":" + std::to_string(line_no) + ": empty id");
    if (!seen.insert(id).second)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": duplicate id '" + id + "'");
    ids.push_back(std::move(id));
    for (std::size_t j = 1; j < parts.size(); ++j)
      values.push_back(parse_double(parts[j], path, line_no));
  }
  if (ids.empty()) fail("ingestion-error", path + ": no data rows");

  LoadedMatrix out;
  out.ids = std::move(ids);
  out.features = Matrix(static_cast<Eigen::Index>(out.ids.size()), static_cast<Eigen::Index>(n_cols));
  for (std::size_t i = 0; i < out.ids.size(); ++i)
    for (std::size_t j = 0; j < n_cols; ++j)
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          values[i * n_cols + j];
  return out;
}

void save_feature_matrix(const std::string& path, const Matrix& features,
                         const std::vector<std::string>& ids) {
  if (static_cast<Eigen::Index>(ids.size()) != features.rows())
    fail("shape-error", "id count does not match matrix rows");
  std::ofstream out = open_out(path);
  out << "id";
  for (Eigen::Index j = 0; j < features.cols(); ++j) out << ",col_" << j;
  out << "\n";
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < features.cols(); ++j) out << ',' << format_double(features(i, j));
    out << "\n";
  }
}

std::vector<std::pair<std::string, int>> load_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail("ingestion-error", path + ": empty file");
  if (trim(line) != "id,label") fail("ingestion-error", path + ":1: header must be id,label");
  std::vector<std::pair<std::string, int>> out;
  std::unordered_set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != 2)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": expected id,label");
    std::string id = trim(parts[0]);
    if (!seen.insert(id).second)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": duplicate id '" + id + "'");
    long y = parse_long(parts[1], path, line_no);
    if (y < 1)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": label must be >= 1");
    out.emplace_back(std::move(id), static_cast<int>(y));
  }
  return out;
}

void save_labels(const std::string& path, const std::vector<std::string>& ids,
                 const std::vector<int>& labels) {
  if (ids.size() != labels.size()) fail("shape-error", "id and label counts differ");
  std::ofstream out = open_out(path);
  out << "id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << labels[i] << "\n";
}

FeatureSchema load_schema(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>> groups;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    auto hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    std::istringstream is(s);
    std::string first, second, extra;
    is >> first >> second;
    if (is >> extra)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": too many tokens");
    if (first == "group") {
      if (second.empty())
        fail("ingestion-error", path + ":" + std::to_string(line_no) + ": group needs a name");
      groups.emplace_back(second, std::vector<std::pair<std::string, int>>{});
    } else {
      if (groups.empty())
        fail("ingestion-error",
             path + ":" + std::to_string(line_no) + ": subgroup before any group line");
      long width = parse_long(second, path, line_no);
      groups.back().second.emplace_back(first, static_cast<int>(width));
    }
  }
  if (groups.empty()) fail("ingestion-error", path + ": no groups");
  return FeatureSchema::from_groups(groups);
}

void save_schema(const std::string& path, const FeatureSchema& schema) {
  std::ofstream out = open_out(path);
  std::string current;
  for (const auto& b : schema.blocks()) {
    if (b.group != current) {
      out << "group " << b.group << "\n";
      current = b.group;
    }
    out << b.name << ' ' << b.width << "\n";
  }
}

Dataset join_dataset(const LoadedMatrix& matrix,
                     const std::vector<std::pair<std::string, int>>& labels,
                     const FeatureSchema& schema, int n_classes, JoinStats* stats) {
  if (schema.total_columns() != matrix.features.cols())
    fail("ingestion-error", "schema declares " + std::to_string(schema.total_columns()) +
                                " columns but the matrix has " +
                                std::to_string(matrix.features.cols()));
  std::unordered_map<std::string, int> label_of;
  for (const auto& [id, y] : labels)
    if (!label_of.emplace(id, y).second) fail("ingestion-error", "duplicate label id: " + id);

  JoinStats local;
  local.matrix_rows = static_cast<int>(matrix.ids.size());
  local.label_rows = static_cast<int>(labels.size());
  std::vector<int> rows;
  std::vector<int> y;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
    auto it = label_of.find(matrix.ids[i]);
    if (it == label_of.end()) {
      local.matrix_without_label += 1;
      continue;
    }
    rows.push_back(static_cast<int>(i));
    y.push_back(it->second);
    ids.push_back(matrix.ids[i]);
  }
  local.joined = static_cast<int>(rows.size());
  local.label_without_matrix = local.label_rows - local.joined;
  if (stats) *stats = local;
  if (rows.empty()) fail("empty-input", "no feature row has a label");

  Matrix f(static_cast<Eigen::Index>(rows.size()), matrix.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    f.row(static_cast<Eigen::Index>(i)) = matrix.features.row(rows[i]);
  return Dataset(std::move(f), std::move(y), std::move(ids), schema, n_classes);
}

Dataset load_dataset(const std::string& features_path, const std::string& labels_path,
                     const std::string& schema_path, int n_classes, JoinStats* stats) {
  return join_dataset(load_feature_matrix(features_path), load_labels(labels_path),
                      load_schema(schema_path), n_classes, stats);
}

std::vector<CommentRecord> load_comments_jsonl(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<CommentRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
    }
    try {
      CommentRecord r;
      r.user_id = j.at("user_id").get<std::string>();
      r.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
      r.community_id = j.at("community_id").get<std::string>();
      r.toxicity = j.at("toxicity").get<double>();
      if (!(r.toxicity >= 0.0 && r.toxicity <= 1.0))
        fail("ingestion-error",
             path + ":" + std::to_string(line_no) + ": toxicity outside [0, 1]");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_comments_jsonl(const std::string& path, const std::vector<CommentRecord>& comments) {
  std::ofstream out = open_out(path);
  for (const auto& c : comments) {
    nlohmann::json j;
    j["user_id"] = c.user_id;
    j["timestamp"] = format_timestamp(c.timestamp);
    j["community_id"] = c.community_id;
    j["toxicity"] = c.toxicity;
    out << j.dump() << "\n";
  }
}

namespace {

void write_vector(std::ofstream& out, const std::string& name, const Vector& v) {
  out << name;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_double(v(i));
  out << "\n";
}

void write_matrix_rows(std::ofstream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << "\n";
  }
}

void write_classifier(std::ofstream& out, const ProbClassifier& clf) {
  out << "features " << clf.n_features() << "\n";
  write_vector(out, "mean", clf.standardizer().mean);
  write_vector(out, "stdev", clf.standardizer().stdev);
  write_vector(out, "bias", clf.bias());
  out << "weights\n";
  write_matrix_rows(out, clf.weights());
}

class ModelReader {
 public:
  ModelReader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::string next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!trim(line).empty()) return trim(line);
    }
    fail("ingestion-error", path_ + ": unexpected end of file");
  }

  std::vector<std::string> expect(const std::string& keyword) {
    auto tokens = split_ws(next_line());
    if (tokens.empty() || tokens[0] != keyword)
      fail("ingestion-error", path_ + ":" + std::to_string(line_no_) + ": expected '" + keyword + "'");
    return tokens;
  }

  Vector read_vector(const std::string& keyword, Eigen::Index n) {
    auto tokens = expect(keyword);
    if (static_cast<Eigen::Index>(tokens.size()) != n + 1)
      fail("ingestion-error", path_ + ":" + std::to_string(line_no_) + ": expected " +
                                  std::to_string(n) + " values after '" + keyword + "'");
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v(i) = parse_double(tokens[static_cast<std::size_t>(i + 1)], path_, line_no_, true);
    return v;
  }

  Matrix read_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      auto tokens = split_ws(next_line());
      if (static_cast<Eigen::Index>(tokens.size()) != cols)
        fail("ingestion-error",
             path_ + ":" + std::to_string(line_no_) + ": expected " + std::to_string(cols) + " values");
      for (Eigen::Index j = 0; j < cols; ++j)
        m(i, j) = parse_double(tokens[static_cast<std::size_t>(j)], path_, line_no_, true);
    }
    return m;
  }

  int line_no() const { return line_no_; }

  static std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
  }

 private:
  std::ifstream& in_;
  std::string path_;
  int line_no_ = 0;
};

ProbClassifier read_classifier(ModelReader& r, int n_classes) {
  auto ftok = r.expect("features");
  if (ftok.size() != 2) fail("ingestion-error", "bad features line in model file");
  auto d = static_cast<Eigen::Index>(std::stol(ftok[1]));
  Standardizer pre;
  pre.mean = r.read_vector("mean", d);
  pre.stdev = r.read_vector("stdev", d);
  Vector bias = r.read_vector("bias", n_classes);
  r.expect("weights");
  Matrix w = r.read_matrix(d, n_classes);
  return ProbClassifier(std::move(w), std::move(bias), std::move(pre), n_classes);
}

}  // namespace

void save_model(const std::string& path, const Quantifier& quantifier) {
  std::ofstream out = open_out(path);
  out << "ordq-model 1\n";
  out << "kind " << to_string(quantifier.kind()) << "\n";
  out << "classes " << quantifier.train_prior().size() << "\n";
  write_vector(out, "train_prior", quantifier.train_prior().values());
  switch (quantifier.kind()) {
    case QuantifierKind::MLPE:
      break;
    case QuantifierKind::CC:
      write_classifier(out, static_cast<const CcQuantifier&>(quantifier).classifier());
      break;
    case QuantifierKind::EMQ: {
      const auto& emq = static_cast<const EmqQuantifier&>(quantifier);
      write_classifier(out, emq.classifier());
      out << "emq_max_iter " << emq.options().max_iter << "\n";
      out << "emq_eps " << format_double(emq.options().eps) << "\n";
      break;
    }
    case QuantifierKind::PACC: {
      const auto& pacc = static_cast<const PaccQuantifier&>(quantifier);
      write_classifier(out, pacc.classifier());
      out << "correction\n";
      write_matrix_rows(out, pacc.correction());
      break;
    }
  }
}

std::unique_ptr<Quantifier> load_model(const std::string& path) {
  std::ifstream in = open_in(path);
  ModelReader r(in, path);
  auto magic = r.expect("ordq-model");
  if (magic.size() != 2 || magic[1] != "1")
    fail("ingestion-error", path + ": unsupported model file version");
  auto kind_tok = r.expect("kind");
  if (kind_tok.size() != 2) fail("ingestion-error", path + ": bad kind line");
  QuantifierKind kind = quantifier_kind_from_string(kind_tok[1]);
  auto classes_tok = r.expect("classes");
  if (classes_tok.size() != 2) fail("ingestion-error", path + ": bad classes line");
  int n = static_cast<int>(std::stol(classes_tok[1]));
  if (n < 2) fail("ingestion-error", path + ": class count must be >= 2");
  PrevalenceVector prior = PrevalenceVector::checked(r.read_vector("train_prior", n));

  switch (kind) {
    case QuantifierKind::MLPE:
      return std::make_unique<MlpeQuantifier>(std::move(prior));
    case QuantifierKind::CC:
      return std::make_unique<CcQuantifier>(read_classifier(r, n), std::move(prior));
    case QuantifierKind::EMQ: {
      ProbClassifier clf = read_classifier(r, n);
      EmqOptions opt;
      auto mi = r.expect("emq_max_iter");
      opt.max_iter = static_cast<int>(std::stol(mi.at(1)));
      auto ep = r.expect("emq_eps");
      opt.eps = std::strtod(ep.at(1).c_str(), nullptr);
      return std::make_unique<EmqQuantifier>(std::move(clf), std::move(prior), opt);
    }
    case QuantifierKind::PACC: {
      ProbClassifier clf = read_classifier(r, n);
      r.expect("correction");
      Matrix corr = r.read_matrix(n, n);
      return std::make_unique<PaccQuantifier>(std::move(clf), std::move(corr), std::move(prior));
    }
  }
  fail("ingestion-error", path + ": unreachable");
}

void save_eval_csv(const std::string& path, const EvalResult& result) {
  std::ofstream out = open_out(path);
  int n = result.records().empty() ? 0 : result.records().front().true_prev.size();
  out << "repetition,train_size,sample_idx";
  for (int i = 1; i <= n; ++i) out << ",true_prev_" << i;
  for (int i = 1; i <= n; ++i) out << ",est_prev_" << i;
  out << ",nmd\n";
  for (const auto& r : result.records()) {
    out << r.repetition << ',' << r.train_size << ',' << r.sample_idx;
    for (int i = 0; i < n; ++i) out << ',' << format_double(r.true_prev[i]);
    for (int i = 0; i < n; ++i) out << ',' << format_double(r.est_prev[i]);
    out << ',' << format_double(r.nmd_value) << "\n";
  }
}

EvalResult load_eval_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail("ingestion-error", path + ": empty file");
  auto header = split(trim(line), ',');
  if (header.size() < 4 || header[0] != "repetition" || header[1] != "train_size" ||
      header[2] != "sample_idx" || header.back() != "nmd")
    fail("ingestion-error", path + ":1: unexpected header");
  if ((header.size() - 4) % 2 != 0) fail("ingestion-error", path + ":1: uneven prevalence columns");
  int n = static_cast<int>((header.size() - 4) / 2);

  std::vector<EvalRecord> records;
  std::set<int> sizes;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != header.size())
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": wrong field count");
    EvalRecord r;
    r.repetition = static_cast<int>(parse_long(parts[0], path, line_no));
    r.train_size = static_cast<int>(parse_long(parts[1], path, line_no));
    r.sample_idx = static_cast<int>(parse_long(parts[2], path, line_no));
    Vector tp(n), ep(n);
    for (int i = 0; i < n; ++i) {
      tp(i) = parse_double(parts[static_cast<std::size_t>(3 + i)], path, line_no);
      ep(i) = parse_double(parts[static_cast<std::size_t>(3 + n + i)], path, line_no);
    }
    r.true_prev = PrevalenceVector::checked(std::move(tp));
    r.est_prev = PrevalenceVector::checked(std::move(ep));
    r.nmd_value = parse_double(parts.back(), path, line_no);
    sizes.insert(r.train_size);
    records.push_back(std::move(r));
  }
  return EvalResult(std::move(records), std::vector<int>(sizes.begin(), sizes.end()), 0);
}

void save_selection(const std::string& path, const BlockSelection& selection) {
  std::ofstream out = open_out(path);
  for (const auto& name : selection.names()) out << name << "\n";
}

BlockSelection load_selection(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (!s.empty()) names.push_back(std::move(s));
  }
  return BlockSelection::of(names);
}

void save_trace_csv(const std::string& path, const SelectionTrace& trace) {
  std::ofstream out = open_out(path);
  out << "round,block,action,loss_before,loss_after\n";
  for (const auto& e : trace.entries)
    out << e.round << ',' << e.block << ',' << to_string(e.action) << ','
        << format_double(e.loss_before) << ',' << format_double(e.loss_after) << "\n";
}

void save_importance_csv(const std::string& path, const ImportanceReport& report) {
  std::ofstream out = open_out(path);
  out << "block,rie,status\n";
  for (const auto& b : report.blocks) {
    out << b.block << ',';
    if (b.defined)
      out << format_double(b.rie_value) << ",ok\n";
    else
      out << ",undefined-dominant\n";
  }
}

std::vector<BlockImportance> load_importance_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail("ingestion-error", path + ": empty file");
  if (trim(line) != "block,rie,status")
    fail("ingestion-error", path + ":1: header must be block,rie,status");
  std::vector<BlockImportance> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, ',');
    if (parts.size() != 3)
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": expected block,rie,status");
    BlockImportance b;
    b.block = trim(parts[0]);
    std::string status = trim(parts[2]);
    if (status == "ok") {
      b.defined = true;
      b.rie_value = parse_double(parts[1], path, line_no);
    } else if (status == "undefined-dominant") {
      b.defined = false;
      b.rie_value = std::numeric_limits<double>::quiet_NaN();
    } else {
      fail("ingestion-error", path + ":" + std::to_string(line_no) + ": bad status '" + status + "'");
    }
    out.push_back(std::move(b));
  }
  return out;
}

void save_overlap_csv(const std::string& path, const std::vector<OverlapEntry>& entries) {
  std::ofstream out = open_out(path);
  out << "task_a,task_b,jaccard,rbo\n";
  for (const auto& e : entries)
    out << e.task_a << ',' << e.task_b << ',' << format_double(e.jaccard_value) << ','
        << format_double(e.rbo_value) << "\n";
}

void save_heatmap_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::vector<BlockImportance>>>& tasks) {
  std::ofstream out = open_out(path);
  out << "task,block,rie_percent\n";
  for (const auto& [task, blocks] : tasks) {
    for (const auto& b : blocks) {
      out << task << ',' << b.block << ',';
      if (b.defined)
        out << format_double(b.rie_value * 100.0) << "\n";
      else
        out << "\n";  // undefined-dominant: blank cell
    }
  }
}

}  // namespace ordq
