#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordq/config.hpp"
#include "ordq/error.hpp"
#include "ordq/io.hpp"
#include "ordq/metrics.hpp"
#include "ordq/overlap.hpp"
#include "ordq/protocol.hpp"
#include "ordq/selection.hpp"
#include "ordq/synth.hpp"

namespace fs = std::filesystem;
using namespace ordq;

namespace {

// Command-line values layered over the config file; empty string means unset.
struct CliArgs {
  std::string config;
  std::string task;
  std::string quantifier;
  std::string out;
  std::string features;
  std::string labels;
  std::string schema;
  std::string comments;
  std::string test;
  std::string selection_file;
  std::vector<std::string> report_dirs;
  long seed = -1;
  long threads = -1;
};

RunConfig materialize(const CliArgs& a) {
  ConfigFile cfg;
  if (!a.config.empty()) cfg = ConfigFile::parse_file(a.config);
  if (!a.task.empty()) cfg.set("run.task", a.task);
  if (!a.quantifier.empty()) cfg.set("run.quantifier", a.quantifier);
  if (!a.out.empty()) cfg.set("run.out", a.out);
  if (a.seed >= 0) cfg.set("run.seed", std::to_string(a.seed));
  if (a.threads >= 0) cfg.set("run.threads", std::to_string(a.threads));
  if (!a.features.empty()) cfg.set("paths.features", a.features);
  if (!a.labels.empty()) cfg.set("paths.labels", a.labels);
  if (!a.schema.empty()) cfg.set("paths.schema", a.schema);
  if (!a.comments.empty()) cfg.set("paths.comments", a.comments);
  if (!a.test.empty()) cfg.set("paths.test", a.test);
  return RunConfig::from(cfg);
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.out_dir);
  return (fs::path(rc.out_dir) / name).string();
}

Dataset load_training_data(const RunConfig& rc, JoinStats* stats = nullptr) {
  if (rc.features_path.empty() || rc.labels_path.empty() || rc.schema_path.empty())
    fail("parameter-error", "need --features, --labels and --schema (or [paths] config keys)");
  return load_dataset(rc.features_path, rc.labels_path, rc.schema_path, 5, stats);
}

void cmd_synth(const CliArgs& args) {
  RunConfig rc = materialize(args);
  if (rc.synth.blocks.empty() && rc.synth_comments.cohorts.empty())
    fail("parameter-error", "synth config has neither block.N nor cohort.N entries");
  if (!rc.synth.blocks.empty()) {
    Dataset d = generate(rc.synth);
    save_feature_matrix(out_path(rc, "features.csv"), d.features(), d.ids());
    save_labels(out_path(rc, "labels.csv"), d.ids(), d.labels());
    save_schema(out_path(rc, "schema.txt"), d.schema());
    std::cout << "features " << d.rows() << "x" << d.cols() << " over "
              << d.schema().blocks().size() << " blocks\n";
  }
  if (!rc.synth_comments.cohorts.empty()) {
    auto comments = generate_comments(rc.synth_comments);
    save_comments_jsonl(out_path(rc, "comments.jsonl"), comments);
    std::cout << "comments " << comments.size() << " for " << rc.synth_comments.total_users()
              << " users\n";
  }
}

void cmd_label(const CliArgs& args) {
  RunConfig rc = materialize(args);
  if (rc.comments_path.empty() || rc.features_path.empty() || rc.schema_path.empty())
    fail("parameter-error", "need --comments, --features and --schema (or [paths] config keys)");
  auto comments = load_comments_jsonl(rc.comments_path);
  LoadedMatrix matrix = load_feature_matrix(rc.features_path);
  FeatureSchema schema = load_schema(rc.schema_path);
  if (schema.total_columns() != matrix.features.cols())
    fail("ingestion-error", "schema declares " + std::to_string(schema.total_columns()) +
                                " columns but the matrix has " +
                                std::to_string(matrix.features.cols()));
  LabellingStats stats;
  Dataset labelled =
      build_labelled_dataset(comments, matrix.features, matrix.ids, schema, rc.labelling, &stats);
  std::string path = out_path(rc, "labels_" + to_string(rc.labelling.task) + ".csv");
  save_labels(path, labelled.ids(), labelled.labels());
  std::cout << "task " << to_string(rc.labelling.task) << "\n"
            << "users_in_matrix " << stats.users_in_matrix << "\n"
            << "labelled " << stats.labelled << "\n"
            << "no_comments " << stats.no_comments << "\n"
            << "ineligible " << stats.ineligible << "\n"
            << "undefined_measure " << stats.undefined_measure << "\n"
            << "undefined_effect " << stats.undefined_effect << "\n"
            << "comments_unmatched " << stats.comments_unmatched << "\n";
  PrevalenceVector prev = labelled.prevalence();
  std::cout << "prevalence";
  for (int i = 0; i < prev.size(); ++i) std::cout << ' ' << format_double(prev[i]);
  std::cout << "\n";
}

void cmd_quantify(const CliArgs& args) {
  RunConfig rc = materialize(args);
  Dataset data = load_training_data(rc);
  QuantifierKind kind = quantifier_kind_from_string(rc.quantifier);

  QuantifierOptions opt = rc.protocol.quantifier;
  opt.seed = rc.seed;
  if (kind != QuantifierKind::MLPE) {
    std::vector<std::string> warnings;
    GridPoint point = grid_search(data, rc.protocol.grid, kind, opt, rc.protocol.model_selection,
                                  rc.seed, rc.threads, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    opt.reg = point.reg;
    opt.weighting = point.weighting;
    std::cout << "reg " << format_double(point.reg) << "\n"
              << "weighting " << to_string(point.weighting) << "\n";
  }
  auto model = fit_quantifier(kind, data, opt);
  save_model(out_path(rc, "model.txt"), *model);
  std::cout << "model " << to_string(kind) << " on " << data.rows() << " rows\n";

  if (!rc.test_path.empty()) {
    LoadedMatrix test = load_feature_matrix(rc.test_path);
    if (kind != QuantifierKind::MLPE && test.features.cols() != data.cols())
      fail("shape-error", "test matrix has " + std::to_string(test.features.cols()) +
                              " columns, the model expects " + std::to_string(data.cols()));
    PrevalenceVector est = model->estimate(test.features);
    std::ofstream out(out_path(rc, "prevalence.csv"));
    out << "class,prevalence\n";
    for (int i = 0; i < est.size(); ++i) out << (i + 1) << ',' << format_double(est[i]) << "\n";
    std::cout << "estimate";
    for (int i = 0; i < est.size(); ++i) std::cout << ' ' << format_double(est[i]);
    std::cout << "\n";
  }
}

void cmd_stress(const CliArgs& args) {
  RunConfig rc = materialize(args);
  Dataset data = load_training_data(rc);
  QuantifierKind kind = quantifier_kind_from_string(rc.quantifier);
  BlockSelection selection = args.selection_file.empty()
                                 ? BlockSelection::all(data.schema())
                                 : load_selection(args.selection_file);
  EvalResult result = run_protocol(data, selection, kind, rc.protocol);
  save_eval_csv(out_path(rc, "eval.csv"), result);
  for (int size : result.train_sizes())
    std::cout << "train_size " << size << " mean_nmd " << format_double(result.mean_nmd(size))
              << "\n";
  std::cout << "mnmd " << format_double(result.mnmd()) << "\n"
            << "skipped_samples " << result.skipped_samples() << "\n"
            << "records " << result.records().size() << "\n";
}

void write_summary(const std::string& path, const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) fail("io-error", "cannot open for writing: " + path);
  for (const auto& [k, v] : kv) out << k << ' ' << v << "\n";
}

std::map<std::string, std::string> read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("io-error", "cannot open for reading: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) continue;
    kv[line.substr(0, sp)] = line.substr(sp + 1);
  }
  return kv;
}

void cmd_select(const CliArgs& args) {
  RunConfig rc = materialize(args);
  Dataset data = load_training_data(rc);
  QuantifierKind kind = quantifier_kind_from_string(rc.quantifier);

  ProtocolLoss loss(data, kind, rc.protocol);
  GreedyOptions opts = rc.greedy;
  if (rc.selection_start) opts.start = BlockSelection::of(*rc.selection_start);
  auto [final_selection, trace] = greedy_select(data.schema(), std::cref(loss), opts);
  ImportanceReport importance = importance_report(final_selection, std::cref(loss));
  double mnmd_all = loss(BlockSelection::all(data.schema()));

  save_selection(out_path(rc, "selection.txt"), final_selection);
  save_trace_csv(out_path(rc, "trace.csv"), trace);
  save_importance_csv(out_path(rc, "importance.csv"), importance);

  std::map<std::string, std::string> summary;
  summary["task"] = rc.task;
  summary["quantifier"] = to_string(kind);
  summary["selected"] = std::to_string(final_selection.names().size());
  summary["mnmd_all"] = format_double(mnmd_all);
  summary["mnmd_selected"] = format_double(trace.final_loss);
  try {
    summary["rie_overall"] = format_double(rie(mnmd_all, trace.final_loss));
  } catch (const Error&) {
    summary["rie_overall"] = "undefined";
  }
  summary["gini"] = format_double(importance.gini_value);
  summary["rounds"] = std::to_string(trace.rounds);
  summary["initial_evaluations"] = std::to_string(trace.initial_evaluations);
  summary["toggle_evaluations"] = std::to_string(trace.toggle_evaluations);
  summary["protocol_evaluations"] = std::to_string(loss.evaluations());
  write_summary(out_path(rc, "summary.txt"), summary);

  std::cout << "selected";
  for (const auto& name : final_selection.names()) std::cout << ' ' << name;
  std::cout << "\n"
            << "mnmd_all " << summary["mnmd_all"] << "\n"
            << "mnmd_selected " << summary["mnmd_selected"] << "\n"
            << "rie_overall " << summary["rie_overall"] << "\n"
            << "gini " << summary["gini"] << "\n"
            << "protocol_evaluations " << summary["protocol_evaluations"] << "\n";
}

std::string percent(const std::string& raw) {
  if (raw == "undefined" || raw.empty()) return "undefined";
  return format_double(std::strtod(raw.c_str(), nullptr) * 100.0) + "%";
}

void cmd_report(const CliArgs& args) {
  RunConfig rc = materialize(args);
  if (args.report_dirs.empty()) fail("parameter-error", "report needs at least one task directory");

  struct TaskData {
    std::map<std::string, std::string> summary;
    BlockSelection selection;
    std::vector<BlockImportance> importance;
  };
  std::vector<TaskData> loaded;
  std::vector<TaskSelection> tasks;
  for (const auto& dir : args.report_dirs) {
    TaskData t;
    t.summary = read_summary((fs::path(dir) / "summary.txt").string());
    t.selection = load_selection((fs::path(dir) / "selection.txt").string());
    t.importance = load_importance_csv((fs::path(dir) / "importance.csv").string());
    if (!t.summary.count("task"))
      fail("ingestion-error", dir + "/summary.txt: missing 'task' line");
    ImportanceReport rep;
    rep.blocks = t.importance;
    tasks.push_back(TaskSelection{t.summary["task"], t.selection, importance_ranking(rep)});
    loaded.push_back(std::move(t));
  }

  auto overlap = cross_task_overlap(tasks, rc.report_persistence);
  save_overlap_csv(out_path(rc, "overlap.csv"), overlap);

  std::vector<std::pair<std::string, std::vector<BlockImportance>>> heat;
  for (std::size_t i = 0; i < tasks.size(); ++i) heat.emplace_back(tasks[i].task, loaded[i].importance);
  save_heatmap_csv(out_path(rc, "heatmap.csv"), heat);

  std::ofstream out(out_path(rc, "report.txt"));
  if (!out) fail("io-error", "cannot write report.txt");
  out << "Feature-block selection summary\n";
  out << "===============================\n\n";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& s = loaded[i].summary;
    auto get = [&](const char* k) { return s.count(k) ? s.at(k) : std::string("?"); };
    out << "task " << tasks[i].task << " (" << get("quantifier") << ")\n";
    out << "  blocks selected:      " << get("selected") << "\n";
    out << "  mnmd all blocks:      " << get("mnmd_all") << "\n";
    out << "  mnmd selected:        " << get("mnmd_selected") << "\n";
    out << "  error reduction:      " << percent(get("rie_overall")) << "\n";
    out << "  importance gini:      " << get("gini") << "\n";
    out << "  blocks by importance:\n";
    ImportanceReport rep;
    rep.blocks = loaded[i].importance;
    for (const auto& name : importance_ranking(rep)) {
      auto it = std::find_if(rep.blocks.begin(), rep.blocks.end(),
                             [&](const BlockImportance& b) { return b.block == name; });
      out << "    " << name << "  ";
      if (it != rep.blocks.end() && it->defined)
        out << percent(format_double(it->rie_value)) << "\n";
      else
        out << "undefined-dominant\n";
    }
    out << "\n";
  }
  if (!overlap.empty()) {
    out << "cross-task selection overlap\n";
    for (const auto& e : overlap)
      out << "  " << e.task_a << " vs " << e.task_b << "  jaccard " << format_double(e.jaccard_value)
          << "  rbo " << format_double(e.rbo_value) << "\n";
  }
  std::cout << "report written for " << tasks.size() << " task(s)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordinal quantification under prior shift: synthesis, labelling, "
               "stress testing and feature-block selection"};
  app.require_subcommand(1);

  CliArgs args;
  app.add_option("--config", args.config, "key-value config file");
  app.add_option("--task", args.task, "behaviour task: activity|toxicity|diversity");
  app.add_option("--quantifier", args.quantifier, "cc|pacc|emq|mlpe");
  app.add_option("--out", args.out, "output directory");
  app.add_option("--seed", args.seed, "master random seed");
  app.add_option("--threads", args.threads, "worker threads (0: all cores)");
  app.add_option("--features", args.features, "feature matrix CSV");
  app.add_option("--labels", args.labels, "label CSV");
  app.add_option("--schema", args.schema, "feature schema file");
  app.add_option("--comments", args.comments, "comment stream JSONL");

  auto* synth = app.add_subcommand("synth", "generate synthetic features and comment streams");
  synth->callback([&] { cmd_synth(args); });

  auto* label = app.add_subcommand("label", "derive behaviour-change labels from comments");
  label->callback([&] { cmd_label(args); });

  auto* quantify = app.add_subcommand("quantify", "fit a quantifier, optionally estimate a test set");
  quantify->add_option("--test", args.test, "unlabelled feature matrix CSV to estimate");
  quantify->callback([&] { cmd_quantify(args); });

  auto* stress = app.add_subcommand("stress", "evaluate under the artificial-prevalence protocol");
  stress->add_option("--selection", args.selection_file, "restrict to the blocks listed in this file");
  stress->callback([&] { cmd_stress(args); });

  auto* select = app.add_subcommand("select", "greedy feature-block selection with importance scores");
  select->callback([&] { cmd_select(args); });

  auto* report = app.add_subcommand("report", "aggregate select outputs across tasks");
  report->add_option("dirs", args.report_dirs, "task output directories from 'select'");
  report->callback([&] { cmd_report(args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
