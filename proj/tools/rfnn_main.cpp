// Command line front end: featurize, train, evaluate, predict, rules, benchmark.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 training failure.

#include <CLI11.hpp>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rfnn/dataset.hpp"
#include "rfnn/errors.hpp"
#include "rfnn/evaluation.hpp"
#include "rfnn/model_io.hpp"
#include "rfnn/network.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/rules.hpp"

namespace {

struct CommonModelFlags {
  int m = 2;
  int b = 16;
  double rho = 0.6;
  double alpha = 0.01;
  std::string neuron = "uni";
  std::string boundary = "max";
  int lc_cap = 200;
  int folds = 10;
};

void add_model_flags(CLI::App* cmd, CommonModelFlags& flags) {
  cmd->add_option("--m", flags.m, "Fuzzy sets per feature")->check(CLI::Range(2, 64));
  cmd->add_option("--b", flags.b, "Bootstrap replications")->check(CLI::PositiveNumber);
  cmd->add_option("--rho", flags.rho, "Consensus vote threshold in (0,1]")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--alpha", flags.alpha, "Leaky ReLU slope")->check(CLI::Range(1e-9, 0.999999));
  cmd->add_option("--neuron", flags.neuron, "Logic neuron type")
      ->check(CLI::IsMember({"uni", "and", "or"}));
  cmd->add_option("--boundary", flags.boundary, "Uninorm mixed-region boundary")
      ->check(CLI::IsMember({"max", "min"}));
  cmd->add_option("--lc-cap", flags.lc_cap, "Screened candidate cap")->check(CLI::PositiveNumber);
  cmd->add_option("--folds", flags.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
}

rfnn::ModelConfig to_config(const CommonModelFlags& flags, std::uint64_t seed) {
  rfnn::ModelConfig config;
  config.num_mfs = flags.m;
  config.bootstrap_reps = flags.b;
  config.consensus_rho = flags.rho;
  config.leaky_alpha = flags.alpha;
  config.neuron_kind = rfnn::neuron_kind_from_string(flags.neuron);
  config.boundary_mode = rfnn::boundary_mode_from_string(flags.boundary);
  config.candidate_cap = flags.lc_cap;
  config.cv_folds = flags.folds;
  config.seed = seed;
  return config;
}

// --seed wins; FNN_SEED is the fallback; otherwise 0
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
  if (flag_seed.has_value()) return *flag_seed;
  const char* env = std::getenv("FNN_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("FNN_SEED is not an unsigned integer: ") + env);
  }
}

void write_or_print(const std::string& out_path, const std::string& contents) {
  if (out_path.empty()) {
    std::cout << contents;
  } else {
    rfnn::atomic_write_file(out_path, contents);
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> read_statement_lines(const std::string& path) {
  std::string text = rfnn::read_text_file(path);
  std::vector<std::string> lines;
  std::string line;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(line));
      line.clear();
    } else if (c != '\r') {
      line += c;
    }
  }
  if (!line.empty()) lines.push_back(std::move(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw rfnn::DataError(path + ": no statements");
  return lines;
}

int run_featurize(const std::string& input, const std::string& scores_path,
                  const std::string& label, const std::string& out_path) {
  const std::vector<std::string> statements = read_statement_lines(input);
  rfnn::SqlScoreTable table;
  const rfnn::SqlScoreTable* table_ptr = nullptr;
  if (!scores_path.empty()) {
    table = rfnn::load_score_table(scores_path, label);
    table_ptr = &table;
  }
  const rfnn::SqlFeatures features = rfnn::featurize_sql(statements, table_ptr);

  std::ostringstream out;
  for (std::size_t c = 0; c < features.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << features.columns[c];
  }
  const bool with_labels = !features.labels.empty();
  if (with_labels) out << ',' << label;
  out << '\n';
  for (Eigen::Index i = 0; i < features.values.rows(); ++i) {
    for (Eigen::Index c = 0; c < features.values.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(features.values(i, c));
    }
    if (with_labels) out << ',' << features.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  write_or_print(out_path, out.str());
  return 0;
}

int run_train(const std::string& data_path, const std::string& label,
              const CommonModelFlags& flags, std::uint64_t seed, const std::string& out_path) {
  const rfnn::Dataset data = rfnn::load_csv(data_path, label);
  const rfnn::TrainedModel model = rfnn::train(data, to_config(flags, seed));
  rfnn::save_model(model, out_path);
  std::cerr << "trained on " << data.num_samples() << " samples: " << model.report.candidates
            << " candidates, " << model.report.screened << " screened, " << model.report.selected
            << " selected";
  if (model.report.bias_only) std::cerr << " (bias-only model)";
  std::cerr << " in " << model.report.train_seconds << " s\n";
  return 0;
}

void check_features_match(const std::vector<std::string>& model_names,
                          const std::vector<std::string>& data_names,
                          const std::string& data_path) {
  if (model_names != data_names) {
    std::string want, have;
    for (const auto& n : model_names) want += (want.empty() ? "" : ", ") + n;
    for (const auto& n : data_names) have += (have.empty() ? "" : ", ") + n;
    throw rfnn::DataError(data_path + ": feature columns [" + have +
                          "] do not match the model's [" + want + "]");
  }
}

int run_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& label, const std::string& format,
                 const std::string& out_path) {
  const rfnn::TrainedModel model = rfnn::load_model(model_path);
  const rfnn::Dataset data = rfnn::load_csv(data_path, label);
  check_features_match(model.feature_names, data.feature_names, data_path);

  const std::vector<int> predictions = rfnn::predict_batch(model, data.features);
  const Eigen::VectorXd scores = rfnn::score_batch(model, data.features);
  const rfnn::Metrics metrics = rfnn::compute_metrics(data.labels, predictions, scores);

  if (format == "json") {
    write_or_print(out_path, rfnn::metrics_to_json(metrics));
  } else {
    std::ostringstream out;
    out << "samples      " << metrics.confusion.total() << '\n'
        << "accuracy     " << format_double(metrics.accuracy) << '\n'
        << "auc          " << format_double(metrics.auc) << '\n'
        << "sensitivity  " << format_double(metrics.sensitivity) << '\n'
        << "confusion    tp=" << metrics.confusion.tp << " fp=" << metrics.confusion.fp
        << " tn=" << metrics.confusion.tn << " fn=" << metrics.confusion.fn << '\n';
    write_or_print(out_path, out.str());
  }
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& label, const std::string& out_path) {
  const rfnn::TrainedModel model = rfnn::load_model(model_path);
  const auto [names, features] = rfnn::load_csv_features(data_path, label);
  check_features_match(model.feature_names, names, data_path);

  std::ostringstream out;
  out << "prediction,score\n";
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double s = rfnn::score(model, features.row(i).transpose());
    out << (s >= 0.0 ? 1 : -1) << ',' << format_double(s) << '\n';
  }
  write_or_print(out_path, out.str());
  return 0;
}

int run_rules(const std::string& model_path, const std::string& format, int decimals,
              const std::string& out_path) {
  const rfnn::TrainedModel model = rfnn::load_model(model_path);
  const std::vector<rfnn::FuzzyRule> rules = rfnn::extract_rules(model);

  if (format == "json") {
    write_or_print(out_path, rfnn::rules_to_json(rules));
  } else {
    std::ostringstream out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      out << rfnn::render_rule(rules[i], static_cast<int>(i + 1), decimals) << '\n';
    }
    if (rules.empty()) out << "(bias-only model: no rules)\n";
    write_or_print(out_path, out.str());
  }
  return 0;
}

int run_benchmark(const std::string& data_path, const std::string& label,
                  const CommonModelFlags& flags, const std::string& grid_name,
                  const std::vector<int>& grid_m, const std::vector<int>& grid_b,
                  const std::vector<double>& grid_rho, int runs, double train_fraction,
                  std::uint64_t seed, const std::string& out_path,
                  const std::string& table_path) {
  const rfnn::Dataset data = rfnn::load_csv(data_path, label);

  rfnn::GridRanges ranges;
  if (grid_name == "paper") {
    ranges = rfnn::default_grid();
  } else {
    ranges.num_mfs = grid_m.empty() ? std::vector<int>{flags.m} : grid_m;
    ranges.bootstrap_reps = grid_b.empty() ? std::vector<int>{flags.b} : grid_b;
    ranges.consensus_rho = grid_rho.empty() ? std::vector<double>{flags.rho} : grid_rho;
  }

  const rfnn::ModelConfig base = to_config(flags, seed);
  const auto [grid_train, grid_test] =
      rfnn::stratified_split(data, train_fraction, rfnn::derive_seed(seed, 0));
  std::cerr << "grid search over " << ranges.num_mfs.size() * ranges.bootstrap_reps.size() *
                                          ranges.consensus_rho.size()
            << " cells on " << grid_train.num_samples() << " samples...\n";
  const rfnn::GridResult grid = rfnn::grid_search(grid_train, ranges, base, rfnn::derive_seed(seed, 1));
  std::cerr << "best: m=" << grid.best.num_mfs << " b=" << grid.best.bootstrap_reps
            << " rho=" << grid.best.consensus_rho << "\n";

  const rfnn::RunReport report =
      rfnn::repeated_runs(data, grid.best, runs, rfnn::derive_seed(seed, 2), train_fraction);

  std::string model_name = flags.neuron;
  for (auto& c : model_name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const std::string table = rfnn::render_metrics_table(model_name, report);

  rfnn::atomic_write_file(out_path,
                          rfnn::benchmark_report_to_json(grid, report, ranges, runs,
                                                         train_fraction, seed));
  if (!table_path.empty()) rfnn::atomic_write_file(table_path, table);
  std::cout << table;
  std::cerr << "report written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized fuzzy neural network for SQL injection detection"};
  app.require_subcommand(1);

  std::string label = "Class";
  std::optional<std::uint64_t> seed_flag;
  const auto add_label_flag = [&label](CLI::App* cmd) {
    cmd->add_option("--label", label, "Name of the label column")->capture_default_str();
  };

  // featurize
  auto* featurize = app.add_subcommand("featurize", "Turn SQL statements into feature rows");
  std::string fz_input, fz_scores, fz_out;
  featurize->add_option("--input", fz_input, "Text file, one statement per line")->required();
  featurize->add_option("--scores", fz_scores, "CSV of per-statement score columns");
  featurize->add_option("--out", fz_out, "Output CSV path (stdout when omitted)");
  add_label_flag(featurize);

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit a model and write it to a file");
  std::string tr_data, tr_out;
  CommonModelFlags tr_flags;
  train_cmd->add_option("--data", tr_data, "Labeled feature CSV")->required();
  train_cmd->add_option("--out", tr_out, "Model file to write")->required();
  train_cmd->add_option("--seed", seed_flag, "Random seed (falls back to FNN_SEED, then 0)");
  add_label_flag(train_cmd);
  add_model_flags(train_cmd, tr_flags);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a model against labeled data");
  std::string ev_model, ev_data, ev_format = "json", ev_out;
  evaluate->add_option("--model", ev_model, "Model file")->required();
  evaluate->add_option("--data", ev_data, "Labeled feature CSV")->required();
  evaluate->add_option("--format", ev_format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  evaluate->add_option("--out", ev_out, "Output path (stdout when omitted)");
  add_label_flag(evaluate);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Predict labels for feature rows");
  std::string pr_model, pr_data, pr_out;
  predict_cmd->add_option("--model", pr_model, "Model file")->required();
  predict_cmd->add_option("--data", pr_data, "Feature CSV (label column optional, ignored)")
      ->required();
  predict_cmd->add_option("--out", pr_out, "Output CSV path (stdout when omitted)");
  add_label_flag(predict_cmd);

  // rules
  auto* rules_cmd = app.add_subcommand("rules", "Print the model's IF/THEN rules");
  std::string ru_model, ru_format = "text", ru_out;
  int ru_decimals = 4;
  rules_cmd->add_option("--model", ru_model, "Model file")->required();
  rules_cmd->add_option("--format", ru_format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  rules_cmd->add_option("--decimals", ru_decimals, "Digits after the decimal point")
      ->check(CLI::Range(1, 17));
  rules_cmd->add_option("--out", ru_out, "Output path (stdout when omitted)");

  // benchmark
  auto* bench = app.add_subcommand("benchmark",
                                   "Grid search plus repeated train/test measurements");
  std::string bm_data, bm_grid = "paper", bm_out = "benchmark_report.json", bm_table;
  CommonModelFlags bm_flags;
  std::vector<int> bm_grid_m, bm_grid_b;
  std::vector<double> bm_grid_rho;
  int bm_runs = 30;
  double bm_fraction = 0.7;
  bench->add_option("--data", bm_data, "Labeled feature CSV")->required();
  bench->add_option("--grid", bm_grid, "Hyperparameter grid")
      ->check(CLI::IsMember({"paper", "custom"}));
  bench->add_option("--grid-m", bm_grid_m, "Custom grid: fuzzy set counts")->delimiter(',');
  bench->add_option("--grid-b", bm_grid_b, "Custom grid: bootstrap counts")->delimiter(',');
  bench->add_option("--grid-rho", bm_grid_rho, "Custom grid: consensus thresholds")
      ->delimiter(',');
  bench->add_option("--runs", bm_runs, "Number of repeated measurements")
      ->check(CLI::PositiveNumber);
  bench->add_option("--train-fraction", bm_fraction, "Training share of each split")
      ->check(CLI::Range(0.01, 0.99));
  bench->add_option("--seed", seed_flag, "Random seed (falls back to FNN_SEED, then 0)");
  bench->add_option("--out", bm_out, "Report JSON path")->capture_default_str();
  bench->add_option("--table", bm_table, "Also write the summary table to this file");
  add_label_flag(bench);
  add_model_flags(bench, bm_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (featurize->parsed()) return run_featurize(fz_input, fz_scores, label, fz_out);
    if (train_cmd->parsed()) {
      return run_train(tr_data, label, tr_flags, resolve_seed(seed_flag), tr_out);
    }
    if (evaluate->parsed()) return run_evaluate(ev_model, ev_data, label, ev_format, ev_out);
    if (predict_cmd->parsed()) return run_predict(pr_model, pr_data, label, pr_out);
    if (rules_cmd->parsed()) return run_rules(ru_model, ru_format, ru_decimals, ru_out);
    if (bench->parsed()) {
      return run_benchmark(bm_data, label, bm_flags, bm_grid, bm_grid_m, bm_grid_b, bm_grid_rho,
                           bm_runs, bm_fraction, resolve_seed(seed_flag), bm_out, bm_table);
    }
    std::cerr << "no command given\n";
    return 1;
  } catch (const rfnn::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const rfnn::TrainError& e) {
    std::cerr << "training error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
