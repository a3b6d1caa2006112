#include "rfnn/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rfnn/errors.hpp"

namespace rfnn {

namespace {

using nlohmann::json;

constexpr const char* kModelSchema = "rfnn-model/1";
constexpr const char* kBenchmarkSchema = "rfnn-benchmark/1";

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json config_to_json(const ModelConfig& c) {
  return {{"num_mfs", c.num_mfs},
          {"candidate_cap", c.candidate_cap},
          {"bootstrap_reps", c.bootstrap_reps},
          {"consensus_rho", c.consensus_rho},
          {"leaky_alpha", c.leaky_alpha},
          {"neuron_kind", to_string(c.neuron_kind)},
          {"boundary_mode", to_string(c.boundary_mode)},
          {"cv_folds", c.cv_folds},
          {"seed", c.seed}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.num_mfs = j.at("num_mfs").get<int>();
  c.candidate_cap = j.at("candidate_cap").get<int>();
  c.bootstrap_reps = j.at("bootstrap_reps").get<int>();
  c.consensus_rho = j.at("consensus_rho").get<double>();
  c.leaky_alpha = j.at("leaky_alpha").get<double>();
  c.neuron_kind = neuron_kind_from_string(j.at("neuron_kind").get<std::string>());
  c.boundary_mode = boundary_mode_from_string(j.at("boundary_mode").get<std::string>());
  c.cv_folds = j.at("cv_folds").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json partition_to_json(const FuzzyPartition& p) {
  json features = json::array();
  for (const auto& sets : p.per_feature) {
    json arr = json::array();
    for (const auto& mf : sets) {
      arr.push_back({{"center", mf.center}, {"sigma", mf.sigma}, {"label", mf.label}});
    }
    features.push_back(std::move(arr));
  }
  return features;
}

FuzzyPartition partition_from_json(const json& j) {
  FuzzyPartition p;
  for (const auto& sets : j) {
    std::vector<GaussianMF> fs;
    for (const auto& mf : sets) {
      fs.push_back({mf.at("center").get<double>(), mf.at("sigma").get<double>(),
                    mf.at("label").get<std::string>()});
    }
    p.per_feature.push_back(std::move(fs));
  }
  return p;
}

json neuron_to_json(const LogicNeuron& n) {
  json ants = json::array();
  for (const auto& [feature, set] : n.antecedents) ants.push_back({feature, set});
  return {{"kind", to_string(n.kind)},
          {"antecedents", std::move(ants)},
          {"weights", vector_to_json(n.weights)},
          {"identity", n.identity}};
}

LogicNeuron neuron_from_json(const json& j) {
  LogicNeuron n;
  n.kind = neuron_kind_from_string(j.at("kind").get<std::string>());
  for (const auto& pair : j.at("antecedents")) {
    n.antecedents.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  n.weights = vector_from_json(j.at("weights"));
  n.identity = j.at("identity").get<double>();
  return n;
}

json report_to_json(const TrainingReport& r) {
  return {{"candidates", r.candidates},
          {"screened", r.screened},
          {"selected", r.selected},
          {"screened_indices", r.screened_indices},
          {"frequencies", vector_to_json(r.frequencies)},
          {"lambdas", r.lambdas},
          {"mean_activations", r.mean_activations},
          {"degenerate_replications", r.degenerate_replications},
          {"bias_only", r.bias_only}};
}

TrainingReport report_from_json(const json& j) {
  TrainingReport r;
  r.candidates = j.at("candidates").get<int>();
  r.screened = j.at("screened").get<int>();
  r.selected = j.at("selected").get<int>();
  r.screened_indices = j.at("screened_indices").get<std::vector<int>>();
  r.frequencies = vector_from_json(j.at("frequencies"));
  r.lambdas = j.at("lambdas").get<std::vector<double>>();
  r.mean_activations = j.at("mean_activations").get<std::vector<double>>();
  r.degenerate_replications = j.at("degenerate_replications").get<int>();
  r.bias_only = j.at("bias_only").get<bool>();
  return r;
}

json stats_to_json(const StandardizationStats& s) {
  return {{"means", vector_to_json(s.means)}, {"stddevs", vector_to_json(s.stddevs)}};
}

StandardizationStats stats_from_json(const json& j) {
  return {vector_from_json(j.at("means")), vector_from_json(j.at("stddevs"))};
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError(what + ": invalid JSON");
  return j;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  json neurons = json::array();
  for (const auto& n : model.neurons) neurons.push_back(neuron_to_json(n));

  const json doc = {{"schema", kModelSchema},
                    {"config", config_to_json(model.config)},
                    {"feature_names", model.feature_names},
                    {"stats", stats_to_json(model.stats)},
                    {"partition", partition_to_json(model.partition)},
                    {"neurons", std::move(neurons)},
                    {"output_weights", vector_to_json(model.output_weights)},
                    {"report", report_to_json(model.report)}};
  return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  const json j = parse_json(text, "model");
  try {
    if (j.at("schema").get<std::string>() != kModelSchema) {
      throw DataError("model: unsupported schema \"" + j.at("schema").get<std::string>() + "\"");
    }
    TrainedModel model;
    model.config = config_from_json(j.at("config"));
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.stats = stats_from_json(j.at("stats"));
    model.partition = partition_from_json(j.at("partition"));
    for (const auto& n : j.at("neurons")) model.neurons.push_back(neuron_from_json(n));
    model.output_weights = vector_from_json(j.at("output_weights"));
    model.report = report_from_json(j.at("report"));

    if (model.output_weights.size() != static_cast<Eigen::Index>(model.neurons.size()) + 1) {
      throw DataError("model: output weight count does not match the neuron count");
    }
    if (model.partition.num_features() != static_cast<int>(model.feature_names.size())) {
      throw DataError("model: partition does not match the feature names");
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  atomic_write_file(path, model_to_json(model));
}

TrainedModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

std::string rules_to_json(const std::vector<FuzzyRule>& rules) {
  json arr = json::array();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    json ants = json::array();
    for (const auto& a : rule.antecedents) {
      ants.push_back({{"feature", a.feature}, {"label", a.set_label}, {"weight", a.weight}});
    }
    arr.push_back({{"index", i + 1},
                   {"connective", rule.connective},
                   {"antecedents", std::move(ants)},
                   {"certainty", rule.certainty},
                   {"consequent", rule.consequent}});
  }
  return arr.dump(2) + "\n";
}

std::vector<FuzzyRule> rules_from_json(const std::string& text) {
  const json j = parse_json(text, "rules");
  try {
    std::vector<FuzzyRule> rules;
    for (const auto& r : j) {
      FuzzyRule rule;
      rule.connective = r.at("connective").get<std::string>();
      rule.certainty = r.at("certainty").get<double>();
      rule.consequent = r.at("consequent").get<double>();
      for (const auto& a : r.at("antecedents")) {
        rule.antecedents.push_back({a.at("feature").get<std::string>(),
                                    a.at("label").get<std::string>(),
                                    a.at("weight").get<double>()});
      }
      rules.push_back(std::move(rule));
    }
    return rules;
  } catch (const json::exception& e) {
    throw DataError(std::string("rules: ") + e.what());
  }
}

std::string metrics_to_json(const Metrics& m) {
  const json doc = {{"accuracy", m.accuracy},
                    {"auc", m.auc},
                    {"sensitivity", m.sensitivity},
                    {"confusion",
                     {{"tp", m.confusion.tp},
                      {"fp", m.confusion.fp},
                      {"tn", m.confusion.tn},
                      {"fn", m.confusion.fn}}},
                    {"samples", m.confusion.total()},
                    {"no_positives", m.no_positives},
                    {"single_class", m.single_class}};
  return doc.dump(2) + "\n";
}

namespace {

json cell_to_json(const GridCell& cell) {
  json j = {{"num_mfs", cell.num_mfs},
            {"bootstrap_reps", cell.bootstrap_reps},
            {"consensus_rho", cell.consensus_rho},
            {"cv_accuracy", cell.cv_accuracy},
            {"failed", cell.failed}};
  if (cell.failed) j["error"] = cell.error;
  return j;
}

json metrics_core_json(const Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"auc", m.auc},
          {"sensitivity", m.sensitivity},
          {"confusion",
           {{"tp", m.confusion.tp},
            {"fp", m.confusion.fp},
            {"tn", m.confusion.tn},
            {"fn", m.confusion.fn}}}};
}

json summary_json(const RunReport& report) {
  std::vector<double> acc, auc, sens;
  for (const auto& m : report.per_run) {
    acc.push_back(m.accuracy);
    auc.push_back(m.auc);
    sens.push_back(m.sensitivity);
  }
  const MeanStd a = mean_std(acc), u = mean_std(auc), s = mean_std(sens);
  return {{"accuracy", {{"mean", a.mean}, {"std", a.std}}},
          {"auc", {{"mean", u.mean}, {"std", u.std}}},
          {"sensitivity", {{"mean", s.mean}, {"std", s.std}}}};
}

}  // namespace

std::string grid_result_to_json(const GridResult& result) {
  json table = json::array();
  for (const auto& cell : result.table) table.push_back(cell_to_json(cell));
  const json doc = {{"best", config_to_json(result.best)}, {"table", std::move(table)}};
  return doc.dump(2) + "\n";
}

std::string run_report_to_json(const RunReport& report) {
  json runs = json::array();
  for (const auto& m : report.per_run) runs.push_back(metrics_core_json(m));
  const json doc = {{"config", config_to_json(report.config)},
                    {"runs", std::move(runs)},
                    {"summary", summary_json(report)}};
  return doc.dump(2) + "\n";
}

std::string benchmark_report_to_json(const GridResult& grid, const RunReport& runs,
                                     const GridRanges& ranges, int run_count,
                                     double train_fraction, std::uint64_t seed) {
  json grid_table = json::array();
  for (const auto& cell : grid.table) grid_table.push_back(cell_to_json(cell));
  json per_run = json::array();
  for (const auto& m : runs.per_run) per_run.push_back(metrics_core_json(m));

  const json doc = {{"schema", kBenchmarkSchema},
                    {"seed", seed},
                    {"runs", run_count},
                    {"train_fraction", train_fraction},
                    {"grid",
                     {{"num_mfs", ranges.num_mfs},
                      {"bootstrap_reps", ranges.bootstrap_reps},
                      {"consensus_rho", ranges.consensus_rho}}},
                    {"grid_table", std::move(grid_table)},
                    {"best_config", config_to_json(grid.best)},
                    {"per_run", std::move(per_run)},
                    {"summary", summary_json(runs)}};
  return doc.dump(2) + "\n";
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot replace file: " + path + " (" + ec.message() + ")");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

}  // namespace rfnn
