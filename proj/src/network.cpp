#include "rfnn/network.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfnn/errors.hpp"
#include "rfnn/linalg.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/selection.hpp"

namespace rfnn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_config(const ModelConfig& config) {
  if (config.num_mfs < 2) throw std::invalid_argument("config: num_mfs must be at least 2");
  if (config.candidate_cap < 1) throw std::invalid_argument("config: candidate_cap must be positive");
  if (config.bootstrap_reps < 1) {
    throw std::invalid_argument("config: bootstrap_reps must be positive");
  }
  if (!(config.consensus_rho > 0.0 && config.consensus_rho <= 1.0)) {
    throw std::invalid_argument("config: consensus_rho must be in (0, 1]");
  }
  if (!(config.leaky_alpha > 0.0 && config.leaky_alpha < 1.0)) {
    throw std::invalid_argument("config: leaky_alpha must be in (0, 1)");
  }
  if (config.cv_folds < 2) throw std::invalid_argument("config: cv_folds must be at least 2");
}

constexpr int kEnumerationLimit = 6;   // features; above this, sample antecedents
constexpr int kRandomCandidateCap = 500;

}  // namespace

std::vector<LogicNeuron> generate_candidates(const FuzzyPartition& partition, int num_features,
                                             int num_mfs, int num_samples, std::uint64_t seed,
                                             NeuronKind kind) {
  if (partition.num_features() != num_features || partition.sets_per_feature() != num_mfs) {
    throw std::invalid_argument("generate_candidates: partition shape mismatch");
  }
  if (num_features < 1) throw std::invalid_argument("generate_candidates: no features");
  if (num_samples < 1) throw std::invalid_argument("generate_candidates: no samples");

  Rng rng(seed);
  std::vector<LogicNeuron> neurons;

  auto draw_weights = [&](LogicNeuron& neuron) {
    neuron.weights.resize(num_features);
    for (int j = 0; j < num_features; ++j) neuron.weights[j] = rng.uniform();
    neuron.identity = rng.uniform();
  };

  if (num_features <= kEnumerationLimit) {
    long total = 1;
    for (int j = 0; j < num_features; ++j) total *= num_mfs;
    neurons.resize(static_cast<std::size_t>(total));
    for (long idx = 0; idx < total; ++idx) {
      auto& neuron = neurons[static_cast<std::size_t>(idx)];
      neuron.kind = kind;
      neuron.antecedents.resize(static_cast<std::size_t>(num_features));
      long rest = idx;
      for (int j = num_features - 1; j >= 0; --j) {  // feature 0 varies slowest
        neuron.antecedents[static_cast<std::size_t>(j)] = {j, static_cast<int>(rest % num_mfs)};
        rest /= num_mfs;
      }
      draw_weights(neuron);
    }
  } else {
    const long total = std::min<long>(2L * num_samples, kRandomCandidateCap);
    neurons.resize(static_cast<std::size_t>(total));
    for (auto& neuron : neurons) {
      neuron.kind = kind;
      neuron.antecedents.resize(static_cast<std::size_t>(num_features));
      for (int j = 0; j < num_features; ++j) {
        neuron.antecedents[static_cast<std::size_t>(j)] = {
            j, static_cast<int>(rng.uniform_index(static_cast<std::size_t>(num_mfs)))};
      }
      draw_weights(neuron);
    }
  }
  return neurons;
}

Eigen::MatrixXd candidate_activations(const std::vector<LogicNeuron>& neurons,
                                      const FuzzyPartition& partition,
                                      const Eigen::MatrixXd& standardized_rows,
                                      BoundaryMode mode) {
  const Eigen::Index rows = standardized_rows.rows();
  const Eigen::Index count = static_cast<Eigen::Index>(neurons.size());
  Eigen::MatrixXd activations(rows, count);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::MatrixXd memberships =
        fuzzify(partition, standardized_rows.row(i).transpose());
    for (Eigen::Index l = 0; l < count; ++l) {
      activations(i, l) = neuron_eval(neurons[static_cast<std::size_t>(l)], memberships, mode);
    }
  }
  return activations;
}

std::vector<int> screen_candidates(const std::vector<LogicNeuron>& neurons,
                                   const Eigen::MatrixXd& activations, int cap) {
  if (cap < 1) throw std::invalid_argument("screen_candidates: cap must be positive");
  if (activations.cols() != static_cast<Eigen::Index>(neurons.size())) {
    throw std::invalid_argument("screen_candidates: activation column count mismatch");
  }
  const int count = static_cast<int>(neurons.size());
  std::vector<int> indices(static_cast<std::size_t>(count));
  std::iota(indices.begin(), indices.end(), 0);
  if (count <= cap) return indices;

  const double rows = static_cast<double>(activations.rows());
  Eigen::VectorXd variance(count);
  for (int l = 0; l < count; ++l) {
    const double mean = activations.col(l).mean();
    variance[l] = (activations.col(l).array() - mean).square().sum() / rows;
  }
  std::stable_sort(indices.begin(), indices.end(), [&](int a, int b) {
    if (variance[a] != variance[b]) return variance[a] > variance[b];
    return a < b;
  });
  indices.resize(static_cast<std::size_t>(cap));
  std::sort(indices.begin(), indices.end());
  return indices;
}

namespace detail {

TrainingPrefix train_prefix(const Dataset& data, const ModelConfig& config) {
  check_config(config);
  if (data.num_samples() < 2) throw DataError("train: need at least 2 samples");

  const auto start = Clock::now();
  TrainingPrefix prefix;
  prefix.feature_names = data.feature_names;

  Dataset standardized;
  if (data.stats.has_value()) {
    standardized = data;
    prefix.stats = *data.stats;
  } else {
    auto [transformed, stats] = standardize(data);
    standardized = std::move(transformed);
    prefix.stats = std::move(stats);
  }

  prefix.partition = build_partition(standardized, config.num_mfs);
  prefix.candidates = generate_candidates(
      prefix.partition, static_cast<int>(standardized.num_features()), config.num_mfs,
      static_cast<int>(standardized.num_samples()), derive_seed(config.seed, 1),
      config.neuron_kind);

  const Eigen::MatrixXd activations = candidate_activations(
      prefix.candidates, prefix.partition, standardized.features, config.boundary_mode);
  prefix.screened = screen_candidates(prefix.candidates, activations, config.candidate_cap);

  const Eigen::Index rows = activations.rows();
  const Eigen::Index kept = static_cast<Eigen::Index>(prefix.screened.size());
  prefix.design.resize(rows, kept + 1);
  prefix.design.col(0).setOnes();
  for (Eigen::Index i = 0; i < kept; ++i) {
    prefix.design.col(i + 1) = activations.col(prefix.screened[static_cast<std::size_t>(i)]);
  }
  prefix.y = standardized.labels_real();
  prefix.seconds = seconds_since(start);
  return prefix;
}

TrainedModel train_finish(const TrainingPrefix& prefix, const ModelConfig& config,
                          const BolassoResult& consensus) {
  const auto start = Clock::now();

  TrainedModel model;
  model.config = config;
  model.partition = prefix.partition;
  model.stats = prefix.stats;
  model.feature_names = prefix.feature_names;

  auto& report = model.report;
  report.candidates = static_cast<int>(prefix.candidates.size());
  report.screened = static_cast<int>(prefix.screened.size());
  report.screened_indices = prefix.screened;
  report.frequencies = consensus.frequencies;
  report.lambdas = consensus.lambdas;
  report.degenerate_replications = consensus.degenerate_replications;

  const auto& support = consensus.consensus_support;
  report.selected = static_cast<int>(support.size());

  if (support.empty()) {
    report.bias_only = true;
    model.output_weights.resize(1);
    model.output_weights[0] = prefix.y.mean();
  } else {
    Eigen::MatrixXd z(prefix.design.rows(), support.size() + 1);
    z.col(0).setOnes();
    for (std::size_t i = 0; i < support.size(); ++i) {
      z.col(static_cast<Eigen::Index>(i + 1)) = prefix.design.col(support[i] + 1);
      model.neurons.push_back(
          prefix.candidates[static_cast<std::size_t>(prefix.screened[static_cast<std::size_t>(
              support[i])])]);
      report.mean_activations.push_back(z.col(static_cast<Eigen::Index>(i + 1)).mean());
    }
    model.output_weights = linalg::least_squares_solve(z, prefix.y);
  }

  report.train_seconds = prefix.seconds + seconds_since(start);
  return model;
}

}  // namespace detail

TrainedModel train(const Dataset& data, const ModelConfig& config) {
  const detail::TrainingPrefix prefix = detail::train_prefix(data, config);
  const BolassoResult consensus =
      bolasso_select(prefix.design, prefix.y, config.bootstrap_reps, config.consensus_rho,
                     config.cv_folds, derive_seed(config.seed, 2));
  return detail::train_finish(prefix, config, consensus);
}

double leaky_relu(double z, double alpha) {
  return std::max(alpha * z, z);
}

double score(const TrainedModel& model, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(model.feature_names.size())) {
    throw std::invalid_argument("score: input dimension mismatch");
  }
  const Eigen::VectorXd xs = standardize_row(x, model.stats);
  const Eigen::MatrixXd memberships = fuzzify(model.partition, xs);
  double z = model.output_weights[0];
  for (std::size_t l = 0; l < model.neurons.size(); ++l) {
    z += model.output_weights[static_cast<Eigen::Index>(l + 1)] *
         neuron_eval(model.neurons[l], memberships, model.config.boundary_mode);
  }
  return leaky_relu(z, model.config.leaky_alpha);
}

int predict(const TrainedModel& model, const Eigen::VectorXd& x) {
  return score(model, x) >= 0.0 ? 1 : -1;
}

Eigen::VectorXd score_batch(const TrainedModel& model, const Eigen::MatrixXd& raw_rows) {
  Eigen::VectorXd scores(raw_rows.rows());
  for (Eigen::Index i = 0; i < raw_rows.rows(); ++i) {
    scores[i] = score(model, raw_rows.row(i).transpose());
  }
  return scores;
}

std::vector<int> predict_batch(const TrainedModel& model, const Eigen::MatrixXd& raw_rows) {
  std::vector<int> predictions(static_cast<std::size_t>(raw_rows.rows()));
  for (Eigen::Index i = 0; i < raw_rows.rows(); ++i) {
    predictions[static_cast<std::size_t>(i)] = score(model, raw_rows.row(i).transpose()) >= 0.0
                                                   ? 1
                                                   : -1;
  }
  return predictions;
}

}  // namespace rfnn
