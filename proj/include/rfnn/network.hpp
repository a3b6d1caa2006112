#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rfnn/dataset.hpp"
#include "rfnn/fuzzification.hpp"
#include "rfnn/logic_neurons.hpp"
#include "rfnn/selection.hpp"

namespace rfnn {

struct ModelConfig {
  int num_mfs = 2;             // fuzzy sets per feature (M)
  int candidate_cap = 200;     // screened candidate count cap (L_c)
  int bootstrap_reps = 16;     // bootstrap replications (b)
  double consensus_rho = 0.6;  // consensus vote threshold
  double leaky_alpha = 0.01;   // leaky ReLU slope
  NeuronKind neuron_kind = NeuronKind::Uni;
  BoundaryMode boundary_mode = BoundaryMode::Max;
  int cv_folds = 10;           // folds for per-replication lambda selection
  std::uint64_t seed = 0;
};

struct TrainingReport {
  int candidates = 0;  // L
  int screened = 0;    // L_c
  int selected = 0;    // L_s
  std::vector<int> screened_indices;      // into the candidate list
  Eigen::VectorXd frequencies;            // consensus votes over screened neurons
  std::vector<double> lambdas;            // per-replication CV lambdas
  std::vector<double> mean_activations;   // training mean of each selected neuron
  int degenerate_replications = 0;
  bool bias_only = false;                 // empty consensus; constant predictor
  double train_seconds = 0.0;             // measured; not serialized
};

struct TrainedModel {
  ModelConfig config;
  FuzzyPartition partition;
  std::vector<LogicNeuron> neurons;  // the selected neurons, in screened order
  Eigen::VectorXd output_weights;    // v, length selected + 1, [0] is the bias
  StandardizationStats stats;
  std::vector<std::string> feature_names;
  TrainingReport report;
};

// All M^N antecedent combinations when N <= 6 (feature 0 varies slowest),
// otherwise min(2K, 500) random draws. Antecedent weights and identity
// elements are uniform on [0,1].
std::vector<LogicNeuron> generate_candidates(const FuzzyPartition& partition, int num_features,
                                             int num_mfs, int num_samples, std::uint64_t seed,
                                             NeuronKind kind = NeuronKind::Uni);

// Activation of every neuron on every standardized row; entry (i, l).
Eigen::MatrixXd candidate_activations(const std::vector<LogicNeuron>& neurons,
                                      const FuzzyPartition& partition,
                                      const Eigen::MatrixXd& standardized_rows,
                                      BoundaryMode mode);

// Keep everything when there are at most `cap` columns, otherwise the `cap`
// columns with the highest activation variance (ties to the lower index).
// Returned indices are ascending.
std::vector<int> screen_candidates(const std::vector<LogicNeuron>& neurons,
                                   const Eigen::MatrixXd& activations, int cap);

// Full pipeline: standardize, fuzzify, generate and screen candidates, select
// a consensus subset, and fit the output weights by least squares.
TrainedModel train(const Dataset& data, const ModelConfig& config);

namespace detail {

// The pipeline up to (but not including) consensus selection. Split out so a
// grid search can reuse one prefix across bootstrap and threshold settings;
// train() is exactly train_prefix + bolasso_select + train_finish.
struct TrainingPrefix {
  StandardizationStats stats;
  FuzzyPartition partition;
  std::vector<std::string> feature_names;
  std::vector<LogicNeuron> candidates;  // all generated, in order
  std::vector<int> screened;            // indices into candidates, ascending
  Eigen::MatrixXd design;               // rows x (screened + 1), ones column first
  Eigen::VectorXd y;
  double seconds = 0.0;
};

TrainingPrefix train_prefix(const Dataset& data, const ModelConfig& config);

TrainedModel train_finish(const TrainingPrefix& prefix, const ModelConfig& config,
                          const BolassoResult& consensus);

}  // namespace detail

double leaky_relu(double z, double alpha);

// Raw (unstandardized) inputs; the model applies its stored transform.
double score(const TrainedModel& model, const Eigen::VectorXd& x);
int predict(const TrainedModel& model, const Eigen::VectorXd& x);  // sign; 0 maps to +1

Eigen::VectorXd score_batch(const TrainedModel& model, const Eigen::MatrixXd& raw_rows);
std::vector<int> predict_batch(const TrainedModel& model, const Eigen::MatrixXd& raw_rows);

}  // namespace rfnn
