#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rfnn/dataset.hpp"
#include "rfnn/network.hpp"

namespace rfnn {

struct Confusion {
  long tp = 0, fp = 0, tn = 0, fn = 0;
  long total() const { return tp + fp + tn + fn; }
};

struct Metrics {
  double accuracy = 0.0;
  double auc = 0.0;
  double sensitivity = 0.0;  // recall of the +1 class
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  Confusion confusion;
  bool no_positives = false;  // sensitivity reported as 0
  bool single_class = false;  // AUC reported as 0.5
};

// Mann-Whitney AUC with midranks for tied scores. Both classes must appear.
double auc_rank(const std::vector<int>& labels, const Eigen::VectorXd& scores);

Metrics compute_metrics(const std::vector<int>& labels, const std::vector<int>& predictions,
                        const Eigen::VectorXd& scores, double train_seconds = 0.0,
                        double test_seconds = 0.0);

struct GridRanges {
  std::vector<int> num_mfs;
  std::vector<int> bootstrap_reps;
  std::vector<double> consensus_rho;
};

// M in {2,3,4}, b in {8,16,32}, rho in {0.5, 0.6, 0.7}
GridRanges default_grid();

struct GridCell {
  int num_mfs = 0;
  int bootstrap_reps = 0;
  double consensus_rho = 0.0;
  double cv_accuracy = 0.0;
  bool failed = false;
  std::string error;
};

struct GridResult {
  ModelConfig best;
  std::vector<GridCell> table;
};

// Mean k-fold cross-validated accuracy per cell, same folds everywhere. Ties
// resolve toward smaller M, then smaller b, then larger rho.
GridResult grid_search(const Dataset& data, const GridRanges& grid, const ModelConfig& base,
                       std::uint64_t seed);

struct RunReport {
  std::vector<Metrics> per_run;
  ModelConfig config;
};

// R independent measurements, each on a fresh stratified train/test split.
RunReport repeated_runs(const Dataset& data, const ModelConfig& config, int runs,
                        std::uint64_t seed, double train_fraction = 0.7);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample (n-1); 0 when n = 1
};

MeanStd mean_std(const std::vector<double>& values);

std::string format_mean_std(double mean, double std);  // "98.44(0.15)"

// One-row summary table: Model | Accuracy | AUC | Sensitivity | Test Time,
// rates as mean(std) percentages, test time in milliseconds.
std::string render_metrics_table(const std::string& model_name, const RunReport& report);

}  // namespace rfnn
