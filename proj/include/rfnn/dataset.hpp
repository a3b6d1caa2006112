#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rfnn {

struct StandardizationStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stddevs;  // strictly positive; constant columns recorded as 1
};

struct Sample {
  Eigen::VectorXd features;
  int label;  // -1 or +1
};

// Rows of `features` are samples. `stats` is set once a dataset has been
// standardized and carries the transform that produced it.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;  // -1 / +1, one per row
  std::vector<std::string> feature_names;
  std::optional<StandardizationStats> stats;

  Eigen::Index num_samples() const { return features.rows(); }
  Eigen::Index num_features() const { return features.cols(); }
  Sample sample(Eigen::Index i) const {
    return {features.row(i).transpose(), labels[static_cast<std::size_t>(i)]};
  }
  Eigen::VectorXd labels_real() const;
};

// Labeled CSV with a header row. Class values 0/1 or -1/+1 map to -1/+1.
Dataset load_csv(const std::string& path, const std::string& label_column);

// Feature table for prediction inputs. If the label column appears in the
// header it is dropped; otherwise all columns are features.
std::pair<std::vector<std::string>, Eigen::MatrixXd> load_csv_features(
    const std::string& path, const std::string& label_column);

// ---- SQL statement featurization -------------------------------------------

// Externally supplied per-statement scores (analyst columns such as malice or
// confidence that cannot be derived from the statement text itself), keyed by
// the exact statement string.
struct SqlScoreTable {
  std::vector<std::string> columns;  // numeric score columns, file order
  std::unordered_map<std::string, std::vector<double>> scores;
  std::unordered_map<std::string, int> labels;
  bool has_labels = false;
};

// CSV with a "statement" column, numeric score columns, and optionally the
// label column.
SqlScoreTable load_score_table(const std::string& path, const std::string& label_column);

struct SqlFeatures {
  std::vector<std::string> columns;  // "length", "entropy", then score columns
  Eigen::MatrixXd values;
  std::vector<int> labels;  // filled only when the score table carries labels
};

// Shannon entropy of the byte distribution, in bits. Empty text gives 0.
double shannon_entropy_bits(const std::string& text);

SqlFeatures featurize_sql(const std::vector<std::string>& statements,
                          const SqlScoreTable* scores = nullptr);

// ---- transforms and resampling ----------------------------------------------

// Z-score per column with the unbiased (n-1) standard deviation. Constant
// columns map to zeros and record a stddev of 1.
std::pair<Dataset, StandardizationStats> standardize(const Dataset& data);

Eigen::VectorXd standardize_row(const Eigen::VectorXd& x, const StandardizationStats& stats);
Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& rows, const StandardizationStats& stats);

Dataset select_rows(const Dataset& data, const std::vector<int>& indices);

// Per-class shuffle and split; each side keeps at least one sample of every
// class. Both classes must have at least 2 samples.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction,
                                             std::uint64_t seed);

// Disjoint, exhaustive folds of 0..size-1; sizes differ by at most one.
std::vector<std::vector<int>> kfold_indices(int size, int k, std::uint64_t seed);

// `size` draws with replacement from 0..size-1, in draw order.
std::vector<int> bootstrap_resample(int size, std::uint64_t seed);

}  // namespace rfnn
