#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rfnn/dataset.hpp"

namespace rfnn {

struct GaussianMF {
  double center = 0.0;
  double sigma = 1.0;
  std::string label;
};

// mu(x) = exp(-(x - center)^2 / (2 sigma^2)); in (0, 1], peak 1 at the center
double eval_mf(const GaussianMF& mf, double x);

// Per feature: num_sets Gaussian sets with centers equally spaced over the
// observed range and sigma = spacing / sqrt(8 ln 2), so adjacent sets cross
// at membership 0.5.
struct FuzzyPartition {
  std::vector<std::vector<GaussianMF>> per_feature;

  int num_features() const { return static_cast<int>(per_feature.size()); }
  int sets_per_feature() const {
    return per_feature.empty() ? 0 : static_cast<int>(per_feature[0].size());
  }
};

// Set labels: 2 -> low/high, 3 -> low/medium/high, larger counts are indexed.
std::vector<std::string> set_labels(int num_sets);

FuzzyPartition build_partition(const Dataset& data, int num_sets);

// Membership matrix; entry (j, m) is set m of feature j evaluated at x[j].
Eigen::MatrixXd fuzzify(const FuzzyPartition& partition, const Eigen::VectorXd& x);

}  // namespace rfnn
