#include "rfnn/fuzzification.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "rfnn/errors.hpp"

namespace rfnn {

double eval_mf(const GaussianMF& mf, double x) {
  if (!(mf.sigma > 0.0)) throw std::invalid_argument("eval_mf: sigma must be positive");
  const double d = x - mf.center;
  return std::exp(-(d * d) / (2.0 * mf.sigma * mf.sigma));
}

std::vector<std::string> set_labels(int num_sets) {
  if (num_sets == 2) return {"low", "high"};
  if (num_sets == 3) return {"low", "medium", "high"};
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(num_sets));
  for (int m = 1; m <= num_sets; ++m) labels.push_back("mf" + std::to_string(m));
  return labels;
}

FuzzyPartition build_partition(const Dataset& data, int num_sets) {
  if (num_sets < 2) throw std::invalid_argument("build_partition: need at least 2 fuzzy sets");
  if (data.num_samples() == 0) throw DataError("build_partition: empty dataset");

  // adjacent sets cross at membership 0.5: spacing = sigma * sqrt(8 ln 2)
  static const double kCrossing = std::sqrt(8.0 * std::log(2.0));
  const auto labels = set_labels(num_sets);

  FuzzyPartition partition;
  partition.per_feature.resize(static_cast<std::size_t>(data.num_features()));
  for (Eigen::Index j = 0; j < data.num_features(); ++j) {
    const double lo = data.features.col(j).minCoeff();
    const double hi = data.features.col(j).maxCoeff();
    auto& sets = partition.per_feature[static_cast<std::size_t>(j)];
    sets.resize(static_cast<std::size_t>(num_sets));

    const double span = hi - lo;
    const bool degenerate = span <= 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (degenerate) {
      std::cerr << "warning: feature \"" << data.feature_names[static_cast<std::size_t>(j)]
                << "\" has no spread; its fuzzy sets collapse to one point\n";
    }
    const double spacing = degenerate ? 0.0 : span / static_cast<double>(num_sets - 1);
    const double sigma = degenerate ? 1.0 : spacing / kCrossing;
    for (int m = 0; m < num_sets; ++m) {
      auto& mf = sets[static_cast<std::size_t>(m)];
      mf.center = degenerate ? lo : lo + spacing * static_cast<double>(m);
      mf.sigma = sigma;
      mf.label = labels[static_cast<std::size_t>(m)];
    }
  }
  return partition;
}

Eigen::MatrixXd fuzzify(const FuzzyPartition& partition, const Eigen::VectorXd& x) {
  const int n = partition.num_features();
  const int m = partition.sets_per_feature();
  if (x.size() != n) throw std::invalid_argument("fuzzify: input dimension mismatch");

  Eigen::MatrixXd memberships(n, m);
  for (int j = 0; j < n; ++j) {
    const auto& sets = partition.per_feature[static_cast<std::size_t>(j)];
    for (int s = 0; s < m; ++s) {
      memberships(j, s) = eval_mf(sets[static_cast<std::size_t>(s)], x[j]);
    }
  }
  return memberships;
}

}  // namespace rfnn
