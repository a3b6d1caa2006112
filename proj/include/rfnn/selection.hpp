#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace rfnn {

// Lasso regularization path computed by least angle regression with the lasso
// modification (variables can leave the active set). The design matrix must
// carry a leading all-ones intercept column, which is never penalized. The
// remaining columns are centered and scaled to unit population standard
// deviation internally; reported coefficients are on the original column
// scale. `lambdas` refers to the objective
//     0.5 * ||y - X b||^2 + lambda * sum_j |b_j|
// posed on the scaled columns; the path is piecewise linear between
// breakpoints and identically zero at and above lambda_max.
struct LarsPath {
  std::vector<double> lambdas;                // decreasing, lambdas[0] = lambda_max
  std::vector<Eigen::VectorXd> coefficients;  // per breakpoint, original scale
  std::vector<double> intercepts;
  std::vector<std::vector<int>> active_sets;  // nonzero support per breakpoint

  double lambda_max() const { return lambdas.empty() ? 0.0 : lambdas.front(); }
};

LarsPath lars_lasso_path(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);

// Piecewise-linear interpolation along the path; exact at breakpoints, zero
// above lambda_max, clamped to the last breakpoint below it.
Eigen::VectorXd coefficients_at(const LarsPath& path, double lambda);
double intercept_at(const LarsPath& path, double lambda);

// Cross-validated lambda over a 50-point log grid on
// [1e-4 * lambda_max, lambda_max], using the one-standard-error rule: the
// largest lambda whose mean held-out squared error stays within one standard
// error of the best grid point. Ties resolve toward the larger lambda.
double select_lambda_cv(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, int folds,
                        std::uint64_t seed);

// One bootstrap resample per replication, a CV-selected lambda on each, and
// the support of the lasso fit at that lambda raised to the selection scale
// 2*sigma*sqrt(n ln p) when CV lands below it (CV optimizes prediction and
// under-penalizes for support recovery). Replication r depends only on the
// seed derived for r, so the first b replications of a longer run equal a
// run with b replications.
struct BolassoReplications {
  std::vector<std::vector<int>> supports;  // ascending column indices, per replication
  std::vector<double> lambdas;             // the lambda each support was recorded at
  int degenerate_replications = 0;  // single-class draws that persisted after one redraw
};

BolassoReplications bolasso_replications(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                         int replications, int folds, std::uint64_t seed);

struct BolassoResult {
  Eigen::VectorXd frequencies;         // per penalized column, multiples of 1/b
  std::vector<int> consensus_support;  // { j : frequencies[j] >= rho }, ascending
  int replications = 0;
  double rho = 0.0;
  std::vector<double> lambdas;         // lambda each replication's support was recorded at
  int degenerate_replications = 0;
};

// Vote counting over the first `use_first` replications.
BolassoResult bolasso_consensus(const BolassoReplications& reps, int use_first, double rho,
                                Eigen::Index num_columns);

// bolasso_replications + bolasso_consensus over all of them.
BolassoResult bolasso_select(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                             int replications, double rho, int folds, std::uint64_t seed);

}  // namespace rfnn
