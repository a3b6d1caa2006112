#pragma once

#include <Eigen/Core>

namespace rfnn::linalg {

struct SvdResult {
  Eigen::MatrixXd u;                // rows x r, orthonormal columns
  Eigen::VectorXd singular_values;  // length r, non-increasing, >= 0
  Eigen::MatrixXd v;                // cols x r, orthonormal columns
};

// thin SVD, a = u * diag(singular_values) * v^T
SvdResult svd(const Eigen::MatrixXd& a);

// Moore-Penrose pseudoinverse. Singular values at or below `tol` are treated
// as zero; tol < 0 selects the default cutoff max(rows, cols) * eps * sigma_max.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a, double tol = -1.0);

// minimum-norm least-squares solution pinv(a) * y
Eigen::VectorXd least_squares_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

}  // namespace rfnn::linalg
