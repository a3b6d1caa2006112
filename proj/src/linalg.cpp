#include "rfnn/linalg.hpp"

#include <Eigen/SVD>
#include <limits>
#include <stdexcept>

namespace rfnn::linalg {

namespace {

void check_input(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
  if (!a.allFinite()) throw std::invalid_argument("svd: matrix has non-finite entries");
}

}  // namespace

SvdResult svd(const Eigen::MatrixXd& a) {
  check_input(a);
  Eigen::BDCSVD<Eigen::MatrixXd> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("svd: failed to converge on a " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " matrix");
  }
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a, double tol) {
  const SvdResult dec = svd(a);
  if (tol < 0.0) {
    const double smax = dec.singular_values.size() > 0 ? dec.singular_values[0] : 0.0;
    tol = static_cast<double>(std::max(a.rows(), a.cols())) *
          std::numeric_limits<double>::epsilon() * smax;
  }
  Eigen::VectorXd inv = dec.singular_values;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv[i] = dec.singular_values[i] > tol ? 1.0 / dec.singular_values[i] : 0.0;
  }
  return dec.v * inv.asDiagonal() * dec.u.transpose();
}

Eigen::VectorXd least_squares_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  if (a.rows() != y.size()) throw std::invalid_argument("least_squares_solve: shape mismatch");
  const SvdResult dec = svd(a);
  const double smax = dec.singular_values.size() > 0 ? dec.singular_values[0] : 0.0;
  const double tol = static_cast<double>(std::max(a.rows(), a.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  Eigen::VectorXd projected = dec.u.transpose() * y;
  for (Eigen::Index i = 0; i < projected.size(); ++i) {
    projected[i] = dec.singular_values[i] > tol ? projected[i] / dec.singular_values[i] : 0.0;
  }
  return dec.v * projected;
}

}  // namespace rfnn::linalg
