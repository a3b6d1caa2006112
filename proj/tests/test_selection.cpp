#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "lasso_oracle.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/selection.hpp"

namespace {

// design with a leading ones column and standard-normal-ish feature columns
Eigen::MatrixXd random_design(rfnn::Rng& rng, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd design(n, p + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 1; j <= p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      design(i, j) = 2.0 * rng.uniform() - 1.0;
    }
  }
  return design;
}

Eigen::VectorXd random_vector(rfnn::Rng& rng, Eigen::Index n) {
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = 2.0 * rng.uniform() - 1.0;
  return y;
}

double lambda_max_direct(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  // on centered unit-populating-std columns against the centered target
  const Eigen::Index n = design.rows();
  double best = 0.0;
  const double y_mean = y.mean();
  for (Eigen::Index j = 1; j < design.cols(); ++j) {
    const auto col = design.col(j);
    const double mean = col.mean();
    const double sd =
        std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n));
    if (sd <= 1e-10 * std::max(1.0, std::abs(mean))) continue;
    const double corr =
        ((col.array() - mean) * (y.array() - y_mean)).sum() / sd;
    best = std::max(best, std::abs(corr));
  }
  return best;
}

}  // namespace

TEST_CASE("path is all zeros at and above lambda_max") {
  rfnn::Rng rng(1);
  const Eigen::MatrixXd design = random_design(rng, 40, 5);
  const Eigen::VectorXd y = random_vector(rng, 40);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  REQUIRE(!path.lambdas.empty());
  CHECK(path.lambda_max() == doctest::Approx(lambda_max_direct(design, y)));
  CHECK(rfnn::coefficients_at(path, path.lambda_max()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rfnn::coefficients_at(path, 10.0 * path.lambda_max()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rfnn::intercept_at(path, path.lambda_max()) == doctest::Approx(y.mean()));
}

TEST_CASE("path endpoint matches unregularized least squares") {
  rfnn::Rng rng(2);
  const Eigen::MatrixXd design = random_design(rng, 60, 4);
  Eigen::VectorXd truth(5);
  truth << 0.5, 2.0, -1.0, 0.0, 3.0;
  const Eigen::VectorXd y = design * truth + 0.01 * random_vector(rng, 60);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  const Eigen::VectorXd beta = rfnn::coefficients_at(path, 0.0);
  const double intercept = rfnn::intercept_at(path, 0.0);
  // compare against the normal equations solution
  const Eigen::VectorXd ls =
      (design.transpose() * design).ldlt().solve(design.transpose() * y);
  CHECK(std::abs(intercept - ls[0]) <= 1e-6);
  for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(beta[j] - ls[j + 1]) <= 1e-6);
}

TEST_CASE("path coefficients match the coordinate-descent oracle") {
  rfnn::Rng rng(3);
  int instances = 0;
  double worst = 0.0;
  while (instances < 50) {
    const Eigen::Index n = 12 + static_cast<Eigen::Index>(rng.uniform_index(19));  // up to 30
    const Eigen::Index p = 2 + static_cast<Eigen::Index>(rng.uniform_index(5));    // up to 6
    const Eigen::MatrixXd design = random_design(rng, n, p);
    Eigen::VectorXd truth = random_vector(rng, p + 1) * 3.0;
    for (Eigen::Index j = 1; j <= p; ++j) {
      if (rng.uniform() < 0.4) truth[j] = 0.0;  // sparse ground truth
    }
    const Eigen::VectorXd y = design * truth + 0.05 * random_vector(rng, n);

    const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
    const double lmax = path.lambda_max();
    if (lmax <= 0.0) continue;
    ++instances;

    for (int k = 1; k <= 10; ++k) {
      const double lambda = lmax * static_cast<double>(k) / 11.0;
      const Eigen::VectorXd beta = rfnn::coefficients_at(path, lambda);
      const double intercept = rfnn::intercept_at(path, lambda);
      const oracle::LassoFit fit = oracle::lasso_fit(design, y, lambda);
      REQUIRE(fit.kkt_ok);
      const double diff = (beta - fit.coefficients).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
      CHECK(diff <= 1e-4);
      CHECK(std::abs(intercept - fit.intercept) <= 1e-4);
    }
  }
  MESSAGE("worst oracle deviation: ", worst);
}

TEST_CASE("path breakpoints satisfy the lasso KKT conditions exactly") {
  rfnn::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 20 + static_cast<Eigen::Index>(rng.uniform_index(30));
    const Eigen::Index p = 3 + static_cast<Eigen::Index>(rng.uniform_index(6));
    const Eigen::MatrixXd design = random_design(rng, n, p);
    const Eigen::VectorXd y = random_vector(rng, n);
    const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
    const double lmax = path.lambda_max();
    if (lmax <= 0.0) continue;

    // scaled view, as the objective is posed
    Eigen::MatrixXd xs(n, p);
    Eigen::VectorXd mean(p), scale(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto col = design.col(j + 1);
      mean[j] = col.mean();
      scale[j] =
          std::sqrt((col.array() - mean[j]).square().sum() / static_cast<double>(n));
      xs.col(j) = (col.array() - mean[j]) / scale[j];
    }
    const Eigen::VectorXd yc = y.array() - y.mean();

    for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
      const double lambda = path.lambdas[k];
      Eigen::VectorXd beta_scaled(p);
      for (Eigen::Index j = 0; j < p; ++j) {
        beta_scaled[j] = path.coefficients[k][j] * scale[j];
      }
      const Eigen::VectorXd residual = yc - xs * beta_scaled;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double grad = xs.col(j).dot(residual);
        if (beta_scaled[j] != 0.0) {
          CHECK(std::abs(grad - lambda * (beta_scaled[j] > 0 ? 1.0 : -1.0)) <=
                1e-6 * (1.0 + lmax));
        } else {
          CHECK(std::abs(grad) <= lambda + 1e-6 * (1.0 + lmax));
        }
      }
    }
  }
}

TEST_CASE("active sets change by small steps along the path") {
  rfnn::Rng rng(5);
  const Eigen::MatrixXd design = random_design(rng, 50, 8);
  const Eigen::VectorXd y = random_vector(rng, 50);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  for (std::size_t k = 0; k + 1 < path.active_sets.size(); ++k) {
    const std::set<int> before(path.active_sets[k].begin(), path.active_sets[k].end());
    const std::set<int> after(path.active_sets[k + 1].begin(), path.active_sets[k + 1].end());
    std::vector<int> sym;
    std::set_symmetric_difference(before.begin(), before.end(), after.begin(), after.end(),
                                  std::back_inserter(sym));
    CHECK(sym.size() <= 1);
  }
}

TEST_CASE("constant and duplicated columns never break the path") {
  rfnn::Rng rng(6);
  Eigen::MatrixXd design(30, 5);
  design.col(0).setOnes();
  design.col(1) = random_vector(rng, 30);
  design.col(2).setConstant(3.0);          // dead column
  design.col(3) = design.col(1);           // exact duplicate
  design.col(4) = random_vector(rng, 30);
  const Eigen::VectorXd y = design.col(1) * 2.0 + 0.1 * random_vector(rng, 30);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  const Eigen::VectorXd beta = rfnn::coefficients_at(path, path.lambda_max() * 0.01);
  CHECK(beta[1] == 0.0);  // constant column stays out
  CHECK(beta.allFinite());
  // duplicates share the signal; their sum carries it
  CHECK(std::abs(beta[0] + beta[2] - 2.0) <= 0.2);
}

TEST_CASE("interpolation is exact at breakpoints and linear between them") {
  rfnn::Rng rng(7);
  const Eigen::MatrixXd design = random_design(rng, 40, 5);
  const Eigen::VectorXd y = random_vector(rng, 40);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  REQUIRE(path.lambdas.size() >= 2);
  for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
    const Eigen::VectorXd beta = rfnn::coefficients_at(path, path.lambdas[k]);
    CHECK((beta - path.coefficients[k]).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // midway between adjacent distinct breakpoints: average of the endpoints
  for (std::size_t k = 0; k + 1 < path.lambdas.size(); ++k) {
    if (path.lambdas[k] - path.lambdas[k + 1] < 1e-9) continue;
    const double mid = 0.5 * (path.lambdas[k] + path.lambdas[k + 1]);
    const Eigen::VectorXd expect =
        0.5 * (path.coefficients[k] + path.coefficients[k + 1]);
    CHECK((rfnn::coefficients_at(path, mid) - expect).cwiseAbs().maxCoeff() <= 1e-9);
  }
  CHECK_THROWS_AS(rfnn::coefficients_at(path, -1.0), std::invalid_argument);
}

TEST_CASE("lars_lasso_path validates its inputs") {
  Eigen::MatrixXd no_ones(4, 2);
  no_ones << 1, 1, 1, 2, 0, 3, 1, 4;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS(rfnn::lars_lasso_path(no_ones, y), std::invalid_argument);
  Eigen::MatrixXd ok(4, 2);
  ok << 1, 1, 1, 2, 1, 3, 1, 4;
  Eigen::VectorXd wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(rfnn::lars_lasso_path(ok, wrong), std::invalid_argument);
}

TEST_CASE("cross-validated lambda keeps strong signals and drops pure noise") {
  rfnn::Rng rng(8);
  // two strong signal columns, eight noise columns
  const Eigen::Index n = 200;
  Eigen::MatrixXd design = random_design(rng, n, 10);
  const Eigen::VectorXd y =
      3.0 * design.col(1) - 2.0 * design.col(2) + 0.1 * random_vector(rng, n);

  const double lambda = rfnn::select_lambda_cv(design, y, 5, 99);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  CHECK(lambda > 0.0);
  CHECK(lambda < path.lambda_max());
  const Eigen::VectorXd beta = rfnn::coefficients_at(path, lambda);
  CHECK(std::abs(beta[0]) > 0.5);
  CHECK(std::abs(beta[1]) > 0.5);

  // deterministic in the seed
  CHECK(rfnn::select_lambda_cv(design, y, 5, 99) == lambda);
}

TEST_CASE("pure-noise targets keep lambda in the top of the grid") {
  rfnn::Rng rng(9);
  const Eigen::Index n = 120;
  const Eigen::MatrixXd design = random_design(rng, n, 6);
  const Eigen::VectorXd y = random_vector(rng, n);  // unrelated to the columns
  const double lambda = rfnn::select_lambda_cv(design, y, 5, 1);
  const rfnn::LarsPath path = rfnn::lars_lasso_path(design, y);
  CHECK(lambda >= 0.1 * path.lambda_max());
}

TEST_CASE("bolasso recovers a planted support") {
  rfnn::Rng rng(10);
  const Eigen::Index n = 100;
  const Eigen::Index p = 20;
  Eigen::MatrixXd design = random_design(rng, n, p);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  y = 2.0 * design.col(1) - 1.5 * design.col(5) + 1.0 * design.col(12);
  y += 0.1 * random_vector(rng, n);
  const rfnn::BolassoResult result = rfnn::bolasso_select(design, y, 16, 0.6, 5, 77);
  CHECK(result.consensus_support == std::vector<int>{0, 4, 11});
  CHECK(result.replications == 16);
  REQUIRE(result.lambdas.size() == 16);
  CHECK(result.frequencies.size() == p);
  CHECK(result.frequencies[0] >= 0.6);
  CHECK(result.frequencies[4] >= 0.6);
  CHECK(result.frequencies[11] >= 0.6);
}

TEST_CASE("replication prefix property: first b of a longer run match") {
  rfnn::Rng rng(11);
  const Eigen::MatrixXd design = random_design(rng, 60, 8);
  const Eigen::VectorXd y =
      design.col(2) - design.col(7) + 0.2 * random_vector(rng, 60);
  const rfnn::BolassoReplications r8 = rfnn::bolasso_replications(design, y, 8, 4, 5);
  const rfnn::BolassoReplications r16 = rfnn::bolasso_replications(design, y, 16, 4, 5);
  REQUIRE(r16.supports.size() == 16);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(r16.supports[i] == r8.supports[i]);
    CHECK(r16.lambdas[i] == r8.lambdas[i]);
  }
  // consensus over the first 8 of the long run equals the short run's
  const rfnn::BolassoResult from_long = rfnn::bolasso_consensus(r16, 8, 0.5, 8);
  const rfnn::BolassoResult from_short = rfnn::bolasso_consensus(r8, 8, 0.5, 8);
  CHECK(from_long.consensus_support == from_short.consensus_support);
  CHECK(from_long.frequencies == from_short.frequencies);
}

TEST_CASE("consensus support shrinks as rho grows") {
  rfnn::Rng rng(12);
  const Eigen::MatrixXd design = random_design(rng, 80, 10);
  const Eigen::VectorXd y =
      design.col(1) + 0.5 * design.col(3) + 0.5 * random_vector(rng, 80);
  const rfnn::BolassoReplications reps = rfnn::bolasso_replications(design, y, 24, 5, 13);
  std::size_t previous = SIZE_MAX;
  for (const double rho : {0.25, 0.5, 0.75, 1.0}) {
    const rfnn::BolassoResult c = rfnn::bolasso_consensus(reps, 24, rho, 10);
    CHECK(c.consensus_support.size() <= previous);
    previous = c.consensus_support.size();
  }
  // rho = 1 demands unanimity
  const rfnn::BolassoResult unanimous = rfnn::bolasso_consensus(reps, 24, 1.0, 10);
  for (int j : unanimous.consensus_support) {
    CHECK(unanimous.frequencies[j] == doctest::Approx(1.0));
  }
}

TEST_CASE("single replication with full vote equals the plain lasso support") {
  rfnn::Rng rng(13);
  const Eigen::MatrixXd design = random_design(rng, 50, 6);
  const Eigen::VectorXd y = design.col(1) * 2.0 + 0.1 * random_vector(rng, 50);
  const rfnn::BolassoResult result = rfnn::bolasso_select(design, y, 1, 1.0, 5, 21);
  REQUIRE(result.lambdas.size() == 1);
  // the one replication's support is exactly the consensus
  for (int j : result.consensus_support) CHECK(result.frequencies[j] == 1.0);
}

TEST_CASE("bolasso rejects invalid parameters") {
  rfnn::Rng rng(14);
  const Eigen::MatrixXd design = random_design(rng, 20, 3);
  const Eigen::VectorXd y = random_vector(rng, 20);
  CHECK_THROWS_AS(rfnn::bolasso_select(design, y, 0, 0.5, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(rfnn::bolasso_select(design, y, 4, 0.0, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(rfnn::bolasso_select(design, y, 4, 1.5, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(rfnn::select_lambda_cv(design, y, 1, 0), std::invalid_argument);
}
