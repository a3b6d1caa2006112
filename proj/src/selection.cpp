#include "rfnn/selection.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfnn/dataset.hpp"
#include "rfnn/errors.hpp"
#include "rfnn/rng.hpp"

namespace rfnn {

namespace {

constexpr int kLambdaGridSize = 50;
constexpr double kLambdaGridFloor = 1e-4;  // of lambda_max
constexpr double kSupportEps = 1e-12;

void validate_design(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  if (design.rows() != y.size()) {
    throw std::invalid_argument("lasso: design rows and target length differ");
  }
  if (design.rows() < 2) throw std::invalid_argument("lasso: need at least 2 rows");
  if (design.cols() < 2) throw std::invalid_argument("lasso: need at least one penalized column");
  if (!design.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("lasso: non-finite values in the problem");
  }
  if ((design.col(0).array() != 1.0).any()) {
    throw std::invalid_argument("lasso: design matrix must start with an all-ones column");
  }
}

// Sufficient statistics of the penalized columns. Fold statistics subtract
// from the full-sample ones, so cross-validation never rebuilds Gram matrices
// from scratch.
struct PathStats {
  Eigen::MatrixXd gram;     // X^T X
  Eigen::VectorXd xty;      // X^T y
  Eigen::VectorXd col_sum;  // per-column sums
  double y_sum = 0.0;
  long n = 0;

  static PathStats from_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    PathStats s;
    s.gram = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    s.gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    s.gram.triangularView<Eigen::StrictlyUpper>() = s.gram.transpose();
    s.xty = x.transpose() * y;
    s.col_sum = x.colwise().sum();
    s.y_sum = y.sum();
    s.n = x.rows();
    return s;
  }

  PathStats minus(const PathStats& o) const {
    PathStats s;
    s.gram = gram - o.gram;
    s.xty = xty - o.xty;
    s.col_sum = col_sum - o.col_sum;
    s.y_sum = y_sum - o.y_sum;
    s.n = n - o.n;
    return s;
  }
};

// Centered, unit-population-variance view of the problem. Constant columns
// get unit scale and zeroed correlations so they can never activate.
struct ScaledProblem {
  Eigen::MatrixXd gram;  // scaled-column Gram, diagonal n on live columns
  Eigen::VectorXd c0;    // correlations with the centered target
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  std::vector<char> live;
  double y_mean = 0.0;
  long n = 0;
};

ScaledProblem scale_problem(const PathStats& stats) {
  const Eigen::Index p = stats.xty.size();
  const double n = static_cast<double>(stats.n);

  ScaledProblem sp;
  sp.n = stats.n;
  sp.y_mean = stats.y_sum / n;
  sp.mean = stats.col_sum / n;
  sp.scale.resize(p);
  sp.live.assign(static_cast<std::size_t>(p), 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = std::max(0.0, stats.gram(j, j) / n - sp.mean[j] * sp.mean[j]);
    const double sd = std::sqrt(var);
    const double floor = 1e-10 * std::max(1.0, std::abs(sp.mean[j]));
    if (sd > floor) {
      sp.scale[j] = sd;
    } else {
      sp.scale[j] = 1.0;
      sp.live[static_cast<std::size_t>(j)] = 0;
    }
  }

  sp.c0.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    sp.c0[j] = sp.live[static_cast<std::size_t>(j)]
                   ? (stats.xty[j] - sp.mean[j] * stats.y_sum) / sp.scale[j]
                   : 0.0;
  }

  sp.gram.resize(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!sp.live[static_cast<std::size_t>(j)]) {
      sp.gram.col(j).setZero();
      sp.gram.row(j).setZero();
      continue;
    }
    for (Eigen::Index i = j; i < p; ++i) {
      double v = 0.0;
      if (sp.live[static_cast<std::size_t>(i)]) {
        v = (stats.gram(i, j) - n * sp.mean[i] * sp.mean[j]) / (sp.scale[i] * sp.scale[j]);
      }
      sp.gram(i, j) = v;
      sp.gram(j, i) = v;
    }
  }
  return sp;
}

// Cholesky factor of the active-set Gram block, grown one column at a time
// and refactored after drops.
class ActiveCholesky {
public:
  explicit ActiveCholesky(const Eigen::MatrixXd& gram)
      : gram_(gram), l_(gram.rows(), gram.cols()), k_(0) {}

  // active holds the current k_ members; j is the candidate k_-th entry
  bool try_append(const std::vector<int>& active, int j) {
    const int k = k_;
    Eigen::VectorXd w(k);
    for (int r = 0; r < k; ++r) {
      double s = gram_(active[static_cast<std::size_t>(r)], j);
      for (int q = 0; q < r; ++q) s -= l_(r, q) * w[q];
      w[r] = s / l_(r, r);
    }
    const double d2 = gram_(j, j) - w.squaredNorm();
    if (!(d2 > 1e-10 * std::max(gram_(j, j), 1.0))) return false;
    for (int q = 0; q < k; ++q) l_(k, q) = w[q];
    l_(k, k) = std::sqrt(d2);
    ++k_;
    return true;
  }

  void rebuild(const std::vector<int>& active) {
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd block(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        block(i, j) = gram_(active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(j)]);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("lasso: active-set factorization failed");
    }
    l_.topLeftCorner(k, k) = llt.matrixL();
    k_ = k;
  }

  // solves (L L^T) d = rhs
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    const int k = k_;
    Eigen::VectorXd z(k);
    for (int r = 0; r < k; ++r) {
      double s = rhs[r];
      for (int q = 0; q < r; ++q) s -= l_(r, q) * z[q];
      z[r] = s / l_(r, r);
    }
    Eigen::VectorXd d(k);
    for (int r = k - 1; r >= 0; --r) {
      double s = z[r];
      for (int q = r + 1; q < k; ++q) s -= l_(q, r) * d[q];
      d[r] = s / l_(r, r);
    }
    return d;
  }

private:
  const Eigen::MatrixXd& gram_;
  Eigen::MatrixXd l_;
  int k_;
};

struct ScaledPath {
  std::vector<double> lambdas;
  std::vector<Eigen::VectorXd> betas;  // scaled-column space
};

// Homotopy over decreasing lambda. The equiangular direction d solves
// G_AA d = sign_A, so every active correlation decays at rate 1 and the
// penalty weight after a step of gamma is exactly C - gamma. `floor` stops
// the descent early when only the upper part of the path is needed.
ScaledPath lars_core(const ScaledProblem& sp, double floor) {
  const Eigen::Index p = sp.c0.size();

  ScaledPath path;
  Eigen::VectorXd c = sp.c0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double big = c.size() > 0 ? c.cwiseAbs().maxCoeff() : 0.0;

  path.lambdas.push_back(big);
  path.betas.push_back(beta);

  const double tol = std::max(big * 1e-12, floor);
  if (!(big > tol)) return path;

  std::vector<int> active;
  std::vector<double> signs;
  std::vector<char> in_active(static_cast<std::size_t>(p), 0);
  std::vector<char> excluded(static_cast<std::size_t>(p), 0);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!sp.live[static_cast<std::size_t>(j)]) excluded[static_cast<std::size_t>(j)] = 1;
  }

  ActiveCholesky chol(sp.gram);
  int last_dropped = -1;
  double last_dropped_sign = 0.0;
  bool add_pending = true;
  const int max_steps = static_cast<int>(8 * p + 32);

  for (int step = 0; step < max_steps && big > tol; ++step) {
    // a just-dropped column is barred from rejoining with its old sign only
    // while it still ties the bound in that direction (the zero-step echo of
    // its own drop); once its correlation falls measurably below, or flips
    // sign, it competes again like any other column
    if (last_dropped >= 0 && last_dropped_sign * c[last_dropped] < big * (1.0 - 1e-9)) {
      last_dropped = -1;
    }
    if (add_pending) {
      int jstar = -1;
      double best = -1.0;
      for (int j = 0; j < p; ++j) {
        if (in_active[static_cast<std::size_t>(j)] || excluded[static_cast<std::size_t>(j)] ||
            j == last_dropped) {
          continue;
        }
        const double a = std::abs(c[j]);
        if (a > best) {
          best = a;
          jstar = j;
        }
      }
      if (jstar < 0) break;
      if (!chol.try_append(active, jstar)) {
        excluded[static_cast<std::size_t>(jstar)] = 1;
        continue;
      }
      active.push_back(jstar);
      signs.push_back(c[jstar] >= 0.0 ? 1.0 : -1.0);
      in_active[static_cast<std::size_t>(jstar)] = 1;
    }

    const int k = static_cast<int>(active.size());
    Eigen::VectorXd s(k);
    for (int i = 0; i < k; ++i) s[i] = signs[static_cast<std::size_t>(i)];
    const Eigen::VectorXd d = k > 0 ? chol.solve(s) : Eigen::VectorXd();

    // correlation decay rates for every column
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(p);
    for (int i = 0; i < k; ++i) rate += d[i] * sp.gram.col(active[static_cast<std::size_t>(i)]);

    // where the next column joins (its correlation reaches the shrinking bound)
    double gamma = big;
    int drop_at = -1;
    for (int j = 0; j < p; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || excluded[static_cast<std::size_t>(j)]) {
        continue;
      }
      const bool barred = j == last_dropped;
      const double down = 1.0 - rate[j];
      if (down > 1e-12 && !(barred && last_dropped_sign > 0.0)) {
        const double g = (big - c[j]) / down;
        if (g >= 0.0 && g < gamma) {
          gamma = g;
          drop_at = -1;
        }
      }
      const double up = 1.0 + rate[j];
      if (up > 1e-12 && !(barred && last_dropped_sign < 0.0)) {
        const double g = (big + c[j]) / up;
        if (g >= 0.0 && g < gamma) {
          gamma = g;
          drop_at = -1;
        }
      }
    }
    // where an active coefficient crosses zero (just-added ones sit at zero)
    for (int i = 0; i < k; ++i) {
      const double bi = beta[active[static_cast<std::size_t>(i)]];
      if (bi == 0.0) continue;
      const double t = -bi / d[i];
      if (t > 0.0 && t < gamma) {
        gamma = t;
        drop_at = i;
      }
    }

    for (int i = 0; i < k; ++i) beta[active[static_cast<std::size_t>(i)]] += gamma * d[i];
    c -= gamma * rate;
    big -= gamma;
    if (big < 0.0) big = 0.0;
    for (int i = 0; i < k; ++i) {
      c[active[static_cast<std::size_t>(i)]] = signs[static_cast<std::size_t>(i)] * big;
    }

    if (drop_at >= 0) {
      const int j = active[static_cast<std::size_t>(drop_at)];
      beta[j] = 0.0;
      last_dropped_sign = signs[static_cast<std::size_t>(drop_at)];
      active.erase(active.begin() + drop_at);
      signs.erase(signs.begin() + drop_at);
      in_active[static_cast<std::size_t>(j)] = 0;
      chol.rebuild(active);
      last_dropped = j;
      add_pending = false;
    } else {
      add_pending = true;
    }

    path.lambdas.push_back(big);
    path.betas.push_back(beta);
  }
  return path;
}

LarsPath to_original_scale(const ScaledProblem& sp, const ScaledPath& raw) {
  const Eigen::Index p = sp.c0.size();
  LarsPath out;
  out.lambdas = raw.lambdas;
  out.coefficients.reserve(raw.betas.size());
  out.intercepts.reserve(raw.betas.size());
  out.active_sets.reserve(raw.betas.size());
  for (const auto& beta : raw.betas) {
    Eigen::VectorXd orig(p);
    std::vector<int> support;
    double dot = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      orig[j] = beta[j] / sp.scale[j];
      dot += orig[j] * sp.mean[j];
      if (beta[j] != 0.0) support.push_back(static_cast<int>(j));
    }
    out.coefficients.push_back(std::move(orig));
    out.intercepts.push_back(sp.y_mean - dot);
    out.active_sets.push_back(std::move(support));
  }
  return out;
}

LarsPath path_from_stats(const PathStats& stats, double floor) {
  const ScaledProblem sp = scale_problem(stats);
  return to_original_scale(sp, lars_core(sp, floor));
}

std::vector<double> lambda_grid(double lambda_max) {
  std::vector<double> grid(kLambdaGridSize);
  for (int i = 0; i < kLambdaGridSize; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lambda_max * std::pow(kLambdaGridFloor, static_cast<double>(i) / (kLambdaGridSize - 1));
  }
  return grid;
}

struct CvLambda {
  double lambda = 0.0;
  double cv_mse = 0.0;  // mean held-out squared error at the minimizing grid point
};

// Shared core of select_lambda_cv / bolasso replications: full-sample stats
// are built once; fold training stats are differences.
CvLambda select_lambda_on(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const PathStats& full, int folds, std::uint64_t seed) {
  const long rows = x.rows();
  if (folds < 2) throw std::invalid_argument("select_lambda_cv: need at least 2 folds");
  if (rows < folds) {
    throw DataError("select_lambda_cv: fewer samples (" + std::to_string(rows) + ") than folds (" +
                    std::to_string(folds) + ")");
  }

  const double lambda_max = scale_problem(full).c0.cwiseAbs().maxCoeff();
  if (!(lambda_max > 0.0)) return {};
  const std::vector<double> grid = lambda_grid(lambda_max);
  const double floor = grid.back();

  const auto folds_idx = kfold_indices(static_cast<int>(rows), folds, seed);
  Eigen::MatrixXd fold_mse(static_cast<Eigen::Index>(folds_idx.size()), kLambdaGridSize);
  for (std::size_t f = 0; f < folds_idx.size(); ++f) {
    const auto& fold = folds_idx[f];
    const Eigen::Index nf = static_cast<Eigen::Index>(fold.size());
    Eigen::MatrixXd xf(nf, x.cols());
    Eigen::VectorXd yf(nf);
    for (Eigen::Index i = 0; i < nf; ++i) {
      xf.row(i) = x.row(fold[static_cast<std::size_t>(i)]);
      yf[i] = y[fold[static_cast<std::size_t>(i)]];
    }

    const LarsPath path = path_from_stats(full.minus(PathStats::from_rows(xf, yf)), floor);
    Eigen::MatrixXd coefs(x.cols(), kLambdaGridSize);
    Eigen::VectorXd intercepts(kLambdaGridSize);
    for (int i = 0; i < kLambdaGridSize; ++i) {
      coefs.col(i) = coefficients_at(path, grid[static_cast<std::size_t>(i)]);
      intercepts[i] = intercept_at(path, grid[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXd resid =
        ((xf * coefs).rowwise() + intercepts.transpose()).colwise() - yf;
    fold_mse.row(static_cast<Eigen::Index>(f)) =
        resid.array().square().colwise().mean();
  }

  // one-standard-error rule: take the sparsest (largest) lambda whose mean
  // error stays within one standard error of the best mean error
  const Eigen::VectorXd mean = fold_mse.colwise().mean();
  int best = 0;
  for (int i = 1; i < kLambdaGridSize; ++i) {
    if (mean[i] < mean[best]) best = i;  // ties keep the larger lambda
  }
  const double k = static_cast<double>(folds_idx.size());
  const double var =
      (fold_mse.col(best).array() - mean[best]).square().sum() / std::max(1.0, k - 1.0);
  const double threshold = mean[best] + std::sqrt(var / k);
  int chosen = best;
  for (int i = 0; i < best; ++i) {
    if (mean[i] <= threshold) {
      chosen = i;
      break;
    }
  }
  return {grid[static_cast<std::size_t>(chosen)], mean[best]};
}

}  // namespace

LarsPath lars_lasso_path(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  validate_design(design, y);
  const Eigen::Index p = design.cols() - 1;
  return path_from_stats(PathStats::from_rows(design.rightCols(p), y), 0.0);
}

Eigen::VectorXd coefficients_at(const LarsPath& path, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("coefficients_at: lambda must be non-negative");
  if (path.lambdas.empty()) throw std::invalid_argument("coefficients_at: empty path");
  if (lambda >= path.lambdas.front()) return path.coefficients.front();
  if (lambda <= path.lambdas.back()) return path.coefficients.back();

  const auto it = std::lower_bound(path.lambdas.begin(), path.lambdas.end(), lambda,
                                   std::greater<double>());
  const std::size_t hi = static_cast<std::size_t>(it - path.lambdas.begin());
  const std::size_t lo = hi - 1;
  if (path.lambdas[lo] == path.lambdas[hi]) return path.coefficients[hi];
  const double w = (path.lambdas[lo] - lambda) / (path.lambdas[lo] - path.lambdas[hi]);
  return (1.0 - w) * path.coefficients[lo] + w * path.coefficients[hi];
}

double intercept_at(const LarsPath& path, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("intercept_at: lambda must be non-negative");
  if (path.lambdas.empty()) throw std::invalid_argument("intercept_at: empty path");
  if (lambda >= path.lambdas.front()) return path.intercepts.front();
  if (lambda <= path.lambdas.back()) return path.intercepts.back();

  const auto it = std::lower_bound(path.lambdas.begin(), path.lambdas.end(), lambda,
                                   std::greater<double>());
  const std::size_t hi = static_cast<std::size_t>(it - path.lambdas.begin());
  const std::size_t lo = hi - 1;
  if (path.lambdas[lo] == path.lambdas[hi]) return path.intercepts[hi];
  const double w = (path.lambdas[lo] - lambda) / (path.lambdas[lo] - path.lambdas[hi]);
  return (1.0 - w) * path.intercepts[lo] + w * path.intercepts[hi];
}

double select_lambda_cv(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, int folds,
                        std::uint64_t seed) {
  validate_design(design, y);
  const Eigen::Index p = design.cols() - 1;
  const Eigen::MatrixXd x = design.rightCols(p);
  return select_lambda_on(x, y, PathStats::from_rows(x, y), folds, seed).lambda;
}

BolassoReplications bolasso_replications(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                         int replications, int folds, std::uint64_t seed) {
  validate_design(design, y);
  if (replications < 1) {
    throw std::invalid_argument("bolasso: need at least one replication");
  }
  const Eigen::Index p = design.cols() - 1;
  const Eigen::MatrixXd x = design.rightCols(p);
  const int rows = static_cast<int>(x.rows());

  bool label_valued = true;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(std::abs(y[i]) - 1.0) > 1e-9) {
      label_valued = false;
      break;
    }
  }

  BolassoReplications out;
  out.supports.reserve(static_cast<std::size_t>(replications));
  out.lambdas.reserve(static_cast<std::size_t>(replications));

  for (int r = 0; r < replications; ++r) {
    const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    std::vector<int> idx = bootstrap_resample(rows, derive_seed(rep_seed, 0));

    if (label_valued) {
      auto single_class = [&](const std::vector<int>& rows_idx) {
        const double first = y[rows_idx.front()];
        for (int i : rows_idx) {
          if (y[i] != first) return false;
        }
        return true;
      };
      if (single_class(idx)) {
        idx = bootstrap_resample(rows, derive_seed(rep_seed, 1));
        if (single_class(idx)) ++out.degenerate_replications;
      }
    }

    Eigen::MatrixXd xb(rows, p);
    Eigen::VectorXd yb(rows);
    for (int i = 0; i < rows; ++i) {
      xb.row(i) = x.row(idx[static_cast<std::size_t>(i)]);
      yb[i] = y[idx[static_cast<std::size_t>(i)]];
    }

    const PathStats stats = PathStats::from_rows(xb, yb);
    const CvLambda cv = select_lambda_on(xb, yb, stats, folds, derive_seed(rep_seed, 2));
    // cross-validation tracks prediction error and settles near the noise
    // scale sigma*sqrt(n), but screening out the column whose sample
    // correlation is the largest of p noise draws needs the selection scale
    // 2*sigma*sqrt(n ln p), so supports are recorded at whichever is larger,
    // with sigma estimated from the held-out error itself
    const double selection_scale = 2.0 * std::sqrt(std::max(0.0, cv.cv_mse)) *
                                   std::sqrt(static_cast<double>(rows) *
                                             std::log(static_cast<double>(p)));
    const double lambda = std::max(cv.lambda, selection_scale);
    const LarsPath path =
        path_from_stats(stats, lambda > 0.0 ? lambda * 0.5 : 0.0);
    const Eigen::VectorXd beta = coefficients_at(path, lambda);

    std::vector<int> support;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (std::abs(beta[j]) > kSupportEps) support.push_back(static_cast<int>(j));
    }
    out.supports.push_back(std::move(support));
    out.lambdas.push_back(lambda);
  }
  return out;
}

BolassoResult bolasso_consensus(const BolassoReplications& reps, int use_first, double rho,
                                Eigen::Index num_columns) {
  if (use_first < 1 || use_first > static_cast<int>(reps.supports.size())) {
    throw std::invalid_argument("bolasso_consensus: bad replication count");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("bolasso_consensus: rho must be in (0, 1]");
  }

  BolassoResult out;
  out.replications = use_first;
  out.rho = rho;
  out.degenerate_replications = reps.degenerate_replications;
  out.lambdas.assign(reps.lambdas.begin(), reps.lambdas.begin() + use_first);

  Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_columns);
  for (int r = 0; r < use_first; ++r) {
    for (int j : reps.supports[static_cast<std::size_t>(r)]) counts[j] += 1.0;
  }
  out.frequencies = counts / static_cast<double>(use_first);
  for (Eigen::Index j = 0; j < num_columns; ++j) {
    if (out.frequencies[j] + kSupportEps >= rho) {
      out.consensus_support.push_back(static_cast<int>(j));
    }
  }
  return out;
}

BolassoResult bolasso_select(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                             int replications, double rho, int folds, std::uint64_t seed) {
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("bolasso_select: rho must be in (0, 1]");
  }
  const BolassoReplications reps = bolasso_replications(design, y, replications, folds, seed);
  return bolasso_consensus(reps, replications, rho, design.cols() - 1);
}

}  // namespace rfnn
