#include "rfnn/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rfnn/errors.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/selection.hpp"

namespace rfnn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double fold_accuracy(const TrainedModel& model, const Dataset& test_data) {
  long correct = 0;
  for (Eigen::Index i = 0; i < test_data.num_samples(); ++i) {
    const int predicted = predict(model, test_data.features.row(i).transpose());
    if (predicted == test_data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_data.num_samples());
}

}  // namespace

double auc_rank(const std::vector<int>& labels, const Eigen::VectorXd& scores) {
  const std::size_t n = labels.size();
  if (n != static_cast<std::size_t>(scores.size())) {
    throw std::invalid_argument("auc_rank: labels and scores differ in length");
  }
  long pos = 0, neg = 0;
  for (int label : labels) (label > 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) {
    throw DataError("auc_rank: both classes must be present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] < scores[static_cast<Eigen::Index>(b)];
  });

  // midranks over tied scores
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[static_cast<Eigen::Index>(order[j + 1])] ==
                            scores[static_cast<Eigen::Index>(order[i])]) {
      ++j;
    }
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] > 0) pos_rank_sum += midrank;
    }
    i = j + 1;
  }

  const double p = static_cast<double>(pos);
  const double q = static_cast<double>(neg);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

Metrics compute_metrics(const std::vector<int>& labels, const std::vector<int>& predictions,
                        const Eigen::VectorXd& scores, double train_seconds,
                        double test_seconds) {
  const std::size_t n = labels.size();
  if (n == 0) throw std::invalid_argument("compute_metrics: empty input");
  if (predictions.size() != n || static_cast<std::size_t>(scores.size()) != n) {
    throw std::invalid_argument("compute_metrics: length mismatch");
  }

  Metrics m;
  m.train_seconds = train_seconds;
  m.test_seconds = test_seconds;
  for (std::size_t i = 0; i < n; ++i) {
    const bool actual_pos = labels[i] > 0;
    const bool predicted_pos = predictions[i] > 0;
    if (actual_pos && predicted_pos) ++m.confusion.tp;
    else if (actual_pos) ++m.confusion.fn;
    else if (predicted_pos) ++m.confusion.fp;
    else ++m.confusion.tn;
  }
  m.accuracy = static_cast<double>(m.confusion.tp + m.confusion.tn) / static_cast<double>(n);
  const long actual_pos = m.confusion.tp + m.confusion.fn;
  if (actual_pos == 0) {
    m.no_positives = true;
    m.sensitivity = 0.0;
  } else {
    m.sensitivity = static_cast<double>(m.confusion.tp) / static_cast<double>(actual_pos);
  }
  const long actual_neg = m.confusion.tn + m.confusion.fp;
  if (actual_pos == 0 || actual_neg == 0) {
    m.single_class = true;
    m.auc = 0.5;
  } else {
    m.auc = auc_rank(labels, scores);
  }
  return m;
}

GridRanges default_grid() {
  return {{2, 3, 4}, {8, 16, 32}, {0.5, 0.6, 0.7}};
}

GridResult grid_search(const Dataset& data, const GridRanges& grid, const ModelConfig& base,
                       std::uint64_t seed) {
  if (grid.num_mfs.empty() || grid.bootstrap_reps.empty() || grid.consensus_rho.empty()) {
    throw std::invalid_argument("grid_search: every grid dimension needs at least one value");
  }

  const int folds = base.cv_folds;
  const auto folds_idx =
      kfold_indices(static_cast<int>(data.num_samples()), folds, derive_seed(seed, 0));

  // cell accuracies accumulate as (M, b, rho) over the same folds everywhere
  const std::size_t cells =
      grid.num_mfs.size() * grid.bootstrap_reps.size() * grid.consensus_rho.size();
  std::vector<GridCell> table(cells);
  std::vector<std::vector<double>> fold_accs(cells);
  auto cell_index = [&](std::size_t mi, std::size_t bi, std::size_t ri) {
    return (mi * grid.bootstrap_reps.size() + bi) * grid.consensus_rho.size() + ri;
  };
  for (std::size_t mi = 0; mi < grid.num_mfs.size(); ++mi) {
    for (std::size_t bi = 0; bi < grid.bootstrap_reps.size(); ++bi) {
      for (std::size_t ri = 0; ri < grid.consensus_rho.size(); ++ri) {
        auto& cell = table[cell_index(mi, bi, ri)];
        cell.num_mfs = grid.num_mfs[mi];
        cell.bootstrap_reps = grid.bootstrap_reps[bi];
        cell.consensus_rho = grid.consensus_rho[ri];
      }
    }
  }
  const int max_reps = *std::max_element(grid.bootstrap_reps.begin(), grid.bootstrap_reps.end());

  std::vector<int> all(static_cast<std::size_t>(data.num_samples()));
  std::iota(all.begin(), all.end(), 0);

  for (std::size_t f = 0; f < folds_idx.size(); ++f) {
    const auto& holdout = folds_idx[f];
    std::vector<int> train_rows;
    train_rows.reserve(all.size() - holdout.size());
    std::set_difference(all.begin(), all.end(), holdout.begin(), holdout.end(),
                        std::back_inserter(train_rows));
    const Dataset train_data = select_rows(data, train_rows);
    const Dataset test_data = select_rows(data, holdout);

    for (std::size_t mi = 0; mi < grid.num_mfs.size(); ++mi) {
      ModelConfig cfg = base;
      cfg.num_mfs = grid.num_mfs[mi];
      cfg.seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(f + 1)),
                             static_cast<std::uint64_t>(cfg.num_mfs));
      try {
        const detail::TrainingPrefix prefix = detail::train_prefix(train_data, cfg);
        // replication r depends only on its derived seed, so one long run
        // yields every smaller bootstrap count exactly
        const BolassoReplications reps = bolasso_replications(
            prefix.design, prefix.y, max_reps, cfg.cv_folds, derive_seed(cfg.seed, 2));
        for (std::size_t bi = 0; bi < grid.bootstrap_reps.size(); ++bi) {
          for (std::size_t ri = 0; ri < grid.consensus_rho.size(); ++ri) {
            auto& cell = table[cell_index(mi, bi, ri)];
            if (cell.failed) continue;
            ModelConfig cell_cfg = cfg;
            cell_cfg.bootstrap_reps = grid.bootstrap_reps[bi];
            cell_cfg.consensus_rho = grid.consensus_rho[ri];
            const BolassoResult consensus =
                bolasso_consensus(reps, cell_cfg.bootstrap_reps, cell_cfg.consensus_rho,
                                  prefix.design.cols() - 1);
            const TrainedModel model = detail::train_finish(prefix, cell_cfg, consensus);
            fold_accs[cell_index(mi, bi, ri)].push_back(fold_accuracy(model, test_data));
          }
        }
      } catch (const std::exception& e) {
        for (std::size_t bi = 0; bi < grid.bootstrap_reps.size(); ++bi) {
          for (std::size_t ri = 0; ri < grid.consensus_rho.size(); ++ri) {
            auto& cell = table[cell_index(mi, bi, ri)];
            cell.failed = true;
            cell.error = e.what();
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < cells; ++i) {
    if (table[i].failed || fold_accs[i].empty()) {
      table[i].failed = true;
      continue;
    }
    table[i].cv_accuracy = std::accumulate(fold_accs[i].begin(), fold_accs[i].end(), 0.0) /
                           static_cast<double>(fold_accs[i].size());
  }

  const GridCell* best = nullptr;
  for (const auto& cell : table) {
    if (cell.failed) continue;
    if (best == nullptr) {
      best = &cell;
      continue;
    }
    // ties prefer smaller M, then smaller b, then larger rho
    if (cell.cv_accuracy > best->cv_accuracy ||
        (cell.cv_accuracy == best->cv_accuracy &&
         (cell.num_mfs < best->num_mfs ||
          (cell.num_mfs == best->num_mfs &&
           (cell.bootstrap_reps < best->bootstrap_reps ||
            (cell.bootstrap_reps == best->bootstrap_reps &&
             cell.consensus_rho > best->consensus_rho)))))) {
      best = &cell;
    }
  }
  if (best == nullptr) {
    throw TrainError("grid_search: every grid cell failed" +
                     (table.empty() ? std::string() : "; last error: " + table.back().error));
  }

  GridResult result;
  result.table = std::move(table);
  result.best = base;
  result.best.num_mfs = best->num_mfs;
  result.best.bootstrap_reps = best->bootstrap_reps;
  result.best.consensus_rho = best->consensus_rho;
  return result;
}

RunReport repeated_runs(const Dataset& data, const ModelConfig& config, int runs,
                        std::uint64_t seed, double train_fraction) {
  if (runs < 1) throw std::invalid_argument("repeated_runs: need at least one run");

  RunReport report;
  report.config = config;
  report.per_run.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    const auto [train_data, test_data] =
        stratified_split(data, train_fraction, derive_seed(run_seed, 0));

    ModelConfig run_config = config;
    run_config.seed = derive_seed(run_seed, 1);

    const auto train_start = Clock::now();
    const TrainedModel model = train(train_data, run_config);
    const double train_seconds = seconds_since(train_start);

    const auto test_start = Clock::now();
    const std::vector<int> predictions = predict_batch(model, test_data.features);
    const Eigen::VectorXd scores = score_batch(model, test_data.features);
    const double test_seconds = seconds_since(test_start);

    report.per_run.push_back(
        compute_metrics(test_data.labels, predictions, scores, train_seconds, test_seconds));
  }
  return report;
}

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean_std: empty input");
  MeanStd out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f(%.2f)", mean, std);
  return buf;
}

std::string render_metrics_table(const std::string& model_name, const RunReport& report) {
  std::vector<double> acc, auc, sens, test_ms;
  for (const auto& m : report.per_run) {
    acc.push_back(m.accuracy * 100.0);
    auc.push_back(m.auc * 100.0);
    sens.push_back(m.sensitivity * 100.0);
    test_ms.push_back(m.test_seconds * 1000.0);
  }
  const MeanStd a = mean_std(acc), u = mean_std(auc), s = mean_std(sens), t = mean_std(test_ms);

  const std::vector<std::string> headers = {"Model", "Accuracy", "AUC", "Sensitivity",
                                            "Test Time (ms)"};
  const std::vector<std::string> row = {model_name, format_mean_std(a.mean, a.std),
                                        format_mean_std(u.mean, u.std),
                                        format_mean_std(s.mean, s.std),
                                        format_mean_std(t.mean, t.std)};
  std::ostringstream out;
  for (std::size_t c = 0; c < headers.size(); ++c) {
    const std::size_t width = std::max(headers[c].size(), row[c].size()) + 2;
    std::string h = headers[c];
    h.resize(width, ' ');
    out << h;
  }
  out << '\n';
  for (std::size_t c = 0; c < headers.size(); ++c) {
    const std::size_t width = std::max(headers[c].size(), row[c].size()) + 2;
    std::string v = row[c];
    v.resize(width, ' ');
    out << v;
  }
  out << '\n';
  return out.str();
}

}  // namespace rfnn
