#include "rfnn/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rfnn/errors.hpp"
#include "rfnn/rng.hpp"

namespace rfnn {

namespace {

// RFC 4180-style records: quoted fields may contain commas, newlines, and
// doubled quotes. Bare carriage returns outside quotes are dropped.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
      field_started = true;  // a delimiter implies another field follows
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, std::size_t file_row, const std::string& column) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw DataError("row " + std::to_string(file_row) + ", column \"" + column +
                    "\": cannot parse '" + raw + "' as a number");
  }
  return value;
}

int parse_label(const std::string& raw, std::size_t file_row, const std::string& column) {
  const double v = parse_number(raw, file_row, column);
  if (v == 0.0 || v == -1.0) return -1;
  if (v == 1.0) return 1;
  throw DataError("row " + std::to_string(file_row) + ", column \"" + column + "\": label '" +
                  raw + "' is not one of 0/1 or -1/+1");
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str());
  if (rows.empty()) throw DataError("empty file: " + path);
  return rows;
}

void check_width(const std::vector<std::string>& row, std::size_t expected, std::size_t file_row,
                 const std::string& path) {
  if (row.size() != expected) {
    throw DataError(path + ": row " + std::to_string(file_row) + " has " +
                    std::to_string(row.size()) + " fields, expected " + std::to_string(expected));
  }
}

}  // namespace

Eigen::VectorXd Dataset::labels_real() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) y[static_cast<Eigen::Index>(i)] = labels[i];
  return y;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  const auto rows = read_csv_file(path);
  const auto& header = rows[0];

  std::ptrdiff_t label_idx = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (trim(header[j]) == label_column) {
      label_idx = static_cast<std::ptrdiff_t>(j);
      break;
    }
  }
  if (label_idx < 0) {
    throw DataError(path + ": label column \"" + label_column + "\" not found in header");
  }
  if (rows.size() < 2) throw DataError(path + ": no data rows");

  Dataset data;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (static_cast<std::ptrdiff_t>(j) != label_idx) data.feature_names.push_back(trim(header[j]));
  }
  if (data.feature_names.empty()) throw DataError(path + ": no feature columns");

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size() - 1);
  const Eigen::Index p = static_cast<Eigen::Index>(data.feature_names.size());
  data.features.resize(n, p);
  data.labels.resize(static_cast<std::size_t>(n));

  for (std::size_t r = 1; r < rows.size(); ++r) {
    check_width(rows[r], header.size(), r + 1, path);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < rows[r].size(); ++j) {
      if (static_cast<std::ptrdiff_t>(j) == label_idx) {
        data.labels[r - 1] = parse_label(rows[r][j], r + 1, label_column);
      } else {
        data.features(static_cast<Eigen::Index>(r - 1), col) =
            parse_number(rows[r][j], r + 1, data.feature_names[static_cast<std::size_t>(col)]);
        ++col;
      }
    }
  }
  return data;
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> load_csv_features(
    const std::string& path, const std::string& label_column) {
  const auto rows = read_csv_file(path);
  const auto& header = rows[0];

  std::ptrdiff_t label_idx = -1;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (trim(header[j]) == label_column && label_idx < 0) {
      label_idx = static_cast<std::ptrdiff_t>(j);
    } else {
      names.push_back(trim(header[j]));
    }
  }
  if (names.empty()) throw DataError(path + ": no feature columns");
  if (rows.size() < 2) throw DataError(path + ": no data rows");

  Eigen::MatrixXd features(static_cast<Eigen::Index>(rows.size() - 1),
                           static_cast<Eigen::Index>(names.size()));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    check_width(rows[r], header.size(), r + 1, path);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < rows[r].size(); ++j) {
      if (static_cast<std::ptrdiff_t>(j) == label_idx) continue;
      features(static_cast<Eigen::Index>(r - 1), col) =
          parse_number(rows[r][j], r + 1, names[static_cast<std::size_t>(col)]);
      ++col;
    }
  }
  return {std::move(names), std::move(features)};
}

SqlScoreTable load_score_table(const std::string& path, const std::string& label_column) {
  const auto rows = read_csv_file(path);
  const auto& header = rows[0];

  std::ptrdiff_t stmt_idx = -1, label_idx = -1;
  std::vector<std::pair<std::size_t, std::string>> score_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string name = trim(header[j]);
    if (name == "statement") {
      stmt_idx = static_cast<std::ptrdiff_t>(j);
    } else if (name == label_column) {
      label_idx = static_cast<std::ptrdiff_t>(j);
    } else {
      score_cols.emplace_back(j, name);
    }
  }
  if (stmt_idx < 0) throw DataError(path + ": score table needs a \"statement\" column");
  if (rows.size() < 2) throw DataError(path + ": no data rows");

  SqlScoreTable table;
  table.has_labels = label_idx >= 0;
  for (const auto& [j, name] : score_cols) table.columns.push_back(name);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    check_width(rows[r], header.size(), r + 1, path);
    const std::string& stmt = rows[r][static_cast<std::size_t>(stmt_idx)];
    std::vector<double> values;
    values.reserve(score_cols.size());
    for (const auto& [j, name] : score_cols) values.push_back(parse_number(rows[r][j], r + 1, name));
    table.scores[stmt] = std::move(values);
    if (table.has_labels) {
      table.labels[stmt] =
          parse_label(rows[r][static_cast<std::size_t>(label_idx)], r + 1, label_column);
    }
  }
  return table;
}

double shannon_entropy_bits(const std::string& text) {
  if (text.empty()) return 0.0;
  std::array<long, 256> counts{};
  for (unsigned char c : text) ++counts[c];
  const double n = static_cast<double>(text.size());
  double h = 0.0;
  for (long c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

SqlFeatures featurize_sql(const std::vector<std::string>& statements,
                          const SqlScoreTable* scores) {
  if (statements.empty()) throw DataError("featurize: no statements given");

  SqlFeatures out;
  out.columns = {"length", "entropy"};
  std::size_t extra = 0;
  if (scores != nullptr) {
    extra = scores->columns.size();
    out.columns.insert(out.columns.end(), scores->columns.begin(), scores->columns.end());
  }

  out.values.resize(static_cast<Eigen::Index>(statements.size()),
                    static_cast<Eigen::Index>(2 + extra));
  const bool with_labels = scores != nullptr && scores->has_labels;
  if (with_labels) out.labels.resize(statements.size());

  for (std::size_t i = 0; i < statements.size(); ++i) {
    const std::string& stmt = statements[i];
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    out.values(row, 0) = static_cast<double>(stmt.size());
    out.values(row, 1) = shannon_entropy_bits(stmt);
    if (scores != nullptr) {
      auto it = scores->scores.find(stmt);
      if (it == scores->scores.end()) {
        throw DataError("featurize: no score row for statement: " + stmt);
      }
      for (std::size_t j = 0; j < extra; ++j) {
        out.values(row, static_cast<Eigen::Index>(2 + j)) = it->second[j];
      }
      if (with_labels) out.labels[i] = scores->labels.at(stmt);
    }
  }
  return out;
}

std::pair<Dataset, StandardizationStats> standardize(const Dataset& data) {
  const Eigen::Index n = data.num_samples();
  const Eigen::Index p = data.num_features();
  if (n == 0) throw DataError("standardize: empty dataset");

  StandardizationStats stats;
  stats.means = data.features.colwise().mean();
  stats.stddevs.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double sd = 0.0;
    if (n > 1) {
      const double ss = (data.features.col(j).array() - stats.means[j]).square().sum();
      sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    // near-constant columns keep unit scale so they map to (numerical) zero
    const double floor = 1e-12 * std::max(1.0, std::abs(stats.means[j]));
    stats.stddevs[j] = sd > floor ? sd : 1.0;
  }

  Dataset out = data;
  out.features = standardize_rows(data.features, stats);
  out.stats = stats;
  return {std::move(out), std::move(stats)};
}

Eigen::VectorXd standardize_row(const Eigen::VectorXd& x, const StandardizationStats& stats) {
  if (x.size() != stats.means.size()) {
    throw std::invalid_argument("standardize_row: dimension mismatch");
  }
  return (x - stats.means).cwiseQuotient(stats.stddevs);
}

Eigen::MatrixXd standardize_rows(const Eigen::MatrixXd& rows, const StandardizationStats& stats) {
  if (rows.cols() != stats.means.size()) {
    throw std::invalid_argument("standardize_rows: dimension mismatch");
  }
  return (rows.rowwise() - stats.means.transpose()).array().rowwise() /
         stats.stddevs.transpose().array();
}

Dataset select_rows(const Dataset& data, const std::vector<int>& indices) {
  Dataset out;
  out.feature_names = data.feature_names;
  out.stats = data.stats;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), data.num_features());
  out.labels.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const int idx = indices[i];
    if (idx < 0 || idx >= data.num_samples()) {
      throw std::invalid_argument("select_rows: index out of range");
    }
    out.features.row(static_cast<Eigen::Index>(i)) = data.features.row(idx);
    out.labels[i] = data.labels[static_cast<std::size_t>(idx)];
  }
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("stratified_split: train_fraction must be in (0, 1)");
  }
  std::vector<int> pos, neg;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    (data.labels[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
  }
  if (pos.size() < 2 || neg.size() < 2) {
    throw DataError("stratified_split: each class needs at least 2 samples (have " +
                    std::to_string(pos.size()) + " positive, " + std::to_string(neg.size()) +
                    " negative)");
  }

  Rng rng(seed);
  std::vector<int> train_idx, test_idx;
  for (auto* cls : {&pos, &neg}) {
    rng.shuffle(*cls);
    const auto size = static_cast<long>(cls->size());
    long take = std::lround(train_fraction * static_cast<double>(size));
    take = std::clamp(take, 1L, size - 1);
    train_idx.insert(train_idx.end(), cls->begin(), cls->begin() + take);
    test_idx.insert(test_idx.end(), cls->begin() + take, cls->end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {select_rows(data, train_idx), select_rows(data, test_idx)};
}

std::vector<std::vector<int>> kfold_indices(int size, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold_indices: k must be at least 2");
  if (size < k) {
    throw DataError("kfold_indices: fewer samples (" + std::to_string(size) + ") than folds (" +
                    std::to_string(k) + ")");
  }
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);

  std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
  const int base = size / k;
  const int extra = size % k;
  std::size_t at = 0;
  for (int f = 0; f < k; ++f) {
    const int len = base + (f < extra ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.assign(perm.begin() + static_cast<std::ptrdiff_t>(at),
                perm.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(len)));
    std::sort(fold.begin(), fold.end());
    at += static_cast<std::size_t>(len);
  }
  return folds;
}

std::vector<int> bootstrap_resample(int size, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("bootstrap_resample: size must be positive");
  Rng rng(seed);
  std::vector<int> out(static_cast<std::size_t>(size));
  for (auto& v : out) v = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(size)));
  return out;
}

}  // namespace rfnn
