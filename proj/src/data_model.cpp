#include "subic/data_model.hpp"

#include <algorithm>
#include <cctype>

#include "subic/csv.hpp"
#include "subic/errors.hpp"

namespace subic {

namespace {

bool iequals(const std::string& a, const char* b) {
  std::string t = a;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t == b;
}

bool is_truth_column(const std::string& name) { return name.rfind("_truth_", 0) == 0; }

struct ParsedTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> row_ids;
  std::vector<double> target;
  Mat values;
  std::vector<int> truth_rows;
  bool has_truth = false;
};

ParsedTable parse_table(const std::string& path, const std::string& target_column) {
  CsvTable t = read_csv(path);

  int id_col = -1;
  if (!t.header.empty() && iequals(t.header[0], "id")) id_col = 0;

  int target_col = -1;
  if (!target_column.empty()) {
    for (int c = 0; c < t.ncols(); ++c) {
      if (t.header[c] == target_column) {
        if (target_col >= 0)
          throw DataError("duplicate target column '" + target_column + "' in " + path);
        target_col = c;
      }
    }
    if (target_col < 0)
      throw DataError("target column '" + target_column + "' not found in " + path);
    if (target_col == id_col) throw DataError("target column collides with id column");
  }

  int truth_col = -1;
  std::vector<int> feature_cols;
  for (int c = 0; c < t.ncols(); ++c) {
    if (c == id_col || c == target_col) continue;
    if (is_truth_column(t.header[c])) {
      if (t.header[c] == "_truth_row") truth_col = c;
      continue;  // hidden columns are never features
    }
    feature_cols.push_back(c);
  }

  const int n = t.nrows();
  const int p = static_cast<int>(feature_cols.size());
  if (n < 2) throw DataError("need at least 2 rows, got " + std::to_string(n));
  if (p < 2) throw DataError("need at least 2 feature columns, got " + std::to_string(p));

  ParsedTable out;
  out.values.resize(n, p);
  out.target.resize(n);
  out.row_ids.resize(n);
  for (int c = 0; c < p; ++c) out.feature_names.push_back(t.header[feature_cols[c]]);
  if (truth_col >= 0) {
    out.has_truth = true;
    out.truth_rows.resize(n);
  }

  for (int r = 0; r < n; ++r) {
    const auto& row = t.rows[r];
    out.row_ids[r] = id_col >= 0 ? row[id_col] : std::to_string(r);
    out.target[r] =
        target_col >= 0 ? parse_cell(row[target_col], r + 1, t.header[target_col]) : 0.0;
    for (int c = 0; c < p; ++c)
      out.values(r, c) = parse_cell(row[feature_cols[c]], r + 1, t.header[feature_cols[c]]);
    if (truth_col >= 0)
      out.truth_rows[r] =
          static_cast<int>(parse_cell(row[truth_col], r + 1, t.header[truth_col]));
  }
  return out;
}

DataMatrix make_matrix(ParsedTable&& pt) {
  DataMatrix X;
  X.values = std::move(pt.values);
  X.column_names = std::move(pt.feature_names);
  X.row_ids = std::move(pt.row_ids);
  X.column_means = Vec::Zero(X.p());
  X.column_scales = Vec::Ones(X.p());
  X.constant_columns.assign(X.p(), 0);
  for (int c = 0; c < X.p(); ++c) {
    double mn = X.values.col(c).minCoeff(), mx = X.values.col(c).maxCoeff();
    if (mn == mx) X.constant_columns[c] = 1;
  }
  return X;
}

}  // namespace

std::pair<DataMatrix, TargetVector> load_csv(const std::string& path,
                                             const std::string& target_column) {
  ParsedTable pt = parse_table(path, target_column);
  TargetVector y;
  y.name = target_column;
  y.values = Eigen::Map<Vec>(pt.target.data(), static_cast<Eigen::Index>(pt.target.size()));
  return {make_matrix(std::move(pt)), std::move(y)};
}

Dataset load_dataset(const std::string& path, const std::string& target_column) {
  ParsedTable pt = parse_table(path, target_column);
  Dataset d;
  d.y.name = target_column;
  d.y.values = Eigen::Map<Vec>(pt.target.data(), static_cast<Eigen::Index>(pt.target.size()));
  if (pt.has_truth) d.truth_rows = Partition::from_labels(pt.truth_rows);
  d.X = make_matrix(std::move(pt));
  return d;
}

DataMatrix center_columns(const DataMatrix& X) {
  DataMatrix out = X;
  Vec means = out.values.colwise().mean();
  out.values.rowwise() -= means.transpose();
  out.column_means += means.cwiseProduct(X.column_scales);  // undo order: scale then shift
  out.centered = true;
  return out;
}

DataMatrix zscore_columns(const DataMatrix& X) {
  DataMatrix out = center_columns(X);
  const int n = out.n();
  for (int c = 0; c < out.p(); ++c) {
    double var = out.values.col(c).squaredNorm() / n;
    if (var > 0.0) {
      double sd = std::sqrt(var);
      out.values.col(c) /= sd;
      out.column_scales(c) *= sd;
    }
  }
  return out;
}

void write_matrix_csv(const std::string& path, const DataMatrix& X, const TargetVector* y) {
  std::vector<std::string> header;
  header.push_back("id");
  for (const auto& c : X.column_names) header.push_back(c);
  if (y) header.push_back(y->name);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(X.n());
  for (int r = 0; r < X.n(); ++r) {
    std::vector<std::string> row;
    row.push_back(X.row_ids[r]);
    for (int c = 0; c < X.p(); ++c) row.push_back(format_double(X.values(r, c)));
    if (y) row.push_back(format_double(y->values(r)));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace subic
