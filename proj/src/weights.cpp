#include "subic/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "subic/csv.hpp"
#include "subic/errors.hpp"
#include "subic/kernels.hpp"

namespace subic {

double pearson_corr(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ConfigError("pearson_corr: length mismatch");
  const int n = static_cast<int>(a.size());
  if (n < 2) return 0.0;
  double ma = a.mean(), mb = b.mean();
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    double da = a(i) - ma, db = b(i) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::pair<int, int>> knn_mask(const Mat& D, int k) {
  const int m = static_cast<int>(D.rows());
  if (D.cols() != m) throw ConfigError("knn_mask: distance matrix must be square");
  if (k < 1) throw ConfigError("knn_mask: k must be >= 1");
  std::set<std::pair<int, int>> pairs;
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) {
    order.clear();
    for (int j = 0; j < m; ++j)
      if (j != i) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (D(i, a) != D(i, b)) return D(i, a) < D(i, b);
      return a < b;  // deterministic tie-break toward the lower index
    });
    const int take = std::min<int>(k, static_cast<int>(order.size()));
    for (int t = 0; t < take; ++t) {
      int j = order[t];
      pairs.emplace(std::min(i, j), std::max(i, j));
    }
  }
  return {pairs.begin(), pairs.end()};
}

namespace {

std::vector<WPair> axis_weights(const Mat& sqd, int k, double phi, bool supervised,
                                const Vec& sup_scores, bool sup_abs_sqrt) {
  // sup_scores holds per-item supervision values: correlations with the
  // target for columns, the raw target for rows. The supervised kernel uses
  // |s_i - s_j| directly for columns and sqrt(|Y_i - Y_j|) for rows.
  auto mask = knn_mask(sqd, k);
  std::vector<WPair> out;
  out.reserve(mask.size());
  for (auto [i, j] : mask) {
    WPair pr;
    pr.i = i;
    pr.j = j;
    pr.unsup = std::exp(-phi * sqd(i, j));
    if (supervised) {
      double gap = std::fabs(sup_scores(i) - sup_scores(j));
      if (sup_abs_sqrt) gap = std::sqrt(gap);
      pr.sup = std::exp(-phi * gap);
    }
    pr.weight = pr.unsup + pr.sup;
    out.push_back(pr);
  }
  return out;
}

double normalize(std::vector<WPair>& pairs, double total_target) {
  double sum = 0.0;
  for (const auto& pr : pairs) sum += pr.weight;
  if (sum <= 0.0) return 0.0;
  const double scale = total_target / sum;
  for (auto& pr : pairs) {
    pr.weight *= scale;
    pr.unsup *= scale;
    pr.sup *= scale;
  }
  double check = 0.0;
  for (const auto& pr : pairs) check += pr.weight;
  return check;
}

}  // namespace

WeightSet build_weights(const DataMatrix& X, const TargetVector& Y, const FitConfig& cfg) {
  cfg.validate();
  if (!X.centered) throw ConfigError("build_weights: X must be centered first");
  const int n = X.n(), p = X.p();
  if (Y.values.size() != n) throw DataError("build_weights: target length mismatch");

  WeightSet ws;
  ws.phi = cfg.phi;
  ws.supervised = cfg.supervised;
  ws.n = n;
  ws.p = p;

  // Column axis: neighbor ranking uses feature distances only.
  Mat colD = kernels::col_sqdist(X.values);
  Vec corrs = Vec::Zero(p);
  if (cfg.supervised)
    for (int c = 0; c < p; ++c) corrs(c) = pearson_corr(X.values.col(c), Y.values);
  const int k_col = std::min(cfg.knn, p - 1);
  ws.col_pairs = axis_weights(colD, k_col, cfg.phi, cfg.supervised, corrs, false);

  // Row axis: supervision compares raw target values.
  Mat rowD = kernels::row_sqdist(X.values);
  const int k_row = std::min(cfg.knn, n - 1);
  ws.row_pairs = axis_weights(rowD, k_row, cfg.phi, cfg.supervised, Y.values, true);

  ws.knn = std::max(k_col, k_row);
  ws.col_sum = normalize(ws.col_pairs, 1.0 / std::sqrt(static_cast<double>(p)));
  ws.row_sum = normalize(ws.row_pairs, 1.0 / std::sqrt(static_cast<double>(n)));
  return ws;
}

void dump_weights_csv(const WeightSet& ws, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  auto emit = [&](const char* axis, const std::vector<WPair>& pairs) {
    for (const auto& pr : pairs)
      rows.push_back({axis, std::to_string(pr.i), std::to_string(pr.j),
                      format_double(pr.unsup), format_double(pr.sup),
                      format_double(pr.weight)});
  };
  emit("col", ws.col_pairs);
  emit("row", ws.row_pairs);
  write_csv(path, {"axis", "i", "j", "w_unsup", "w_sup", "w_total"}, rows);
}

}  // namespace subic
