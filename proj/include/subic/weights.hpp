#pragma once

#include <string>
#include <utility>
#include <vector>

#include "subic/types.hpp"

namespace subic {

// One fusion pair (i < j) with its combined weight and the two components
// it was summed from (scaled consistently with `weight` after
// normalization, so unsup + sup == weight).
struct WPair {
  int i = 0;
  int j = 0;
  double weight = 0.0;
  double unsup = 0.0;
  double sup = 0.0;
};

// Sparse pair weights for both axes. Column pairs fuse feature columns,
// row pairs fuse instances. Stored pairs are exactly the k-nearest-neighbor
// mask (union-symmetrized), and each axis is rescaled so its weights sum to
// 1/sqrt(p) (columns) and 1/sqrt(n) (rows).
struct WeightSet {
  std::vector<WPair> col_pairs;  // sorted lexicographically, i < j < p
  std::vector<WPair> row_pairs;  // i < j < n
  double col_sum = 0.0;          // post-normalization sums
  double row_sum = 0.0;
  double phi = 0.5;
  int knn = 0;                   // effective k after the m-1 cap
  bool supervised = true;
  int n = 0, p = 0;
};

// Pearson correlation; 0 whenever either input has zero variance.
double pearson_corr(const Vec& a, const Vec& b);

// Union-symmetrized k-nearest-neighbor pair mask from a symmetric
// zero-diagonal distance matrix (only the ranking matters, so squared
// distances are fine). Ties break toward the lower index; k >= m-1 yields
// every pair.
std::vector<std::pair<int, int>> knn_mask(const Mat& D, int k);

// Builds both axes' weights from centered data. Column pair (i,j) gets
//   exp(-phi * ||X_.i - X_.j||^2) + [supervised] exp(-phi * |corr(X_.i, Y) - corr(X_.j, Y)|)
// and row pair (i,j)
//   exp(-phi * ||X_i. - X_j.||^2) + [supervised] exp(-phi * sqrt(|Y_i - Y_j|)),
// each restricted to the kNN mask of its axis (mask ranking never uses Y),
// then normalized per axis.
WeightSet build_weights(const DataMatrix& X, const TargetVector& Y, const FitConfig& cfg);

// Debug dump: axis,i,j,w_unsup,w_sup,w_total (normalized scale).
void dump_weights_csv(const WeightSet& ws, const std::string& path);

}  // namespace subic
