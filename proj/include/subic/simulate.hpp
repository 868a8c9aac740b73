#pragma once

#include <string>
#include <vector>

#include "subic/types.hpp"

namespace subic {

// Checkerboard generator: contiguous row/column blocks (equal sizes up to
// remainder, or explicit sizes), cell means block_mean_scale * G_ab, noise
// sigma, and a target coupled to the row blocks. Rows and columns are
// shuffled by `seed` with the truth labels permuted consistently.
struct SimDesign {
  int n = 80, p = 80;
  int row_clusters = 4, col_clusters = 4;
  double sigma = 1.5;
  double sigma_y = 1.0;
  double block_mean_scale = 3.0;
  double y_mean_scale = 5.0;
  long seed = 0;
  bool shuffle = true;
  std::vector<int> row_sizes;  // optional explicit block sizes (sum == n)
  std::vector<int> col_sizes;
};

struct SimData {
  DataMatrix X;        // raw (uncentered)
  TargetVector y;
  Partition truth_rows;
  Partition truth_cols;
  Mat grid;            // the G used (row_clusters x col_clusters)
  Vec g_row;           // per-row-cluster target profile
};

// Deterministic, seed-independent block-mean grid with values in
// (-0.95, 0.95): a binary sign code (distinct row/column sign profiles,
// pairwise separated) times distinct van-der-Corput magnitudes, so no two
// entries are equal and distinct blocks remain separable under noise.
Mat design_grid(int r, int c);

// Per-row-cluster target profile: a +/- mix of two column sign profiles, so
// some column blocks correlate positively and some negatively with the
// target; entries are jittered to be distinct.
Vec target_profile(int r, int c);

SimData generate(const SimDesign& d);

// Approximate 20x20 layout with a 4x4 checkerboard (16 true cells), uneven
// segment sizes, two column groups strongly +/- correlated with the target
// and two nearly uncorrelated ones.
SimDesign fig2_preset(long seed);

// Dataset CSV: id, features, target column "y", hidden "_truth_row" labels.
void write_dataset_csv(const SimData& s, const std::string& path);
// Sidecar with both truth partitions and the design.
void write_truth_json(const SimData& s, const SimDesign& d, const std::string& path);

}  // namespace subic
