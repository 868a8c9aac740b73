#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "subic/solver.hpp"
#include "subic/types.hpp"

namespace subic {

enum class Axis { rows, cols };

// Connected components of the graph linking items a,b whenever
// ||T_a - T_b||_2 / sqrt(len) <= eps (T_a the row or column vector).
// Components are labeled in order of their smallest member index.
Partition group_centroids(const Mat& T, Axis axis, double eps);

// The fitted generative summary: a checkerboard of Gaussian cells plus
// per-row-cluster target means, enough to cluster new data points and
// predict their target.
struct BiclusterModel {
  Partition row_partition;
  Partition col_partition;
  Mat block_means;   // k_rows x k_cols, means of centered X over each cell
  Vec y_means;       // per row cluster, original units
  Vec priors;        // row-cluster sizes / n
  double sigma2 = 0.0;  // mean squared residual entry of (X - T), floored
                        // at 1e-9 * Var(X entries) so likelihoods stay finite
  Vec column_means;     // centering applied before the fit
  Vec column_scales;    // z-score divisors (ones when unused)
  std::vector<std::string> column_names;
  std::vector<std::string> row_ids;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  FitConfig config;            // as requested
  double group_tol_resolved = 0.0;
  double mu1_resolved = 0.0, mu2_resolved = 0.0;
  std::string target_name;
  std::string scenario = "subic";

  int k_rows() const { return row_partition.k; }
  int k_cols() const { return col_partition.k; }
};

// Grouping tolerance used when the config leaves it at 0: one thousandth of
// the root-mean-square entry of the centered data.
double default_group_tol(const Mat& Xc);

// Groups both axes of the solution, then estimates block means from the
// centered data X (not from T), target means, priors, and the residual
// variance. X must be the matrix the fit consumed.
BiclusterModel extract(const FitResult& fr, const DataMatrix& X,
                       const TargetVector& Y, const FitConfig& cfg);

nlohmann::ordered_json model_to_json(const BiclusterModel& m);
BiclusterModel model_from_json(const nlohmann::ordered_json& j);
void save_model(const BiclusterModel& m, const std::string& path);
BiclusterModel load_model(const std::string& path);

}  // namespace subic
