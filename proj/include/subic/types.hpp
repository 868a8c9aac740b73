#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace subic {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Feature matrix with column metadata. Treated as immutable once built;
// centering/scaling return a transformed copy instead of mutating.
struct DataMatrix {
  Mat values;                             // n rows (instances) x p columns (features)
  Vec column_means;                       // subtracted means (zeros until centered)
  Vec column_scales;                      // divisors applied after centering (ones unless z-scored)
  std::vector<std::string> column_names;  // size p
  std::vector<std::string> row_ids;       // size n
  std::vector<char> constant_columns;     // size p, flagged at load
  bool centered = false;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }
};

struct TargetVector {
  Vec values;  // length n, kept in original units
  std::string name;
};

// Full solver configuration. Non-positive mu/delta/group_tol mean "resolve
// automatically" (from the weight scale, and from the data RMS respectively);
// the resolved values are echoed alongside the raw config wherever the model
// is serialized.
struct FitConfig {
  double lambda1 = 0.0;     // squared-difference fusion strength
  double lambda2 = 0.0;     // absolute-difference fusion strength
  double phi = 0.5;         // kernel bandwidth, in [0, 1]
  int knn = 10;             // neighbor count for the pair mask (capped at m-1 per axis)
  bool supervised = true;   // include the target-driven weight components
  bool use_l2 = true;       // keep the lambda1 term (false: pure L1 fusion)
  double mu1 = 0.0;         // column constraint penalty (<=0: auto)
  double mu2 = 0.0;         // row constraint penalty (<=0: auto)
  double delta1 = 0.0;      // column dual step (<=0: auto, = mu1)
  double delta2 = 0.0;      // row dual step (<=0: auto, = mu2)
  double tol = 1e-6;        // residual tolerance (primal and dual)
  int max_iter = 500;
  double group_tol = 0.0;   // centroid-grouping tolerance (<=0: auto)
  long seed = 0;            // echoed in outputs; the fit itself is deterministic

  void validate() const;    // throws ConfigError on out-of-range fields
};

// Cluster assignment over m items. Labels are 0-based, contiguous, and
// ordered by the smallest member index of each cluster.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  int m() const { return static_cast<int>(labels.size()); }
  // Canonicalizes arbitrary integer labels (relabel by first occurrence).
  static Partition from_labels(const std::vector<int>& raw);
  bool operator==(const Partition& o) const { return labels == o.labels; }
};

}  // namespace subic
