#pragma once

#include <optional>
#include <string>
#include <utility>

#include "subic/types.hpp"

namespace subic {

// Parses a CSV with an optional leading "id" column (detected by header
// name, case-insensitive), exactly one target column selected by name, and
// all remaining columns numeric features. Requires n >= 2 and p >= 2.
// An empty target name means "no target column": the returned TargetVector
// is all zeros with an empty name.
std::pair<DataMatrix, TargetVector> load_csv(const std::string& path,
                                             const std::string& target_column);

// Returns a copy with every column shifted to mean zero; the subtracted
// means are stored on the result. Centering an already-centered matrix is a
// no-op on the values (means accumulate the additional, near-zero shift).
DataMatrix center_columns(const DataMatrix& X);

// Center and divide by the population standard deviation. Constant columns
// keep scale 1 so they pass through unchanged.
DataMatrix zscore_columns(const DataMatrix& X);

// A dataset as the CLI consumes it: features + target, plus the hidden
// per-row ground-truth labels when the file came from the simulator
// (columns prefixed "_truth_" are peeled off before load_csv's contract
// applies).
struct Dataset {
  DataMatrix X;
  TargetVector y;
  std::optional<Partition> truth_rows;
};

Dataset load_dataset(const std::string& path, const std::string& target_column);

void write_matrix_csv(const std::string& path, const DataMatrix& X,
                      const TargetVector* y);

}  // namespace subic
