#pragma once

#include "subic/types.hpp"

namespace subic {

// Fraction of item pairs on which two partitions agree. Computed from the
// contingency table in O(m + ka*kb); all pair counts fit exact integer
// arithmetic, with the single division done last.
double rand_index(const Partition& a, const Partition& b);

// Chance-adjusted agreement. When the adjustment denominator is zero (both
// partitions all-singletons or single-cluster) this returns 1.0 if the
// partitions are equal and 0.0 otherwise.
double adjusted_rand_index(const Partition& a, const Partition& b);

// Flattens (row cluster, column cluster) per cell into one partition over
// n*p cells, cell (i,j) at index i*p + j. Lets row and column recovery be
// scored jointly.
Partition cell_partition(const Partition& rows, const Partition& cols);

}  // namespace subic
