#pragma once

#include <string>
#include <vector>

#include "subic/biclusters.hpp"
#include "subic/types.hpp"

namespace subic {

// Leaf order from average-linkage agglomeration over the rows of `items`
// (Euclidean distances). Deterministic; ties merge toward lower indices.
std::vector<int> average_linkage_order(const Mat& items);

// Static SVG of the centered data, rows and columns sorted by cluster and
// average-linkage order within each cluster, symmetric diverging color
// scale, and boundary lines between clusters. Exactly n*p <rect> elements.
std::string render_heatmap_svg(const DataMatrix& X, const BiclusterModel& m);

}  // namespace subic
