#include "subic/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "subic/errors.hpp"

namespace subic {

std::vector<int> average_linkage_order(const Mat& items) {
  const int k = static_cast<int>(items.rows());
  if (k == 0) return {};
  // UPGMA over Euclidean distances, O(k^3); k is a cluster count or a
  // within-cluster size, so this stays small.
  struct Cluster {
    std::vector<int> order;
    bool alive = true;
  };
  std::vector<Cluster> cs(k);
  for (int i = 0; i < k; ++i) cs[i].order = {i};
  Mat D(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) D(i, j) = (items.row(i) - items.row(j)).norm();

  for (int step = 1; step < k; ++step) {
    int bu = -1, bv = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int u = 0; u < k; ++u) {
      if (!cs[u].alive) continue;
      for (int v = u + 1; v < k; ++v) {
        if (!cs[v].alive) continue;
        if (D(u, v) < best) {  // strict: ties go to the earliest (u, v)
          best = D(u, v);
          bu = u;
          bv = v;
        }
      }
    }
    double su = static_cast<double>(cs[bu].order.size());
    double sv = static_cast<double>(cs[bv].order.size());
    for (int w = 0; w < k; ++w) {
      if (!cs[w].alive || w == bu || w == bv) continue;
      D(bu, w) = D(w, bu) = (su * D(bu, w) + sv * D(bv, w)) / (su + sv);
    }
    cs[bu].order.insert(cs[bu].order.end(), cs[bv].order.begin(), cs[bv].order.end());
    cs[bv].alive = false;
  }
  for (auto& c : cs)
    if (c.alive) return c.order;
  return {};
}

namespace {

// display order: clusters by linkage over centroids, members by linkage
// inside each cluster
std::vector<int> display_order(const Mat& vectors, const Partition& part) {
  const int m = static_cast<int>(vectors.rows());
  const int k = part.k;
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < m; ++i) members[part.labels[i]].push_back(i);

  Mat centroids = Mat::Zero(k, vectors.cols());
  for (int g = 0; g < k; ++g) {
    for (int i : members[g]) centroids.row(g) += vectors.row(i);
    centroids.row(g) /= static_cast<double>(members[g].size());
  }
  std::vector<int> cluster_order = average_linkage_order(centroids);

  std::vector<int> order;
  order.reserve(m);
  for (int g : cluster_order) {
    Mat sub(members[g].size(), vectors.cols());
    for (size_t t = 0; t < members[g].size(); ++t) sub.row(t) = vectors.row(members[g][t]);
    for (int t : average_linkage_order(sub)) order.push_back(members[g][t]);
  }
  return order;
}

std::string hex_color(double t) {
  // symmetric diverging scale: blue for negative, white at zero, red positive
  t = std::clamp(t, -1.0, 1.0);
  int r, g, b;
  if (t >= 0) {
    r = 255;
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  } else {
    b = 255;
    r = g = static_cast<int>(std::lround(255.0 * (1.0 + t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_heatmap_svg(const DataMatrix& X, const BiclusterModel& m) {
  const int n = X.n(), p = X.p();
  if (m.row_partition.m() != n || m.col_partition.m() != p)
    throw DataError("heatmap: model shape does not match the data");

  Mat Z = X.values;
  if (!X.centered) {
    for (int j = 0; j < p; ++j)
      Z.col(j) = (Z.col(j).array() - m.column_means(j)) / m.column_scales(j);
  }

  std::vector<int> row_order = display_order(Z, m.row_partition);
  std::vector<int> col_order = display_order(Z.transpose(), m.col_partition);

  double amax = std::max(Z.cwiseAbs().maxCoeff(), 1e-12);
  const int cell = std::max(2, std::min(12, 800 / std::max(n, p)));
  const int W = p * cell, H = n * cell;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  for (int a = 0; a < n; ++a) {
    int i = row_order[a];
    for (int b = 0; b < p; ++b) {
      int j = col_order[b];
      svg << "<rect x=\"" << b * cell << "\" y=\"" << a * cell << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"" << hex_color(Z(i, j) / amax) << "\"/>\n";
    }
  }
  // cluster boundaries
  for (int a = 1; a < n; ++a) {
    if (m.row_partition.labels[row_order[a]] != m.row_partition.labels[row_order[a - 1]])
      svg << "<line x1=\"0\" y1=\"" << a * cell << "\" x2=\"" << W << "\" y2=\"" << a * cell
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  for (int b = 1; b < p; ++b) {
    if (m.col_partition.labels[col_order[b]] != m.col_partition.labels[col_order[b - 1]])
      svg << "<line x1=\"" << b * cell << "\" y1=\"0\" x2=\"" << b * cell << "\" y2=\"" << H
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace subic
