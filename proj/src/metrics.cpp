#include "subic/metrics.hpp"

#include <vector>

#include "subic/errors.hpp"

namespace subic {

namespace {

// contingency table counts between two partitions over the same items
struct PairCounts {
  // sum over cells of C(n_ij, 2), over rows of C(a_i, 2), over cols of C(b_j, 2)
  double cells = 0, rows = 0, cols = 0, total = 0;
};

double choose2(long long v) { return 0.5 * static_cast<double>(v) * static_cast<double>(v - 1); }

PairCounts count_pairs(const Partition& a, const Partition& b) {
  if (a.m() != b.m()) throw DataError("partitions compare different item counts");
  if (a.m() == 0) throw DataError("partitions are empty");
  std::vector<long long> table(static_cast<size_t>(a.k) * b.k, 0);
  std::vector<long long> ra(a.k, 0), cb(b.k, 0);
  for (size_t i = 0; i < a.labels.size(); ++i) {
    int u = a.labels[i], v = b.labels[i];
    if (u < 0 || u >= a.k || v < 0 || v >= b.k) throw DataError("partition label out of range");
    ++table[static_cast<size_t>(u) * b.k + v];
    ++ra[u];
    ++cb[v];
  }
  PairCounts pc;
  for (long long c : table) pc.cells += choose2(c);
  for (long long c : ra) pc.rows += choose2(c);
  for (long long c : cb) pc.cols += choose2(c);
  pc.total = choose2(static_cast<long long>(a.m()));
  return pc;
}

}  // namespace

double rand_index(const Partition& a, const Partition& b) {
  PairCounts pc = count_pairs(a, b);
  if (pc.total == 0) return 1.0;  // single item: trivially agreeing
  // agreements = together in both + apart in both
  double agree = 2.0 * pc.cells + pc.total - pc.rows - pc.cols;
  return agree / pc.total;
}

double adjusted_rand_index(const Partition& a, const Partition& b) {
  PairCounts pc = count_pairs(a, b);
  if (pc.total == 0) return 1.0;
  // (index - expected) / (max - expected) cleared of the inner /total, so the
  // whole value is one division of exactly-representable pair-count products.
  double num = 2.0 * (pc.cells * pc.total - pc.rows * pc.cols);
  double den = (pc.rows + pc.cols) * pc.total - 2.0 * pc.rows * pc.cols;
  if (den == 0.0) {
    // both partitions all-singletons or all-one-cluster: identical up to
    // relabeling iff index == expected == max
    return pc.cells == 0.5 * (pc.rows + pc.cols) ? 1.0 : 0.0;
  }
  return num / den;
}

Partition cell_partition(const Partition& rows, const Partition& cols) {
  Partition out;
  out.labels.reserve(rows.labels.size() * cols.labels.size());
  for (int ri : rows.labels)
    for (int cj : cols.labels) out.labels.push_back(ri * cols.k + cj);
  return Partition::from_labels(out.labels);
}

}  // namespace subic
