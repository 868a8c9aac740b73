#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "subic/biclusters.hpp"
#include "subic/data_model.hpp"
#include "subic/errors.hpp"
#include "subic/metrics.hpp"
#include "subic/simulate.hpp"
#include "subic/solver.hpp"
#include "test_util.hpp"

using namespace subic;

namespace {

// plain sample correlation, local to the tests
double corr(const Vec& a, const Vec& b) {
  double ma = a.mean(), mb = b.mean();
  double sab = 0, saa = 0, sbb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    sab += (a(i) - ma) * (b(i) - mb);
    saa += (a(i) - ma) * (a(i) - ma);
    sbb += (b(i) - mb) * (b(i) - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<int> cluster_sizes(const Partition& part) {
  std::vector<int> sz(part.k, 0);
  for (int l : part.labels) ++sz[l];
  return sz;
}

}  // namespace

TEST_CASE("noiseless generation writes the exact block constants") {
  SimDesign d;
  d.n = 12;
  d.p = 10;
  d.row_clusters = 3;
  d.col_clusters = 2;
  d.sigma = 0.0;
  d.sigma_y = 0.0;
  d.seed = 9;
  d.shuffle = false;
  SimData s = generate(d);

  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.p; ++j) {
      double expect = d.block_mean_scale * s.grid(s.truth_rows.labels[i], s.truth_cols.labels[j]);
      CHECK(s.X.values(i, j) == expect);
    }
  for (int i = 0; i < d.n; ++i)
    CHECK(s.y.values(i) == d.y_mean_scale * s.g_row(s.truth_rows.labels[i]));
  CHECK_FALSE(s.X.centered);
  CHECK(s.X.column_names[0] == "f1");
  CHECK(s.X.row_ids[11] == "r12");
}

TEST_CASE("generation is a pure function of the seed") {
  SimDesign d;
  d.n = 15;
  d.p = 11;
  d.row_clusters = 3;
  d.col_clusters = 3;
  d.sigma = 1.5;
  d.seed = 42;
  SimData a = generate(d);
  SimData b = generate(d);
  CHECK((a.X.values.array() == b.X.values.array()).all());
  CHECK((a.y.values.array() == b.y.values.array()).all());
  CHECK(a.truth_rows == b.truth_rows);
  CHECK(a.truth_cols == b.truth_cols);

  SimDesign d2 = d;
  d2.seed = 43;
  d2.shuffle = false;
  SimDesign d1 = d;
  d1.shuffle = false;
  SimData u1 = generate(d1), u2 = generate(d2);
  // different noise, identical structure
  CHECK((u1.X.values - u2.X.values).cwiseAbs().maxCoeff() > 0.0);
  CHECK(u1.truth_rows == u2.truth_rows);
  CHECK(u1.truth_cols == u2.truth_cols);
  CHECK((u1.grid.array() == u2.grid.array()).all());
}

TEST_CASE("the 4x4 design on 80x80 splits into 20-wide blocks") {
  SimDesign d;  // defaults: 80x80, 4x4, sigma 1.5
  d.seed = 3;
  SimData s = generate(d);
  CHECK(s.truth_rows.k == 4);
  CHECK(s.truth_cols.k == 4);
  CHECK(cluster_sizes(s.truth_rows) == std::vector<int>(4, 20));
  CHECK(cluster_sizes(s.truth_cols) == std::vector<int>(4, 20));

  // uneven division spreads the remainder over the leading clusters
  // (unshuffled, so the label order matches the block order)
  SimDesign odd;
  odd.n = 10;
  odd.p = 7;
  odd.row_clusters = 3;
  odd.col_clusters = 3;
  odd.shuffle = false;
  SimData so = generate(odd);
  CHECK(cluster_sizes(so.truth_rows) == std::vector<int>({4, 3, 3}));
  CHECK(cluster_sizes(so.truth_cols) == std::vector<int>({3, 2, 2}));
}

TEST_CASE("the deterministic mean grid has distinct bounded entries") {
  for (auto [r, c] : std::vector<std::pair<int, int>>{{2, 4}, {4, 4}, {8, 8}, {20, 2}}) {
    Mat G = design_grid(r, c);
    REQUIRE(G.rows() == r);
    REQUIRE(G.cols() == c);
    std::set<double> seen;
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < c; ++b) {
        CHECK(std::fabs(G(a, b)) < 0.95);
        CHECK(std::fabs(G(a, b)) > 0.04);
        CHECK(seen.insert(G(a, b)).second);  // exact distinctness
      }
  }
  CHECK_THROWS_AS(design_grid(0, 4), ConfigError);
  CHECK_THROWS_AS(target_profile(3, 0), ConfigError);
}

TEST_CASE("the target correlates positively and negatively with column blocks") {
  for (auto [r, c] : std::vector<std::pair<int, int>>{{2, 4}, {4, 4}}) {
    SimDesign d;
    d.n = 16;
    d.p = 12;
    d.row_clusters = r;
    d.col_clusters = c;
    d.sigma = 0.0;
    d.sigma_y = 0.0;
    d.shuffle = false;
    SimData s = generate(d);
    double best_pos = -2.0, best_neg = 2.0;
    for (int j = 0; j < d.p; ++j) {
      double cj = corr(s.X.values.col(j), s.y.values);
      best_pos = std::max(best_pos, cj);
      best_neg = std::min(best_neg, cj);
    }
    CHECK(best_pos > 0.3);
    CHECK(best_neg < -0.3);
  }

  // distinct per-cluster target means
  Vec g = target_profile(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) CHECK(g(a) != g(b));
}

TEST_CASE("shuffling changes the layout but not what a fit recovers") {
  SimDesign base;
  base.n = 16;
  base.p = 12;
  base.row_clusters = 2;
  base.col_clusters = 2;
  base.sigma = 0.3;
  base.seed = 11;

  double ri[2];
  for (int variant = 0; variant < 2; ++variant) {
    SimDesign d = base;
    d.shuffle = variant == 1;
    SimData s = generate(d);
    if (d.shuffle) {
      // shuffled labels must be a rearrangement of the contiguous ones
      std::vector<int> sorted_sizes = cluster_sizes(s.truth_rows);
      std::sort(sorted_sizes.begin(), sorted_sizes.end());
      CHECK(sorted_sizes == std::vector<int>({8, 8}));
    }
    DataMatrix Xc = center_columns(s.X);
    FitConfig cfg;
    cfg.lambda1 = 1e3;
    cfg.lambda2 = 1e3;
    FitResult fr = fit(Xc, s.y, cfg);
    BiclusterModel m = extract(fr, Xc, s.y, cfg);
    ri[variant] = rand_index(cell_partition(m.row_partition, m.col_partition),
                             cell_partition(s.truth_rows, s.truth_cols));
  }
  CHECK(ri[0] == ri[1]);
}

TEST_CASE("the bespoke 20x20 preset has uneven blocks and mixed target coupling") {
  SimDesign d = fig2_preset(21);
  CHECK(d.n == 20);
  CHECK(d.p == 20);
  CHECK(d.row_sizes == std::vector<int>({6, 5, 5, 4}));
  CHECK(d.col_sizes == std::vector<int>({6, 5, 5, 4}));
  SimData s = generate(d);
  CHECK(s.truth_rows.k == 4);
  CHECK(s.truth_cols.k == 4);
  std::vector<int> sizes = cluster_sizes(s.truth_rows);
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<int>({4, 5, 5, 6}));

  // per column block, correlation of the block-average column with y:
  // one strongly positive, one strongly negative, the rest in between
  Vec block_corr(4);
  for (int b = 0; b < 4; ++b) {
    Vec avg = Vec::Zero(d.n);
    int cnt = 0;
    for (int j = 0; j < d.p; ++j)
      if (s.truth_cols.labels[j] == b) {
        avg += s.X.values.col(j);
        ++cnt;
      }
    avg /= static_cast<double>(cnt);
    block_corr(b) = corr(avg, s.y.values);
  }
  CHECK(block_corr.maxCoeff() > 0.55);
  CHECK(block_corr.minCoeff() < -0.55);
  // and at least one block stays weakly coupled
  double weakest = 2.0;
  for (int b = 0; b < 4; ++b) weakest = std::min(weakest, std::fabs(block_corr(b)));
  CHECK(weakest < 0.45);
}

TEST_CASE("invalid designs and explicit block sizes are rejected") {
  SimDesign d;
  d.n = 10;
  d.p = 10;
  d.row_clusters = 11;
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.row_clusters = 2;
  d.col_clusters = 0;
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.col_clusters = 2;
  d.sigma = -1.0;
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.sigma = 1.0;
  d.row_sizes = {5, 4};  // sums to 9, not 10
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.row_sizes = {5, 3, 2};  // three sizes for two clusters
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.row_sizes = {10, 0};  // empty block
  CHECK_THROWS_AS(generate(d), ConfigError);
  d.row_sizes = {6, 4};
  CHECK_NOTHROW(generate(d));
}

TEST_CASE("dataset files round-trip through the loader with hidden truth") {
  SimDesign d;
  d.n = 9;
  d.p = 5;
  d.row_clusters = 3;
  d.col_clusters = 2;
  d.sigma = 0.7;
  d.seed = 123;
  SimData s = generate(d);

  std::string csv = testutil::scratch_path("sim_roundtrip.csv");
  write_dataset_csv(s, csv);
  Dataset ds = load_dataset(csv, "y");
  CHECK(ds.X.p() == 5);
  CHECK(ds.X.n() == 9);
  CHECK((ds.X.values.array() == s.X.values.array()).all());  // %.17g is lossless
  CHECK((ds.y.values.array() == s.y.values.array()).all());
  CHECK(ds.X.column_names == s.X.column_names);
  CHECK(ds.X.row_ids == s.X.row_ids);
  REQUIRE(ds.truth_rows.has_value());
  CHECK(*ds.truth_rows == s.truth_rows);

  std::string tj = testutil::scratch_path("sim_truth.json");
  write_truth_json(s, d, tj);
  std::ifstream in(tj);
  nlohmann::ordered_json j;
  in >> j;
  CHECK(j.at("row_labels").get<std::vector<int>>() == s.truth_rows.labels);
  CHECK(j.at("col_labels").get<std::vector<int>>() == s.truth_cols.labels);
  CHECK(j.at("grid").size() == 3);
  CHECK(j.at("grid")[0].size() == 2);
  CHECK(j.at("target_profile").get<std::vector<double>>().size() == 3);
  CHECK(j.at("design").at("n").get<int>() == 9);
  CHECK(j.at("design").at("seed").get<long>() == 123);
}
