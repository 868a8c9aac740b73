#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subic/biclusters.hpp"
#include "subic/data_model.hpp"
#include "subic/errors.hpp"
#include "subic/metrics.hpp"
#include "subic/simulate.hpp"
#include "subic/solver.hpp"
#include "test_util.hpp"

using namespace subic;

namespace {

DataMatrix as_centered(Mat values) {
  DataMatrix X;
  X.values = std::move(values);
  X.column_means = Vec::Zero(X.values.cols());
  X.column_scales = Vec::Ones(X.values.cols());
  X.constant_columns.assign(X.values.cols(), 0);
  for (int j = 0; j < X.values.cols(); ++j) X.column_names.push_back("f" + std::to_string(j + 1));
  for (int i = 0; i < X.values.rows(); ++i) X.row_ids.push_back("r" + std::to_string(i + 1));
  X.centered = true;
  return X;
}

}  // namespace

TEST_CASE("grouping joins exactly-equal columns and isolates distinct ones") {
  Mat T(3, 3);
  T << 1.0, 1.0, 4.0, -2.0, -2.0, 0.5, 0.25, 0.25, 9.0;
  Partition part = group_centroids(T, Axis::cols, 1e-9);
  CHECK(part.labels == std::vector<int>({0, 0, 1}));
  CHECK(part.k == 2);
}

TEST_CASE("an enormous tolerance collapses everything into one cluster") {
  oracle::Rng rng(307);
  Mat T = rng.matrix(6, 5, -100, 100);
  Partition part = group_centroids(T, Axis::rows, 1e12);
  CHECK(part.k == 1);
}

TEST_CASE("two blocks separated by ten tolerances split cleanly") {
  const double eps = 0.01;
  Mat T(5, 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 3; ++i) T(i, j) = 1.0 + 0.1 * eps * i;   // tight block
    for (int i = 3; i < 5; ++i) T(i, j) = 1.0 + 10.0 * eps + 0.1 * eps * i;
  }
  Partition part = group_centroids(T, Axis::rows, eps);
  CHECK(part.labels == std::vector<int>({0, 0, 0, 1, 1}));
}

TEST_CASE("the grouping radius is compared in per-coordinate units") {
  // columns differing by exactly 0.25 everywhere: normalized distance is
  // exactly 0.25 (all quantities binary-exact), and the comparison is <=
  Mat T(4, 2);
  T.col(0) << 1.0, 2.0, 3.0, 4.0;
  T.col(1) = T.col(0).array() + 0.25;
  CHECK(group_centroids(T, Axis::cols, 0.25).k == 1);
  CHECK(group_centroids(T, Axis::cols, 0.249).k == 2);
}

TEST_CASE("grouping is equivariant under item permutation") {
  oracle::Rng rng(311);
  Mat T(8, 3);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 3; ++j) T(i, j) = (i % 3) * 5.0 + 0.001 * rng.uniform();
  Partition base = group_centroids(T, Axis::rows, 0.01);
  CHECK(base.k == 3);

  std::vector<int> perm = {5, 2, 7, 0, 4, 6, 1, 3};
  Mat Tp(8, 3);
  for (int i = 0; i < 8; ++i) Tp.row(i) = T.row(perm[i]);
  Partition permuted = group_centroids(Tp, Axis::rows, 0.01);
  std::vector<int> mapped(8);
  for (int i = 0; i < 8; ++i) mapped[i] = base.labels[perm[i]];
  CHECK(permuted == Partition::from_labels(mapped));
}

TEST_CASE("cluster count never increases with the tolerance") {
  oracle::Rng rng(313);
  Mat T = rng.matrix(9, 4, -2, 2);
  int prev_k = 1000;
  for (double eps : {1e-4, 1e-2, 0.2, 0.5, 1.0, 2.0, 10.0}) {
    int k = group_centroids(T, Axis::rows, eps).k;
    CHECK(k <= prev_k);
    prev_k = k;
  }
}

TEST_CASE("the default grouping tolerance is a thousandth of the data RMS") {
  Mat Xc(2, 2);
  Xc << 1.0, -1.0, 2.0, -2.0;
  CHECK(default_group_tol(Xc) == 1e-3 * std::sqrt(2.5));
}

TEST_CASE("a constant solution extracts a single all-data bicluster") {
  oracle::Rng rng(317);
  Mat X = rng.matrix(7, 5, -1, 1);
  DataMatrix dm = as_centered(X);
  TargetVector y;
  y.values = Vec::LinSpaced(7, -3.0, 3.0);
  y.name = "y";

  FitResult fr;
  fr.T = Mat::Constant(7, 5, 0.123);
  fr.converged = true;
  fr.iterations = 3;
  fr.state.objective = 4.5;

  BiclusterModel m = extract(fr, dm, y, FitConfig{});
  CHECK(m.k_rows() == 1);
  CHECK(m.k_cols() == 1);
  CHECK(m.priors.size() == 1);
  CHECK(m.priors(0) == 1.0);
  CHECK(m.y_means(0) == doctest::Approx(y.values.mean()).epsilon(1e-15));
  CHECK(m.block_means(0, 0) == doctest::Approx(X.mean()).epsilon(1e-15));
  CHECK(m.sigma2 > 0.0);
  CHECK(m.converged);
  CHECK(m.iterations == 3);
  CHECK(m.objective == 4.5);
}

TEST_CASE("noiseless checkerboard fit recovers the generating block means") {
  SimDesign d;
  d.n = 16;
  d.p = 12;
  d.row_clusters = 2;
  d.col_clusters = 2;
  d.sigma = 0.0;
  d.sigma_y = 0.0;
  d.seed = 5;
  d.shuffle = false;  // truth labels then equal the grid indices directly
  SimData sim = generate(d);

  DataMatrix Xc = center_columns(sim.X);
  FitConfig cfg;
  // moderate strength: at this size, very large penalties fuse the two
  // blocks into one, and tiny ones leave the uneven neighbor graph visible
  cfg.lambda1 = 10.0;
  cfg.lambda2 = 10.0;
  FitResult fr = fit(Xc, sim.y, cfg);
  BiclusterModel m = extract(fr, Xc, sim.y, cfg);

  REQUIRE(m.k_rows() == 2);
  REQUIRE(m.k_cols() == 2);
  CHECK(rand_index(m.row_partition, sim.truth_rows) == 1.0);
  CHECK(rand_index(m.col_partition, sim.truth_cols) == 1.0);
  CHECK(m.block_means.rows() == m.k_rows());
  CHECK(m.block_means.cols() == m.k_cols());

  // block means of centered data + the removed column means reproduce the
  // generator exactly at sigma = 0
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      int some_col = -1;
      for (int j = 0; j < d.p; ++j)
        if (sim.truth_cols.labels[j] == b) {
          some_col = j;
          break;
        }
      double mean_back = m.block_means(a, b) + Xc.column_means(some_col);
      CHECK(mean_back == doctest::Approx(d.block_mean_scale * sim.grid(a, b)).epsilon(1e-9));
    }

  // target means reproduce the per-row-cluster profile exactly at sigma_y = 0
  for (int a = 0; a < 2; ++a)
    CHECK(m.y_means(a) == doctest::Approx(d.y_mean_scale * sim.g_row(a)).epsilon(1e-12));
}

TEST_CASE("priors are the exact subgroup fractions") {
  const std::vector<int> sizes = {24, 28, 29, 9};
  const std::vector<double> tvals = {-3.0, -1.0, 2.0, 5.0};
  const std::vector<double> yvals = {0.5, 1.5, 2.5, -3.5};
  const int n = 90, p = 4;
  Mat T(n, p);
  Vec yv(n);
  int row = 0;
  for (size_t g = 0; g < sizes.size(); ++g)
    for (int c = 0; c < sizes[g]; ++c, ++row) {
      T.row(row).setConstant(tvals[g]);
      yv(row) = yvals[g];
    }
  DataMatrix dm = as_centered(T);
  TargetVector y;
  y.values = yv;
  y.name = "lvmi";

  FitResult fr;
  fr.T = T;
  fr.converged = true;
  fr.iterations = 11;
  fr.params.mu1 = 2.0;
  fr.params.mu2 = 3.0;

  BiclusterModel m = extract(fr, dm, y, FitConfig{});
  REQUIRE(m.k_rows() == 4);
  CHECK(m.k_cols() == 1);  // all columns identical
  for (int g = 0; g < 4; ++g) {
    CHECK(m.priors(g) == sizes[g] / 90.0);
    CHECK(m.y_means(g) == yvals[g]);
  }
  CHECK(std::fabs(m.priors.sum() - 1.0) <= 1e-12);
  CHECK(m.mu1_resolved == 2.0);
  CHECK(m.mu2_resolved == 3.0);
  CHECK(m.target_name == "lvmi");
}

TEST_CASE("extraction refuses uncentered data") {
  DataMatrix raw = as_centered(Mat::Zero(3, 3));
  raw.centered = false;
  FitResult fr;
  fr.T = Mat::Zero(3, 3);
  TargetVector y;
  y.values = Vec::Zero(3);
  CHECK_THROWS_AS(extract(fr, raw, y, FitConfig{}), ConfigError);
}

TEST_CASE("model serialization round-trips every field exactly") {
  oracle::Rng rng(331);
  BiclusterModel m;
  m.row_partition = Partition::from_labels({0, 0, 1, 2, 1});
  m.col_partition = Partition::from_labels({0, 1, 0});
  m.block_means = rng.matrix(3, 2, -5, 5);
  m.y_means = rng.matrix(3, 1, -10, 10).col(0);
  m.priors = Vec(3);
  m.priors << 0.4, 0.4, 0.2;
  m.sigma2 = 0.0625;
  m.column_means = rng.matrix(3, 1).col(0);
  m.column_scales = Vec::Constant(3, 2.0);
  m.column_names = {"alpha", "beta", "gamma"};
  m.row_ids = {"p1", "p2", "p3", "p4", "p5"};
  m.converged = false;
  m.iterations = 77;
  m.objective = 123.456789012345;
  m.config.lambda1 = 0.31;
  m.config.lambda2 = 17.0;
  m.config.phi = 0.25;
  m.config.knn = 4;
  m.config.supervised = false;
  m.config.use_l2 = false;
  m.config.tol = 1e-7;
  m.config.max_iter = 321;
  m.config.seed = 98765;
  m.group_tol_resolved = 0.0123;
  m.mu1_resolved = 3.5;
  m.mu2_resolved = 4.5;
  m.target_name = "y";
  m.scenario = "cobra";

  std::string path = testutil::scratch_path("model_roundtrip.json");
  save_model(m, path);
  BiclusterModel r = load_model(path);

  CHECK(r.row_partition == m.row_partition);
  CHECK(r.col_partition == m.col_partition);
  CHECK((r.block_means.array() == m.block_means.array()).all());
  CHECK((r.y_means.array() == m.y_means.array()).all());
  CHECK((r.priors.array() == m.priors.array()).all());
  CHECK(r.sigma2 == m.sigma2);
  CHECK((r.column_means.array() == m.column_means.array()).all());
  CHECK((r.column_scales.array() == m.column_scales.array()).all());
  CHECK(r.column_names == m.column_names);
  CHECK(r.row_ids == m.row_ids);
  CHECK(r.converged == m.converged);
  CHECK(r.iterations == m.iterations);
  CHECK(r.objective == m.objective);
  CHECK(r.config.lambda1 == m.config.lambda1);
  CHECK(r.config.lambda2 == m.config.lambda2);
  CHECK(r.config.phi == m.config.phi);
  CHECK(r.config.knn == m.config.knn);
  CHECK(r.config.supervised == m.config.supervised);
  CHECK(r.config.use_l2 == m.config.use_l2);
  CHECK(r.config.tol == m.config.tol);
  CHECK(r.config.max_iter == m.config.max_iter);
  CHECK(r.config.seed == m.config.seed);
  CHECK(r.group_tol_resolved == m.group_tol_resolved);
  CHECK(r.mu1_resolved == m.mu1_resolved);
  CHECK(r.mu2_resolved == m.mu2_resolved);
  CHECK(r.target_name == m.target_name);
  CHECK(r.scenario == m.scenario);
}

TEST_CASE("malformed model files are reported as data errors") {
  std::string path = testutil::scratch_path("not_a_model.json");
  testutil::write_text(path, "{\"hello\": 1}\n");
  CHECK_THROWS_AS(load_model(path), DataError);
  std::string garbled = testutil::scratch_path("garbled_model.json");
  testutil::write_text(garbled, "this is not json");
  CHECK_THROWS_AS(load_model(garbled), DataError);
  CHECK_THROWS_AS(load_model(testutil::scratch_path("missing_model.json")), DataError);
}
