#include "subic/biclusters.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "subic/errors.hpp"

namespace subic {

using json = nlohmann::ordered_json;

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int m) : parent(m) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // keep smallest index as representative
    parent[b] = a;
  }
};

}  // namespace

Partition group_centroids(const Mat& T, Axis axis, double eps) {
  const int m = static_cast<int>(axis == Axis::rows ? T.rows() : T.cols());
  const double len = static_cast<double>(axis == Axis::rows ? T.cols() : T.rows());
  if (m == 0) throw DataError("group_centroids: empty matrix");
  UnionFind uf(m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      double d = axis == Axis::rows ? (T.row(a) - T.row(b)).norm() : (T.col(a) - T.col(b)).norm();
      if (d / std::sqrt(len) <= eps) uf.unite(a, b);
    }
  }
  std::vector<int> roots(m);
  for (int i = 0; i < m; ++i) roots[i] = uf.find(i);
  return Partition::from_labels(roots);
}

double default_group_tol(const Mat& Xc) {
  // 1e-3 of the root-mean-square entry of the centered data
  double rms = std::sqrt(Xc.squaredNorm() / static_cast<double>(Xc.size()));
  return 1e-3 * rms;
}

BiclusterModel extract(const FitResult& fr, const DataMatrix& X, const TargetVector& Y,
                       const FitConfig& cfg) {
  if (!X.centered) throw ConfigError("extract: X must be centered");
  const int n = X.n(), p = X.p();
  BiclusterModel m;
  m.group_tol_resolved = cfg.group_tol > 0 ? cfg.group_tol : default_group_tol(X.values);
  m.row_partition = group_centroids(fr.T, Axis::rows, m.group_tol_resolved);
  m.col_partition = group_centroids(fr.T, Axis::cols, m.group_tol_resolved);
  const int kr = m.row_partition.k, kc = m.col_partition.k;

  // block statistics come from the data itself, not the smoothed fit
  m.block_means = Mat::Zero(kr, kc);
  Mat counts = Mat::Zero(kr, kc);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) {
      int r = m.row_partition.labels[i], c = m.col_partition.labels[j];
      m.block_means(r, c) += X.values(i, j);
      counts(r, c) += 1.0;
    }
  m.block_means.array() /= counts.array();

  m.y_means = Vec::Zero(kr);
  m.priors = Vec::Zero(kr);
  for (int i = 0; i < n; ++i) {
    m.y_means(m.row_partition.labels[i]) += Y.values(i);
    m.priors(m.row_partition.labels[i]) += 1.0;
  }
  m.y_means.array() /= m.priors.array();
  m.priors /= static_cast<double>(n);

  double ss = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) {
      double r = X.values(i, j) - m.block_means(m.row_partition.labels[i], m.col_partition.labels[j]);
      ss += r * r;
    }
  double var = X.values.squaredNorm() / static_cast<double>(n * p);
  m.sigma2 = std::max(ss / static_cast<double>(n * p), 1e-9 * std::max(var, 1.0));

  m.column_means = X.column_means;
  m.column_scales = X.column_scales;
  m.column_names = X.column_names;
  m.row_ids = X.row_ids;
  m.converged = fr.converged;
  m.iterations = fr.iterations;
  m.objective = fr.state.objective;
  m.config = cfg;
  m.mu1_resolved = fr.params.mu1;
  m.mu2_resolved = fr.params.mu2;
  m.target_name = Y.name;
  return m;
}

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

Vec vec_from_json(const json& a) {
  Vec v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

Mat mat_from_json(const json& a) {
  if (a.empty()) return Mat(0, 0);
  Mat m(a.size(), a[0].size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a[0].size()) throw DataError("model json: ragged matrix");
    for (size_t j = 0; j < a[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j].get<double>();
  }
  return m;
}

}  // namespace

json model_to_json(const BiclusterModel& m) {
  json j;
  j["format"] = "subic-model";
  j["version"] = 1;
  j["scenario"] = m.scenario;
  j["n_rows"] = m.row_partition.m();
  j["n_cols"] = m.col_partition.m();
  j["k_rows"] = m.k_rows();
  j["k_cols"] = m.k_cols();
  j["row_labels"] = m.row_partition.labels;
  j["col_labels"] = m.col_partition.labels;
  j["block_means"] = mat_to_json(m.block_means);
  j["y_means"] = vec_to_json(m.y_means);
  j["priors"] = vec_to_json(m.priors);
  j["sigma2"] = m.sigma2;
  j["column_means"] = vec_to_json(m.column_means);
  j["column_scales"] = vec_to_json(m.column_scales);
  j["column_names"] = m.column_names;
  j["row_ids"] = m.row_ids;
  j["target_name"] = m.target_name;
  j["fit"] = {{"converged", m.converged},
              {"iterations", m.iterations},
              {"objective", m.objective},
              {"group_tol", m.group_tol_resolved},
              {"mu1", m.mu1_resolved},
              {"mu2", m.mu2_resolved}};
  j["config"] = {{"lambda1", m.config.lambda1}, {"lambda2", m.config.lambda2},
                 {"phi", m.config.phi},         {"knn", m.config.knn},
                 {"supervised", m.config.supervised}, {"use_l2", m.config.use_l2},
                 {"tol", m.config.tol},         {"max_iter", m.config.max_iter},
                 {"seed", m.config.seed}};
  return j;
}

BiclusterModel model_from_json(const json& j) {
  if (!j.contains("format") || j.at("format") != "subic-model")
    throw DataError("model json: not a subic model file");
  BiclusterModel m;
  m.scenario = j.at("scenario").get<std::string>();
  m.row_partition = Partition::from_labels(j.at("row_labels").get<std::vector<int>>());
  m.col_partition = Partition::from_labels(j.at("col_labels").get<std::vector<int>>());
  m.block_means = mat_from_json(j.at("block_means"));
  m.y_means = vec_from_json(j.at("y_means"));
  m.priors = vec_from_json(j.at("priors"));
  m.sigma2 = j.at("sigma2").get<double>();
  m.column_means = vec_from_json(j.at("column_means"));
  m.column_scales = vec_from_json(j.at("column_scales"));
  m.column_names = j.at("column_names").get<std::vector<std::string>>();
  m.row_ids = j.at("row_ids").get<std::vector<std::string>>();
  m.target_name = j.at("target_name").get<std::string>();
  const json& f = j.at("fit");
  m.converged = f.at("converged").get<bool>();
  m.iterations = f.at("iterations").get<int>();
  m.objective = f.at("objective").get<double>();
  m.group_tol_resolved = f.at("group_tol").get<double>();
  m.mu1_resolved = f.at("mu1").get<double>();
  m.mu2_resolved = f.at("mu2").get<double>();
  const json& c = j.at("config");
  m.config.lambda1 = c.at("lambda1").get<double>();
  m.config.lambda2 = c.at("lambda2").get<double>();
  m.config.phi = c.at("phi").get<double>();
  m.config.knn = c.at("knn").get<int>();
  m.config.supervised = c.at("supervised").get<bool>();
  m.config.use_l2 = c.at("use_l2").get<bool>();
  m.config.tol = c.at("tol").get<double>();
  m.config.max_iter = c.at("max_iter").get<int>();
  m.config.seed = c.at("seed").get<long>();
  if (m.block_means.rows() != m.k_rows() || m.block_means.cols() != m.k_cols())
    throw DataError("model json: block_means shape mismatch");
  if (m.y_means.size() != m.k_rows() || m.priors.size() != m.k_rows())
    throw DataError("model json: y_means/priors length mismatch");
  if (static_cast<int>(m.column_names.size()) != m.col_partition.m())
    throw DataError("model json: column_names length mismatch");
  return m;
}

void save_model(const BiclusterModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << model_to_json(m).dump(2) << "\n";
}

BiclusterModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("model json parse error in " + path + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw DataError("model json missing field in " + path + ": " + e.what());
  }
}

}  // namespace subic
