#include "subic/predict.hpp"

#include <cmath>

#include "subic/errors.hpp"

namespace subic {

namespace {

double logsumexp(const Vec& v) {
  double mx = v.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v(i) - mx);
  return mx + std::log(s);
}

constexpr double kLog2Pi = 1.8378770664093453;

}  // namespace

double component_loglik(const Vec& x_raw, const BiclusterModel& m, int r) {
  const int p = m.col_partition.m();
  if (x_raw.size() != p) throw DataError("predict: feature vector length mismatch");
  if (!x_raw.allFinite()) throw DataError("predict: non-finite input feature");
  if (r < 0 || r >= m.k_rows()) throw DataError("predict: component out of range");
  double ll = std::log(m.priors(r));
  const double inv2s = 0.5 / m.sigma2;
  const double lognorm = 0.5 * (kLog2Pi + std::log(m.sigma2));
  for (int j = 0; j < p; ++j) {
    double xc = (x_raw(j) - m.column_means(j)) / m.column_scales(j);
    double d = xc - m.block_means(r, m.col_partition.labels[j]);
    ll -= inv2s * d * d + lognorm;
  }
  return ll;
}

Prediction predict_one(const Vec& x_raw, const BiclusterModel& m) {
  const int kr = m.k_rows();
  Prediction pr;
  pr.log_likelihoods.resize(kr);
  for (int r = 0; r < kr; ++r) pr.log_likelihoods(r) = component_loglik(x_raw, m, r);
  double lse = logsumexp(pr.log_likelihoods);
  pr.q.resize(kr);
  for (int r = 0; r < kr; ++r) pr.q(r) = std::exp(pr.log_likelihoods(r) - lse);
  pr.y_hat = pr.q.dot(m.y_means);
  return pr;
}

std::vector<Prediction> predict_batch(const Mat& X_raw, const BiclusterModel& m) {
  std::vector<Prediction> out;
  out.reserve(X_raw.rows());
  for (Eigen::Index i = 0; i < X_raw.rows(); ++i)
    out.push_back(predict_one(X_raw.row(i).transpose(), m));
  return out;
}

}  // namespace subic
