#include "subic/solver.hpp"

#include <algorithm>
#include <cmath>

#include "subic/errors.hpp"
#include "subic/kernels.hpp"

namespace subic {

void FitConfig::validate() const {
  if (lambda1 < 0 || lambda2 < 0) throw ConfigError("lambda1/lambda2 must be >= 0");
  if (phi < 0 || phi > 1) throw ConfigError("phi must lie in [0, 1]");
  if (knn < 1) throw ConfigError("knn must be >= 1");
  if (tol <= 0) throw ConfigError("tol must be > 0");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (mu1 > 0 && delta1 > mu1) throw ConfigError("delta1 must satisfy 0 < delta1 <= mu1");
  if (mu2 > 0 && delta2 > mu2) throw ConfigError("delta2 must satisfy 0 < delta2 <= mu2");
  if (delta1 > 0 && mu1 <= 0) throw ConfigError("delta1 given without mu1");
  if (delta2 > 0 && mu2 <= 0) throw ConfigError("delta2 given without mu2");
}

double soft_threshold(double v, double lam) {
  double a = std::fabs(v) - lam;
  if (a <= 0.0) return 0.0;
  return v > 0.0 ? a : -a;
}

Vec soft_threshold(const Vec& v, double lam) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = soft_threshold(v(i), lam);
  return out;
}

Mat fused_laplacian(const std::vector<WPair>& pairs, int m, int weight_power) {
  if (weight_power != 1 && weight_power != 2)
    throw ConfigError("fused_laplacian: weight_power must be 1 or 2");
  Mat L = Mat::Zero(m, m);
  for (const auto& pr : pairs) {
    if (pr.i < 0 || pr.j < 0 || pr.i >= m || pr.j >= m || pr.i == pr.j)
      throw ConfigError("fused_laplacian: pair index out of range");
    double c = weight_power == 1 ? pr.weight : pr.weight * pr.weight;
    L(pr.i, pr.i) += c;
    L(pr.j, pr.j) += c;
    L(pr.i, pr.j) -= c;
    L(pr.j, pr.i) -= c;
  }
  return L;
}

namespace {

double weight_quantile(const std::vector<WPair>& pairs, double q) {
  if (pairs.empty()) return 0.0;
  std::vector<double> w;
  w.reserve(pairs.size());
  for (const auto& pr : pairs) w.push_back(pr.weight);
  std::sort(w.begin(), w.end());
  size_t idx = static_cast<size_t>(q * (w.size() - 1));
  return w[idx];
}

double auto_mu(const std::vector<WPair>& pairs) {
  double wq = weight_quantile(pairs, 0.95);
  if (wq <= 0.0) return 1.0;
  double mu = 1.0 / (wq * wq);
  return std::clamp(mu, 1.0, 1e12);
}

}  // namespace

ResolvedParams resolve_params(const FitConfig& cfg, const WeightSet& ws) {
  cfg.validate();
  ResolvedParams rp;
  rp.mu1 = cfg.mu1 > 0 ? cfg.mu1 : auto_mu(ws.col_pairs);
  rp.mu2 = cfg.mu2 > 0 ? cfg.mu2 : auto_mu(ws.row_pairs);
  rp.delta1 = cfg.delta1 > 0 ? cfg.delta1 : rp.mu1;
  rp.delta2 = cfg.delta2 > 0 ? cfg.delta2 : rp.mu2;
  if (rp.delta1 > rp.mu1 || rp.delta2 > rp.mu2)
    throw ConfigError("dual step must not exceed its penalty parameter");
  rp.lambda1_eff = cfg.use_l2 ? cfg.lambda1 : 0.0;
  return rp;
}

Mat SylvesterSolver::solve(const Mat& C) const {
  if (!C.allFinite()) throw NumericError("quadratic step: right-hand side is not finite");
  Mat D = U.transpose() * C * Q;
  for (Eigen::Index a = 0; a < D.rows(); ++a)
    for (Eigen::Index b = 0; b < D.cols(); ++b) D(a, b) /= eva(a) + evb(b);
  return U * D * Q.transpose();
}

SylvesterSolver make_sylvester(const WeightSet& ws, int n, int p,
                               double lambda1, double mu1, double mu2) {
  Mat A = 0.5 * Mat::Identity(n, n) + 2.0 * lambda1 * fused_laplacian(ws.row_pairs, n, 1) +
          mu2 * fused_laplacian(ws.row_pairs, n, 2);
  Mat B = 0.5 * Mat::Identity(p, p) + 2.0 * lambda1 * fused_laplacian(ws.col_pairs, p, 1) +
          mu1 * fused_laplacian(ws.col_pairs, p, 2);
  Eigen::SelfAdjointEigenSolver<Mat> esA(A), esB(B);
  if (esA.info() != Eigen::Success || esB.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed");
  SylvesterSolver s;
  s.U = esA.eigenvectors();
  s.eva = esA.eigenvalues();
  s.Q = esB.eigenvectors();
  s.evb = esB.eigenvalues();
  return s;
}

namespace {

// C = X + scatter_cols(mu1*V - M) + scatter_rows(mu2*S - N)
Mat assemble_rhs(const Mat& X, const Mat& V, const Mat& M, const Mat& S, const Mat& N,
                 double mu1, double mu2, const kernels::PairIncidence& col_inc,
                 const kernels::PairIncidence& row_inc) {
  Mat C = X;
  if (V.cols() > 0) {
    Mat Zc = mu1 * V - M;
    kernels::scatter_cols(Zc, col_inc, C);
  }
  if (S.cols() > 0) {
    Mat Zr = mu2 * S - N;
    kernels::scatter_rows(Zr, row_inc, C);
  }
  return C;
}

}  // namespace

Mat t_update(const Mat& X, const WeightSet& ws, const FitConfig& cfg,
             const Mat& V, const Mat& S, const Mat& M, const Mat& N) {
  ResolvedParams rp = resolve_params(cfg, ws);
  const int n = static_cast<int>(X.rows()), p = static_cast<int>(X.cols());
  SylvesterSolver syl = make_sylvester(ws, n, p, rp.lambda1_eff, rp.mu1, rp.mu2);
  auto col_inc = kernels::PairIncidence::build(p, ws.col_pairs);
  auto row_inc = kernels::PairIncidence::build(n, ws.row_pairs);
  return syl.solve(assemble_rhs(X, V, M, S, N, rp.mu1, rp.mu2, col_inc, row_inc));
}

double objective_value(const Mat& X, const Mat& T, const WeightSet& ws,
                       double lambda1, double lambda2) {
  double data = 0.5 * (X - T).squaredNorm();
  double l2 = 0.0, l1 = 0.0;
  for (const auto& pr : ws.col_pairs) {
    double s2 = 0.0, s1 = 0.0;
    for (Eigen::Index r = 0; r < T.rows(); ++r) {
      double d = T(r, pr.i) - T(r, pr.j);
      s2 += d * d;
      s1 += std::fabs(d);
    }
    l2 += pr.weight * s2;
    l1 += pr.weight * s1;
  }
  for (const auto& pr : ws.row_pairs) {
    double s2 = 0.0, s1 = 0.0;
    for (Eigen::Index c = 0; c < T.cols(); ++c) {
      double d = T(pr.i, c) - T(pr.j, c);
      s2 += d * d;
      s1 += std::fabs(d);
    }
    l2 += pr.weight * s2;
    l1 += pr.weight * s1;
  }
  return data + lambda1 * l2 + lambda2 * l1;
}

FitResult fit_with_weights(const Mat& X, const WeightSet& ws, const FitConfig& cfg,
                           const SylvesterSolver* cached) {
  ResolvedParams rp = resolve_params(cfg, ws);
  const int n = static_cast<int>(X.rows()), p = static_cast<int>(X.cols());
  const int ec = static_cast<int>(ws.col_pairs.size());
  const int er = static_cast<int>(ws.row_pairs.size());

  SylvesterSolver local;
  const SylvesterSolver* syl = cached;
  if (!syl) {
    local = make_sylvester(ws, n, p, rp.lambda1_eff, rp.mu1, rp.mu2);
    syl = &local;
  }
  auto col_inc = kernels::PairIncidence::build(p, ws.col_pairs);
  auto row_inc = kernels::PairIncidence::build(n, ws.row_pairs);

  FitResult fr;
  fr.params = rp;
  SolverState& st = fr.state;
  st.T = X;
  st.V.resize(n, ec);
  st.M = Mat::Zero(n, ec);
  st.S.resize(p, er);
  st.N = Mat::Zero(p, er);
  // splits start at the observed scaled differences, duals at zero
  kernels::col_deltas(X, ws.col_pairs, st.V);
  kernels::row_deltas(X, ws.row_pairs, st.S);

  Mat Ec(n, ec), Er(p, er);
  fr.objective_trace.reserve(cfg.max_iter);
  fr.residual_trace.reserve(cfg.max_iter);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    Mat C = assemble_rhs(X, st.V, st.M, st.S, st.N, rp.mu1, rp.mu2, col_inc, row_inc);
    st.T = syl->solve(C);

    kernels::col_deltas(st.T, ws.col_pairs, Ec);
    kernels::row_deltas(st.T, ws.row_pairs, Er);
    auto stc = kernels::shrink_dual(Ec, cfg.lambda2, rp.mu1, rp.delta1, st.V, st.M);
    auto str = kernels::shrink_dual(Er, cfg.lambda2, rp.mu2, rp.delta2, st.S, st.N);

    st.iter = it;
    st.primal_residual = std::max(stc.primal_inf, str.primal_inf);
    st.dual_residual = std::max(stc.dual_inf, str.dual_inf);
    st.objective = objective_value(X, st.T, ws, rp.lambda1_eff, cfg.lambda2);
    fr.objective_trace.push_back(st.objective);
    fr.residual_trace.emplace_back(st.primal_residual, st.dual_residual);

    if (!std::isfinite(st.objective) || !st.T.allFinite())
      throw NumericError("solver diverged at iteration " + std::to_string(it) +
                         ": non-finite iterate (primal " + std::to_string(st.primal_residual) +
                         ", dual " + std::to_string(st.dual_residual) + ")");

    if (st.primal_residual <= cfg.tol && st.dual_residual <= cfg.tol) {
      fr.converged = true;
      break;
    }
  }
  fr.iterations = st.iter;
  fr.T = st.T;
  return fr;
}

FitResult fit(const DataMatrix& X, const TargetVector& Y, const FitConfig& cfg) {
  if (!X.centered) throw ConfigError("fit: X must be centered first");
  WeightSet ws = build_weights(X, Y, cfg);
  return fit_with_weights(X.values, ws, cfg);
}

}  // namespace subic
