#include "subic/kernels.hpp"

#include <cmath>

#include "subic/parallel.hpp"

// Implementation note: serial and OpenMP variants share the same
// per-element routines so a result never depends on the schedule. Parallel
// loops only ever write disjoint output slots.

namespace subic::kernels {

namespace {

inline double sqdist_cols(const Mat& X, int a, int b) {
  const double* pa = X.col(a).data();
  const double* pb = X.col(b).data();
  const int n = static_cast<int>(X.rows());
  double s = 0.0;
  for (int r = 0; r < n; ++r) {
    double d = pa[r] - pb[r];
    s += d * d;
  }
  return s;
}

inline double sqdist_rows(const Mat& X, int a, int b) {
  const int p = static_cast<int>(X.cols());
  double s = 0.0;
  for (int c = 0; c < p; ++c) {
    double d = X(a, c) - X(b, c);
    s += d * d;
  }
  return s;
}

inline void col_delta_one(const Mat& T, const WPair& pr, Mat& out, int e) {
  out.col(e) = pr.weight * (T.col(pr.i) - T.col(pr.j));
}

inline void row_delta_one(const Mat& T, const WPair& pr, Mat& out, int e) {
  out.col(e) = pr.weight * (T.row(pr.i) - T.row(pr.j)).transpose();
}

inline void scatter_col_one(const Mat& Z, const PairIncidence& inc, Mat& out, int c) {
  for (const auto& h : inc.per_item[c]) out.col(c) += h.signed_weight * Z.col(h.pair);
}

inline void scatter_row_one(const Mat& Z, const PairIncidence& inc, Mat& out, int r) {
  for (const auto& h : inc.per_item[r])
    out.row(r) += h.signed_weight * Z.col(h.pair).transpose();
}

inline double soft(double v, double lam) {
  double a = std::fabs(v) - lam;
  if (a <= 0.0) return 0.0;
  return v > 0.0 ? a : -a;
}

inline void shrink_one(const Mat& E, double thresh, double inv_mu, double mu, double delta,
                       Mat& V, Mat& M, int e, double& primal, double& dual) {
  const int len = static_cast<int>(E.rows());
  double pmax = 0.0, dmax = 0.0;
  for (int l = 0; l < len; ++l) {
    double ev = E(l, e);
    double v = soft(ev + M(l, e) * inv_mu, thresh);
    double viol = ev - v;
    double dch = v - V(l, e);
    if (std::fabs(viol) > pmax) pmax = std::fabs(viol);
    if (std::fabs(dch) > dmax) dmax = std::fabs(dch);
    M(l, e) += delta * viol;
    V(l, e) = v;
  }
  primal = pmax;
  dual = mu * dmax;
}

}  // namespace

Mat col_sqdist_serial(const Mat& X) {
  const int p = static_cast<int>(X.cols());
  Mat D = Mat::Zero(p, p);
  for (int b = 1; b < p; ++b)
    for (int a = 0; a < b; ++a) {
      double s = sqdist_cols(X, a, b);
      D(a, b) = s;
      D(b, a) = s;
    }
  return D;
}

Mat col_sqdist_omp(const Mat& X) {
  const int p = static_cast<int>(X.cols());
  Mat D = Mat::Zero(p, p);
#pragma omp parallel for schedule(dynamic, 4)
  for (int b = 1; b < p; ++b)
    for (int a = 0; a < b; ++a) {
      double s = sqdist_cols(X, a, b);
      D(a, b) = s;
      D(b, a) = s;
    }
  return D;
}

Mat row_sqdist_serial(const Mat& X) {
  const int n = static_cast<int>(X.rows());
  Mat D = Mat::Zero(n, n);
  for (int b = 1; b < n; ++b)
    for (int a = 0; a < b; ++a) {
      double s = sqdist_rows(X, a, b);
      D(a, b) = s;
      D(b, a) = s;
    }
  return D;
}

Mat row_sqdist_omp(const Mat& X) {
  const int n = static_cast<int>(X.rows());
  Mat D = Mat::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int b = 1; b < n; ++b)
    for (int a = 0; a < b; ++a) {
      double s = sqdist_rows(X, a, b);
      D(a, b) = s;
      D(b, a) = s;
    }
  return D;
}

void col_deltas_serial(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  const int E = static_cast<int>(pairs.size());
  for (int e = 0; e < E; ++e) col_delta_one(T, pairs[e], out, e);
}

void col_deltas_omp(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  const int E = static_cast<int>(pairs.size());
#pragma omp parallel for schedule(static)
  for (int e = 0; e < E; ++e) col_delta_one(T, pairs[e], out, e);
}

void row_deltas_serial(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  const int E = static_cast<int>(pairs.size());
  for (int e = 0; e < E; ++e) row_delta_one(T, pairs[e], out, e);
}

void row_deltas_omp(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  const int E = static_cast<int>(pairs.size());
#pragma omp parallel for schedule(static)
  for (int e = 0; e < E; ++e) row_delta_one(T, pairs[e], out, e);
}

PairIncidence PairIncidence::build(int m, const std::vector<WPair>& pairs) {
  PairIncidence inc;
  inc.per_item.resize(m);
  for (int e = 0; e < static_cast<int>(pairs.size()); ++e) {
    inc.per_item[pairs[e].i].push_back({e, pairs[e].weight});
    inc.per_item[pairs[e].j].push_back({e, -pairs[e].weight});
  }
  return inc;
}

void scatter_cols_serial(const Mat& Z, const PairIncidence& inc, Mat& out) {
  const int p = static_cast<int>(out.cols());
  for (int c = 0; c < p; ++c) scatter_col_one(Z, inc, out, c);
}

void scatter_cols_omp(const Mat& Z, const PairIncidence& inc, Mat& out) {
  const int p = static_cast<int>(out.cols());
#pragma omp parallel for schedule(static)
  for (int c = 0; c < p; ++c) scatter_col_one(Z, inc, out, c);
}

void scatter_rows_serial(const Mat& Z, const PairIncidence& inc, Mat& out) {
  const int n = static_cast<int>(out.rows());
  for (int r = 0; r < n; ++r) scatter_row_one(Z, inc, out, r);
}

void scatter_rows_omp(const Mat& Z, const PairIncidence& inc, Mat& out) {
  const int n = static_cast<int>(out.rows());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) scatter_row_one(Z, inc, out, r);
}

ShrinkStats shrink_dual_serial(const Mat& E, double lam2, double mu, double delta,
                               Mat& V, Mat& M) {
  const int npairs = static_cast<int>(E.cols());
  const double thresh = lam2 / mu, inv_mu = 1.0 / mu;
  ShrinkStats st;
  for (int e = 0; e < npairs; ++e) {
    double pr = 0, du = 0;
    shrink_one(E, thresh, inv_mu, mu, delta, V, M, e, pr, du);
    if (pr > st.primal_inf) st.primal_inf = pr;
    if (du > st.dual_inf) st.dual_inf = du;
  }
  return st;
}

ShrinkStats shrink_dual_omp(const Mat& E, double lam2, double mu, double delta,
                            Mat& V, Mat& M) {
  const int npairs = static_cast<int>(E.cols());
  const double thresh = lam2 / mu, inv_mu = 1.0 / mu;
  std::vector<double> prs(npairs), dus(npairs);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < npairs; ++e)
    shrink_one(E, thresh, inv_mu, mu, delta, V, M, e, prs[e], dus[e]);
  ShrinkStats st;
  for (int e = 0; e < npairs; ++e) {  // max is order-independent anyway
    if (prs[e] > st.primal_inf) st.primal_inf = prs[e];
    if (dus[e] > st.dual_inf) st.dual_inf = dus[e];
  }
  return st;
}

#define SUBIC_DISPATCH(fn, ...) \
  (par::mode() == par::Mode::openmp ? fn##_omp(__VA_ARGS__) : fn##_serial(__VA_ARGS__))

Mat col_sqdist(const Mat& X) { return SUBIC_DISPATCH(col_sqdist, X); }
Mat row_sqdist(const Mat& X) { return SUBIC_DISPATCH(row_sqdist, X); }
void col_deltas(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  SUBIC_DISPATCH(col_deltas, T, pairs, out);
}
void row_deltas(const Mat& T, const std::vector<WPair>& pairs, Mat& out) {
  SUBIC_DISPATCH(row_deltas, T, pairs, out);
}
void scatter_cols(const Mat& Z, const PairIncidence& inc, Mat& out) {
  SUBIC_DISPATCH(scatter_cols, Z, inc, out);
}
void scatter_rows(const Mat& Z, const PairIncidence& inc, Mat& out) {
  SUBIC_DISPATCH(scatter_rows, Z, inc, out);
}
ShrinkStats shrink_dual(const Mat& E, double lam2, double mu, double delta, Mat& V, Mat& M) {
  return SUBIC_DISPATCH(shrink_dual, E, lam2, mu, delta, V, M);
}

#undef SUBIC_DISPATCH

}  // namespace subic::kernels
