#pragma once

#include <vector>

#include "subic/types.hpp"
#include "subic/weights.hpp"

// Data-parallel inner loops shared by the weight builder and the solver.
// Each kernel comes as a _serial reference and an _omp variant plus a
// dispatcher that picks one from par::mode(). The two variants run the same
// per-element code in the same order, so their outputs are bit-identical
// and independent of thread count.
namespace subic::kernels {

// All squared Euclidean distances between columns (p x p, zero diagonal).
Mat col_sqdist(const Mat& X);
Mat col_sqdist_serial(const Mat& X);
Mat col_sqdist_omp(const Mat& X);

// Same between rows (n x n).
Mat row_sqdist(const Mat& X);
Mat row_sqdist_serial(const Mat& X);
Mat row_sqdist_omp(const Mat& X);

// Weighted pair differences. out is (n x |pairs|) for columns: column e
// holds w_e * (T_.i - T_.j); and (p x |pairs|) for rows: h_e * (T_i. - T_j.).
void col_deltas(const Mat& T, const std::vector<WPair>& pairs, Mat& out);
void col_deltas_serial(const Mat& T, const std::vector<WPair>& pairs, Mat& out);
void col_deltas_omp(const Mat& T, const std::vector<WPair>& pairs, Mat& out);

void row_deltas(const Mat& T, const std::vector<WPair>& pairs, Mat& out);
void row_deltas_serial(const Mat& T, const std::vector<WPair>& pairs, Mat& out);
void row_deltas_omp(const Mat& T, const std::vector<WPair>& pairs, Mat& out);

// Precomputed incidence of pairs on items, so the adjoint accumulation can
// run parallel over items with a fixed per-item order (no atomics needed).
struct PairIncidence {
  struct Hit {
    int pair = 0;
    double signed_weight = 0.0;  // +w for the i side, -w for the j side
  };
  std::vector<std::vector<Hit>> per_item;  // size m

  static PairIncidence build(int m, const std::vector<WPair>& pairs);
};

// out.col(c) += sum over incident pairs of signed_weight * Z.col(e); Z is
// (n x |pairs|), out is n x p.
void scatter_cols(const Mat& Z, const PairIncidence& inc, Mat& out);
void scatter_cols_serial(const Mat& Z, const PairIncidence& inc, Mat& out);
void scatter_cols_omp(const Mat& Z, const PairIncidence& inc, Mat& out);

// out.row(r) += signed_weight * Z.col(e)^T; Z is (p x |pairs|), out is n x p.
void scatter_rows(const Mat& Z, const PairIncidence& inc, Mat& out);
void scatter_rows_serial(const Mat& Z, const PairIncidence& inc, Mat& out);
void scatter_rows_omp(const Mat& Z, const PairIncidence& inc, Mat& out);

struct ShrinkStats {
  double primal_inf = 0.0;  // max |E - V_new|
  double dual_inf = 0.0;    // mu * max |V_new - V_old|
};

// The per-pair auxiliary/dual sweep: given fresh deltas E, shrink toward
// V = soft(E + M/mu, lam2/mu), step the dual M += delta * (E - V), and
// report the residual maxima.
ShrinkStats shrink_dual(const Mat& E, double lam2, double mu, double delta, Mat& V, Mat& M);
ShrinkStats shrink_dual_serial(const Mat& E, double lam2, double mu, double delta, Mat& V, Mat& M);
ShrinkStats shrink_dual_omp(const Mat& E, double lam2, double mu, double delta, Mat& V, Mat& M);

}  // namespace subic::kernels
