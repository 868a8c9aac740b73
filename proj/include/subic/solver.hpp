#pragma once

#include <utility>
#include <vector>

#include "subic/types.hpp"
#include "subic/weights.hpp"

namespace subic {

// Elementwise sgn(v) * max(0, |v| - lam).
double soft_threshold(double v, double lam);
Vec soft_threshold(const Vec& v, double lam);

// Graph Laplacian of the pair weights raised to `weight_power` (1 or 2):
// L(a,a) = sum of incident c_e, L(a,b) = -c_e for stored pairs, so that
// x^T L x = sum_e c_e (x_i - x_j)^2.
Mat fused_laplacian(const std::vector<WPair>& pairs, int m, int weight_power);

// Concrete penalty parameters after resolving the auto defaults. The auto
// mu balances the augmented per-pair penalty mu * w_e^2 against the unit
// curvature of the data-fit term on the heaviest stored pairs (weights this
// small otherwise make the dual ascent crawl), via the 95th-percentile
// weight of each axis. delta defaults to its mu, the largest admissible
// step.
struct ResolvedParams {
  double mu1 = 1.0, mu2 = 1.0;
  double delta1 = 1.0, delta2 = 1.0;
  double lambda1_eff = 0.0;  // 0 when use_l2 is off
};
ResolvedParams resolve_params(const FitConfig& cfg, const WeightSet& ws);

// One-time symmetric eigendecompositions of
//   A = I/2 + 2*lambda1*L_rows(h) + mu2*L_rows(h^2)   (n x n)
//   B = I/2 + 2*lambda1*L_cols(w) + mu1*L_cols(w^2)   (p x p)
// reused across iterations and across lambda2 sweeps. Solves A T + T B = C
// exactly; the identity halves keep every eigenvalue-sum denominator >= 1.
struct SylvesterSolver {
  Mat U, Q;      // eigenvectors of A and B
  Vec eva, evb;  // eigenvalues
  Mat solve(const Mat& C) const;
};
SylvesterSolver make_sylvester(const WeightSet& ws, int n, int p,
                               double lambda1, double mu1, double mu2);

struct SolverState {
  Mat T;     // n x p
  Mat V, M;  // n x |col_pairs|, auxiliary splits and duals per column pair
  Mat S, N;  // p x |row_pairs|
  int iter = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
};

struct FitResult {
  Mat T;
  SolverState state;
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective_trace;                  // one entry per iteration
  std::vector<std::pair<double, double>> residual_trace;  // (primal, dual)
  ResolvedParams params;
};

// The exact minimizer of the smooth + linearized-constraint subproblem at
// the given splits/duals (the quadratic step of the alternating scheme).
Mat t_update(const Mat& X, const WeightSet& ws, const FitConfig& cfg,
             const Mat& V, const Mat& S, const Mat& M, const Mat& N);

// The full fused objective over stored pairs:
//   1/2 ||X-T||_F^2
//   + lambda1 * [sum_e w_e ||T_.i - T_.j||_2^2 + sum_f h_f ||T_i. - T_j.||_2^2]
//   + lambda2 * [sum_e w_e ||T_.i - T_.j||_1   + sum_f h_f ||T_i. - T_j.||_1]
double objective_value(const Mat& X, const Mat& T, const WeightSet& ws,
                       double lambda1, double lambda2);

// Alternating minimization: exact quadratic step, per-pair shrinkage, dual
// ascent. Stops when both residual infinity-norms are <= cfg.tol or at
// max_iter; non-convergence is reported, not thrown. Throws NumericError if
// iterates stop being finite. `cached` may carry the eigendecompositions
// for this (weights, lambda1, mu1, mu2) tuple, e.g. across a lambda2 sweep.
FitResult fit_with_weights(const Mat& X, const WeightSet& ws, const FitConfig& cfg,
                           const SylvesterSolver* cached = nullptr);

// Convenience wrapper: requires centered X, builds weights, fits.
FitResult fit(const DataMatrix& X, const TargetVector& Y, const FitConfig& cfg);

}  // namespace subic
