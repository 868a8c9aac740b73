#pragma once

#include "subic/biclusters.hpp"
#include "subic/types.hpp"

namespace subic {

struct Prediction {
  double y_hat = 0.0;
  Vec q;                // posterior row-cluster responsibilities, sums to 1
  Vec log_likelihoods;  // unnormalized log posterior per row cluster
};

// log p(x | row cluster r) + log prior_r under the model's Gaussian cells:
// x is a raw feature vector; it is centered/scaled like the training data,
// and each entry contributes a normal log-density with the block mean of
// (r, column cluster of j) and shared variance sigma2.
double component_loglik(const Vec& x_raw, const BiclusterModel& m, int r);

// Responsibilities via log-sum-exp, prediction as the responsibility-
// weighted mixture of per-cluster target means (identity link).
Prediction predict_one(const Vec& x_raw, const BiclusterModel& m);

// Row-wise predictions for a matrix of new instances (columns must already
// match the model's feature order).
std::vector<Prediction> predict_batch(const Mat& X_raw, const BiclusterModel& m);

}  // namespace subic
