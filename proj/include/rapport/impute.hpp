#pragma once

// Chained-equation imputation: each incomplete feature is regressed on the
// other 74 with a ridge penalty, cycling in ascending missing-count order
// until the imputed cells settle. The fitted model carries one predictor per
// feature so a single ordered pass can repair any missingness pattern in new
// samples without touching observed cells.

#include <cstdint>
#include <string>
#include <vector>

#include "rapport/schema.hpp"

namespace rapport {

struct ImputerParams {
    double lambda = 1.0;  // ridge penalty on standardized predictors
    int max_sweeps = 10;
    double tol = 1e-3;  // max absolute standardized cell change for convergence
};

// Linear predictor in standardized space: z_j = intercept + sum_k w_k * z_k
// (self weight is zero).
struct FeaturePredictor {
    double intercept = 0.0;
    std::vector<double> weights;
};

struct ImputationModel {
    std::vector<double> means;   // observed-cell column means
    std::vector<double> scales;  // observed-cell column SDs; constant column -> 1
    std::vector<int> order;      // feature visit order: ascending train missing count
    std::vector<FeaturePredictor> predictors;
    double lambda = 1.0;
    int sweeps_run = 0;  // chained sweeps executed during fit
};

// Fits on the training rows only. Missing cells start at column means; the
// chained sweeps then refit each incomplete feature and update its missing
// cells until max_sweeps or until the largest standardized change drops below
// tol. A training set with no missing cells converges immediately. Every
// feature must be valid in at least 2 training samples.
ImputationModel fit_imputer(const Dataset& train, const ImputerParams& params = {});

// Fills the invalid cells of x in a single pass over model.order, marking them
// valid; earlier-imputed values feed later predictors. Valid cells are never
// altered.
FeatureVector impute(const ImputationModel& model, const FeatureVector& x);

// Convenience: impute() over every sample.
Dataset impute_dataset(const ImputationModel& model, const Dataset& data);

}  // namespace rapport
