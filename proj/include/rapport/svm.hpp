#pragma once

// Soft-margin RBF kernel machines trained by sequential minimal optimization
// with maximum-violating-pair working sets. Classification is the usual
// C-SVC dual; regression is epsilon-insensitive SVR expressed as the same
// box-constrained dual over doubled variables. Features are z-standardized
// with training statistics inside fit.

#include <cstdint>
#include <vector>

#include "rapport/forest.hpp"  // Matrix

namespace rapport {

struct SvmParams {
    double C = 1.0;
    double gamma = 1.0;     // RBF: exp(-gamma * |x - y|^2)
    double epsilon = 0.1;   // SVR tube half-width
    double tol = 1e-3;      // KKT violation stopping threshold
    int max_iter = 500000;  // safety valve; the solver normally stops far earlier
};

struct SvmModel {
    bool classify = false;
    double gamma = 1.0;
    double b = 0.0;
    Matrix support;             // standardized rows with nonzero dual weight
    std::vector<double> coef;   // y_i * alpha_i (SVC) or alpha+ - alpha- (SVR)
    std::vector<double> mean;   // feature standardization
    std::vector<double> scale;  // sd of each feature; constant features -> 1
};

// y holds class labels 0/1 when classify (1 = positive), else regression
// targets. A single-class classification set is an input error.
SvmModel fit_svm(const Matrix& X, const std::vector<double>& y, bool classify,
                 const SvmParams& params);

// Margin value f(x) = sum_i coef_i K(s_i, x) + b on the standardized scale.
double decision_svm(const SvmModel& model, const double* x);

// Class 0/1 (positive iff the margin is strictly above zero) or the
// regression estimate.
double predict_svm(const SvmModel& model, const double* x);

}  // namespace rapport
