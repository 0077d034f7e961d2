#pragma once

// Held-out scores: F1 of the positive (high-affiliation) class and R^2 about
// the evaluation-set mean. Four-sample test folds routinely degenerate
// (single-class truth, zero variance); those are flagged rather than scored.

#include <vector>

namespace rapport {

struct MetricValue {
    double value = 0.0;
    bool degenerate = false;  // excluded from aggregation when set
};

// Labels are 0/1 with 1 the positive class. F1 = 0 when precision + recall
// is 0; degenerate when truth has no positive example.
MetricValue f1_score(const std::vector<double>& predictions, const std::vector<double>& truth);

// 1 - SS_res/SS_tot about the truth mean; may be negative. Degenerate when
// truth variance is zero.
MetricValue r2_score(const std::vector<double>& predictions, const std::vector<double>& truth);

}  // namespace rapport
