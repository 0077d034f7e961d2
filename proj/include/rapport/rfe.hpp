#pragma once

// Recursive feature elimination over the forest regressor. Each subset size
// is scored by the outer CV (mean pooled-per-repetition R², which stays
// defined where 4-sample folds degenerate); importances come from one
// full-data fit per step, and the least important feature is dropped until
// a single feature remains.

#include <cstdint>
#include <vector>

#include "rapport/schema.hpp"
#include "rapport/split.hpp"

namespace rapport {

struct RfeResult {
    std::vector<int> optimal_features;   // ascending schema indices
    std::size_t optimal_size = 0;        // equals optimal_features.size()
    std::vector<int> elimination_order;  // earliest-eliminated first; the
                                         // surviving feature closes the list
    std::vector<double> score_curve;     // [k] = score with start_size - k features
};

// Forest regressor with the pinned default hyperparameters (no inner grid
// search). The curve has one entry per subset size from |start| down to 1;
// the optimum is the argmax, ties resolved toward the smaller subset.
// `start` empty means all schema features. `jobs` threads the CV cells.
RfeResult rfe_cv(const Dataset& data, const SplitPlan& plan, int repeats, std::uint64_t seed,
                 const std::vector<int>& start = {}, int jobs = 1);

}  // namespace rapport
