#pragma once

// Inner hyperparameter search: repeated dyad-stratified 10-fold CV inside a
// training fold, scoring every grid point on the same fold assignments and
// returning the first point with the best mean score. The grids mirror the
// published search table (60 forest points, 49 kernel points).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rapport/model.hpp"

namespace rapport {

struct GridPoint {
    std::map<std::string, std::string> hyper;
};

// The published search grids, in tie-break order: forest iterates
// max_features, then min_samples_leaf, then min_samples_split; the kernel
// grid iterates C outer, gamma inner. Baselines get one empty point.
std::vector<GridPoint> model_grid(ModelFamily family);

struct GridSearchResult {
    GridPoint best;
    double best_score = 0.0;
    std::vector<double> scores;  // mean validation score per grid point
    bool searched = false;       // singleton grids return without inner CV
};

// Dyads stay whole within folds. Classification stratifies dyads by their
// label pair; regression orders dyads by mean affiliation (random jitter
// breaking ties) and deals round-robin. Degenerate validation folds are
// skipped; a grid point whose every fold fails scores -inf. Every point
// failing is a numeric error.
GridSearchResult grid_search(const Dataset& train, ModelFamily family, Task task,
                             const std::vector<GridPoint>& grid,
                             const std::vector<int>& features, int folds, int repeats,
                             std::uint64_t seed);

}  // namespace rapport
