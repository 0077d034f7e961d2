#pragma once

// Outer evaluation loop: repeated leave-2-dyads-out CV. Each (repetition,
// split) cell fits the imputer on its training fold, imputes both sides,
// runs the inner hyperparameter search on the training fold, fits the final
// model there, and scores the 4 held-out samples. Test predictions are also
// pooled within each repetition, because 4-sample F1/R² is noisy.

#include <cstdint>
#include <string>
#include <vector>

#include "rapport/gridsearch.hpp"
#include "rapport/metrics.hpp"
#include "rapport/model.hpp"
#include "rapport/schema.hpp"
#include "rapport/split.hpp"

namespace rapport {

enum class ImputeMode {
    fold,   // imputer fit on each training fold only (no test leakage)
    whole,  // imputer fit once on the whole table before splitting
};

ImputeMode impute_mode_from_string(const std::string& s);
const char* to_string(ImputeMode m);

struct CVParams {
    int repeats = 10;
    std::uint64_t seed = 0;
    int grid_folds = 10;    // inner search folds
    int grid_repeats = 3;   // inner search repetitions
    ImputeMode impute_mode = ImputeMode::fold;
    int jobs = 1;
    // Inner search grid; empty means the family's published grid. A single
    // point pins the hyperparameters and skips the inner search entirely.
    std::vector<GridPoint> grid;
};

struct CellResult {
    double score = 0.0;
    bool degenerate = false;   // metric undefined on this 4-sample fold
    bool aborted = false;      // training failed; reason recorded below
    std::string abort_reason;
    std::vector<double> predictions;  // aligned with truth
    std::vector<double> truth;
};

struct CVScores {
    std::string metric;  // "f1" or "r2"
    ModelFamily family = ModelFamily::forest;
    Task task = Task::classify;
    std::uint64_t seed = 0;
    int repeats = 0;
    std::size_t n_splits = 0;
    std::vector<CellResult> cells;  // repetition-major: rep * n_splits + split
    std::vector<MetricValue> pooled_per_repetition;

    const CellResult& cell(int rep, std::size_t split) const {
        return cells[static_cast<std::size_t>(rep) * n_splits + split];
    }
};

// Mean/SD over scorable cells plus the pooled-per-repetition mean.
struct CVSummary {
    double mean_cells = 0.0;
    double sd_cells = 0.0;
    double mean_pooled = 0.0;
    int scored_cells = 0;
    int degenerate_cells = 0;
    int aborted_cells = 0;
};
CVSummary summarize(const CVScores& scores);

// Deterministic for a given params.seed regardless of params.jobs: every
// cell draws from its own (seed, repetition, split)-derived stream and the
// pooling order is fixed. Training errors abort the affected cell with a
// recorded reason; if every cell aborts the run fails.
CVScores run_cv(const Dataset& data, const ModelConfig& config,
                const std::vector<int>& features, const SplitPlan& plan,
                const CVParams& params);

// CVScores round-trip as JSON, the exchange format between `evaluate`,
// `bayes`, and `report`.
void write_cv_scores(const std::string& path, const CVScores& scores);
CVScores read_cv_scores(const std::string& path);

}  // namespace rapport
