#include "rapport/gridsearch.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "rapport/error.hpp"
#include "rapport/metrics.hpp"
#include "rapport/rng.hpp"
#include "rapport/split.hpp"

namespace rapport {

std::vector<GridPoint> model_grid(ModelFamily family) {
    std::vector<GridPoint> grid;
    switch (family) {
        case ModelFamily::forest:
            for (const char* mf : {"all", "sqrt", "log2"}) {
                for (int leaf : {1, 2, 4, 8, 16}) {
                    for (int split : {2, 4, 8, 16}) {
                        GridPoint p;
                        p.hyper["max_features"] = mf;
                        p.hyper["min_samples_leaf"] = std::to_string(leaf);
                        p.hyper["min_samples_split"] = std::to_string(split);
                        grid.push_back(std::move(p));
                    }
                }
            }
            break;
        case ModelFamily::kernel_margin: {
            static const char* kPowers[] = {"0.01", "0.1", "1", "10", "100", "1000", "10000"};
            for (const char* c : kPowers) {
                for (const char* g : kPowers) {
                    GridPoint p;
                    p.hyper["C"] = c;
                    p.hyper["gamma"] = g;
                    grid.push_back(std::move(p));
                }
            }
            break;
        }
        case ModelFamily::baseline_random:
        case ModelFamily::baseline_mean:
            grid.emplace_back();  // nothing to tune
            break;
    }
    return grid;
}

namespace {

// Dyad-level view of the training fold: member sample indices plus the
// stratification key (label pair for classification, mean affiliation for
// regression).
struct DyadInfo {
    std::vector<std::size_t> members;
    int high_count = 0;  // 0 = both low, 1 = mixed, 2 = both high
    double mean_affiliation = 0.0;
};

std::vector<DyadInfo> collect_dyads(const Dataset& data, Task task) {
    std::map<std::string, DyadInfo> by_id;  // sorted, so dyad order is stable
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const Sample& s = data.samples[i];
        DyadInfo& d = by_id[s.dyad_id];
        d.members.push_back(i);
        d.mean_affiliation += s.affiliation;
        if (task == Task::classify) {
            if (!s.high_affiliation.has_value()) {
                throw InputError("grid search: sample '" + s.participant_id +
                                 "' has no class label; run median_split first");
            }
            if (*s.high_affiliation) ++d.high_count;
        }
    }
    std::vector<DyadInfo> dyads;
    dyads.reserve(by_id.size());
    for (auto& [id, d] : by_id) {
        d.mean_affiliation /= static_cast<double>(d.members.size());
        dyads.push_back(std::move(d));
    }
    return dyads;
}

// One repeat's fold index per dyad. Classification groups dyads by label
// pair and shuffles within each group; regression orders dyads by mean
// affiliation with random jitter breaking ties. Dealing the resulting order
// round-robin spreads every stratum (or the affiliation range) across folds.
std::vector<int> assign_folds(const std::vector<DyadInfo>& dyads, Task task, int folds,
                              Rng& rng) {
    const std::size_t n = dyads.size();
    std::vector<std::size_t> order;
    order.reserve(n);
    if (task == Task::classify) {
        for (int stratum = 0; stratum <= 2; ++stratum) {
            std::vector<std::size_t> group;
            for (std::size_t i = 0; i < n; ++i) {
                if (dyads[i].high_count == stratum) group.push_back(i);
            }
            rng.shuffle(group);
            order.insert(order.end(), group.begin(), group.end());
        }
    } else {
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::vector<double> jitter(n);
        for (double& j : jitter) j = rng.uniform01();
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (dyads[a].mean_affiliation != dyads[b].mean_affiliation) {
                return dyads[a].mean_affiliation < dyads[b].mean_affiliation;
            }
            return jitter[a] < jitter[b];
        });
    }
    std::vector<int> fold_of(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        fold_of[order[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

std::vector<double> truth_of(const Dataset& data, Task task) {
    std::vector<double> t;
    t.reserve(data.samples.size());
    for (const Sample& s : data.samples) {
        t.push_back(task == Task::classify ? (*s.high_affiliation ? 1.0 : 0.0)
                                           : s.affiliation);
    }
    return t;
}

}  // namespace

GridSearchResult grid_search(const Dataset& train_data, ModelFamily family, Task task,
                             const std::vector<GridPoint>& grid,
                             const std::vector<int>& features, int folds, int repeats,
                             std::uint64_t seed) {
    if (grid.empty()) throw InputError("grid search: empty grid");

    GridSearchResult result;
    result.scores.assign(grid.size(), 0.0);
    if (grid.size() == 1) {  // nothing to choose between; skip the inner CV
        result.best = grid.front();
        return result;
    }
    if (folds < 2) throw InputError("grid search: need at least 2 folds");
    if (repeats < 1) throw InputError("grid search: need at least 1 repeat");

    const std::vector<DyadInfo> dyads = collect_dyads(train_data, task);
    if (dyads.size() < 2) throw InputError("grid search: need at least 2 dyads");
    const int k = std::min(folds, static_cast<int>(dyads.size()));

    // Folds are built once per repeat and shared by every grid point, so
    // points compete on identical validation data with identical model seeds.
    struct Cell {
        Dataset fit;
        Dataset val;
        std::vector<double> truth;
        std::uint64_t model_seed = 0;
    };
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(repeats) * static_cast<std::size_t>(k));
    for (int rep = 0; rep < repeats; ++rep) {
        Rng rng(derive_seed(seed, 0x666f6c64ULL, static_cast<std::uint64_t>(rep)));
        const std::vector<int> fold_of = assign_folds(dyads, task, k, rng);
        for (int f = 0; f < k; ++f) {
            std::vector<std::size_t> fit_idx;
            std::vector<std::size_t> val_idx;
            for (std::size_t d = 0; d < dyads.size(); ++d) {
                auto& dst = (fold_of[d] == f) ? val_idx : fit_idx;
                dst.insert(dst.end(), dyads[d].members.begin(), dyads[d].members.end());
            }
            std::sort(fit_idx.begin(), fit_idx.end());
            std::sort(val_idx.begin(), val_idx.end());
            Cell cell;
            cell.fit = subset_by_indices(train_data, fit_idx);
            cell.val = subset_by_indices(train_data, val_idx);
            cell.truth = truth_of(cell.val, task);
            cell.model_seed =
                derive_seed(seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(f));
            cells.push_back(std::move(cell));
        }
    }

    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    bool any_scored = false;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        ModelConfig config;
        config.family = family;
        config.task = task;
        config.hyper = grid[gi].hyper;
        double sum = 0.0;
        int scored = 0;
        for (const Cell& cell : cells) {
            config.seed = cell.model_seed;
            try {
                const TrainedModel model = train(config, cell.fit, features);
                const std::vector<double> pred = predict(model, cell.val);
                const MetricValue mv = (task == Task::classify) ? f1_score(pred, cell.truth)
                                                                : r2_score(pred, cell.truth);
                if (!mv.degenerate) {
                    sum += mv.value;
                    ++scored;
                }
            } catch (const InputError&) {
                // unfittable fold (e.g. single-class inner training set): skip
            } catch (const NumericError&) {
                // non-converged fit: skip the fold, not the whole search
            }
        }
        const double score =
            scored > 0 ? sum / scored : -std::numeric_limits<double>::infinity();
        result.scores[gi] = score;
        if (scored > 0) any_scored = true;
        if (score > best) {  // strict: ties keep the earliest grid point
            best = score;
            best_index = gi;
        }
    }
    if (!any_scored) {
        throw NumericError("grid search: every grid point failed or was degenerate on every fold");
    }
    result.best = grid[best_index];
    result.best_score = best;
    result.searched = true;
    return result;
}

}  // namespace rapport
