#include "rapport/rfe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rapport/cv.hpp"
#include "rapport/error.hpp"
#include "rapport/impute.hpp"
#include "rapport/model.hpp"
#include "rapport/rng.hpp"

namespace rapport {

namespace {

GridPoint default_forest_point() {
    GridPoint p;
    p.hyper["max_features"] = "sqrt";
    p.hyper["min_samples_leaf"] = "1";
    p.hyper["min_samples_split"] = "2";
    return p;
}

double curve_score(const CVScores& scores) {
    double sum = 0.0;
    int n = 0;
    for (const MetricValue& mv : scores.pooled_per_repetition) {
        if (mv.degenerate) continue;
        sum += mv.value;
        ++n;
    }
    return n > 0 ? sum / n : -std::numeric_limits<double>::infinity();
}

}  // namespace

RfeResult rfe_cv(const Dataset& data, const SplitPlan& plan, int repeats, std::uint64_t seed,
                 const std::vector<int>& start, int jobs) {
    std::vector<int> subset = start.empty() ? all_features(FeatureSchema::standard()) : start;
    std::sort(subset.begin(), subset.end());
    if (subset.empty()) throw InputError("rfe: empty starting subset");

    ModelConfig config;
    config.family = ModelFamily::forest;
    config.task = Task::regress;

    // Importance fits use the whole imputed table, once, outside the loop.
    const ImputationModel imputer = fit_imputer(data);
    const Dataset whole = impute_dataset(imputer, data);

    RfeResult result;
    result.score_curve.reserve(subset.size());
    double best = -std::numeric_limits<double>::infinity();
    for (int step = 0; !subset.empty(); ++step) {
        CVParams params;
        params.repeats = repeats;
        params.seed = derive_seed(seed, 0x72666563ULL, static_cast<std::uint64_t>(step));
        params.jobs = jobs;
        params.grid = {default_forest_point()};
        const CVScores scores = run_cv(data, config, subset, plan, params);
        const double score = curve_score(scores);
        result.score_curve.push_back(score);
        // >= so an exact tie moves the optimum to the smaller, later subset.
        if (score >= best && std::isfinite(score)) {
            best = score;
            result.optimal_features = subset;
        }

        if (subset.size() == 1) {
            result.elimination_order.push_back(subset.front());
            break;
        }

        ModelConfig importance_config = config;
        importance_config.hyper = default_forest_point().hyper;
        importance_config.seed =
            derive_seed(seed, 0x696d70ULL, static_cast<std::uint64_t>(step));
        const TrainedModel model = train(importance_config, whole, subset);
        const std::vector<double>& importances = model.forest.importances;
        const std::size_t drop = static_cast<std::size_t>(
            std::min_element(importances.begin(), importances.end()) - importances.begin());
        result.elimination_order.push_back(subset[drop]);
        subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(drop));
    }

    if (!std::isfinite(best)) {
        throw NumericError("rfe: no subset size produced a defined pooled score");
    }
    result.optimal_size = result.optimal_features.size();
    return result;
}

}  // namespace rapport
