#include "rapport/cv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <utility>

#include "json.hpp"
#include "rapport/error.hpp"
#include "rapport/impute.hpp"
#include "rapport/rng.hpp"

namespace rapport {

ImputeMode impute_mode_from_string(const std::string& s) {
    if (s == "fold") return ImputeMode::fold;
    if (s == "whole") return ImputeMode::whole;
    throw InputError("unknown impute mode '" + s + "' (expected fold or whole)");
}

const char* to_string(ImputeMode m) {
    return m == ImputeMode::fold ? "fold" : "whole";
}

namespace {

std::vector<double> targets_of(const Dataset& data, Task task) {
    std::vector<double> t;
    t.reserve(data.samples.size());
    for (const Sample& s : data.samples) {
        if (task == Task::classify) {
            if (!s.high_affiliation.has_value()) {
                throw InputError("cross-validation: sample '" + s.participant_id +
                                 "' has no class label; run median_split first");
            }
            t.push_back(*s.high_affiliation ? 1.0 : 0.0);
        } else {
            t.push_back(s.affiliation);
        }
    }
    return t;
}

}  // namespace

CVScores run_cv(const Dataset& data, const ModelConfig& config,
                const std::vector<int>& features, const SplitPlan& plan,
                const CVParams& params) {
    if (params.repeats < 1) throw InputError("cross-validation: repeats must be >= 1");
    if (plan.splits.empty()) throw InputError("cross-validation: empty split plan");

    const std::vector<GridPoint> grid =
        params.grid.empty() ? model_grid(config.family) : params.grid;

    // Paper-faithful alternative: one imputer over the whole table before any
    // split. The default refits per training fold instead.
    Dataset whole;
    if (params.impute_mode == ImputeMode::whole) {
        const ImputationModel imputer = fit_imputer(data);
        whole = impute_dataset(imputer, data);
    }
    const Dataset& source = params.impute_mode == ImputeMode::whole ? whole : data;

    CVScores out;
    out.metric = config.task == Task::classify ? "f1" : "r2";
    out.family = config.family;
    out.task = config.task;
    out.seed = params.seed;
    out.repeats = params.repeats;
    out.n_splits = plan.splits.size();
    const std::size_t n_cells = static_cast<std::size_t>(params.repeats) * out.n_splits;
    out.cells.resize(n_cells);

    // Each cell is independent and draws only from its (seed, repetition,
    // split)-derived streams, so results are identical for any job count.
    auto run_cell = [&](std::size_t index) {
        const int rep = static_cast<int>(index / out.n_splits);
        const std::size_t split = index % out.n_splits;
        const std::uint64_t cell_seed = derive_seed(
            params.seed, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(split));
        CellResult& cell = out.cells[index];
        try {
            std::vector<std::size_t> train_idx;
            std::vector<std::size_t> test_idx;
            split_indices(source, plan, split, train_idx, test_idx);
            Dataset train_fold = subset_by_indices(source, train_idx);
            Dataset test_fold = subset_by_indices(source, test_idx);
            if (params.impute_mode == ImputeMode::fold) {
                const ImputationModel imputer = fit_imputer(train_fold);
                train_fold = impute_dataset(imputer, train_fold);
                test_fold = impute_dataset(imputer, test_fold);
            }

            ModelConfig fitted = config;
            const GridSearchResult search = grid_search(
                train_fold, config.family, config.task, grid, features, params.grid_folds,
                params.grid_repeats, derive_seed(cell_seed, 0x67726964ULL));
            for (const auto& [name, value] : search.best.hyper) fitted.hyper[name] = value;
            fitted.seed = derive_seed(cell_seed, 0x666974ULL);

            const TrainedModel model = train(fitted, train_fold, features);
            cell.predictions = predict(model, test_fold);
            cell.truth = targets_of(test_fold, config.task);
            const MetricValue mv = config.task == Task::classify
                                       ? f1_score(cell.predictions, cell.truth)
                                       : r2_score(cell.predictions, cell.truth);
            cell.score = mv.value;
            cell.degenerate = mv.degenerate;
        } catch (const InputError& e) {
            cell = CellResult{};
            cell.aborted = true;
            cell.abort_reason = e.what();
        } catch (const NumericError& e) {
            cell = CellResult{};
            cell.aborted = true;
            cell.abort_reason = e.what();
        }
    };

    const int jobs = std::max(1, std::min<int>(params.jobs, static_cast<int>(n_cells)));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_cells) return;
                try {
                    run_cell(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    // Pooling runs after the join in fixed split order, so the pooled values
    // are independent of scheduling.
    std::size_t aborted = 0;
    out.pooled_per_repetition.reserve(static_cast<std::size_t>(params.repeats));
    for (int rep = 0; rep < params.repeats; ++rep) {
        std::vector<double> pred;
        std::vector<double> truth;
        for (std::size_t split = 0; split < out.n_splits; ++split) {
            const CellResult& cell = out.cell(rep, split);
            if (cell.aborted) {
                ++aborted;
                continue;
            }
            pred.insert(pred.end(), cell.predictions.begin(), cell.predictions.end());
            truth.insert(truth.end(), cell.truth.begin(), cell.truth.end());
        }
        if (truth.size() < 2) {
            MetricValue empty;
            empty.degenerate = true;
            out.pooled_per_repetition.push_back(empty);
            continue;
        }
        out.pooled_per_repetition.push_back(out.task == Task::classify
                                                ? f1_score(pred, truth)
                                                : r2_score(pred, truth));
    }
    if (aborted == n_cells) {
        throw NumericError("cross-validation: every cell aborted; first reason: " +
                           out.cells.front().abort_reason);
    }
    return out;
}

CVSummary summarize(const CVScores& scores) {
    CVSummary s;
    double sum = 0.0;
    for (const CellResult& cell : scores.cells) {
        if (cell.aborted) {
            ++s.aborted_cells;
        } else if (cell.degenerate) {
            ++s.degenerate_cells;
        } else {
            sum += cell.score;
            ++s.scored_cells;
        }
    }
    if (s.scored_cells > 0) s.mean_cells = sum / s.scored_cells;
    if (s.scored_cells > 1) {
        double ss = 0.0;
        for (const CellResult& cell : scores.cells) {
            if (cell.aborted || cell.degenerate) continue;
            const double d = cell.score - s.mean_cells;
            ss += d * d;
        }
        s.sd_cells = std::sqrt(ss / (s.scored_cells - 1));
    }
    double pooled_sum = 0.0;
    int pooled_n = 0;
    for (const MetricValue& mv : scores.pooled_per_repetition) {
        if (mv.degenerate) continue;
        pooled_sum += mv.value;
        ++pooled_n;
    }
    if (pooled_n > 0) s.mean_pooled = pooled_sum / pooled_n;
    return s;
}

void write_cv_scores(const std::string& path, const CVScores& scores) {
    nlohmann::ordered_json j;
    j["format"] = "rapport-cv-scores";
    j["metric"] = scores.metric;
    j["family"] = to_string(scores.family);
    j["task"] = to_string(scores.task);
    j["seed"] = scores.seed;
    j["repeats"] = scores.repeats;
    j["n_splits"] = scores.n_splits;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const CellResult& cell : scores.cells) {
        nlohmann::ordered_json c;
        c["score"] = cell.score;
        c["degenerate"] = cell.degenerate;
        c["aborted"] = cell.aborted;
        if (cell.aborted) c["reason"] = cell.abort_reason;
        c["predictions"] = cell.predictions;
        c["truth"] = cell.truth;
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    nlohmann::ordered_json pooled = nlohmann::ordered_json::array();
    for (const MetricValue& mv : scores.pooled_per_repetition) {
        pooled.push_back({{"value", mv.value}, {"degenerate", mv.degenerate}});
    }
    j["pooled_per_repetition"] = std::move(pooled);

    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    out << j.dump(1) << '\n';
    if (!out) throw InputError("failed while writing '" + path + "'");
}

CVScores read_cv_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "rapport-cv-scores") {
            throw InputError("'" + path + "' is not a CV scores file");
        }
        CVScores scores;
        scores.metric = j.at("metric").get<std::string>();
        scores.family = family_from_string(j.at("family").get<std::string>());
        scores.task = task_from_string(j.at("task").get<std::string>());
        scores.seed = j.at("seed").get<std::uint64_t>();
        scores.repeats = j.at("repeats").get<int>();
        scores.n_splits = j.at("n_splits").get<std::size_t>();
        for (const auto& c : j.at("cells")) {
            CellResult cell;
            cell.score = c.at("score").get<double>();
            cell.degenerate = c.at("degenerate").get<bool>();
            cell.aborted = c.at("aborted").get<bool>();
            if (cell.aborted) cell.abort_reason = c.at("reason").get<std::string>();
            cell.predictions = c.at("predictions").get<std::vector<double>>();
            cell.truth = c.at("truth").get<std::vector<double>>();
            scores.cells.push_back(std::move(cell));
        }
        for (const auto& p : j.at("pooled_per_repetition")) {
            MetricValue mv;
            mv.value = p.at("value").get<double>();
            mv.degenerate = p.at("degenerate").get<bool>();
            scores.pooled_per_repetition.push_back(mv);
        }
        if (scores.cells.size() !=
            static_cast<std::size_t>(scores.repeats) * scores.n_splits) {
            throw InputError("'" + path + "': cell count does not match repeats * n_splits");
        }
        return scores;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is missing CV scores fields: " + e.what());
    }
}

}  // namespace rapport
