#pragma once

// Uniform training/prediction surface over the four model families: the CART
// forest, the RBF kernel machine, and the two baselines (seeded random class,
// training-mean regressor). Trained models serialize to JSON stamped with the
// schema hash so artifacts from a different schema are refused on load.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rapport/forest.hpp"
#include "rapport/schema.hpp"
#include "rapport/svm.hpp"

namespace rapport {

enum class ModelFamily { forest, kernel_margin, baseline_random, baseline_mean };
enum class Task { classify, regress };

const char* to_string(ModelFamily f);
const char* to_string(Task t);
ModelFamily family_from_string(const std::string& s);
Task task_from_string(const std::string& s);

// Hyperparameters are kept as strings so grid definitions, config files, and
// serialized models share one representation; typed getters parse on use.
struct ModelConfig {
    ModelFamily family = ModelFamily::forest;
    Task task = Task::classify;
    std::map<std::string, std::string> hyper;
    std::uint64_t seed = 0;

    double hyper_double(const std::string& name, double fallback) const;
    int hyper_int(const std::string& name, int fallback) const;
    std::string hyper_string(const std::string& name, const std::string& fallback) const;
};

struct TrainedModel {
    ModelConfig config;
    std::vector<int> feature_subset;  // schema indices, ascending
    std::uint64_t schema_hash = 0;
    // Exactly one payload is populated, per config.family.
    Forest forest;
    SvmModel svm;
    double mean_value = 0.0;
};

// Classification reads Sample::high_affiliation (median_split first);
// regression reads Sample::affiliation. Every subset cell must be valid —
// impute before training.
TrainedModel train(const ModelConfig& config, const Dataset& data,
                   const std::vector<int>& features);

// Class 0/1 or regression value, one entry per sample. baseline_random draws
// a fresh seeded stream per call, so a full-dataset predict is reproducible.
std::vector<double> predict(const TrainedModel& model, const Dataset& data);

void write_model(const std::string& path, const TrainedModel& model);
TrainedModel read_model(const std::string& path);  // refuses schema mismatch

}  // namespace rapport
