#include "rapport/model.hpp"

#include <charconv>
#include <fstream>

#include "json.hpp"
#include "rapport/error.hpp"
#include "rapport/rng.hpp"

namespace rapport {

const char* to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::forest: return "forest";
        case ModelFamily::kernel_margin: return "kernel_margin";
        case ModelFamily::baseline_random: return "baseline_random";
        case ModelFamily::baseline_mean: return "baseline_mean";
    }
    return "?";
}

const char* to_string(Task t) { return t == Task::classify ? "classify" : "regress"; }

ModelFamily family_from_string(const std::string& s) {
    if (s == "forest") return ModelFamily::forest;
    if (s == "kernel_margin") return ModelFamily::kernel_margin;
    if (s == "baseline_random") return ModelFamily::baseline_random;
    if (s == "baseline_mean") return ModelFamily::baseline_mean;
    throw InputError("model: unknown family '" + s + "'");
}

Task task_from_string(const std::string& s) {
    if (s == "classify") return Task::classify;
    if (s == "regress") return Task::regress;
    throw InputError("model: unknown task '" + s + "'");
}

double ModelConfig::hyper_double(const std::string& name, double fallback) const {
    const auto it = hyper.find(name);
    if (it == hyper.end()) return fallback;
    double v = 0.0;
    const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc() || res.ptr != it->second.data() + it->second.size())
        throw InputError("model: hyperparameter '" + name + "' is not a number: '" +
                         it->second + "'");
    return v;
}

int ModelConfig::hyper_int(const std::string& name, int fallback) const {
    const auto it = hyper.find(name);
    if (it == hyper.end()) return fallback;
    int v = 0;
    const auto res = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
    if (res.ec != std::errc() || res.ptr != it->second.data() + it->second.size())
        throw InputError("model: hyperparameter '" + name + "' is not an integer: '" +
                         it->second + "'");
    return v;
}

std::string ModelConfig::hyper_string(const std::string& name, const std::string& fallback) const {
    const auto it = hyper.find(name);
    return it == hyper.end() ? fallback : it->second;
}

namespace {

// Dense matrix over the feature subset; every used cell must be valid.
Matrix gather(const Dataset& data, const std::vector<int>& features) {
    Matrix X(data.samples.size(), features.size());
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const Sample& s = data.samples[i];
        for (std::size_t j = 0; j < features.size(); ++j) {
            const std::size_t f = static_cast<std::size_t>(features[j]);
            if (f >= s.features.size())
                throw InputError("model: feature index out of schema range");
            if (!s.features.is_valid(f))
                throw InputError("model: invalid cell for feature '" +
                                 FeatureSchema::standard().entry(f).name + "' in participant '" +
                                 s.participant_id + "'; impute before training");
            X.at(i, j) = s.features.values[f];
        }
    }
    return X;
}

std::vector<double> targets(const Dataset& data, Task task) {
    std::vector<double> y;
    y.reserve(data.samples.size());
    for (const Sample& s : data.samples) {
        if (task == Task::classify) {
            if (!s.high_affiliation.has_value())
                throw InputError("model: participant '" + s.participant_id +
                                 "' has no class label; run median_split first");
            y.push_back(*s.high_affiliation ? 1.0 : 0.0);
        } else {
            y.push_back(s.affiliation);
        }
    }
    return y;
}

}  // namespace

TrainedModel train(const ModelConfig& config, const Dataset& data,
                   const std::vector<int>& features) {
    if (data.samples.empty()) throw InputError("model: empty training set");
    if (features.empty()) throw InputError("model: empty feature subset");
    for (std::size_t i = 1; i < features.size(); ++i)
        if (features[i] <= features[i - 1])
            throw InputError("model: feature subset must be strictly ascending");

    TrainedModel model;
    model.config = config;
    model.feature_subset = features;
    model.schema_hash = FeatureSchema::standard().hash();

    const std::vector<double> y = targets(data, config.task);
    switch (config.family) {
        case ModelFamily::forest: {
            const Matrix X = gather(data, features);
            ForestParams params;
            params.n_trees = config.hyper_int("n_trees", 128);
            params.max_features =
                max_features_from_string(config.hyper_string("max_features", "sqrt"));
            params.min_samples_leaf = config.hyper_int("min_samples_leaf", 1);
            params.min_samples_split = config.hyper_int("min_samples_split", 2);
            params.seed = config.seed;
            model.forest = fit_forest(X, y, config.task == Task::classify, params);
            break;
        }
        case ModelFamily::kernel_margin: {
            const Matrix X = gather(data, features);
            SvmParams params;
            params.C = config.hyper_double("C", 1.0);
            params.gamma = config.hyper_double("gamma", 1.0);
            params.epsilon = config.hyper_double("epsilon", 0.1);
            model.svm = fit_svm(X, y, config.task == Task::classify, params);
            break;
        }
        case ModelFamily::baseline_random: {
            if (config.task != Task::classify)
                throw InputError("model: baseline_random is a classification baseline");
            break;  // nothing to fit; the seed drives prediction
        }
        case ModelFamily::baseline_mean: {
            if (config.task != Task::regress)
                throw InputError("model: baseline_mean is a regression baseline");
            double sum = 0.0;
            for (const double v : y) sum += v;
            model.mean_value = sum / static_cast<double>(y.size());
            break;
        }
    }
    return model;
}

std::vector<double> predict(const TrainedModel& model, const Dataset& data) {
    std::vector<double> out;
    out.reserve(data.samples.size());
    switch (model.config.family) {
        case ModelFamily::forest:
        case ModelFamily::kernel_margin: {
            const Matrix X = gather(data, model.feature_subset);
            for (std::size_t i = 0; i < X.rows; ++i)
                out.push_back(model.config.family == ModelFamily::forest
                                  ? predict_forest(model.forest, X.row(i))
                                  : predict_svm(model.svm, X.row(i)));
            break;
        }
        case ModelFamily::baseline_random: {
            Rng rng(derive_seed(model.config.seed, 0xba5e11d0u));
            for (std::size_t i = 0; i < data.samples.size(); ++i)
                out.push_back(rng.uniform01() < 0.5 ? 0.0 : 1.0);
            break;
        }
        case ModelFamily::baseline_mean: {
            out.assign(data.samples.size(), model.mean_value);
            break;
        }
    }
    return out;
}

namespace {

nlohmann::ordered_json forest_to_json(const Forest& forest) {
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const Tree& tree : forest.trees) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const TreeNode& n : tree.nodes)
            nodes.push_back(
                {n.feature, n.threshold, n.left, n.right, n.value, n.left_closed ? 1 : 0});
        trees.push_back(std::move(nodes));
    }
    return {{"classify", forest.classify},
            {"trees", std::move(trees)},
            {"importances", forest.importances}};
}

Forest forest_from_json(const nlohmann::json& j) {
    Forest forest;
    forest.classify = j.at("classify").get<bool>();
    for (const auto& tj : j.at("trees")) {
        Tree tree;
        for (const auto& nj : tj) {
            if (!nj.is_array() || nj.size() != 6)
                throw InputError("model: malformed tree node");
            TreeNode n;
            n.feature = nj[0].get<int>();
            n.threshold = nj[1].get<double>();
            n.left = nj[2].get<int>();
            n.right = nj[3].get<int>();
            n.value = nj[4].get<double>();
            n.left_closed = nj[5].get<int>() != 0;
            tree.nodes.push_back(n);
        }
        forest.trees.push_back(std::move(tree));
    }
    forest.importances = j.at("importances").get<std::vector<double>>();
    return forest;
}

nlohmann::ordered_json matrix_to_json(const Matrix& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows; ++i)
        rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.cols));
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const auto& rows = j.at("data");
    if (rows.size() != m.rows) throw InputError("model: malformed matrix");
    for (std::size_t i = 0; i < m.rows; ++i) {
        const auto row = rows[i].get<std::vector<double>>();
        if (row.size() != m.cols) throw InputError("model: malformed matrix row");
        std::copy(row.begin(), row.end(), m.row(i));
    }
    return m;
}

nlohmann::ordered_json svm_to_json(const SvmModel& svm) {
    return {{"classify", svm.classify}, {"gamma", svm.gamma},
            {"b", svm.b},               {"support", matrix_to_json(svm.support)},
            {"coef", svm.coef},         {"mean", svm.mean},
            {"scale", svm.scale}};
}

SvmModel svm_from_json(const nlohmann::json& j) {
    SvmModel svm;
    svm.classify = j.at("classify").get<bool>();
    svm.gamma = j.at("gamma").get<double>();
    svm.b = j.at("b").get<double>();
    svm.support = matrix_from_json(j.at("support"));
    svm.coef = j.at("coef").get<std::vector<double>>();
    svm.mean = j.at("mean").get<std::vector<double>>();
    svm.scale = j.at("scale").get<std::vector<double>>();
    return svm;
}

}  // namespace

void write_model(const std::string& path, const TrainedModel& model) {
    nlohmann::ordered_json j;
    j["format"] = "rapport-model";
    j["schema_hash"] = model.schema_hash;
    j["config"] = {{"family", to_string(model.config.family)},
                   {"task", to_string(model.config.task)},
                   {"hyper", model.config.hyper},
                   {"seed", model.config.seed}};
    j["feature_subset"] = model.feature_subset;
    switch (model.config.family) {
        case ModelFamily::forest: j["forest"] = forest_to_json(model.forest); break;
        case ModelFamily::kernel_margin: j["svm"] = svm_to_json(model.svm); break;
        case ModelFamily::baseline_random: break;
        case ModelFamily::baseline_mean: j["mean_value"] = model.mean_value; break;
    }
    std::ofstream out(path);
    if (!out) throw InputError("model: cannot write '" + path + "'");
    out << j.dump(1) << '\n';
}

TrainedModel read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("model: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("model: " + path + ": " + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "rapport-model")
            throw InputError("model: " + path + " is not a model file");
        TrainedModel model;
        model.schema_hash = j.at("schema_hash").get<std::uint64_t>();
        if (model.schema_hash != FeatureSchema::standard().hash())
            throw InputError("model: " + path +
                             " was trained against a different feature schema; refusing to load");
        const auto& cj = j.at("config");
        model.config.family = family_from_string(cj.at("family").get<std::string>());
        model.config.task = task_from_string(cj.at("task").get<std::string>());
        model.config.hyper = cj.at("hyper").get<std::map<std::string, std::string>>();
        model.config.seed = cj.at("seed").get<std::uint64_t>();
        model.feature_subset = j.at("feature_subset").get<std::vector<int>>();
        switch (model.config.family) {
            case ModelFamily::forest: model.forest = forest_from_json(j.at("forest")); break;
            case ModelFamily::kernel_margin: model.svm = svm_from_json(j.at("svm")); break;
            case ModelFamily::baseline_random: break;
            case ModelFamily::baseline_mean:
                model.mean_value = j.at("mean_value").get<double>();
                break;
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("model: " + path + ": " + e.what());
    }
}

}  // namespace rapport
