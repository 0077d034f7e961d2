#pragma once

// Bagged CART forest: 128 fully-expanded trees by default, Gini impurity for
// classification and variance for regression, bootstrap resampling and
// per-node feature subsampling. Trees grow until pure or until the node-size
// floors stop them.

#include <cstdint>
#include <string>
#include <vector>

namespace rapport {

// Row-major numeric matrix shared by the learners.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t i) { return &data[i * cols]; }
    const double* row(std::size_t i) const { return &data[i * cols]; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class MaxFeatures { all, sqrt, log2 };

const char* to_string(MaxFeatures m);
MaxFeatures max_features_from_string(const std::string& s);

struct ForestParams {
    int n_trees = 128;
    MaxFeatures max_features = MaxFeatures::sqrt;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    std::uint64_t seed = 0;
};

// value is the leaf prediction (class 0/1 majority or mean target). The
// threshold of a split node is always one of the two training values at the
// chosen boundary, picked by a seeded coin per split: the left value with a
// closed test (x <= t) or the right value with an open one (x < t). Either
// test is a pure order comparison against a training value, so predictions
// are invariant under strictly increasing per-feature transforms, and the
// 50/50 mix keeps points that fall between training values from being
// routed systematically to one side.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1, right = -1;
    double value = 0.0;
    bool left_closed = true;  // true: left iff x <= t; false: left iff x < t
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct Forest {
    bool classify = false;
    std::vector<Tree> trees;
    // Bootstrap-weighted impurity decrease per feature, averaged over trees
    // and normalized to sum 1 (all zeros if no split ever occurred).
    std::vector<double> importances;
};

// y holds class labels 0/1 when classify, else regression targets.
Forest fit_forest(const Matrix& X, const std::vector<double>& y, bool classify,
                  const ForestParams& params);

// Majority vote over trees (ties -> class 0) or mean of tree means.
double predict_forest(const Forest& forest, const double* x);

}  // namespace rapport
