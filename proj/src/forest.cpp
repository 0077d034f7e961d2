#include "rapport/forest.hpp"

#include <algorithm>
#include <cmath>

#include "rapport/error.hpp"
#include "rapport/rng.hpp"

namespace rapport {

const char* to_string(MaxFeatures m) {
    switch (m) {
        case MaxFeatures::all: return "all";
        case MaxFeatures::sqrt: return "sqrt";
        case MaxFeatures::log2: return "log2";
    }
    return "?";
}

MaxFeatures max_features_from_string(const std::string& s) {
    if (s == "all") return MaxFeatures::all;
    if (s == "sqrt") return MaxFeatures::sqrt;
    if (s == "log2") return MaxFeatures::log2;
    throw InputError("forest: unknown max_features '" + s + "'");
}

namespace {

std::size_t feature_budget(MaxFeatures mode, std::size_t p) {
    switch (mode) {
        case MaxFeatures::all: return p;
        case MaxFeatures::sqrt:
            return std::max<std::size_t>(
                1, static_cast<std::size_t>(std::sqrt(static_cast<double>(p))));
        case MaxFeatures::log2:
            return std::max<std::size_t>(
                1, static_cast<std::size_t>(std::log2(static_cast<double>(p))));
    }
    return p;
}

// Scratch buffers reused across every node and tree of one fit. Bootstrap
// duplicates are collapsed into integer row weights, so node arrays hold
// distinct rows only; all counts below are weighted and therefore match the
// n-of-n resample exactly.
struct Scratch {
    std::vector<int> idx;        // distinct bootstrap rows, reordered by splits
    std::vector<double> weight;  // bootstrap multiplicity per dataset row
    std::vector<int> features;   // feature ids, partially shuffled per node
    std::vector<double> node_y, node_w;  // per-node gathered targets/weights
    std::vector<double> xs;              // per-feature gathered values
    std::vector<int> ord;                // sort permutation of the node rows
};

struct BestSplit {
    int feature = -1;
    double lo = 0.0, hi = 0.0;  // training values bracketing the boundary
    double proxy = -1.0;        // larger is better; -1 means no valid split found
};

// Grows one tree over idx[begin, end). Trees are fully expanded: recursion
// stops only at purity or the node-size floors. Importance accumulates
// bootstrap-weighted impurity decrease per split feature.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& Xt, const std::vector<double>& y, bool classify,
                const ForestParams& params, Scratch& scratch, Rng& rng,
                std::vector<double>& importance)
        : Xt_(Xt),
          y_(y),
          classify_(classify),
          params_(params),
          scratch_(scratch),
          rng_(rng),
          importance_(importance),
          n_features_(Xt.rows) {}

    Tree build() {
        Tree tree;
        tree.nodes.reserve(2 * scratch_.idx.size());
        grow(tree, 0, scratch_.idx.size());
        return tree;
    }

private:
    // Node impurity times weighted node count: weighted sum of squared
    // deviations (regression) or W * Gini (classification). The "times W"
    // form makes the decrease additive across children.
    double weighted_impurity(std::size_t begin, std::size_t end) const {
        double w = 0.0, s = 0.0, s2 = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const int row = scratch_.idx[i];
            const double wi = scratch_.weight[static_cast<std::size_t>(row)];
            const double v = y_[static_cast<std::size_t>(row)];
            w += wi;
            s += wi * v;
            if (!classify_) s2 += wi * v * v;
        }
        if (classify_) {
            const double p1 = s / w;
            return w * 2.0 * p1 * (1.0 - p1);
        }
        return s2 - s * s / w;
    }

    int make_leaf(Tree& tree, double w, double s) {
        TreeNode node;
        // Weighted mean target, or the majority class with ties to class 0.
        node.value = classify_ ? (2.0 * s > w ? 1.0 : 0.0) : s / w;
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    }

    // Scans every split position of one feature over the gathered node rows,
    // maintaining running left-side weighted sums. The proxy (larger =
    // better) is sum_l^2/W_l + sum_r^2/W_r for regression and the analogous
    // weighted count form for Gini.
    void scan_feature(int f, std::size_t begin, std::size_t end, double total_w,
                      double total_s, BestSplit& best) {
        const std::size_t n = end - begin;
        const double* col = Xt_.row(static_cast<std::size_t>(f));
        auto& xs = scratch_.xs;
        auto& ord = scratch_.ord;
        xs.resize(n);
        ord.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = col[scratch_.idx[begin + i]];
            ord[i] = static_cast<int>(i);
        }
        // Insertion sort: nodes here are tens of rows, where it beats
        // introsort comfortably.
        if (n < 48) {
            for (std::size_t i = 1; i < n; ++i) {
                const int key = ord[i];
                const double kx = xs[key];
                std::size_t j = i;
                while (j > 0 && xs[ord[j - 1]] > kx) {
                    ord[j] = ord[j - 1];
                    --j;
                }
                ord[j] = key;
            }
        } else {
            std::sort(ord.begin(), ord.end(),
                      [&xs](int a, int b) { return xs[a] < xs[b]; });
        }

        if (xs[ord[0]] == xs[ord[n - 1]]) return;  // constant feature

        const double leaf = static_cast<double>(params_.min_samples_leaf);
        double left_w = 0.0, left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const int k = ord[i];
            left_w += scratch_.node_w[begin + static_cast<std::size_t>(k)];
            left_sum += scratch_.node_w[begin + static_cast<std::size_t>(k)] *
                        scratch_.node_y[begin + static_cast<std::size_t>(k)];
            const double right_w = total_w - left_w;
            if (left_w < leaf) continue;
            if (right_w < leaf) break;
            const double lo = xs[k], hi = xs[ord[i + 1]];
            if (lo == hi) continue;  // not a value boundary
            const double right_sum = total_s - left_sum;
            double proxy;
            if (classify_) {
                const double l1 = left_sum, l0 = left_w - l1;
                const double r1 = right_sum, r0 = right_w - r1;
                proxy = (l0 * l0 + l1 * l1) / left_w + (r0 * r0 + r1 * r1) / right_w;
            } else {
                proxy = left_sum * left_sum / left_w + right_sum * right_sum / right_w;
            }
            if (proxy > best.proxy) {
                // Both boundary values are kept; the caller anchors the
                // threshold to one of them (see TreeNode) so the split test
                // stays a pure order comparison against a training value.
                best.feature = f;
                best.lo = lo;
                best.hi = hi;
                best.proxy = proxy;
            }
        }
    }

    int grow(Tree& tree, std::size_t begin, std::size_t end) {
        // Gather the node's targets and weights once; every feature scan
        // reuses them.
        scratch_.node_y.resize(end);
        scratch_.node_w.resize(end);
        double total_w = 0.0, total_s = 0.0, total_s2 = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const int row = scratch_.idx[i];
            const double wi = scratch_.weight[static_cast<std::size_t>(row)];
            const double v = y_[static_cast<std::size_t>(row)];
            scratch_.node_y[i] = v;
            scratch_.node_w[i] = wi;
            total_w += wi;
            total_s += wi * v;
            total_s2 += wi * v * v;
        }

        const double impurity_n =
            classify_ ? total_w * 2.0 * (total_s / total_w) * (1.0 - total_s / total_w)
                      : total_s2 - total_s * total_s / total_w;
        if (total_w < static_cast<double>(params_.min_samples_split) || impurity_n <= 0.0)
            return make_leaf(tree, total_w, total_s);

        // Partial Fisher-Yates: the first k entries become the node's
        // candidate features.
        const std::size_t k = feature_budget(params_.max_features, n_features_);
        auto& feats = scratch_.features;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng_.below(n_features_ - i));
            std::swap(feats[i], feats[j]);
        }

        BestSplit best;
        for (std::size_t i = 0; i < k; ++i)
            scan_feature(feats[i], begin, end, total_w, total_s, best);
        if (best.feature < 0) return make_leaf(tree, total_w, total_s);

        // Anchor the threshold to the left or right boundary value by a
        // seeded coin; both tests partition the training rows identically,
        // but points between the two values split evenly across trees
        // instead of always following one neighbour.
        const bool left_closed = (rng_.next_u64() & 1) != 0;
        const double threshold = left_closed ? best.lo : best.hi;
        const double* col = Xt_.row(static_cast<std::size_t>(best.feature));
        auto mid_it = std::partition(
            scratch_.idx.begin() + static_cast<std::ptrdiff_t>(begin),
            scratch_.idx.begin() + static_cast<std::ptrdiff_t>(end),
            [col, threshold, left_closed](int row) {
                return left_closed ? col[row] <= threshold : col[row] < threshold;
            });
        const std::size_t mid =
            static_cast<std::size_t>(mid_it - scratch_.idx.begin());

        importance_[static_cast<std::size_t>(best.feature)] +=
            impurity_n - weighted_impurity(begin, mid) - weighted_impurity(mid, end);

        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        tree.nodes[id].feature = best.feature;
        tree.nodes[id].threshold = threshold;
        tree.nodes[id].left_closed = left_closed;
        const int left = grow(tree, begin, mid);
        const int right = grow(tree, mid, end);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }

    const Matrix& Xt_;
    const std::vector<double>& y_;
    const bool classify_;
    const ForestParams& params_;
    Scratch& scratch_;
    Rng& rng_;
    std::vector<double>& importance_;
    const std::size_t n_features_;
};

}  // namespace

Forest fit_forest(const Matrix& X, const std::vector<double>& y, bool classify,
                  const ForestParams& params) {
    const std::size_t n = X.rows, p = X.cols;
    if (n == 0 || p == 0) throw InputError("forest: empty training data");
    if (y.size() != n) throw InputError("forest: target length mismatch");
    if (params.n_trees < 1) throw InputError("forest: n_trees must be positive");
    if (params.min_samples_leaf < 1 || params.min_samples_split < 2)
        throw InputError("forest: node-size floors out of range");
    if (classify)
        for (const double v : y)
            if (v != 0.0 && v != 1.0)
                throw InputError("forest: classification labels must be 0 or 1");

    // Column-major copy so split scans read each feature contiguously.
    Matrix Xt(p, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) Xt.at(j, i) = X.at(i, j);

    Forest forest;
    forest.classify = classify;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));
    forest.importances.assign(p, 0.0);

    Scratch scratch;
    scratch.weight.resize(n);
    scratch.features.resize(p);
    std::vector<double> tree_importance(p);

    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        // n-of-n bootstrap, collapsed to per-row multiplicities.
        std::fill(scratch.weight.begin(), scratch.weight.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            scratch.weight[static_cast<std::size_t>(rng.below(n))] += 1.0;
        scratch.idx.clear();
        for (std::size_t r = 0; r < n; ++r)
            if (scratch.weight[r] > 0.0) scratch.idx.push_back(static_cast<int>(r));
        for (std::size_t j = 0; j < p; ++j) scratch.features[j] = static_cast<int>(j);
        std::fill(tree_importance.begin(), tree_importance.end(), 0.0);

        TreeBuilder builder(Xt, y, classify, params, scratch, rng, tree_importance);
        forest.trees[static_cast<std::size_t>(t)] = builder.build();

        double total = 0.0;
        for (const double v : tree_importance) total += v;
        if (total > 0.0)
            for (std::size_t j = 0; j < p; ++j)
                forest.importances[j] += tree_importance[j] / total;
    }

    double total = 0.0;
    for (const double v : forest.importances) total += v;
    if (total > 0.0)
        for (double& v : forest.importances) v /= total;
    return forest;
}

double predict_forest(const Forest& forest, const double* x) {
    double sum = 0.0;
    for (const Tree& tree : forest.trees) {
        int node = 0;
        while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
            const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
            const bool go_left =
                nd.left_closed ? x[nd.feature] <= nd.threshold : x[nd.feature] < nd.threshold;
            node = go_left ? nd.left : nd.right;
        }
        sum += tree.nodes[static_cast<std::size_t>(node)].value;
    }
    const double n = static_cast<double>(forest.trees.size());
    if (!forest.classify) return sum / n;
    return 2.0 * sum > n ? 1.0 : 0.0;  // vote tie goes to class 0
}

}  // namespace rapport
