#include "rapport/impute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rapport/error.hpp"
#include "rapport/simd.hpp"

namespace rapport {

namespace {

// Solves (A)x = b in place for a symmetric positive-definite A via Cholesky.
// A is row-major n x n and is destroyed.
void solve_spd(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    // Factor A = L L^T, L stored in the lower triangle.
    for (std::size_t j = 0; j < n; ++j) {
        double d = A[j * n + j] - simd::dot(&A[j * n], &A[j * n], j);
        if (d <= 0.0) throw NumericError("impute: ridge system is not positive definite");
        const double ljj = std::sqrt(d);
        A[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            const double s = A[i * n + j] - simd::dot(&A[i * n], &A[j * n], j);
            A[i * n + j] = s / ljj;
        }
    }
    // Forward then back substitution.
    for (std::size_t i = 0; i < n; ++i)
        b[i] = (b[i] - simd::dot(&A[i * n], b.data(), i)) / A[i * n + i];
    for (std::size_t ii = n; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
        b[i] = s / A[i * n + i];
    }
}

// Incrementally maintained sums over the working matrix z (n x p, row-major):
// column totals and the Gram matrix z^T z. Editing one cell updates both in
// O(p) instead of recomputing in O(n p^2).
struct RunningSums {
    std::size_t n = 0, p = 0;
    std::vector<double> col_sum;  // p
    std::vector<double> gram;     // p x p, full symmetric

    void rebuild(const std::vector<double>& z, std::size_t n_, std::size_t p_) {
        n = n_;
        p = p_;
        col_sum.assign(p, 0.0);
        gram.assign(p * p, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double* row = &z[r * p];
            for (std::size_t a = 0; a < p; ++a) {
                col_sum[a] += row[a];
                for (std::size_t b = a; b < p; ++b) gram[a * p + b] += row[a] * row[b];
            }
        }
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < a; ++b) gram[a * p + b] = gram[b * p + a];
    }

    // Call with the row's state BEFORE the edit and the new cell value.
    void update_cell(const double* row_before, std::size_t j, double new_value) {
        const double old_value = row_before[j];
        const double delta = new_value - old_value;
        if (delta == 0.0) return;
        col_sum[j] += delta;
        for (std::size_t a = 0; a < p; ++a) {
            if (a == j) continue;
            gram[a * p + j] += delta * row_before[a];
            gram[j * p + a] = gram[a * p + j];
        }
        gram[j * p + j] += 2.0 * old_value * delta + delta * delta;
    }
};

// Ridge fit for target feature j over the rows where j is observed, using the
// other p-1 columns as predictors. Works from the running totals minus the
// contribution of j's missing rows. Returns a full-width predictor with a
// zero self weight.
FeaturePredictor fit_feature_ridge(const std::vector<double>& z, const RunningSums& sums,
                                   const std::vector<std::size_t>& missing_rows, std::size_t j,
                                   double lambda) {
    const std::size_t p = sums.p;
    const std::size_t m = sums.n - missing_rows.size();  // observed rows; >= 2 by precondition

    // Totals over observed rows only.
    std::vector<double> s(sums.col_sum);
    std::vector<double> g(sums.gram);
    for (const std::size_t r : missing_rows) {
        const double* row = &z[r * p];
        for (std::size_t a = 0; a < p; ++a) {
            s[a] -= row[a];
            for (std::size_t b = 0; b < p; ++b) g[a * p + b] -= row[a] * row[b];
        }
    }

    // Centered normal equations over the p-1 predictors.
    const std::size_t q = p - 1;
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<double> A(q * q);
    std::vector<double> b(q);
    std::vector<std::size_t> pred(q);
    {
        std::size_t k = 0;
        for (std::size_t a = 0; a < p; ++a)
            if (a != j) pred[k++] = a;
    }
    for (std::size_t ia = 0; ia < q; ++ia) {
        const std::size_t a = pred[ia];
        for (std::size_t ib = ia; ib < q; ++ib) {
            const std::size_t c = pred[ib];
            const double centered = g[a * p + c] - s[a] * s[c] * inv_m;
            A[ia * q + ib] = centered + (ia == ib ? lambda : 0.0);
            A[ib * q + ia] = A[ia * q + ib];
        }
        b[ia] = g[a * p + j] - s[a] * s[j] * inv_m;
    }
    solve_spd(A, b, q);

    FeaturePredictor out;
    out.weights.assign(p, 0.0);
    double dot_mean = 0.0;
    for (std::size_t ia = 0; ia < q; ++ia) {
        out.weights[pred[ia]] = b[ia];
        dot_mean += b[ia] * s[pred[ia]] * inv_m;
    }
    out.intercept = s[j] * inv_m - dot_mean;
    return out;
}

double predict_standardized(const FeaturePredictor& f, const double* row, std::size_t p) {
    return f.intercept + simd::dot(f.weights.data(), row, p);
}

}  // namespace

ImputationModel fit_imputer(const Dataset& train, const ImputerParams& params) {
    const FeatureSchema& schema = FeatureSchema::standard();
    const std::size_t p = schema.size();
    const std::size_t n = train.samples.size();
    if (n < 2) throw InputError("impute: need at least 2 training samples");
    for (const Sample& s : train.samples)
        if (s.features.size() != p) throw InputError("impute: feature vector width mismatch");

    ImputationModel model;
    model.lambda = params.lambda;
    model.means.assign(p, 0.0);
    model.scales.assign(p, 1.0);

    // Observed-cell means and SDs; every feature needs >= 2 observations.
    std::vector<std::vector<std::size_t>> missing_rows(p);
    for (std::size_t j = 0; j < p; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (train.samples[r].features.is_valid(j)) {
                sum += train.samples[r].features.values[j];
                ++count;
            } else {
                missing_rows[j].push_back(r);
            }
        }
        if (count < 2)
            throw InputError("impute: feature '" + schema.entry(j).name +
                             "' is valid in fewer than 2 training samples");
        model.means[j] = sum / static_cast<double>(count);
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            if (train.samples[r].features.is_valid(j)) {
                const double d = train.samples[r].features.values[j] - model.means[j];
                ss += d * d;
            }
        const double sd = std::sqrt(ss / static_cast<double>(count - 1));
        model.scales[j] = sd > 0.0 ? sd : 1.0;
    }

    // Visit order: ascending missing count, schema order breaking ties.
    model.order.resize(p);
    std::iota(model.order.begin(), model.order.end(), 0);
    std::stable_sort(model.order.begin(), model.order.end(), [&](int a, int b) {
        return missing_rows[a].size() < missing_rows[b].size();
    });

    // Standardized working matrix; missing cells start at the column mean (0).
    std::vector<double> z(n * p, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < p; ++j)
            if (train.samples[r].features.is_valid(j))
                z[r * p + j] =
                    (train.samples[r].features.values[j] - model.means[j]) / model.scales[j];

    RunningSums sums;
    sums.rebuild(z, n, p);

    const bool any_missing =
        std::any_of(missing_rows.begin(), missing_rows.end(),
                    [](const std::vector<std::size_t>& v) { return !v.empty(); });

    model.sweeps_run = 0;
    if (any_missing) {
        for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
            double max_change = 0.0;
            for (const int j : model.order) {
                if (missing_rows[j].empty()) continue;
                const FeaturePredictor f =
                    fit_feature_ridge(z, sums, missing_rows[j], static_cast<std::size_t>(j),
                                      params.lambda);
                for (const std::size_t r : missing_rows[j]) {
                    double* row = &z[r * p];
                    // The self weight is structurally zero, so the stale cell
                    // value does not leak into its own prediction.
                    const double value = predict_standardized(f, row, p);
                    max_change = std::max(max_change, std::abs(value - row[j]));
                    sums.update_cell(row, static_cast<std::size_t>(j), value);
                    row[j] = value;
                }
            }
            ++model.sweeps_run;
            if (max_change < params.tol) break;
        }
    }

    // Final predictors for every feature, fit at the converged state, so new
    // samples can be repaired whatever their missingness pattern.
    model.predictors.resize(p);
    for (std::size_t j = 0; j < p; ++j)
        model.predictors[j] =
            fit_feature_ridge(z, sums, missing_rows[j], j, params.lambda);
    return model;
}

FeatureVector impute(const ImputationModel& model, const FeatureVector& x) {
    const std::size_t p = model.means.size();
    if (x.size() != p) throw InputError("impute: feature vector width mismatch");

    FeatureVector out = x;
    std::vector<double> z(p, 0.0);
    for (std::size_t j = 0; j < p; ++j)
        if (x.is_valid(j)) z[j] = (x.values[j] - model.means[j]) / model.scales[j];

    for (const int j : model.order) {
        if (x.is_valid(j)) continue;
        const double value = predict_standardized(model.predictors[j], z.data(), p);
        z[j] = value;
        out.set(static_cast<std::size_t>(j), model.means[j] + model.scales[j] * value);
    }
    return out;
}

Dataset impute_dataset(const ImputationModel& model, const Dataset& data) {
    Dataset out = data;
    for (Sample& s : out.samples) s.features = impute(model, s.features);
    return out;
}

}  // namespace rapport
