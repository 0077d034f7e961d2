#include "rapport/svm.hpp"

#include <algorithm>
#include <cmath>

#include "rapport/error.hpp"
#include "rapport/simd.hpp"

namespace rapport {

namespace {

// Minimizes 1/2 a^T Q a + p^T a subject to s^T a = 0 and 0 <= a_k <= C, where
// Q_kl = s_k s_l * kernel_kl is passed in signed form. Maximum-violating-pair
// selection; stops when the KKT gap m - M drops to tol. Returns the offset
// b = (m + M) / 2 of the final gap.
double smo_solve(const Matrix& Q, const std::vector<double>& p,
                 const std::vector<double>& s, double C, double tol, int max_iter,
                 std::vector<double>& alpha) {
    const std::size_t n = p.size();
    alpha.assign(n, 0.0);
    std::vector<double> grad(p);

    double m = 0.0, M = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        m = -HUGE_VAL;
        M = HUGE_VAL;
        std::ptrdiff_t i = -1, j = -1;
        for (std::size_t k = 0; k < n; ++k) {
            const bool positive = s[k] > 0.0;
            const double v = -s[k] * grad[k];
            const bool in_up = positive ? alpha[k] < C : alpha[k] > 0.0;
            const bool in_low = positive ? alpha[k] > 0.0 : alpha[k] < C;
            if (in_up && v > m) {
                m = v;
                i = static_cast<std::ptrdiff_t>(k);
            }
            if (in_low && v < M) {
                M = v;
                j = static_cast<std::ptrdiff_t>(k);
            }
        }
        if (i < 0 || j < 0 || m - M <= tol) break;
        const std::size_t ii = static_cast<std::size_t>(i);
        const std::size_t jj = static_cast<std::size_t>(j);

        // Feasible direction d_i = s_i, d_j = -s_j; curvature along it.
        double a = Q.at(ii, ii) + Q.at(jj, jj) - 2.0 * s[ii] * s[jj] * Q.at(ii, jj);
        if (a <= 0.0) a = 1e-12;
        double t = (m - M) / a;
        const double ub_i = s[ii] > 0.0 ? C - alpha[ii] : alpha[ii];
        const double ub_j = s[jj] > 0.0 ? alpha[jj] : C - alpha[jj];
        t = std::min(t, std::min(ub_i, ub_j));
        if (t <= 0.0) break;  // pinned by the box; gap cannot shrink further

        const double dai = s[ii] * t, daj = -s[jj] * t;
        alpha[ii] = std::clamp(alpha[ii] + dai, 0.0, C);
        alpha[jj] = std::clamp(alpha[jj] + daj, 0.0, C);
        const double* qi = Q.row(ii);
        const double* qj = Q.row(jj);
        for (std::size_t k = 0; k < n; ++k) grad[k] += qi[k] * dai + qj[k] * daj;
    }
    return (m + M) / 2.0;
}

}  // namespace

SvmModel fit_svm(const Matrix& X, const std::vector<double>& y, bool classify,
                 const SvmParams& params) {
    const std::size_t n = X.rows, d = X.cols;
    if (n == 0 || d == 0) throw InputError("svm: empty training data");
    if (y.size() != n) throw InputError("svm: target length mismatch");
    if (params.C <= 0.0 || params.gamma <= 0.0)
        throw InputError("svm: C and gamma must be positive");
    if (classify) {
        bool any0 = false, any1 = false;
        for (const double v : y) {
            if (v == 0.0) any0 = true;
            else if (v == 1.0) any1 = true;
            else throw InputError("svm: classification labels must be 0 or 1");
        }
        if (!any0 || !any1)
            throw InputError("svm: training labels are single-class");
    }

    SvmModel model;
    model.classify = classify;
    model.gamma = params.gamma;
    model.mean.assign(d, 0.0);
    model.scale.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += X.at(i, j);
        model.mean[j] = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = X.at(i, j) - model.mean[j];
            ss += v * v;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        model.scale[j] = sd > 0.0 ? sd : 1.0;
    }

    Matrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            Z.at(i, j) = (X.at(i, j) - model.mean[j]) / model.scale[j];

    Matrix K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        K.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(-params.gamma * simd::squared_distance(Z.row(i), Z.row(j), d));
            K.at(i, j) = k;
            K.at(j, i) = k;
        }
    }

    std::vector<double> alpha;
    std::vector<double> coef(n, 0.0);
    if (classify) {
        std::vector<double> s(n), p(n, -1.0);
        for (std::size_t i = 0; i < n; ++i) s[i] = y[i] == 1.0 ? 1.0 : -1.0;
        Matrix Q(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) Q.at(i, j) = s[i] * s[j] * K.at(i, j);
        model.b = smo_solve(Q, p, s, params.C, params.tol, params.max_iter, alpha);
        for (std::size_t i = 0; i < n; ++i) coef[i] = s[i] * alpha[i];
    } else {
        // Doubled variables: first half pushes predictions up (alpha+),
        // second half pulls them down (alpha-).
        const std::size_t N = 2 * n;
        std::vector<double> s(N), p(N);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = 1.0;
            s[n + i] = -1.0;
            p[i] = params.epsilon - y[i];
            p[n + i] = params.epsilon + y[i];
        }
        Matrix Q(N, N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                Q.at(i, j) = s[i] * s[j] * K.at(i % n, j % n);
        model.b = smo_solve(Q, p, s, params.C, params.tol, params.max_iter, alpha);
        for (std::size_t i = 0; i < n; ++i) coef[i] = alpha[i] - alpha[n + i];
    }

    // Keep support vectors only.
    std::size_t n_support = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (coef[i] != 0.0) ++n_support;
    model.support = Matrix(n_support, d);
    model.coef.reserve(n_support);
    for (std::size_t i = 0, k = 0; i < n; ++i) {
        if (coef[i] == 0.0) continue;
        std::copy(Z.row(i), Z.row(i) + d, model.support.row(k));
        model.coef.push_back(coef[i]);
        ++k;
    }
    return model;
}

double decision_svm(const SvmModel& model, const double* x) {
    const std::size_t d = model.mean.size();
    std::vector<double> z(d);
    for (std::size_t j = 0; j < d; ++j) z[j] = (x[j] - model.mean[j]) / model.scale[j];
    double f = model.b;
    for (std::size_t i = 0; i < model.support.rows; ++i)
        f += model.coef[i] *
             std::exp(-model.gamma * simd::squared_distance(model.support.row(i), z.data(), d));
    return f;
}

double predict_svm(const SvmModel& model, const double* x) {
    const double f = decision_svm(model, x);
    if (!model.classify) return f;
    return f > 0.0 ? 1.0 : 0.0;  // an exact zero margin falls to class 0
}

}  // namespace rapport
