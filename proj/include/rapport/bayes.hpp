#pragma once

// JZS Bayesian one-sample t-test (Rouder et al. 2009): score distributions
// against a fixed baseline, with a Cauchy(0, r) effect-size prior. BF10 is
// evaluated two ways — the g-mixture integral and a posterior-grid marginal
// built on the noncentral-t likelihood — and the routes must agree, or the
// computation refuses to return. One-sided tests use the truncated-prior
// construction: BF+0 = 2 * BF10 * P(delta > 0 | data).

#include <cstddef>
#include <string>
#include <vector>

namespace rapport {

enum class Direction { greater, two_sided };

struct BayesConfig {
    double prior_width = 0.70710678118654752;  // 1/sqrt(2), the default Cauchy width
    Direction direction = Direction::greater;
};

struct BayesResult {
    double bf10 = 0.0;            // directional per config (BF+0 when greater)
    double bf10_two_sided = 0.0;  // the plain JZS Bayes factor
    double posterior_positive = 0.0;  // P(delta > 0 | data, H1)
    double median_d = 0.0;            // posterior median effect size (truncated
                                      // to the tested direction when one-sided)
    double t_statistic = 0.0;
    std::size_t n = 0;
    std::string interpretation;  // evidence-band text for bf10
};

// t = (mean - baseline) / (sd / sqrt(n)). Errors: fewer than 2 scores, zero
// variance (undefined t), non-positive prior width.
BayesResult jzs_one_sample(const std::vector<double>& scores, double baseline,
                           const BayesConfig& config = {});

struct SweepPoint {
    double prior_width = 0.0;
    double bf10 = 0.0;  // directional, matching `direction`
};

// jzs_one_sample once per width, same scores throughout.
std::vector<SweepPoint> robustness_sweep(const std::vector<double>& scores, double baseline,
                                         const std::vector<double>& widths,
                                         Direction direction = Direction::greater);

// Jeffreys-style evidence bands: 1-3 anecdotal, 3-10 moderate, 10-30 strong,
// 30-100 very strong, > 100 extreme; reciprocal wording below 1.
std::string interpret_bf(double bf10);

// Density of the noncentral t distribution with `nu` degrees of freedom and
// noncentrality `lambda`, via its defining scale-mixture integral. Exposed
// for the oracle tests; matches the closed-form central t at lambda = 0.
double noncentral_t_logpdf(double t, double nu, double lambda);

}  // namespace rapport
