#include "rapport/bayes.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "rapport/error.hpp"
#include "rapport/rng.hpp"

namespace {

using namespace rapport;

constexpr double kPi = 3.14159265358979323846;

// Scores with an exact t statistic: a zero-mean linear pattern scaled to unit
// sample sd, shifted so (mean - baseline) / (sd / sqrt(n)) lands on `t`.
std::vector<double> make_scores(double t, std::size_t n, double baseline = 0.0,
                                double spread = 1.0) {
    std::vector<double> z(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = static_cast<double>(i) - 0.5 * static_cast<double>(n - 1);
        mean += z[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double& v : z) {
        v -= mean;
        ss += v * v;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    std::vector<double> scores(n);
    const double shift = baseline + spread * t / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) scores[i] = shift + spread * z[i] / sd;
    return scores;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double central_t_logpdf(double t, double nu) {
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * kPi) -
           0.5 * (nu + 1.0) * std::log1p(t * t / nu);
}

// Marsaglia-Tsang gamma(shape, 1) for shape >= 1; chi^2_nu = 2 * gamma(nu/2, 1).
double draw_gamma(Rng& rng, double shape) {
    REQUIRE(shape >= 1.0);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Monte-Carlo JZS Bayes factor, sharing no code with the library's quadrature:
// draw delta from the Cauchy prior and W from chi^2_nu, then average the exact
// normal likelihood of the observed t. The same (delta, W) draws feed both the
// alternative and the null, which cancels most of the sampling noise.
double mc_bayes_factor(double t, std::size_t n, double r, std::size_t draws,
                       std::uint64_t seed) {
    const double nu = static_cast<double>(n - 1);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    Rng rng(seed);
    double sum_alt = 0.0;
    double sum_null = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
        const double delta = r * std::tan(kPi * (rng.uniform01() - 0.5));
        const double w = 2.0 * draw_gamma(rng, 0.5 * nu);
        const double s = std::sqrt(w / nu);
        sum_alt += normal_pdf(t * s - sqrt_n * delta) * s;
        sum_null += normal_pdf(t * s) * s;
    }
    return sum_alt / sum_null;
}

}  // namespace

TEST_CASE("bayes: t statistic and invariance under affine rescaling") {
    const std::vector<double> scores = {4.8, 5.2, 5.9, 4.1, 5.6};
    const double baseline = 4.5;
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= 5.0;
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    const double sd = std::sqrt(ss / 4.0);
    const double t_hand = (mean - baseline) / (sd / std::sqrt(5.0));

    const BayesResult base = jzs_one_sample(scores, baseline);
    CHECK(base.t_statistic == doctest::Approx(t_hand).epsilon(1e-12));
    CHECK(base.n == 5);

    // An affine map applied to scores and baseline alike leaves t, and with it
    // every Bayes quantity, unchanged; effect sizes live on the standardized
    // scale, so median_d does not rescale either.
    std::vector<double> mapped(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) mapped[i] = 3.7 * scores[i] - 2.1;
    const BayesResult moved = jzs_one_sample(mapped, 3.7 * baseline - 2.1);
    CHECK(moved.t_statistic == doctest::Approx(base.t_statistic).epsilon(1e-9));
    CHECK(moved.bf10 == doctest::Approx(base.bf10).epsilon(1e-9));
    CHECK(moved.bf10_two_sided == doctest::Approx(base.bf10_two_sided).epsilon(1e-9));
    CHECK(moved.median_d == doctest::Approx(base.median_d).epsilon(1e-9));
}

TEST_CASE("bayes: null data favours H0 and splits the posterior evenly") {
    const std::vector<double> scores = make_scores(0.0, 20);
    const BayesResult greater = jzs_one_sample(scores, 0.0);
    CHECK(greater.t_statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(greater.bf10_two_sided > 0.1);
    CHECK(greater.bf10_two_sided < 0.5);
    CHECK(greater.posterior_positive == doctest::Approx(0.5).epsilon(2e-3));
    // BF+0 = 2 * BF10 * P(delta > 0) collapses to BF10 at t = 0.
    CHECK(greater.bf10 ==
          doctest::Approx(2.0 * greater.bf10_two_sided * greater.posterior_positive)
              .epsilon(1e-12));
    CHECK(greater.bf10 == doctest::Approx(greater.bf10_two_sided).epsilon(5e-3));

    BayesConfig two;
    two.direction = Direction::two_sided;
    const BayesResult symmetric = jzs_one_sample(scores, 0.0, two);
    CHECK(std::abs(symmetric.median_d) < 2e-3);
    CHECK(symmetric.bf10 == symmetric.bf10_two_sided);
}

TEST_CASE("bayes: matches a Monte-Carlo oracle across t and n") {
    const double r = 0.70710678118654752;
    const double t_values[] = {0.0, 1.0, 2.0, 3.0, 5.0};
    const std::size_t n_values[] = {10, 50, 253};
    for (std::size_t ti = 0; ti < 5; ++ti) {
        for (std::size_t ni = 0; ni < 3; ++ni) {
            const double t = t_values[ti];
            const std::size_t n = n_values[ni];
            CAPTURE(t);
            CAPTURE(n);
            const BayesResult result = jzs_one_sample(make_scores(t, n), 0.0);
            const double oracle =
                mc_bayes_factor(t, n, r, 2'000'000, derive_seed(0xbae5u, ti, ni));
            CHECK(result.bf10_two_sided == doctest::Approx(oracle).epsilon(0.02));
        }
    }
}

TEST_CASE("bayes: one-sided Bayes factor increases strictly with t") {
    const double t_values[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
    double previous = -1.0;
    for (double t : t_values) {
        const BayesResult result = jzs_one_sample(make_scores(t, 20), 0.0);
        CAPTURE(t);
        CHECK(result.bf10 > previous);
        previous = result.bf10;
    }
}

TEST_CASE("bayes: a large effect earns extreme evidence and a positive median d") {
    const BayesResult result = jzs_one_sample(make_scores(5.0, 253), 0.0);
    CHECK(result.bf10 > 100.0);
    CHECK(result.posterior_positive > 0.99);
    CHECK(result.median_d > 0.0);
    CHECK(result.interpretation.find("extreme evidence for H1") != std::string::npos);

    // delta_hat = t / sqrt(n) ~= 0.31; the prior shrinks the median a little
    // toward zero but not past it.
    CHECK(result.median_d > 0.2);
    CHECK(result.median_d < 0.35);
}

TEST_CASE("bayes: mirrored data mirrors the posterior") {
    const std::vector<double> up = make_scores(1.5, 24);
    std::vector<double> down(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) down[i] = -up[i];
    const BayesResult pos = jzs_one_sample(up, 0.0);
    const BayesResult neg = jzs_one_sample(down, 0.0);
    CHECK(neg.t_statistic == doctest::Approx(-pos.t_statistic).epsilon(1e-12));
    CHECK(neg.bf10_two_sided == doctest::Approx(pos.bf10_two_sided).epsilon(1e-6));
    // The two positive-tail masses are complementary halves of one posterior.
    CHECK(pos.posterior_positive + neg.posterior_positive == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(neg.bf10 ==
          doctest::Approx(2.0 * pos.bf10_two_sided * (1.0 - pos.posterior_positive))
              .epsilon(1e-3));
}

TEST_CASE("bayes: interpretation text walks the evidence bands") {
    CHECK(interpret_bf(6.33) ==
          "data is 6.33 times more likely under H1 than under H0 (moderate evidence for H1)");
    CHECK(interpret_bf(2.0).find("anecdotal evidence for H1") != std::string::npos);
    CHECK(interpret_bf(15.0).find("strong evidence for H1") != std::string::npos);
    CHECK(interpret_bf(63.23).find("very strong evidence for H1") != std::string::npos);
    CHECK(interpret_bf(200.0).find("extreme evidence for H1") != std::string::npos);
    CHECK(interpret_bf(1.0) ==
          "data is equally likely under H1 and under H0 (no evidence either way)");
    CHECK(interpret_bf(0.25) ==
          "data is 4 times more likely under H0 than under H1 (moderate evidence for H0)");
    CHECK(interpret_bf(0.005).find("extreme evidence for H0") != std::string::npos);
}

TEST_CASE("bayes: robustness sweep echoes widths and weakens null evidence as r grows") {
    const std::vector<double> effect = make_scores(2.0, 20);
    const std::vector<double> widths = {0.5, 0.70710678118654752, 1.0};
    const std::vector<SweepPoint> sweep = robustness_sweep(effect, 0.0, widths);
    REQUIRE(sweep.size() == 3);
    for (std::size_t i = 0; i < widths.size(); ++i) {
        CHECK(sweep[i].prior_width == widths[i]);
        BayesConfig config;
        config.prior_width = widths[i];
        CHECK(sweep[i].bf10 == jzs_one_sample(effect, 0.0, config).bf10);
    }

    // At t = 0 a wider prior wastes more mass on large effects the data rules
    // out, so BF10 falls monotonically in r.
    const std::vector<double> null_scores = make_scores(0.0, 20);
    const std::vector<SweepPoint> null_sweep =
        robustness_sweep(null_scores, 0.0, {0.3, 0.70710678118654752, 1.5});
    REQUIRE(null_sweep.size() == 3);
    CHECK(null_sweep[0].bf10 > null_sweep[1].bf10);
    CHECK(null_sweep[1].bf10 > null_sweep[2].bf10);

    CHECK(robustness_sweep(effect, 0.0, {}).empty());
}

TEST_CASE("bayes: median d sits near the shrunken observed effect") {
    const BayesResult result = jzs_one_sample(make_scores(3.0, 50), 0.0);
    // Observed effect 3/sqrt(50) ~= 0.42; the Cauchy prior shrinks it a bit.
    CHECK(result.median_d > 0.25);
    CHECK(result.median_d < 0.45);

    BayesConfig two;
    two.direction = Direction::two_sided;
    const BayesResult both = jzs_one_sample(make_scores(3.0, 50), 0.0, two);
    // With essentially all mass already positive, truncation barely moves it.
    CHECK(std::abs(both.median_d - result.median_d) < 0.02);
}

TEST_CASE("bayes: rejects degenerate inputs") {
    CHECK_THROWS_WITH_AS(jzs_one_sample({1.0}, 0.0),
                         "bayes: need at least 2 scores, got 1", InputError);
    CHECK_THROWS_WITH_AS(jzs_one_sample({2.0, 2.0, 2.0}, 0.0),
                         "bayes: scores have zero variance; the t statistic is undefined",
                         NumericError);
    BayesConfig bad;
    bad.prior_width = 0.0;
    CHECK_THROWS_WITH_AS(jzs_one_sample({1.0, 2.0}, 0.0, bad),
                         "bayes: prior width must be a positive number", InputError);
    bad.prior_width = -0.5;
    CHECK_THROWS_AS(jzs_one_sample({1.0, 2.0}, 0.0, bad), InputError);
    const double nan = std::nan("");
    CHECK_THROWS_WITH_AS(jzs_one_sample({1.0, nan, 2.0}, 0.0),
                         "bayes: scores contain a non-finite value", InputError);
    CHECK_THROWS_AS(robustness_sweep({1.0, 2.0}, 0.0, {0.5, -1.0}), InputError);
}

TEST_CASE("bayes: noncentral t density matches the closed central form at lambda zero") {
    const double cases[][2] = {{0.0, 5.0}, {1.3, 9.0}, {2.5, 19.0}, {-1.7, 252.0}, {4.0, 1.0}};
    for (const auto& c : cases) {
        const double t = c[0];
        const double nu = c[1];
        CAPTURE(t);
        CAPTURE(nu);
        CHECK(noncentral_t_logpdf(t, nu, 0.0) ==
              doctest::Approx(central_t_logpdf(t, nu)).epsilon(1e-8));
    }
}
