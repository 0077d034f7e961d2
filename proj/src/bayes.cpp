#include "rapport/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "rapport/error.hpp"
#include "rapport/schema.hpp"

namespace rapport {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2Pi = 0.91893853320467274;  // log(sqrt(2*pi))

// ---------------------------------------------------------------------------
// quadrature helpers
//
// Every integral below is one-dimensional with a single smooth peak, so the
// same recipe works throughout: locate the peak of the log-integrand, shift it
// to zero, and run adaptive Simpson on the exponentiated remainder. Working in
// log space first means a peak of any magnitude integrates without overflow.

template <typename F>
double simpson_halves(const F& f, double a, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_halves(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_halves(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_halves(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Coarse scan plus golden-section refinement. The integrands here are smooth
// and unimodal apart from flat tails, so this is reliable without derivatives.
template <typename F>
double arg_max(const F& h, double lo, double hi, int coarse_steps) {
    double best_x = lo;
    double best = h(lo);
    for (int i = 1; i <= coarse_steps; ++i) {
        const double x = lo + (hi - lo) * i / coarse_steps;
        const double v = h(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double step = (hi - lo) / coarse_steps;
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    const double inv_phi = 0.61803398874989485;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = h(x1);
    double f2 = h(x2);
    for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(x1);
        }
    }
    return 0.5 * (a + b);
}

// Outward walk from the peak to where the log-integrand has fallen `drop`
// nats, refined by bisection. Curvature varies wildly across the integrals
// here, so the cut is discovered rather than assumed.
template <typename F>
double find_cut(const F& h, double peak, double h_max, double drop, double direction,
                double bound) {
    double inside = peak;
    double step = 1e-3 * (1.0 + std::abs(peak));
    for (;;) {
        double probe = inside + direction * step;
        if ((direction > 0.0 && probe >= bound) || (direction < 0.0 && probe <= bound)) {
            if (h(bound) >= h_max - drop) return bound;
            probe = bound;
        }
        if (h(probe) < h_max - drop) {
            double lo = inside;
            double hi = probe;
            for (int i = 0; i < 64; ++i) {
                const double mid = 0.5 * (lo + hi);
                (h(mid) < h_max - drop ? hi : lo) = mid;
            }
            return hi;
        }
        inside = probe;
        step *= 2.0;
    }
}

// log of the integral of exp(h) over [a, b]. Splitting at the peak keeps the
// maximum on an endpoint of each half, so adaptive Simpson's first samples
// can never miss a spike that is narrow relative to the domain.
template <typename F>
double log_integral(const F& h, double a, double b) {
    const double peak = arg_max(h, a, b, 400);
    const double h_max = h(peak);
    const double lo = find_cut(h, peak, h_max, 80.0, -1.0, a);
    const double hi = find_cut(h, peak, h_max, 80.0, +1.0, b);
    const auto shifted = [&](double x) {
        const double v = h(x) - h_max;
        return v < -745.0 ? 0.0 : std::exp(v);  // exp underflows anyway; skip the call
    };
    double integral = 0.0;
    if (lo < peak) integral += adaptive_simpson(shifted, lo, peak, 1e-11 * (peak - lo));
    if (peak < hi) integral += adaptive_simpson(shifted, peak, hi, 1e-11 * (hi - peak));
    return h_max + std::log(integral);
}

// ---------------------------------------------------------------------------
// densities

double log_cauchy_pdf(double x, double width) {
    return std::log(width) - std::log(kPi) - std::log(x * x + width * width);
}

// ---------------------------------------------------------------------------
// the JZS Bayes factor, route A: the g-mixture integral
//
// Cauchy(0, r) is a scale mixture of normals, delta | g ~ N(0, g) with
// g ~ InverseGamma(1/2, r^2/2), which collapses the effect-size integral in
// closed form (Rouder et al. 2009) and leaves a single integral over g:
//
//   BF10 = [ integral of (1+Ng)^(-1/2) (1 + t^2/((1+Ng)nu))^(-(nu+1)/2) pi(g) dg ]
//          / (1 + t^2/nu)^(-(nu+1)/2)
//
// with pi(g) = r/sqrt(2 pi) g^(-3/2) exp(-r^2/(2g)) and nu = N - 1. Integrated
// over u = log g so both tails decay exponentially.
double log_bf10_g_route(double t, double n, double r) {
    const double nu = n - 1.0;
    const double log_null = -0.5 * (nu + 1.0) * std::log1p(t * t / nu);
    const double log_prior_const = std::log(r) - kLogSqrt2Pi;
    const auto h = [&](double u) {
        const double g = std::exp(u);
        const double ng1 = 1.0 + n * g;
        return -0.5 * std::log(ng1) - 0.5 * (nu + 1.0) * std::log1p(t * t / (ng1 * nu)) +
               log_prior_const - 1.5 * u - 0.5 * r * r / g + u;  // trailing u: dg = g du
    };
    return log_integral(h, -40.0, 40.0) - log_null;
}

// ---------------------------------------------------------------------------
// the posterior over delta, route B
//
// The likelihood of the observed t given an effect delta is the noncentral t
// density with nu degrees of freedom and noncentrality sqrt(N) delta. The
// posterior grid gives the positive-tail mass and median directly, and its
// normalizing constant is a second, independent road to BF10.

struct PosteriorGrid {
    std::vector<double> delta;
    std::vector<double> cumulative;  // unnormalized trapezoid CDF over the grid
    double total = 0.0;
    double log_marginal = 0.0;  // log integral of likelihood * prior
};

// Unnormalized cumulative mass up to x, linear within a grid cell.
double cumulative_at(const PosteriorGrid& grid, double x) {
    if (x <= grid.delta.front()) return 0.0;
    if (x >= grid.delta.back()) return grid.total;
    const auto it = std::upper_bound(grid.delta.begin(), grid.delta.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - grid.delta.begin());
    const std::size_t lo = hi - 1;
    const double frac = (x - grid.delta[lo]) / (grid.delta[hi] - grid.delta[lo]);
    return grid.cumulative[lo] + frac * (grid.cumulative[hi] - grid.cumulative[lo]);
}

// Smallest x with cumulative mass >= target, by inverse interpolation.
double quantile_at(const PosteriorGrid& grid, double target) {
    const auto it = std::lower_bound(grid.cumulative.begin(), grid.cumulative.end(), target);
    if (it == grid.cumulative.begin()) return grid.delta.front();
    if (it == grid.cumulative.end()) return grid.delta.back();
    const std::size_t hi = static_cast<std::size_t>(it - grid.cumulative.begin());
    const std::size_t lo = hi - 1;
    const double span = grid.cumulative[hi] - grid.cumulative[lo];
    const double frac = span > 0.0 ? (target - grid.cumulative[lo]) / span : 0.0;
    return grid.delta[lo] + frac * (grid.delta[hi] - grid.delta[lo]);
}

PosteriorGrid build_posterior(double t, double n, double r) {
    const double nu = n - 1.0;
    const double sqrt_n = std::sqrt(n);
    const auto log_post = [&](double d) {
        return noncentral_t_logpdf(t, nu, sqrt_n * d) + log_cauchy_pdf(d, r);
    };

    // Place the grid by scanning for everything within 45 nats of the
    // posterior peak. The likelihood decays like a normal with sd of roughly
    // sqrt(1 + t^2/(2 nu)) / sqrt(N) in delta, which bounds the scan bracket;
    // a threshold scan rather than a Laplace fit keeps the grid honest when
    // small nu makes the posterior heavy-tailed or bimodal (a Cauchy prior
    // spike at zero under a broad likelihood bump).
    const double nu_safe = std::max(nu, 1.0);
    const double like_sd = std::sqrt(1.0 + t * t / (2.0 * nu_safe)) / sqrt_n;
    const double center = t / sqrt_n;
    const double bracket = 12.0 * like_sd + 4.0 * r + 1.0;
    constexpr int kScanPoints = 2000;
    std::vector<double> scan(kScanPoints + 1);
    double scan_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScanPoints; ++i) {
        const double d = center - bracket + 2.0 * bracket * i / kScanPoints;
        scan[static_cast<std::size_t>(i)] = log_post(d);
        scan_max = std::max(scan_max, scan[static_cast<std::size_t>(i)]);
    }
    int first = 0;
    int last = kScanPoints;
    while (first < kScanPoints && scan[static_cast<std::size_t>(first)] < scan_max - 45.0) ++first;
    while (last > 0 && scan[static_cast<std::size_t>(last)] < scan_max - 45.0) --last;
    const double scan_step = 2.0 * bracket / kScanPoints;
    const double lo = center - bracket + scan_step * std::max(0, first - 1);
    const double hi = center - bracket + scan_step * std::min(kScanPoints, last + 1);

    constexpr std::size_t kGridPoints = 4001;
    PosteriorGrid grid;
    grid.delta.resize(kGridPoints);
    std::vector<double> log_density(kGridPoints);
    double log_peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        grid.delta[i] = lo + (hi - lo) * static_cast<double>(i) / (kGridPoints - 1);
        log_density[i] = log_post(grid.delta[i]);
        log_peak = std::max(log_peak, log_density[i]);
    }

    grid.cumulative.resize(kGridPoints);
    grid.cumulative[0] = 0.0;
    std::vector<double> density(kGridPoints);
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        const double v = log_density[i] - log_peak;
        density[i] = v < -745.0 ? 0.0 : std::exp(v);
    }
    const double step = (hi - lo) / (kGridPoints - 1);
    for (std::size_t i = 1; i < kGridPoints; ++i) {
        grid.cumulative[i] = grid.cumulative[i - 1] + 0.5 * step * (density[i - 1] + density[i]);
    }
    grid.total = grid.cumulative.back();
    grid.log_marginal = log_peak + std::log(grid.total);
    return grid;
}

std::string describe_band(double factor) {
    if (factor <= 3.0) return "anecdotal";
    if (factor <= 10.0) return "moderate";
    if (factor <= 30.0) return "strong";
    if (factor <= 100.0) return "very strong";
    return "extreme";
}

}  // namespace

double noncentral_t_logpdf(double t, double nu, double lambda) {
    // T = (Z + lambda) / s with Z ~ N(0,1) and s = sqrt(W/nu), W ~ chi^2_nu,
    // so f(t) = integral over s of s * phi(t s - lambda) * f_s(s) ds with
    //   f_s(s) = nu^(nu/2) / (2^(nu/2 - 1) Gamma(nu/2)) s^(nu-1) exp(-nu s^2 / 2).
    // Evaluated over v = log s; the extra s from the substitution joins the
    // leading one as a 2v term.
    const double log_cs = 0.5 * nu * std::log(nu) - (0.5 * nu - 1.0) * std::log(2.0) -
                          std::lgamma(0.5 * nu);
    const auto h = [&](double v) {
        const double s = std::exp(v);
        const double z = t * s - lambda;
        return 2.0 * v - kLogSqrt2Pi - 0.5 * z * z + log_cs + (nu - 1.0) * v - 0.5 * nu * s * s;
    };
    return log_integral(h, -12.0, 6.0);
}

BayesResult jzs_one_sample(const std::vector<double>& scores, double baseline,
                           const BayesConfig& config) {
    if (scores.size() < 2) {
        throw InputError("bayes: need at least 2 scores, got " + std::to_string(scores.size()));
    }
    if (!(config.prior_width > 0.0) || !std::isfinite(config.prior_width)) {
        throw InputError("bayes: prior width must be a positive number");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw InputError("bayes: scores contain a non-finite value");
    }

    const double n = static_cast<double>(scores.size());
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= n;
    double ss = 0.0;
    for (double s : scores) ss += (s - mean) * (s - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd <= 0.0) {
        throw NumericError("bayes: scores have zero variance; the t statistic is undefined");
    }

    const double t = (mean - baseline) / (sd / std::sqrt(n));
    const double r = config.prior_width;
    const double nu = n - 1.0;

    const double log_bf_a = log_bf10_g_route(t, n, r);

    const PosteriorGrid grid = build_posterior(t, n, r);
    const double log_bf_b = grid.log_marginal - noncentral_t_logpdf(t, nu, 0.0);

    // The two routes share no code past the t statistic; disagreement means a
    // quadrature failure, and a silently wrong Bayes factor is worse than none.
    const double gap = std::abs(log_bf_a - log_bf_b);
    if (!(gap <= 1e-3 + 1e-4 * std::abs(log_bf_a))) {
        throw NumericError("bayes: Bayes factor quadrature routes disagree; cannot certify the result");
    }

    BayesResult result;
    result.n = scores.size();
    result.t_statistic = t;
    result.bf10_two_sided = std::exp(log_bf_a);
    result.posterior_positive =
        grid.total > 0.0 ? (grid.total - cumulative_at(grid, 0.0)) / grid.total : 0.0;

    if (config.direction == Direction::greater) {
        // Truncated-prior construction: the one-sided prior doubles the
        // positive half, so BF+0 = 2 * BF10 * P(delta > 0 | data).
        result.bf10 = 2.0 * result.bf10_two_sided * result.posterior_positive;
        const double mass_at_zero = cumulative_at(grid, 0.0);
        const double positive_mass = grid.total - mass_at_zero;
        result.median_d = positive_mass > 0.0
                              ? quantile_at(grid, mass_at_zero + 0.5 * positive_mass)
                              : 0.0;
    } else {
        result.bf10 = result.bf10_two_sided;
        result.median_d = quantile_at(grid, 0.5 * grid.total);
    }
    result.interpretation = interpret_bf(result.bf10);
    return result;
}

std::vector<SweepPoint> robustness_sweep(const std::vector<double>& scores, double baseline,
                                         const std::vector<double>& widths, Direction direction) {
    std::vector<SweepPoint> points;
    points.reserve(widths.size());
    for (double width : widths) {
        BayesConfig config;
        config.prior_width = width;
        config.direction = direction;
        const BayesResult result = jzs_one_sample(scores, baseline, config);
        points.push_back({width, result.bf10});
    }
    return points;
}

std::string interpret_bf(double bf10) {
    if (bf10 == 1.0) return "data is equally likely under H1 and under H0 (no evidence either way)";
    if (bf10 > 1.0) {
        return "data is " + format_double(bf10) + " times more likely under H1 than under H0 (" +
               describe_band(bf10) + " evidence for H1)";
    }
    const double reciprocal = 1.0 / bf10;
    return "data is " + format_double(reciprocal) + " times more likely under H0 than under H1 (" +
           describe_band(reciprocal) + " evidence for H0)";
}

}  // namespace rapport
