#include "rapport/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rapport/error.hpp"
#include "rapport/simd.hpp"

namespace rapport {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw NumericError("mean: empty input");
    return simd::sum(x.data(), x.size()) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x) {
    if (x.size() < 2) throw NumericError("variance: need at least 2 values");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) {
        const double d = v - m;
        acc += d * d;
    }
    return acc / static_cast<double>(x.size() - 1);
}

double stddev(const std::vector<double>& x) { return std::sqrt(variance(x)); }

double median(std::vector<double> x) {
    if (x.empty()) throw NumericError("median: empty input");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    if (n % 2 == 1) return x[n / 2];
    return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

double score_affiliation(const std::vector<double>& items) {
    if (items.size() != 11)
        throw InputError("affiliation: expected 11 items, got " + std::to_string(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!(items[i] >= 1.0 && items[i] <= 7.0))
            throw InputError("affiliation: item " + std::to_string(i + 1) + " out of [1,7]");
    return simd::sum(items.data(), items.size()) / 11.0;
}

double cronbach_alpha(const std::vector<std::vector<double>>& items) {
    const std::size_t n = items.size();
    if (n < 2) throw NumericError("cronbach_alpha: need at least 2 respondents");
    const std::size_t k = items[0].size();
    if (k < 2) throw NumericError("cronbach_alpha: need at least 2 items");
    for (const auto& row : items)
        if (row.size() != k) throw InputError("cronbach_alpha: ragged items matrix");

    std::vector<double> totals(n, 0.0);
    double item_var_sum = 0.0;
    std::vector<double> col(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = items[i][j];
        item_var_sum += variance(col);
        for (std::size_t i = 0; i < n; ++i) totals[i] += col[i];
    }
    const double total_var = variance(totals);
    if (total_var <= 0.0) throw NumericError("cronbach_alpha: zero total-score variance");
    const double kd = static_cast<double>(k);
    return kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
}

Dataset median_split(const Dataset& data) {
    if (data.samples.empty()) throw InputError("median_split: empty dataset");
    std::vector<double> scores;
    scores.reserve(data.samples.size());
    for (const auto& s : data.samples) scores.push_back(s.affiliation);
    const double med = median(std::move(scores));
    Dataset out = data;
    for (auto& s : out.samples) s.high_affiliation = s.affiliation > med;
    return out;
}

namespace {

// Counts tied pairs sum t*(t-1)/2 over runs of equal values in sorted input.
double tied_pairs(const std::vector<double>& sorted) {
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        total += t * (t - 1.0) / 2.0;
        i = j;
    }
    return total;
}

// Merge sort counting inversions (discordant-ish pairs) in-place.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                               std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
    std::size_t a = lo, b = mid, k = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            inv += mid - a;
            buf[k++] = v[b++];
        } else {
            buf[k++] = v[a++];
        }
    }
    while (a < mid) buf[k++] = v[a++];
    while (b < hi) buf[k++] = v[b++];
    std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi),
              v.begin() + static_cast<long>(lo));
    return inv;
}

}  // namespace

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw InputError("kendall_tau_b: length mismatch");
    if (n < 2) throw NumericError("kendall_tau_b: need at least 2 observations");

    // Sort jointly by (x, y).
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }

    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    const double n1 = tied_pairs(xs);
    std::vector<double> ys_sorted = y;
    std::sort(ys_sorted.begin(), ys_sorted.end());
    const double n2 = tied_pairs(ys_sorted);
    if (n1 == n0) throw NumericError("kendall_tau_b: x is constant");
    if (n2 == n0) throw NumericError("kendall_tau_b: y is constant");

    // Joint ties: pairs tied in both x and y.
    double n3 = 0.0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) ++j;
            const double t = static_cast<double>(j - i);
            n3 += t * (t - 1.0) / 2.0;
            i = j;
        }
    }

    // Inversions of y in x-order give discordant pairs; pairs tied in x never
    // invert because the sort is ascending in y within equal x.
    std::vector<double> seq = ys;
    for (std::size_t i = 0; i < n; ++i) seq[i] = ys[i];
    std::vector<double> buf(n);
    const double discordant = static_cast<double>(count_inversions(seq, buf, 0, n));

    // concordant - discordant = n0 - n1 - n2 + n3 - 2*discordant
    const double numer = n0 - n1 - n2 + n3 - 2.0 * discordant;
    const double denom = std::sqrt((n0 - n1) * (n0 - n2));
    return numer / denom;
}

}  // namespace rapport
