#include "rapport/metrics.hpp"

#include "rapport/error.hpp"

namespace rapport {

MetricValue f1_score(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size()) throw InputError("f1: length mismatch");
    if (truth.empty()) throw InputError("f1: empty inputs");
    double tp = 0.0, fp = 0.0, fn = 0.0, positives = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == 1.0;
        const bool p = predictions[i] == 1.0;
        positives += t ? 1.0 : 0.0;
        if (p && t) ++tp;
        else if (p && !t) ++fp;
        else if (!p && t) ++fn;
    }
    MetricValue out;
    out.degenerate = positives == 0.0;
    const double denom = 2.0 * tp + fp + fn;  // equals (P + R) scaled; 0 iff P + R = 0
    out.value = denom > 0.0 ? 2.0 * tp / denom : 0.0;
    return out;
}

MetricValue r2_score(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size()) throw InputError("r2: length mismatch");
    if (truth.size() < 2) throw InputError("r2: need at least 2 values");
    double mean = 0.0;
    for (const double v : truth) mean += v;
    mean /= static_cast<double>(truth.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_res += (truth[i] - predictions[i]) * (truth[i] - predictions[i]);
        ss_tot += (truth[i] - mean) * (truth[i] - mean);
    }
    MetricValue out;
    out.degenerate = ss_tot == 0.0;
    out.value = out.degenerate ? 0.0 : 1.0 - ss_res / ss_tot;
    return out;
}

}  // namespace rapport
