#include "rapport/vad.hpp"

#include <algorithm>
#include <cmath>

#include "rapport/error.hpp"
#include "rapport/simd.hpp"

namespace rapport {

SegmentTimeline segment_speech(const AudioTrack& track, const VadParams& params) {
    if (track.sample_rate < 8000) throw InputError("vad: sample rate must be >= 8000 Hz");
    if (!(params.window > 0.0) || !(params.min_speech >= 0.0) || !(params.max_gap >= 0.0) ||
        !(params.rms_threshold > 0.0))
        throw InputError("vad: parameters must be positive");
    const std::size_t n = track.samples.size();
    const std::size_t win =
        static_cast<std::size_t>(std::lround(params.window * track.sample_rate));
    if (win == 0) throw InputError("vad: window shorter than one sample");
    if (n < win) throw InputError("vad: track shorter than one analysis window");

    // Non-overlapping window RMS; the final partial window uses its own length.
    const std::size_t n_windows = (n + win - 1) / win;
    std::vector<double> rms(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t lo = w * win;
        const std::size_t len = std::min(win, n - lo);
        rms[w] = std::sqrt(simd::sumsq_f32(track.samples.data() + lo, len) /
                           static_cast<double>(len));
    }

    // Nearest-rank 95th percentile of window RMS.
    std::vector<double> sorted = rms;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n_windows)));
    const double p95 = sorted[rank == 0 ? 0 : rank - 1];
    const double threshold = params.rms_threshold * p95;

    std::vector<char> speech(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) speech[w] = rms[w] > threshold ? 1 : 0;

    // Window runs -> (begin, end) in window indices.
    struct Run { std::size_t begin, end; };  // [begin, end) windows
    std::vector<Run> runs;
    for (std::size_t w = 0; w < n_windows;) {
        if (!speech[w]) { ++w; continue; }
        std::size_t e = w;
        while (e < n_windows && speech[e]) ++e;
        runs.push_back({w, e});
        w = e;
    }

    // Merge speech runs separated by gaps shorter than max_gap...
    std::vector<Run> merged;
    for (const auto& r : runs) {
        if (!merged.empty()) {
            const double gap =
                static_cast<double>(r.begin - merged.back().end) * params.window;
            if (gap < params.max_gap) {
                merged.back().end = r.end;
                continue;
            }
        }
        merged.push_back(r);
    }

    // ...then drop speech runs shorter than min_speech.
    const double duration = track.duration();
    std::vector<std::pair<double, double>> intervals;
    for (const auto& r : merged) {
        const double b = static_cast<double>(r.begin) * params.window;
        const double e = std::min(static_cast<double>(r.end) * params.window, duration);
        if (e - b < params.min_speech) continue;
        intervals.emplace_back(b, e);
    }

    return SegmentTimeline::from_speech_intervals(duration, intervals);
}

}  // namespace rapport
