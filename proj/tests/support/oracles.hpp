#pragma once

// Independent reference implementations used only by tests. Each oracle
// recomputes a contract by a different algorithm than the library: the
// silence oracle intersects pause pairs instead of sweeping boundaries, the
// turn oracle grows groups by rescanning every onset, tau-b is brute force.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "rapport/rng.hpp"
#include "rapport/timeline.hpp"

namespace oracles {

// ---- dyadic timeline generation ------------------------------------------
// All boundaries are multiples of 1/1024 s, so every interval length and sum
// in both implementations is exactly representable in double.

inline double dyadic(rapport::Rng& rng, double lo, double hi) {
    const auto lo_t = static_cast<long long>(std::llround(lo * 1024.0));
    const auto hi_t = static_cast<long long>(std::llround(hi * 1024.0));
    const long long t = lo_t + static_cast<long long>(rng.below(
                                   static_cast<std::uint64_t>(hi_t - lo_t + 1)));
    return static_cast<double>(t) / 1024.0;
}

inline rapport::SegmentTimeline random_dyadic_timeline(rapport::Rng& rng, double duration) {
    std::vector<std::pair<double, double>> speech;
    double cursor = 0.0;
    while (true) {
        const double gap = dyadic(rng, 0.125, 3.0);
        const double begin = cursor + gap;
        if (begin >= duration - 0.25) break;
        const double len = dyadic(rng, 0.25, 4.0);
        const double end = std::min(begin + len, duration);
        if (end <= begin) break;
        speech.emplace_back(begin, end);
        cursor = end;
        if (rng.uniform01() < 0.08) break;  // occasionally stop early
    }
    return rapport::SegmentTimeline::from_speech_intervals(duration, speech);
}

// ---- speaker stats oracle --------------------------------------------------

struct SpeakerOracle {
    double time_speaking = 0.0;
    int count_speech = 0;
    double avg_speech = 0.0, avg_pause = 0.0, sd_speech = 0.0;
    bool avg_speech_valid = false, avg_pause_valid = false, sd_speech_valid = false;
};

inline SpeakerOracle oracle_speaker(const rapport::SegmentTimeline& tl) {
    SpeakerOracle o;
    std::vector<double> sp, pa;
    for (const auto& s : tl.segments()) {
        if (s.kind == rapport::SegmentKind::speech) sp.push_back(s.end - s.begin);
        else pa.push_back(s.end - s.begin);
    }
    o.count_speech = static_cast<int>(sp.size());
    for (double v : sp) o.time_speaking += v;
    if (!sp.empty()) {
        o.avg_speech_valid = true;
        o.avg_speech = o.time_speaking / static_cast<double>(sp.size());
        o.sd_speech_valid = true;
        if (sp.size() > 1) {
            double acc = 0.0;
            for (double v : sp) acc += (v - o.avg_speech) * (v - o.avg_speech);
            o.sd_speech = std::sqrt(acc / static_cast<double>(sp.size() - 1));
        }
    }
    if (!pa.empty()) {
        o.avg_pause_valid = true;
        double sum = 0.0;
        for (double v : pa) sum += v;
        o.avg_pause = sum / static_cast<double>(pa.size());
    }
    return o;
}

// ---- conversational turn oracle -------------------------------------------
// Group-growing walk: a group absorbs the next speech segment unless any
// partner onset lies strictly inside (group_start, candidate_end), rescanning
// the full onset list every time.

inline int oracle_turns_one(const rapport::SegmentTimeline& own,
                            const rapport::SegmentTimeline& partner) {
    std::vector<rapport::Segment> speech = own.speech_segments();
    if (speech.empty()) return 0;
    std::vector<double> onsets;
    for (const auto& s : partner.speech_segments()) onsets.push_back(s.begin);

    int groups = 0;
    std::size_t i = 0;
    while (i < speech.size()) {
        ++groups;
        const double group_start = speech[i].begin;
        std::size_t j = i;
        while (j + 1 < speech.size()) {
            bool blocked = false;
            for (double o : onsets)
                if (o > group_start && o < speech[j + 1].end) { blocked = true; break; }
            if (blocked) break;
            ++j;
        }
        i = j + 1;
    }
    return groups;
}

// ---- silence oracle ---------------------------------------------------------
// Pairwise pause-intersection instead of a boundary sweep.

struct SilenceOracle {
    double time_silence = 0.0;
    double fraction = 0.0;
    double avg_length = 0.0;
    bool avg_valid = false;
    double first_silence = 0.0;
    int interval_count = 0;
};

inline SilenceOracle oracle_silence(const rapport::SegmentTimeline& a,
                                    const rapport::SegmentTimeline& b) {
    SilenceOracle o;
    std::vector<std::pair<double, double>> pieces;
    for (const auto& pa : a.pause_segments())
        for (const auto& pb : b.pause_segments()) {
            const double lo = std::max(pa.begin, pb.begin);
            const double hi = std::min(pa.end, pb.end);
            if (hi > lo) pieces.emplace_back(lo, hi);
        }
    std::sort(pieces.begin(), pieces.end());
    // Coalesce touching pieces into maximal silence intervals.
    std::vector<std::pair<double, double>> intervals;
    for (const auto& p : pieces) {
        if (!intervals.empty() && p.first <= intervals.back().second)
            intervals.back().second = std::max(intervals.back().second, p.second);
        else
            intervals.push_back(p);
    }
    for (const auto& iv : intervals) o.time_silence += iv.second - iv.first;
    o.fraction = o.time_silence / a.duration();
    o.interval_count = static_cast<int>(intervals.size());
    if (!intervals.empty()) {
        o.avg_valid = true;
        o.avg_length = o.time_silence / static_cast<double>(intervals.size());
    }
    double first_onset = a.duration();
    for (const auto& s : a.speech_segments()) { first_onset = std::min(first_onset, s.begin); break; }
    for (const auto& s : b.speech_segments()) { first_onset = std::min(first_onset, s.begin); break; }
    o.first_silence = first_onset;
    return o;
}

// ---- kendall tau-b brute force ---------------------------------------------

inline double oracle_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[j] - x[i];
            const double dy = y[j] - y[i];
            if (dx == 0.0 && dy == 0.0) { ties_x += 1; ties_y += 1; continue; }
            if (dx == 0.0) { ties_x += 1; continue; }
            if (dy == 0.0) { ties_y += 1; continue; }
            if (dx * dy > 0) concordant += 1;
            else discordant += 1;
        }
    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    return (concordant - discordant) / std::sqrt((n0 - ties_x) * (n0 - ties_y));
}

}  // namespace oracles
