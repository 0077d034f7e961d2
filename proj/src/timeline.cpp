#include "rapport/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rapport/error.hpp"
#include "rapport/schema.hpp"

namespace rapport {

SegmentTimeline SegmentTimeline::from_segments(double duration, std::vector<Segment> segments) {
    if (!(duration > 0.0)) throw InputError("timeline: duration must be positive");
    if (segments.empty()) throw InputError("timeline: no segments");
    if (segments.front().begin != 0.0) throw InputError("timeline: must start at 0");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].end > segments[i].begin))
            throw InputError("timeline: non-positive segment length at index " + std::to_string(i));
        if (i > 0 && segments[i].begin != segments[i - 1].end)
            throw InputError("timeline: gap or overlap at index " + std::to_string(i));
    }
    if (segments.back().end != duration) throw InputError("timeline: must end at duration");

    // Merge adjacent same-kind segments to the canonical alternating form.
    std::vector<Segment> merged;
    for (const auto& s : segments) {
        if (!merged.empty() && merged.back().kind == s.kind)
            merged.back().end = s.end;
        else
            merged.push_back(s);
    }
    SegmentTimeline tl;
    tl.duration_ = duration;
    tl.segments_ = std::move(merged);
    return tl;
}

SegmentTimeline SegmentTimeline::from_speech_intervals(
    double duration, const std::vector<std::pair<double, double>>& speech) {
    if (!(duration > 0.0)) throw InputError("timeline: duration must be positive");
    std::vector<Segment> segs;
    double cursor = 0.0;
    for (const auto& [b, e] : speech) {
        if (!(b >= cursor)) throw InputError("timeline: speech intervals must be ordered and disjoint");
        if (!(e > b)) throw InputError("timeline: speech interval with non-positive length");
        if (!(e <= duration)) throw InputError("timeline: speech interval beyond duration");
        if (b > cursor) segs.push_back({cursor, b, SegmentKind::pause});
        segs.push_back({b, e, SegmentKind::speech});
        cursor = e;
    }
    if (cursor < duration) segs.push_back({cursor, duration, SegmentKind::pause});
    return from_segments(duration, std::move(segs));
}

std::vector<Segment> SegmentTimeline::speech_segments() const {
    std::vector<Segment> out;
    for (const auto& s : segments_)
        if (s.kind == SegmentKind::speech) out.push_back(s);
    return out;
}

std::vector<Segment> SegmentTimeline::pause_segments() const {
    std::vector<Segment> out;
    for (const auto& s : segments_)
        if (s.kind == SegmentKind::pause) out.push_back(s);
    return out;
}

SegmentTimeline SegmentTimeline::shifted(double offset, double new_duration) const {
    if (offset < 0.0) throw InputError("timeline: negative shift offset");
    if (!(new_duration > 0.0)) throw InputError("timeline: new duration must be positive");
    std::vector<Segment> segs;
    if (offset > 0.0) segs.push_back({0.0, std::min(offset, new_duration), SegmentKind::pause});
    for (const auto& s : segments_) {
        const double b = s.begin + offset;
        const double e = s.end + offset;
        if (b >= new_duration) break;
        segs.push_back({b, std::min(e, new_duration), s.kind});
    }
    if (!segs.empty() && segs.back().end < new_duration)
        segs.push_back({segs.back().end, new_duration, SegmentKind::pause});
    if (segs.empty()) segs.push_back({0.0, new_duration, SegmentKind::pause});
    return from_segments(new_duration, std::move(segs));
}

SpeakerStats speaker_features(const SegmentTimeline& tl) {
    SpeakerStats st;
    std::vector<double> speech_lengths, pause_lengths;
    for (const auto& s : tl.segments()) {
        if (s.kind == SegmentKind::speech) {
            st.time_speaking += s.length();
            speech_lengths.push_back(s.length());
        } else {
            pause_lengths.push_back(s.length());
        }
    }
    st.count_speech_segments = static_cast<int>(speech_lengths.size());
    if (!speech_lengths.empty()) {
        double sum = 0.0;
        for (double v : speech_lengths) sum += v;
        st.avg_speech_segment_length = sum / static_cast<double>(speech_lengths.size());
        st.avg_speech_valid = true;
        if (speech_lengths.size() == 1) {
            st.sd_speech_segment_length = 0.0;  // a single segment has no spread
            st.sd_speech_valid = true;
        } else {
            double acc = 0.0;
            for (double v : speech_lengths) {
                const double d = v - st.avg_speech_segment_length;
                acc += d * d;
            }
            st.sd_speech_segment_length =
                std::sqrt(acc / static_cast<double>(speech_lengths.size() - 1));
            st.sd_speech_valid = true;
        }
    }
    if (!pause_lengths.empty()) {
        double sum = 0.0;
        for (double v : pause_lengths) sum += v;
        st.avg_pause_segment_length = sum / static_cast<double>(pause_lengths.size());
        st.avg_pause_valid = true;
    }
    return st;
}

namespace {

void check_aligned(const SegmentTimeline& a, const SegmentTimeline& b, const char* op) {
    if (a.duration() != b.duration())
        throw InputError(std::string(op) + ": timelines have different durations");
}

// Turn counting for one speaker: walk own speech segments left to right and
// merge consecutive ones unless a partner onset lies strictly inside the span
// from the current turn's start to the candidate segment's end.
int count_turns(const SegmentTimeline& own, const SegmentTimeline& partner) {
    const auto speech = own.speech_segments();
    if (speech.empty()) return 0;
    std::vector<double> onsets;
    for (const auto& s : partner.speech_segments()) onsets.push_back(s.begin);

    auto onset_strictly_inside = [&onsets](double lo, double hi) {
        auto it = std::upper_bound(onsets.begin(), onsets.end(), lo);
        return it != onsets.end() && *it < hi;
    };

    int turns = 1;
    double turn_start = speech.front().begin;
    double turn_end = speech.front().end;
    for (std::size_t i = 1; i < speech.size(); ++i) {
        if (onset_strictly_inside(turn_start, speech[i].end)) {
            ++turns;
            turn_start = speech[i].begin;
        }
        turn_end = speech[i].end;
    }
    (void)turn_end;
    return turns;
}

}  // namespace

std::pair<int, int> conversational_turns(const SegmentTimeline& a, const SegmentTimeline& b) {
    check_aligned(a, b, "conversational_turns");
    return {count_turns(a, b), count_turns(b, a)};
}

SilenceStats silence_features(const SegmentTimeline& a, const SegmentTimeline& b) {
    check_aligned(a, b, "silence_features");
    SilenceStats st;

    // Sweep both timelines' boundaries; silence where both are pausing.
    // Lengths are accumulated left to right so the summation order is fixed.
    std::vector<double> cuts;
    cuts.push_back(0.0);
    for (const auto& s : a.segments()) cuts.push_back(s.end);
    for (const auto& s : b.segments()) cuts.push_back(s.end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto kind_at = [](const SegmentTimeline& tl, double t) {
        for (const auto& s : tl.segments())
            if (t >= s.begin && t < s.end) return s.kind;
        return tl.segments().back().kind;
    };

    int intervals = 0;
    bool in_silence = false;
    double current_start = 0.0;
    std::vector<double> lengths;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const bool silent =
            kind_at(a, lo) == SegmentKind::pause && kind_at(b, lo) == SegmentKind::pause;
        if (silent && !in_silence) {
            in_silence = true;
            current_start = lo;
        } else if (!silent && in_silence) {
            in_silence = false;
            lengths.push_back(lo - current_start);
            ++intervals;
        }
        (void)hi;
    }
    if (in_silence) {
        lengths.push_back(a.duration() - current_start);
        ++intervals;
    }
    for (double len : lengths) st.time_silence += len;
    st.fraction_time_silence = st.time_silence / a.duration();
    if (intervals > 0) {
        st.average_silence_length = st.time_silence / static_cast<double>(intervals);
        st.avg_valid = true;
    }

    double first_onset = a.duration();
    const auto sa = a.speech_segments();
    const auto sb = b.speech_segments();
    if (!sa.empty()) first_onset = std::min(first_onset, sa.front().begin);
    if (!sb.empty()) first_onset = std::min(first_onset, sb.front().begin);
    st.first_silence_length = first_onset;
    return st;
}

DominanceFlags dominance(const SegmentTimeline& a, const SegmentTimeline& b) {
    check_aligned(a, b, "dominance");
    DominanceFlags f;
    const SpeakerStats sa = speaker_features(a);
    const SpeakerStats sb = speaker_features(b);
    if (sa.time_speaking > sb.time_speaking)
        f.speak_time_a = true;
    else if (sb.time_speaking > sa.time_speaking)
        f.speak_time_b = true;
    const auto [ta, tb] = conversational_turns(a, b);
    if (ta > tb)
        f.turns_a = true;
    else if (tb > ta)
        f.turns_b = true;
    return f;
}

void write_timeline_csv(const std::string& path, const SegmentTimeline& tl) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("timeline: cannot open '" + path + "' for writing");
    out << "begin,end,kind\n";
    for (const auto& s : tl.segments())
        out << format_double(s.begin) << ',' << format_double(s.end) << ','
            << (s.kind == SegmentKind::speech ? "speech" : "pause") << '\n';
}

}  // namespace rapport
