#pragma once

// Speech/pause timelines and the chronemic features computed from them.
// A timeline tiles [0, duration] with alternating speech/pause segments;
// pairwise features assume the two timelines are aligned and equally long.

#include <string>
#include <utility>
#include <vector>

namespace rapport {

enum class SegmentKind { speech, pause };

struct Segment {
    double begin = 0.0;
    double end = 0.0;
    SegmentKind kind = SegmentKind::pause;

    double length() const { return end - begin; }
    bool operator==(const Segment& other) const = default;
};

class SegmentTimeline {
public:
    SegmentTimeline() = default;

    // Validates tiling ([0,duration], gapless, positive lengths) and merges
    // adjacent same-kind segments so the stored form always alternates.
    static SegmentTimeline from_segments(double duration, std::vector<Segment> segments);

    // Convenience: speech intervals within [0,duration]; gaps become pauses.
    // Intervals must be disjoint, ordered, and positive-length.
    static SegmentTimeline from_speech_intervals(double duration,
                                                 const std::vector<std::pair<double, double>>& speech);

    double duration() const { return duration_; }
    const std::vector<Segment>& segments() const { return segments_; }

    std::vector<Segment> speech_segments() const;
    std::vector<Segment> pause_segments() const;

    // Shifts by offset (prepending pause), then crops/pads to new_duration.
    SegmentTimeline shifted(double offset, double new_duration) const;

    bool operator==(const SegmentTimeline& other) const = default;

private:
    double duration_ = 0.0;
    std::vector<Segment> segments_;
};

// Per-speaker segment statistics. Averages over an empty segment kind are 0
// with the matching *_valid flag cleared; the SD is 0 (valid) for exactly one
// speech segment and invalid when there are none.
struct SpeakerStats {
    double time_speaking = 0.0;
    int count_speech_segments = 0;
    double avg_speech_segment_length = 0.0;
    double avg_pause_segment_length = 0.0;
    double sd_speech_segment_length = 0.0;
    bool avg_speech_valid = false;
    bool avg_pause_valid = false;
    bool sd_speech_valid = false;
};

SpeakerStats speaker_features(const SegmentTimeline& tl);

// Conversational turns per speaker: consecutive own segments merge into one
// turn unless a partner speech onset falls strictly inside the merged span;
// every turn contains at least one speech segment.
std::pair<int, int> conversational_turns(const SegmentTimeline& a, const SegmentTimeline& b);

// Mutual silence (both pausing). average_length is 0 with avg_valid=false when
// there is no silence; first_silence_length is the time from 0 to the earliest
// speech onset of either speaker (duration if nobody speaks).
struct SilenceStats {
    double time_silence = 0.0;
    double fraction_time_silence = 0.0;
    double average_silence_length = 0.0;
    bool avg_valid = false;
    double first_silence_length = 0.0;
};

SilenceStats silence_features(const SegmentTimeline& a, const SegmentTimeline& b);

// Strict-majority dominance; ties leave both flags false.
struct DominanceFlags {
    bool speak_time_a = false;
    bool speak_time_b = false;
    bool turns_a = false;
    bool turns_b = false;
};

DominanceFlags dominance(const SegmentTimeline& a, const SegmentTimeline& b);

// Debug/inspection export: begin,end,kind rows.
void write_timeline_csv(const std::string& path, const SegmentTimeline& tl);

}  // namespace rapport
