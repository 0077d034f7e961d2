#pragma once

// Energy-threshold voice activity detection: fixed-length RMS windows,
// a threshold relative to the track's 95th-percentile window RMS, gap
// merging, and a minimum speech length.

#include <vector>

#include "rapport/timeline.hpp"

namespace rapport {

struct AudioTrack {
    int sample_rate = 0;           // Hz, >= 8000
    std::vector<float> samples;    // mono, normalized to [-1, 1]
    double start_offset = 0.0;     // seconds relative to session start

    double duration() const {
        return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
    }
};

struct VadParams {
    double window = 0.05;         // seconds per RMS window
    double rms_threshold = 0.10;  // fraction of the 95th-percentile window RMS
    double min_speech = 0.2;      // seconds; shorter speech runs become pause
    double max_gap = 0.3;         // seconds; shorter gaps between speech merge
};

// Segments a track into a speech/pause timeline covering [0, duration].
// Window boundaries quantize segment edges to multiples of params.window.
SegmentTimeline segment_speech(const AudioTrack& track, const VadParams& params = {});

}  // namespace rapport
