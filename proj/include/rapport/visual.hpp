#pragma once

// Per-frame facial analysis: emotion/engagement confidence summaries over
// face-detected frames, and blink-rate statistics from eye-closure onsets.

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rapport {

// Confidence channels in schema order.
enum EmotionChannel {
    kEngagement = 0, kContempt, kSurprise, kAnger, kSadness, kDisgust, kFear, kJoy,
    kEmotionChannels,
};

const char* emotion_channel_name(int channel);

struct Frame {
    double t = 0.0;            // seconds
    bool face_detected = false;
    std::array<double, kEmotionChannels> confidence = {};  // 0-100, valid when detected
    std::optional<bool> eyes_closed;                       // present when detected
};

struct FrameSeries {
    double fps = 0.0;
    std::vector<Frame> frames;  // strictly increasing t

    void validate() const;
    double span() const;  // last t - first t
};

// Mean confidence over face-detected frames plus peak counts (maximal runs of
// consecutive detected frames strictly above 50, per channel). All 16 values
// are valid iff the detected fraction is >= 0.80.
struct FacialFeatures {
    std::array<double, kEmotionChannels> mean = {};
    std::array<int, kEmotionChannels> peaks = {};
    bool valid = false;
    double detected_fraction = 0.0;
};

FacialFeatures facial_features(const FrameSeries& series);

// Blink rate: closure onsets (open -> closed between consecutive detected
// frames within the gap tolerance) binned per second, smoothed with a
// centered 5 s moving average, scaled to blinks/minute. Closures longer than
// max_closure (default 0.5 s) are deliberate eye-closing, not blinks.
// Invalid when the face is undetected in more than 10% of frames or no
// continuous detection span reaches min_span seconds.
struct BlinkFeatures {
    double mean_rate = 0.0;  // blinks per minute
    double sd_rate = 0.0;
    bool valid = false;
};

struct BlinkParams {
    double max_closure = 0.5;
    double min_span = 300.0;
};

BlinkFeatures blink_features(const FrameSeries& series, const BlinkParams& params = {});

// Frame CSV: header t,face_detected,engagement,contempt,surprise,anger,
// sadness,disgust,fear,joy,eyes_closed; undetected rows leave the confidence
// and eye fields empty.
FrameSeries read_frames_csv(const std::string& path);
void write_frames_csv(const std::string& path, const FrameSeries& series);

}  // namespace rapport
