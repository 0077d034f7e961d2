#include "rapport/visual.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "rapport/error.hpp"
#include "rapport/schema.hpp"

namespace rapport {

const char* emotion_channel_name(int channel) {
    static const char* names[kEmotionChannels] = {"engagement", "contempt", "surprise", "anger",
                                                  "sadness",    "disgust",  "fear",     "joy"};
    return names[channel];
}

void FrameSeries::validate() const {
    if (!(fps > 0.0)) throw InputError("frames: fps must be positive");
    if (frames.empty()) throw InputError("frames: empty series");
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (!(frames[i].t > frames[i - 1].t))
            throw InputError("frames: timestamps must strictly increase at row " +
                             std::to_string(i));
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame& f = frames[i];
        if (f.face_detected) {
            for (double c : f.confidence)
                if (!(c >= 0.0 && c <= 100.0))
                    throw InputError("frames: confidence out of [0,100] at row " +
                                     std::to_string(i));
            if (!f.eyes_closed.has_value())
                throw InputError("frames: detected frame missing eye state at row " +
                                 std::to_string(i));
        }
    }
}

double FrameSeries::span() const {
    return frames.empty() ? 0.0 : frames.back().t - frames.front().t;
}

FacialFeatures facial_features(const FrameSeries& series) {
    series.validate();
    FacialFeatures out;
    std::size_t detected = 0;
    std::array<double, kEmotionChannels> sums = {};
    std::array<int, kEmotionChannels> peaks = {};
    std::array<bool, kEmotionChannels> in_run = {};
    for (const auto& f : series.frames) {
        if (!f.face_detected) continue;  // excluded, not imputed; runs continue across
        ++detected;
        for (int c = 0; c < kEmotionChannels; ++c) {
            sums[c] += f.confidence[c];
            if (f.confidence[c] > 50.0) {
                if (!in_run[c]) {
                    ++peaks[c];
                    in_run[c] = true;
                }
            } else {
                in_run[c] = false;
            }
        }
    }
    out.detected_fraction =
        static_cast<double>(detected) / static_cast<double>(series.frames.size());
    if (detected > 0)
        for (int c = 0; c < kEmotionChannels; ++c)
            out.mean[c] = sums[c] / static_cast<double>(detected);
    out.peaks = peaks;
    out.valid = out.detected_fraction >= 0.80;
    return out;
}

BlinkFeatures blink_features(const FrameSeries& series, const BlinkParams& params) {
    series.validate();
    BlinkFeatures out;

    const double gap_tolerance = 2.5 / series.fps;  // one dropped frame survives
    std::size_t undetected = 0;
    for (const auto& f : series.frames)
        if (!f.face_detected) ++undetected;
    const double undetected_fraction =
        static_cast<double>(undetected) / static_cast<double>(series.frames.size());

    // Longest continuous-detection span under the gap rule.
    double longest_span = 0.0;
    {
        double span_start = -1.0, last_t = 0.0;
        for (const auto& f : series.frames) {
            if (!f.face_detected) continue;
            if (span_start < 0.0 || f.t - last_t > gap_tolerance) span_start = f.t;
            last_t = f.t;
            longest_span = std::max(longest_span, last_t - span_start);
        }
    }

    // Blink onsets: open -> closed between consecutive detected frames within
    // tolerance; the closure runs until the next detected open frame.
    std::vector<double> onsets;
    {
        const Frame* prev = nullptr;
        double closure_start = -1.0;
        for (const auto& f : series.frames) {
            if (!f.face_detected) continue;
            const bool closed = f.eyes_closed.value();
            if (closure_start >= 0.0 && !closed) {
                if (f.t - closure_start <= params.max_closure) onsets.push_back(closure_start);
                closure_start = -1.0;
            }
            if (closure_start < 0.0 && closed && prev != nullptr &&
                !prev->eyes_closed.value() && f.t - prev->t <= gap_tolerance)
                closure_start = f.t;
            prev = &f;
        }
        // A closure still open at the end has unknown length: not a blink.
    }

    // Per-second bins over the observed span, centered 5 s moving average
    // (window clipped at the edges), scaled to blinks/minute.
    const double t0 = series.frames.front().t;
    const double span = std::max(series.span(), 1.0);
    const std::size_t bins = static_cast<std::size_t>(std::ceil(span));
    std::vector<double> counts(bins, 0.0);
    for (double t : onsets) {
        std::size_t b = static_cast<std::size_t>(t - t0);
        if (b >= bins) b = bins - 1;
        counts[b] += 1.0;
    }
    std::vector<double> smooth(bins, 0.0);
    for (std::size_t i = 0; i < bins; ++i) {
        const std::size_t lo = i >= 2 ? i - 2 : 0;
        const std::size_t hi = std::min(bins - 1, i + 2);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += counts[j];
        smooth[i] = 60.0 * acc / static_cast<double>(hi - lo + 1);
    }
    double mean = 0.0;
    for (double v : smooth) mean += v;
    mean /= static_cast<double>(bins);
    double sd = 0.0;
    if (bins > 1) {
        double acc = 0.0;
        for (double v : smooth) acc += (v - mean) * (v - mean);
        sd = std::sqrt(acc / static_cast<double>(bins - 1));
    }
    out.mean_rate = mean;
    out.sd_rate = sd;
    out.valid = undetected_fraction <= 0.10 && longest_span >= params.min_span;
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else if (c != '\r') cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& s, const std::string& ctx) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InputError("frames: bad number '" + s + "' in " + ctx);
    return v;
}

}  // namespace

FrameSeries read_frames_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("frames: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError("frames: '" + path + "' is empty");
    const auto header = split_line(line);
    if (header.size() != 11 || header[0] != "t" || header[1] != "face_detected" ||
        header[10] != "eyes_closed")
        throw InputError("frames: '" + path + "' has an unexpected header");

    FrameSeries series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_line(line);
        const std::string ctx = path + " line " + std::to_string(line_no);
        if (f.size() != 11) throw InputError("frames: wrong field count in " + ctx);
        Frame fr;
        fr.t = parse_num(f[0], ctx);
        if (f[1] == "1") fr.face_detected = true;
        else if (f[1] == "0") fr.face_detected = false;
        else throw InputError("frames: face_detected must be 0/1 in " + ctx);
        if (fr.face_detected) {
            for (int c = 0; c < kEmotionChannels; ++c) fr.confidence[c] = parse_num(f[2 + c], ctx);
            if (f[10] == "1") fr.eyes_closed = true;
            else if (f[10] == "0") fr.eyes_closed = false;
            else throw InputError("frames: eyes_closed must be 0/1 on detected rows in " + ctx);
        } else {
            for (int c = 0; c < kEmotionChannels; ++c)
                if (!f[2 + c].empty())
                    throw InputError("frames: confidence on undetected row in " + ctx);
            if (!f[10].empty()) throw InputError("frames: eye state on undetected row in " + ctx);
        }
        series.frames.push_back(fr);
    }
    if (series.frames.size() < 2) throw InputError("frames: '" + path + "' needs >= 2 rows");
    series.fps = static_cast<double>(series.frames.size() - 1) / series.span();
    series.validate();
    return series;
}

void write_frames_csv(const std::string& path, const FrameSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("frames: cannot open '" + path + "' for writing");
    out << "t,face_detected,engagement,contempt,surprise,anger,sadness,disgust,fear,joy,"
           "eyes_closed\n";
    for (const auto& f : series.frames) {
        out << format_double(f.t) << ',' << (f.face_detected ? '1' : '0');
        if (f.face_detected) {
            for (int c = 0; c < kEmotionChannels; ++c) out << ',' << format_double(f.confidence[c]);
            out << ',' << (f.eyes_closed.value() ? '1' : '0');
        } else {
            out << ",,,,,,,,,";
        }
        out << '\n';
    }
    if (!out) throw InputError("frames: write failed for '" + path + "'");
}

}  // namespace rapport
