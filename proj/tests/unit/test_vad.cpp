// Voice activity detection on synthetic tracks with known burst layouts.

#include <cmath>
#include <vector>

#include "doctest.h"
#include "rapport/error.hpp"
#include "rapport/rng.hpp"
#include "rapport/vad.hpp"

using namespace rapport;

namespace {

// Tone bursts over a near-silent noise floor.
AudioTrack make_track(int rate, double duration,
                      const std::vector<std::pair<double, double>>& bursts, Rng& rng) {
    AudioTrack t;
    t.sample_rate = rate;
    t.samples.assign(static_cast<std::size_t>(duration * rate), 0.0f);
    for (std::size_t i = 0; i < t.samples.size(); ++i)
        t.samples[i] = static_cast<float>(rng.normal(0.0, 1e-4));
    for (const auto& [b, e] : bursts) {
        const std::size_t lo = static_cast<std::size_t>(b * rate);
        const std::size_t hi = std::min(t.samples.size(), static_cast<std::size_t>(e * rate));
        for (std::size_t i = lo; i < hi; ++i) {
            const double tt = static_cast<double>(i) / rate;
            t.samples[i] = static_cast<float>(0.45 * std::sin(2.0 * 3.14159265358979 * 210.0 * tt) +
                                              rng.normal(0.0, 0.02));
        }
    }
    return t;
}

}  // namespace

TEST_CASE("vad: all-zero track is one pause") {
    AudioTrack t;
    t.sample_rate = 16000;
    t.samples.assign(160000, 0.0f);  // 10 s of zeros
    const auto tl = segment_speech(t);
    REQUIRE(tl.segments().size() == 1);
    CHECK(tl.segments()[0].kind == SegmentKind::pause);
    CHECK(tl.segments()[0].begin == 0.0);
    CHECK(tl.duration() == doctest::Approx(10.0));
}

TEST_CASE("vad: rejects bad inputs") {
    AudioTrack t;
    t.sample_rate = 4000;
    t.samples.assign(4000, 0.0f);
    CHECK_THROWS_AS(segment_speech(t), InputError);  // rate too low
    t.sample_rate = 16000;
    t.samples.assign(100, 0.0f);  // shorter than one 50 ms window
    CHECK_THROWS_AS(segment_speech(t), InputError);
}

TEST_CASE("vad: recovers burst boundaries within 60 ms") {
    Rng rng(42);
    const std::vector<std::pair<double, double>> truth = {{1.0, 2.0}, {3.0, 4.5}, {6.25, 7.0}};
    const AudioTrack t = make_track(16000, 10.0, truth, rng);
    const auto tl = segment_speech(t);
    const auto speech = tl.speech_segments();
    REQUIRE(speech.size() == truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(std::abs(speech[i].begin - truth[i].first) <= 0.06);
        CHECK(std::abs(speech[i].end - truth[i].second) <= 0.06);
    }
}

TEST_CASE("vad: short gaps merge, short bursts drop") {
    Rng rng(43);
    // Two bursts 0.2 s apart (< max_gap 0.3) should merge into one segment;
    // an isolated 0.1 s burst (< min_speech 0.2) should vanish.
    const AudioTrack t =
        make_track(16000, 10.0, {{1.0, 2.0}, {2.2, 3.0}, {6.0, 6.1}}, rng);
    const auto tl = segment_speech(t);
    const auto speech = tl.speech_segments();
    REQUIRE(speech.size() == 1);
    CHECK(std::abs(speech[0].begin - 1.0) <= 0.06);
    CHECK(std::abs(speech[0].end - 3.0) <= 0.06);
}

TEST_CASE("vad: segmentation is idempotent on a reconstructed signal") {
    Rng rng(44);
    const AudioTrack t = make_track(16000, 12.0, {{0.5, 2.0}, {4.0, 5.25}, {8.0, 11.0}}, rng);
    const auto tl = segment_speech(t);

    // Rebuild a clean signal from the detected timeline and segment again.
    AudioTrack clean;
    clean.sample_rate = t.sample_rate;
    clean.samples.assign(t.samples.size(), 0.0f);
    for (const auto& s : tl.speech_segments()) {
        const std::size_t lo = static_cast<std::size_t>(s.begin * clean.sample_rate);
        const std::size_t hi =
            std::min(clean.samples.size(), static_cast<std::size_t>(s.end * clean.sample_rate));
        for (std::size_t i = lo; i < hi; ++i) {
            const double tt = static_cast<double>(i) / clean.sample_rate;
            clean.samples[i] =
                static_cast<float>(0.45 * std::sin(2.0 * 3.14159265358979 * 210.0 * tt));
        }
    }
    const auto tl2 = segment_speech(clean);
    const auto s1 = tl.speech_segments();
    const auto s2 = tl2.speech_segments();
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(std::abs(s1[i].begin - s2[i].begin) <= 0.051);
        CHECK(std::abs(s1[i].end - s2[i].end) <= 0.051);
    }
}

TEST_CASE("vad: randomized boundary recovery study") {
    // Smaller version of the acceptance sweep: random layouts with bursts
    // >= 0.4 s and gaps >= 0.5 s; at least 95% of boundaries within 60 ms.
    int total = 0, hits = 0;
    for (int seed = 0; seed < 10; ++seed) {
        Rng rng(1000 + seed);
        std::vector<std::pair<double, double>> truth;
        double cursor = 0.8;
        while (cursor < 18.0) {
            const double len = rng.uniform(0.4, 2.5);
            if (cursor + len > 19.0) break;
            truth.emplace_back(cursor, cursor + len);
            cursor += len + rng.uniform(0.5, 2.0);
        }
        const AudioTrack t = make_track(16000, 20.0, truth, rng);
        const auto speech = segment_speech(t).speech_segments();
        if (speech.size() != truth.size()) continue;  // counts as misses below
        for (std::size_t i = 0; i < truth.size(); ++i) {
            total += 2;
            if (std::abs(speech[i].begin - truth[i].first) <= 0.06) ++hits;
            if (std::abs(speech[i].end - truth[i].second) <= 0.06) ++hits;
        }
    }
    REQUIRE(total > 0);
    CHECK(static_cast<double>(hits) / total >= 0.95);
}
