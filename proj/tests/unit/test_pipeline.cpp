#include "rapport/pipeline.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rapport/error.hpp"
#include "rapport/synth.hpp"

namespace {

using namespace rapport;

std::size_t idx(const char* name) { return FeatureSchema::standard().index_of(name); }

FeatureParts plausible_parts() {
    FeatureParts parts;
    parts.speaker.time_speaking = 100.0;
    parts.speaker.count_speech_segments = 5;
    parts.speaker.avg_speech_segment_length = 2.5;
    parts.speaker.avg_speech_valid = true;
    parts.speaker.avg_pause_segment_length = 4.0;
    parts.speaker.avg_pause_valid = true;
    parts.speaker.sd_speech_segment_length = 0.7;
    parts.speaker.sd_speech_valid = true;
    parts.conversational_turns = 9;
    parts.silence.time_silence = 30.0;
    parts.silence.fraction_time_silence = 0.1;
    parts.silence.average_silence_length = 1.5;
    parts.silence.avg_valid = true;
    parts.silence.first_silence_length = 2.25;
    parts.dominant_speak_time = true;
    parts.dominant_turns = false;
    parts.content.values.resize(17);
    parts.content.valid.assign(17, true);
    for (std::size_t i = 0; i < 17; ++i) parts.content.values[i] = 100.0 + i;
    parts.blink.mean_rate = 12.0;
    parts.blink.sd_rate = 3.0;
    parts.blink.valid = true;
    parts.facial.valid = true;
    for (int c = 0; c < kEmotionChannels; ++c) {
        parts.facial.mean[c] = 10.0 * (c + 1);
        parts.facial.peaks[c] = c + 1;
    }
    parts.performance.resize(12);
    for (std::size_t i = 0; i < 12; ++i) parts.performance[i] = 200.0 + i;
    parts.pushes = {4, 6};
    for (std::size_t i = 0; i < 14; ++i) {
        parts.traits.values[i] = 300.0 + i;
        parts.traits.valid[i] = true;
    }
    return parts;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

}  // namespace

TEST_CASE("pipeline: assemble_features lays every block out in schema order") {
    const FeatureVector fv = assemble_features(plausible_parts());
    REQUIRE(fv.size() == 75);
    for (std::size_t i = 0; i < fv.size(); ++i) CHECK(fv.is_valid(i));

    CHECK(fv.values[idx("TimeSpeaking")] == 100.0);
    CHECK(fv.values[idx("CountSpeechSegments")] == 5.0);
    CHECK(fv.values[idx("CountConversationalTurns")] == 9.0);
    CHECK(fv.values[idx("AvgSpeechSegmentLength")] == 2.5);
    CHECK(fv.values[idx("AvgPauseSegmentLength")] == 4.0);
    CHECK(fv.values[idx("SDSpeechSegmentLength")] == 0.7);
    CHECK(fv.values[idx("IsDominantSpeakTime")] == 1.0);
    CHECK(fv.values[idx("IsDominantConvTurns")] == 0.0);
    CHECK(fv.values[idx("TimeSilence")] == 30.0);
    CHECK(fv.values[idx("FractionTimeSilence")] == 0.1);
    CHECK(fv.values[idx("AverageSilenceLength")] == 1.5);
    CHECK(fv.values[idx("FirstSilenceLength")] == 2.25);

    const char* content_names[17] = {
        "CountTotalWords",     "CountWordsAnalytic", "CountWordsClout",
        "CountWordsAuthentic", "CountWordsTone",     "CountWordsPronounI",
        "CountWordsPronounWe", "CountWordsPronounYou", "CountWordsNumber",
        "CountWordsAffect",    "CountWordsPosEmo",   "CountWordsNegEmo",
        "CountWordsSocial",    "CountWordsAffilitation", "CountWordsMotion",
        "CountWordsSpace",     "CountWordsTime"};
    for (std::size_t i = 0; i < 17; ++i) CHECK(fv.values[idx(content_names[i])] == 100.0 + i);

    CHECK(fv.values[idx("MeanBlinkRate")] == 12.0);
    CHECK(fv.values[idx("StdBlinkRate")] == 3.0);
    CHECK(fv.values[idx("CountVerticalPushes")] == 4.0);
    CHECK(fv.values[idx("CountHorizontalPushes")] == 6.0);

    const char* channels[kEmotionChannels] = {"Engagement", "Contempt", "Surprise", "Anger",
                                              "Sadness",    "Disgust",  "Fear",     "Joy"};
    for (int c = 0; c < kEmotionChannels; ++c) {
        CHECK(fv.values[idx((std::string(channels[c]) + "Mean").c_str())] == 10.0 * (c + 1));
        CHECK(fv.values[idx((std::string(channels[c]) + "Peaks").c_str())] == c + 1.0);
    }

    const char* perf_names[12] = {"ScoreRound1",       "ScoreRound2",  "ScoreCollector",
                                  "ScorePusher",       "ScoreDiffRounds", "ScoreAbsDiffRounds",
                                  "ScoreDiffRole",     "ScoreAbsDiffRole", "ScoreOverall",
                                  "ScoreMean",         "ScoreMin",     "ScoreMax"};
    for (std::size_t i = 0; i < 12; ++i) CHECK(fv.values[idx(perf_names[i])] == 200.0 + i);

    const char* trait_names[14] = {"Age",          "GamerIdentification", "GenrePuzzles",
                                   "GenreCasual",  "SameGenderCoPlayer",  "Gender",
                                   "GenderCoPlayer", "Extraversion",      "Agreeableness",
                                   "Conscientiousness", "EmotionalStability", "Openness",
                                   "PropensityToTrust", "BrainhexSocializer"};
    for (std::size_t i = 0; i < 14; ++i) CHECK(fv.values[idx(trait_names[i])] == 300.0 + i);
}

TEST_CASE("pipeline: assemble_features respects validity flags") {
    FeatureParts parts = plausible_parts();
    parts.speaker.avg_pause_valid = false;
    parts.speaker.sd_speech_valid = false;
    parts.silence.avg_valid = false;
    parts.content.valid[3] = false;
    parts.blink.valid = false;
    parts.facial.valid = false;
    parts.traits.valid[4] = false;
    parts.traits.valid[6] = false;
    const FeatureVector fv = assemble_features(parts);

    CHECK(!fv.is_valid(idx("AvgPauseSegmentLength")));
    CHECK(!fv.is_valid(idx("SDSpeechSegmentLength")));
    CHECK(!fv.is_valid(idx("AverageSilenceLength")));
    CHECK(!fv.is_valid(idx("CountWordsAuthentic")));
    CHECK(!fv.is_valid(idx("MeanBlinkRate")));
    CHECK(!fv.is_valid(idx("StdBlinkRate")));
    for (int c = 0; c < kEmotionChannels; ++c) {
        CHECK(!fv.is_valid(idx("JoyMean")));
        CHECK(!fv.is_valid(idx("EngagementPeaks")));
    }
    CHECK(!fv.is_valid(idx("SameGenderCoPlayer")));
    CHECK(!fv.is_valid(idx("GenderCoPlayer")));
    // Invalid cells hold zero.
    CHECK(fv.values[idx("MeanBlinkRate")] == 0.0);

    FeatureParts bad = plausible_parts();
    bad.performance.resize(11);
    CHECK_THROWS_AS(assemble_features(bad), InputError);
}

TEST_CASE("pipeline: build_samples wires the pair together") {
    ParticipantArtifacts a;
    a.participant_id = "s1a";
    a.timeline = SegmentTimeline::from_speech_intervals(20.0, {{1.0, 3.0}, {10.0, 12.0}});
    a.tokens = {"we", "happy"};
    ParticipantArtifacts b = a;
    b.participant_id = "s1b";
    b.timeline = SegmentTimeline::from_speech_intervals(20.0, {{5.0, 7.0}});
    b.tokens = {};

    FrameSeries frames;
    frames.fps = 10.0;
    for (int i = 0; i < 20; ++i) {
        Frame fr;
        fr.t = i * 0.1;
        fr.face_detected = true;
        for (int c = 0; c < kEmotionChannels; ++c) fr.confidence[c] = c == kJoy ? 60.0 : 10.0;
        fr.eyes_closed = false;
        frames.frames.push_back(fr);
    }
    a.frames = frames;
    b.frames = frames;

    GameLog log_a;
    log_a.events.push_back({1.0, EventKind::score, 1, Role::collector, {}});
    log_a.events.push_back({2.0, EventKind::score, 1, Role::collector, {}});
    log_a.events.push_back({8.0, EventKind::score, 2, Role::pusher, {}});
    log_a.events.push_back({9.0, EventKind::push, 2, Role::pusher, PushOrientation::vertical});
    GameLog log_b;
    log_b.events.push_back({1.5, EventKind::push, 1, Role::pusher, PushOrientation::horizontal});
    log_b.events.push_back({8.5, EventKind::score, 2, Role::collector, {}});
    a.game_log = log_a;
    b.game_log = log_b;

    a.questionnaire.gender = "female";
    b.questionnaire.gender = "male";
    for (int i = 0; i < 10; ++i) a.questionnaire.tipi[i] = 4;
    for (int i = 0; i < 6; ++i) a.questionnaire.gts[i] = 3;
    b.questionnaire.tipi = a.questionnaire.tipi;
    b.questionnaire.gts = a.questionnaire.gts;
    a.questionnaire.age = 25;
    b.questionnaire.age = 31;
    a.affiliation_items.assign(11, 6.0);
    b.affiliation_items.assign(11, 4.0);

    const auto [sa, sb] =
        build_samples(a, b, "s1", demo_lexicon(), demo_gender_encoding());
    CHECK(sa.participant_id == "s1a");
    CHECK(sa.dyad_id == "s1");
    CHECK(sa.affiliation == 6.0);
    CHECK(sb.affiliation == 4.0);

    // a's two segments straddle b's onset: two turns vs one.
    CHECK(sa.features.values[idx("CountConversationalTurns")] == 2.0);
    CHECK(sb.features.values[idx("CountConversationalTurns")] == 1.0);
    CHECK(sa.features.values[idx("IsDominantSpeakTime")] == 1.0);
    CHECK(sb.features.values[idx("IsDominantSpeakTime")] == 0.0);

    // Partner gender crosses over.
    CHECK(sa.features.values[idx("Gender")] == 0.0);
    CHECK(sa.features.values[idx("GenderCoPlayer")] == 1.0);
    CHECK(sb.features.values[idx("GenderCoPlayer")] == 0.0);
    CHECK(sa.features.values[idx("SameGenderCoPlayer")] == 0.0);

    // Empty transcript: word count 0 is real, rates are missing.
    CHECK(sb.features.values[idx("CountTotalWords")] == 0.0);
    CHECK(sb.features.is_valid(idx("CountTotalWords")));
    CHECK(!sb.features.is_valid(idx("CountWordsPosEmo")));
    CHECK(sa.features.values[idx("CountTotalWords")] == 2.0);

    // Short series: facial means valid, blink invalid (no 300 s span).
    CHECK(sa.features.values[idx("JoyMean")] == 60.0);
    CHECK(sa.features.values[idx("JoyPeaks")] == 1.0);
    CHECK(!sa.features.is_valid(idx("MeanBlinkRate")));

    // Telemetry: a collects twice in round 1, scores once as pusher.
    CHECK(sa.features.values[idx("ScoreRound1")] == 2.0);
    CHECK(sa.features.values[idx("ScoreRound2")] == 1.0);
    CHECK(sa.features.values[idx("ScoreCollector")] == 2.0);
    CHECK(sa.features.values[idx("ScorePusher")] == 1.0);
    CHECK(sa.features.values[idx("CountVerticalPushes")] == 1.0);
    CHECK(sa.features.values[idx("CountHorizontalPushes")] == 0.0);
    CHECK(sb.features.values[idx("CountHorizontalPushes")] == 1.0);

    // Mismatched durations are refused.
    ParticipantArtifacts c = b;
    c.timeline = SegmentTimeline::from_speech_intervals(21.0, {{5.0, 7.0}});
    CHECK_THROWS_WITH_AS(build_samples(a, c, "s1", demo_lexicon(), demo_gender_encoding()),
                         "session 's1': participant timelines cover different durations",
                         InputError);
}

TEST_CASE("pipeline: questionnaire CSV round trip and validation") {
    const std::string path = "/tmp/rapport_test_questionnaire.csv";
    QuestionnaireRow row;
    row.response.age = 27;
    row.response.gender = "nonbinary";
    row.response.gamer_identification = 5.25;
    row.response.genre_puzzles = true;
    row.response.genre_casual = false;
    row.response.brainhex_socializer = true;
    for (int i = 0; i < 10; ++i) row.response.tipi[i] = (i % 7) + 1;
    for (int i = 0; i < 6; ++i) row.response.gts[i] = (i % 5) + 1;
    row.affiliation_items.assign(11, 5.0);
    row.affiliation_items[3] = 6.5;
    QuestionnaireRow row2 = row;
    row2.response.gender = "female";
    write_questionnaire_csv(path, {{"p1", row}, {"p2", row2}});

    const auto rows = read_questionnaire_csv(path);
    REQUIRE(rows.size() == 2);
    const QuestionnaireRow& got = rows.at("p1");
    CHECK(got.response.age == 27.0);
    CHECK(got.response.gender == "nonbinary");
    CHECK(got.response.gamer_identification == 5.25);
    CHECK(got.response.genre_puzzles);
    CHECK(!got.response.genre_casual);
    CHECK(got.response.brainhex_socializer);
    CHECK(got.response.tipi == row.response.tipi);
    CHECK(got.response.gts == row.response.gts);
    CHECK(got.affiliation_items == row.affiliation_items);
    CHECK(rows.at("p2").response.gender == "female");

    const std::string original = slurp(path);

    SUBCASE("header must match exactly") {
        spit(path, "nope\n" + original);
        CHECK_THROWS_AS(read_questionnaire_csv(path), InputError);
    }
    SUBCASE("field count is enforced") {
        spit(path, original + "p3,1,2\n");
        CHECK_THROWS_AS(read_questionnaire_csv(path), InputError);
    }
    SUBCASE("scale items must be integers") {
        std::string mutated = original;
        const auto pos = mutated.find(",5,", mutated.find("p2"));
        REQUIRE(pos != std::string::npos);
        mutated.replace(pos, 3, ",5.5,");
        spit(path, mutated);
        CHECK_THROWS_AS(read_questionnaire_csv(path), InputError);
    }
    SUBCASE("duplicate ids are refused") {
        const auto second_row = original.find("\np2,");
        spit(path, original + original.substr(second_row + 1));
        CHECK_THROWS_AS(read_questionnaire_csv(path), InputError);
    }
    SUBCASE("gender with a comma cannot be written") {
        QuestionnaireRow bad = row;
        bad.response.gender = "a,b";
        CHECK_THROWS_AS(write_questionnaire_csv(path, {{"p9", bad}}), InputError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("pipeline: session manifest reading and validation") {
    const std::string path = "/tmp/rapport_test_manifest.json";
    spit(path, R"({"dyad_id":"d07","duration":330.0,"participants":[
      {"id":"d07a","audio":"a.wav","transcript":"a.txt","frames":"a.csv","game_log":"a.jsonl"},
      {"id":"d07b","audio":"b.wav","transcript":"b.txt","frames":"b.csv","game_log":"b.jsonl"}]})");
    const SessionManifest m = read_session_manifest(path);
    CHECK(m.dyad_id == "d07");
    CHECK(m.duration == 330.0);
    CHECK(m.participants[0].id == "d07a");
    CHECK(m.participants[1].game_log == "b.jsonl");

    SUBCASE("exactly two participants") {
        spit(path, R"({"dyad_id":"x","duration":10,"participants":[
          {"id":"a","audio":"a","transcript":"a","frames":"a","game_log":"a"}]})");
        CHECK_THROWS_AS(read_session_manifest(path), InputError);
    }
    SUBCASE("distinct participant ids") {
        spit(path, R"({"dyad_id":"x","duration":10,"participants":[
          {"id":"a","audio":"a","transcript":"a","frames":"a","game_log":"a"},
          {"id":"a","audio":"b","transcript":"b","frames":"b","game_log":"b"}]})");
        CHECK_THROWS_AS(read_session_manifest(path), InputError);
    }
    SUBCASE("positive duration") {
        spit(path, R"({"dyad_id":"x","duration":0,"participants":[
          {"id":"a","audio":"a","transcript":"a","frames":"a","game_log":"a"},
          {"id":"b","audio":"b","transcript":"b","frames":"b","game_log":"b"}]})");
        CHECK_THROWS_AS(read_session_manifest(path), InputError);
    }
    SUBCASE("missing fields are named") {
        spit(path, R"({"dyad_id":"x"})");
        CHECK_THROWS_WITH_AS(read_session_manifest(path),
                             doctest::Contains("missing manifest fields"), InputError);
    }
    SUBCASE("invalid JSON") {
        spit(path, "{nope");
        CHECK_THROWS_WITH_AS(read_session_manifest(path), doctest::Contains("not valid JSON"),
                             InputError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("pipeline: corpus loading failure modes name the culprit") {
    const std::string dir = "/tmp/rapport_test_corpus_errors";
    std::filesystem::remove_all(dir);
    SynthConfig cfg;
    cfg.n_dyads = 3;
    cfg.seed = 9;
    write_corpus(dir, cfg);

    SUBCASE("missing corpus.json") {
        CHECK_THROWS_WITH_AS(load_corpus(dir + "/nowhere"),
                             doctest::Contains("cannot open"), InputError);
    }
    SUBCASE("empty session list") {
        const std::string original = slurp(dir + "/corpus.json");
        std::string mutated = original;
        const auto pos = mutated.find("\"sessions\"");
        REQUIRE(pos != std::string::npos);
        mutated = mutated.substr(0, pos) + "\"sessions\": []\n}\n";
        spit(dir + "/corpus.json", mutated);
        CHECK_THROWS_WITH_AS(load_corpus(dir), doctest::Contains("no sessions"), InputError);
        spit(dir + "/corpus.json", original);
    }
    SUBCASE("questionnaire row missing for a participant") {
        const std::string qpath = dir + "/questionnaire.csv";
        const std::string original = slurp(qpath);
        std::string mutated;
        std::istringstream in(original);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("d02a,", 0) == 0) continue;
            mutated += line + "\n";
        }
        spit(qpath, mutated);
        CHECK_THROWS_WITH_AS(extract_corpus(dir),
                             doctest::Contains("no questionnaire row for participant 'd02a'"),
                             InputError);
        spit(qpath, original);
    }
    SUBCASE("corrupt WAV names the path") {
        const std::string wav = dir + "/d01/d01a.wav";
        const std::string original = slurp(wav);
        spit(wav, original.substr(0, 10));
        CHECK_THROWS_WITH_AS(extract_corpus(dir), doctest::Contains("d01a.wav"), InputError);
        spit(wav, original);
    }
    SUBCASE("missing referenced file names the path") {
        std::filesystem::remove(dir + "/d03/d03b.txt");
        CHECK_THROWS_WITH_AS(extract_corpus(dir), doctest::Contains("d03b.txt"), InputError);
    }
    std::filesystem::remove_all(dir);
}
