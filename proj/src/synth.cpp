#include "rapport/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <utility>

#include "json.hpp"

#include "rapport/error.hpp"
#include "rapport/rng.hpp"
#include "rapport/wav.hpp"

namespace rapport {

namespace {

constexpr double kSessionSeconds = 330.0;
constexpr int kFrameCount = 3300;  // 10 fps
constexpr int kSampleRate = 8000;

// Paper-matched label moments.
constexpr double kLabelMean = 5.31;
constexpr double kLabelSd = 1.28;

// Seed-stream tags: structural draws (everything that reaches the feature
// table) vs. audio rendering, which must not perturb the table.
constexpr std::uint64_t kDyadTag = 0x64796164;  // "dyad"
constexpr std::uint64_t kWaveTag = 0x77617665;  // "wave"

// --------------------------------------------------------------------------
// token pools
//
// Warm words hit the categories whose rates are planted to rise with
// affiliation (pronouns i/we, posemo, social, affiliation, time); cold words
// hit the falling ones (cause, insight, number, work, negemo). Neither pool
// touches the other's categories, so the planted signs stay clean. Filler is
// neutral: none of its words match a warm or cold category (a few cover the
// otherwise-unused you/motion/space lists so no feature is constant).

const std::vector<std::string>& warm_words() {
    static const std::vector<std::string> words = {
        // i
        "i", "i'm", "my", "me",
        // we
        "we", "we're", "us", "our", "let's",
        // posemo
        "happy", "great", "love", "nice", "awesome", "fun", "glad", "excited", "amazing",
        "perfect", "good", "enjoy",
        // social
        "friend", "talk", "thanks", "please", "welcome", "helping", "share", "listen",
        // social + affiliation
        "team", "together", "partner",
        // affiliation
        "teammate", "ally", "support", "join", "bond", "cooperate",
        // time
        "now", "today", "soon", "later", "minute", "start", "next", "moment",
    };
    return words;
}

const std::vector<std::string>& cold_words() {
    static const std::vector<std::string> words = {
        // cause
        "because", "therefore", "since", "effect", "makes", "result", "depends",
        // insight
        "think", "know", "understand", "realize", "idea", "reason", "believe", "means",
        "figure", "learn",
        // number
        "one", "two", "three", "four", "five", "six", "seven", "ten", "twenty", "hundred",
        "half", "couple", "dozen", "number",
        // work
        "work", "task", "goal", "plan", "strategy", "effort", "focus", "job", "project",
        "practice",
        // negemo
        "bad", "sad", "annoying", "awful", "terrible", "worried", "afraid", "lost", "fail",
        "stress", "upset", "wrong", "frustrated",
    };
    return words;
}

const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {
        "uh", "um", "okay", "yeah", "hmm", "well", "just", "like", "really", "oh", "huh",
        "gonna", "wanna", "stuff", "thing", "things", "actually", "game", "box",
        // neutral category coverage: you / motion / space
        "you", "your", "go", "take", "turn", "up", "down", "left", "right", "here", "there",
    };
    return words;
}

// --------------------------------------------------------------------------

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

int clamp_item(double v, int lo, int hi) {
    const long r = std::lround(v);
    return static_cast<int>(std::min<long>(std::max<long>(r, lo), hi));
}

bool channel_affected(const SynthConfig& cfg, Category c) {
    return std::find(cfg.affected_channels.begin(), cfg.affected_channels.end(), c) !=
           cfg.affected_channels.end();
}

void validate_config(const SynthConfig& cfg) {
    if (cfg.n_dyads < 3) {
        throw InputError("synth: n_dyads must be at least 3, got " + std::to_string(cfg.n_dyads));
    }
    if (!(cfg.signal_strength >= 0.0 && cfg.signal_strength <= 1.0)) {
        throw InputError("synth: signal_strength must be in [0, 1]");
    }
    if (!(cfg.noise_sd > 0.0)) throw InputError("synth: noise_sd must be positive");
}

std::string dyad_name(const SynthConfig& cfg, int d) {
    std::size_t width = 2;
    for (int n = cfg.n_dyads; n >= 100; n /= 10) ++width;
    const std::string digits = std::to_string(d + 1);
    std::string name = "d";
    if (width > digits.size()) name.append(width - digits.size(), '0');
    return name + digits;
}

// One burst of speech: who, when, and the words said.
struct Burst {
    int speaker = 0;
    double begin = 0.0;
    double end = 0.0;
};

struct DyadPlan {
    std::array<double, 2> affiliation = {};            // clipped latents
    std::array<std::vector<double>, 2> items;          // 11 questionnaire items
    std::vector<Burst> bursts;                         // chronological
    std::array<std::vector<std::pair<double, double>>, 2> speech;  // per-speaker intervals
    std::array<std::vector<std::string>, 2> tokens;    // per-speaker, burst order
    std::array<std::string, 2> transcript;
    std::array<FrameSeries, 2> frames;
    std::array<GameLog, 2> logs;
    std::array<QuestionnaireRow, 2> questionnaire;
};

// Everything that reaches the feature table is drawn here, in a fixed order,
// from the dyad's structural stream. Audio rendering draws from a separate
// stream so tables are identical with or without it.
DyadPlan plan_dyad(const SynthConfig& cfg, int d) {
    Rng rng(derive_seed(cfg.seed, kDyadTag, static_cast<std::uint64_t>(d)));
    DyadPlan plan;

    // Latent affiliation: dyad-level core plus participant deviation, moments
    // matched to the paper (mean 5.31, SD 1.28, clipped to [1, 7]); the dyad
    // share of the variance keeps coplayers correlated.
    const double dyad_latent = kLabelMean + rng.normal(0.0, std::sqrt(0.7) * kLabelSd);
    std::array<double, 2> u = {};
    for (int p = 0; p < 2; ++p) {
        plan.affiliation[p] =
            clampd(dyad_latent + rng.normal(0.0, std::sqrt(0.3) * kLabelSd), 1.0, 7.0);
        u[p] = cfg.signal_strength * (plan.affiliation[p] - kLabelMean) / kLabelSd;
    }
    const double u_dyad =
        cfg.signal_strength * (clampd(dyad_latent, 1.0, 7.0) - kLabelMean) / kLabelSd;

    // Questionnaire affiliation items; their mean is the label.
    for (int p = 0; p < 2; ++p) {
        plan.items[p].resize(11);
        for (double& item : plan.items[p]) {
            item = clamp_item(plan.affiliation[p] + rng.normal(0.0, 0.8), 1, 7);
        }
    }

    // ---- conversation structure (chronemics channel) ----
    // Higher affiliation: more exchanges, shorter gaps (Table-4 signs for
    // CountConversationalTurns + and AvgPauseTime -).
    const double c = channel_affected(cfg, Category::chronemics) ? u_dyad : 0.0;
    const double exchanges =
        clampd(std::lround(20.0 + 6.0 * c + rng.normal(0.0, 1.8 * cfg.noise_sd)), 8.0, 34.0);
    const double gap_mu =
        clampd(2.3 - 0.6 * c + rng.normal(0.0, 0.2 * cfg.noise_sd), 0.7, 4.5);
    const double speech_per_turn =
        clampd(kSessionSeconds / (2.0 * exchanges) - gap_mu, 1.0, 10.0);

    double t = rng.uniform(0.7, 2.2);  // initial mutual silence
    int speaker = 0;
    while (true) {
        const int bursts = 1 + static_cast<int>(rng.below(3));
        const double turn_speech =
            clampd(speech_per_turn * std::exp(rng.normal(0.0, 0.20)), 0.8, 14.0);
        std::vector<double> lengths(static_cast<std::size_t>(bursts));
        for (double& len : lengths) {
            len = std::max(0.65, turn_speech / bursts * std::exp(rng.normal(0.0, 0.15)));
        }
        std::vector<double> micro(static_cast<std::size_t>(bursts > 0 ? bursts - 1 : 0));
        for (double& m : micro) m = rng.uniform(0.5, 0.9);
        double span = 0.0;
        for (double len : lengths) span += len;
        for (double m : micro) span += m;
        if (t + span > kSessionSeconds - 0.8) break;
        double bt = t;
        for (int k = 0; k < bursts; ++k) {
            Burst b;
            b.speaker = speaker;
            b.begin = bt;
            b.end = bt + lengths[static_cast<std::size_t>(k)];
            plan.bursts.push_back(b);
            plan.speech[speaker].emplace_back(b.begin, b.end);
            bt = b.end;
            if (k + 1 < bursts) bt += micro[static_cast<std::size_t>(k)];
        }
        t += span;
        t += clampd(gap_mu * std::exp(rng.normal(0.0, 0.25)), 0.45, 10.0);
        speaker ^= 1;
    }

    // ---- transcripts (comm_content channel) ----
    // Word pools are sampled with an affiliation-tilted warm/cold mixture.
    const bool content_on = channel_affected(cfg, Category::comm_content);
    for (const Burst& b : plan.bursts) {
        const double w = content_on ? u[b.speaker] : 0.0;
        const double warm_p = clampd(0.24 + 0.10 * w, 0.03, 0.55);
        const double cold_p = clampd(0.24 - 0.10 * w, 0.03, 0.55);
        const int n_words = std::max<long>(
            1, std::lround((b.end - b.begin) * 2.4 * std::exp(rng.normal(0.0, 0.10))));
        std::string line;
        for (int k = 0; k < n_words; ++k) {
            const double r = rng.uniform01();
            const std::vector<std::string>* pool = &filler_words();
            if (r < warm_p) pool = &warm_words();
            else if (r < warm_p + cold_p) pool = &cold_words();
            const std::string& word = (*pool)[rng.below(pool->size())];
            plan.tokens[b.speaker].push_back(word);
            if (!line.empty()) line += ' ';
            line += word;
        }
        plan.transcript[b.speaker] += line + ".\n";
    }

    // ---- frame series (facial_expression + eye_blink channels) ----
    const bool facial_on = channel_affected(cfg, Category::facial_expression);
    const bool blink_on = channel_affected(cfg, Category::eye_blink);
    for (int p = 0; p < 2; ++p) {
        const double f = facial_on ? u[p] : 0.0;
        const double bl = blink_on ? u[p] : 0.0;

        // A few participants get bursty face-tracking dropouts: enough to
        // invalidate blink features (broken spans) but not facial means
        // (detected fraction stays >= 0.80).
        const bool degraded = rng.uniform01() < 0.06;
        const double drop_target = degraded ? rng.uniform(0.12, 0.16) : 0.03;
        const double burst_start_p = degraded ? drop_target / (3.5 * (1.0 - drop_target)) : 0.0;

        const double bpm =
            clampd(15.0 - 5.0 * bl + rng.normal(0.0, 2.0 * cfg.noise_sd), 4.0, 40.0);

        std::array<double, kEmotionChannels> mean = {};
        mean[kEngagement] = clampd(55.0 + 9.0 * f + rng.normal(0.0, 6.0 * cfg.noise_sd), 5.0, 95.0);
        mean[kContempt] = clampd(18.0 - 5.0 * f + rng.normal(0.0, 5.0 * cfg.noise_sd), 2.0, 80.0);
        mean[kSurprise] = clampd(30.0 + rng.normal(0.0, 7.0 * cfg.noise_sd), 2.0, 90.0);
        mean[kAnger] = clampd(22.0 - 7.0 * f + rng.normal(0.0, 6.0 * cfg.noise_sd), 2.0, 85.0);
        mean[kSadness] = clampd(20.0 - 6.0 * f + rng.normal(0.0, 6.0 * cfg.noise_sd), 2.0, 85.0);
        mean[kDisgust] = clampd(15.0 - 4.0 * f + rng.normal(0.0, 5.0 * cfg.noise_sd), 2.0, 80.0);
        mean[kFear] = clampd(14.0 - 3.0 * f + rng.normal(0.0, 5.0 * cfg.noise_sd), 2.0, 80.0);
        mean[kJoy] = clampd(36.0 + 13.0 * f + rng.normal(0.0, 8.0 * cfg.noise_sd), 2.0, 95.0);

        FrameSeries& series = plan.frames[p];
        series.frames.reserve(kFrameCount);
        int closure_left = 0;
        int burst_left = 0;
        bool prev_dropped = false;
        for (int i = 0; i < kFrameCount; ++i) {
            Frame fr;
            fr.t = i * 0.1;
            bool dropped = false;
            if (degraded) {
                if (burst_left > 0) {
                    dropped = true;
                    --burst_left;
                } else if (rng.uniform01() < burst_start_p) {
                    burst_left = 2 + static_cast<int>(rng.below(4));  // 2..5 frames
                    dropped = true;
                    --burst_left;
                }
            } else {
                // single-frame dropouts only, so detection spans survive
                dropped = !prev_dropped && rng.uniform01() < drop_target;
            }
            prev_dropped = dropped;

            // Blink state advances whether or not the frame is detected.
            if (closure_left > 0) {
                --closure_left;
            } else if (rng.uniform01() < bpm / 600.0) {
                closure_left = rng.uniform01() < 0.35 ? 2 : 1;
            }

            fr.face_detected = !dropped;
            if (!dropped) {
                for (int ch = 0; ch < kEmotionChannels; ++ch) {
                    fr.confidence[ch] = clampd(mean[ch] + rng.normal(0.0, 14.0), 0.0, 100.0);
                }
                fr.eyes_closed = closure_left > 0;
            }
            series.frames.push_back(fr);
        }
        series.fps = static_cast<double>(series.frames.size() - 1) / series.span();
    }

    // ---- game log (performance + in_game_behaviour channels) ----
    const double g = channel_affected(cfg, Category::performance) ? u_dyad : 0.0;
    const bool ingame_on = channel_affected(cfg, Category::in_game_behaviour);
    for (int p = 0; p < 2; ++p) {
        const Role round1_role = p == 0 ? Role::collector : Role::pusher;
        const double lam_collect = std::max(1.0, 16.0 * (1.0 + 0.22 * g));
        const double lam_push_round = std::max(1.0, 10.0 * (1.0 + 0.22 * g));
        const double ip = ingame_on ? u[p] : 0.0;
        const double lam_pushes = std::max(0.5, 8.0 * (1.0 + 0.3 * ip));
        const double p_vertical = ingame_on ? clampd(0.5 + 0.08 * u[p], 0.15, 0.85) : 0.5;

        GameLog& log = plan.logs[p];
        for (int round = 1; round <= 2; ++round) {
            const Role role =
                round == 1 ? round1_role
                           : (round1_role == Role::collector ? Role::pusher : Role::collector);
            const double w0 = round == 1 ? 10.0 : 180.0;
            const double w1 = round == 1 ? 150.0 : 320.0;
            const int scores = rng.poisson(role == Role::collector ? lam_collect : lam_push_round);
            for (int k = 0; k < scores; ++k) {
                GameEvent ev;
                ev.t = rng.uniform(w0, w1);
                ev.kind = EventKind::score;
                ev.round = round;
                ev.role = role;
                log.events.push_back(ev);
            }
            if (role == Role::pusher) {
                const int pushes = rng.poisson(lam_pushes);
                for (int k = 0; k < pushes; ++k) {
                    GameEvent ev;
                    ev.t = rng.uniform(w0, w1);
                    ev.kind = EventKind::push;
                    ev.round = round;
                    ev.role = role;
                    ev.orientation = rng.uniform01() < p_vertical ? PushOrientation::vertical
                                                                  : PushOrientation::horizontal;
                    log.events.push_back(ev);
                }
            }
        }
        std::stable_sort(log.events.begin(), log.events.end(),
                         [](const GameEvent& a, const GameEvent& b) { return a.t < b.t; });
    }

    // ---- questionnaire (self_report channel) ----
    const bool self_on = channel_affected(cfg, Category::self_report);
    for (int p = 0; p < 2; ++p) {
        const double s = self_on ? u[p] : 0.0;
        const double lat_e = clampd(4.3 + rng.normal(0.0, 1.1 * cfg.noise_sd), 1.0, 7.0);
        const double lat_a = clampd(4.8 + 0.55 * s + rng.normal(0.0, 1.0 * cfg.noise_sd), 1.0, 7.0);
        const double lat_c = clampd(4.9 + rng.normal(0.0, 1.0 * cfg.noise_sd), 1.0, 7.0);
        const double lat_es =
            clampd(4.4 + 0.45 * s + rng.normal(0.0, 1.1 * cfg.noise_sd), 1.0, 7.0);
        const double lat_o = clampd(5.0 + rng.normal(0.0, 0.9 * cfg.noise_sd), 1.0, 7.0);

        QuestionnaireResponse& r = plan.questionnaire[p].response;
        const auto direct = [&](double lat) { return clamp_item(lat + rng.normal(0.0, 0.8), 1, 7); };
        const auto reverse = [&](double lat) {
            return clamp_item(8.0 - lat + rng.normal(0.0, 0.8), 1, 7);
        };
        r.tipi[0] = direct(lat_e);
        r.tipi[1] = reverse(lat_a);
        r.tipi[2] = direct(lat_c);
        r.tipi[3] = reverse(lat_es);
        r.tipi[4] = direct(lat_o);
        r.tipi[5] = reverse(lat_e);
        r.tipi[6] = direct(lat_a);
        r.tipi[7] = reverse(lat_c);
        r.tipi[8] = direct(lat_es);
        r.tipi[9] = reverse(lat_o);

        const double trust = clampd(3.3 + 0.45 * s, 1.0, 5.0);
        for (int k = 0; k < 6; ++k) r.gts[k] = clamp_item(trust + rng.normal(0.0, 0.7), 1, 5);

        r.gamer_identification = clampd(4.5 + rng.normal(0.0, 1.3), 1.0, 7.0);
        r.genre_puzzles = rng.uniform01() < 0.45;
        r.genre_casual = rng.uniform01() < 0.55;
        r.brainhex_socializer = rng.uniform01() < clampd(0.35 + 0.10 * s, 0.05, 0.90);
        r.age = 19.0 + static_cast<double>(rng.below(22));
        const std::uint64_t gr = rng.below(100);
        r.gender = gr < 48 ? "female" : (gr < 96 ? "male" : "nonbinary");

        plan.questionnaire[p].affiliation_items = plan.items[p];
    }
    return plan;
}

std::pair<Sample, Sample> table_rows(const DyadPlan& plan, const std::string& dyad_id,
                                     const std::array<std::string, 2>& ids) {
    std::array<ParticipantArtifacts, 2> arts;
    for (int p = 0; p < 2; ++p) {
        arts[p].participant_id = ids[p];
        arts[p].timeline = SegmentTimeline::from_speech_intervals(kSessionSeconds, plan.speech[p]);
        arts[p].tokens = plan.tokens[p];
        arts[p].frames = plan.frames[p];
        arts[p].game_log = plan.logs[p];
        arts[p].questionnaire = plan.questionnaire[p].response;
        arts[p].affiliation_items = plan.questionnaire[p].affiliation_items;
    }
    return build_samples(arts[0], arts[1], dyad_id, demo_lexicon(), demo_gender_encoding());
}

AudioTrack render_audio(const std::vector<std::pair<double, double>>& speech, Rng& rng) {
    AudioTrack track;
    track.sample_rate = kSampleRate;
    track.start_offset = 0.0;
    const std::size_t n = static_cast<std::size_t>(kSessionSeconds * kSampleRate);
    track.samples.resize(n);

    // Every value is pre-quantized to q / 32768 with |q| < 16384, which makes
    // the 16-bit WAV round trip bit-exact.
    const auto quantize = [](double v) {
        return static_cast<float>(std::lround(v * 32767.0) / 32768.0);
    };
    for (std::size_t i = 0; i < n; ++i) {
        track.samples[i] = quantize(rng.uniform(-1e-4, 1e-4));  // faint room noise
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (const auto& [begin, end] : speech) {
        const double freq = rng.uniform(150.0, 230.0);
        const std::size_t i0 = static_cast<std::size_t>(std::ceil(begin * kSampleRate));
        const std::size_t i1 =
            std::min(n, static_cast<std::size_t>(std::floor(end * kSampleRate)));
        for (std::size_t i = i0; i < i1; ++i) {
            const double tt = static_cast<double>(i) / kSampleRate - begin;
            const double v = 0.33 * std::sin(kTwoPi * freq * tt) + rng.uniform(-0.05, 0.05);
            track.samples[i] = quantize(v);
        }
    }
    return track;
}

RawSession assemble_session(const SynthConfig& cfg, int d, DyadPlan&& plan,
                            std::pair<Sample, Sample>& rows_out) {
    const std::string dyad_id = dyad_name(cfg, d);
    const std::array<std::string, 2> ids = {dyad_id + "a", dyad_id + "b"};
    rows_out = table_rows(plan, dyad_id, ids);

    RawSession session;
    session.dyad_id = dyad_id;
    session.duration = kSessionSeconds;
    Rng wav_rng(derive_seed(cfg.seed, kWaveTag, static_cast<std::uint64_t>(d)));
    for (int p = 0; p < 2; ++p) {
        RawParticipant& part = session.participants[p];
        part.participant_id = ids[p];
        part.audio = render_audio(plan.speech[p], wav_rng);
        part.transcript = std::move(plan.transcript[p]);
        part.frames = std::move(plan.frames[p]);
        part.game_log = std::move(plan.logs[p]);
        part.questionnaire = std::move(plan.questionnaire[p]);
    }
    return session;
}

void write_session_dir(const std::string& dir, const RawSession& session) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["dyad_id"] = session.dyad_id;
    manifest["duration"] = session.duration;
    nlohmann::ordered_json parts = nlohmann::ordered_json::array();
    for (const RawParticipant& p : session.participants) {
        const std::string& id = p.participant_id;
        write_wav(dir + "/" + id + ".wav", p.audio);
        std::ofstream txt(dir + "/" + id + ".txt", std::ios::binary);
        if (!txt) throw InputError("cannot open '" + dir + "/" + id + ".txt' for writing");
        txt << p.transcript;
        if (!txt) throw InputError("failed while writing '" + dir + "/" + id + ".txt'");
        write_frames_csv(dir + "/" + id + "_frames.csv", p.frames);
        write_game_log(dir + "/" + id + "_log.jsonl", p.game_log);
        parts.push_back({{"id", id},
                         {"audio", id + ".wav"},
                         {"transcript", id + ".txt"},
                         {"frames", id + "_frames.csv"},
                         {"game_log", id + "_log.jsonl"}});
    }
    manifest["participants"] = std::move(parts);
    std::ofstream out(dir + "/manifest.json", std::ios::binary);
    if (!out) throw InputError("cannot open '" + dir + "/manifest.json' for writing");
    out << manifest.dump(1) << '\n';
    if (!out) throw InputError("failed while writing '" + dir + "/manifest.json'");
}

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
    validate_config(config);
    SynthCorpus corpus;
    corpus.sessions.reserve(static_cast<std::size_t>(config.n_dyads));
    for (int d = 0; d < config.n_dyads; ++d) {
        DyadPlan plan = plan_dyad(config, d);
        std::pair<Sample, Sample> rows;
        corpus.sessions.push_back(assemble_session(config, d, std::move(plan), rows));
        corpus.table.samples.push_back(std::move(rows.first));
        corpus.table.samples.push_back(std::move(rows.second));
    }
    corpus.table.validate();
    return corpus;
}

Dataset generate_table(const SynthConfig& config) {
    validate_config(config);
    Dataset table;
    table.samples.reserve(2 * static_cast<std::size_t>(config.n_dyads));
    for (int d = 0; d < config.n_dyads; ++d) {
        DyadPlan plan = plan_dyad(config, d);
        const std::string dyad_id = dyad_name(config, d);
        auto rows = table_rows(plan, dyad_id, {dyad_id + "a", dyad_id + "b"});
        table.samples.push_back(std::move(rows.first));
        table.samples.push_back(std::move(rows.second));
    }
    table.validate();
    return table;
}

Dataset write_corpus(const std::string& dir, const SynthConfig& config) {
    validate_config(config);
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    Dataset table;
    std::vector<std::pair<std::string, QuestionnaireRow>> rows;
    std::vector<std::string> session_dirs;
    for (int d = 0; d < config.n_dyads; ++d) {
        DyadPlan plan = plan_dyad(config, d);
        std::pair<Sample, Sample> table_pair;
        const RawSession session = assemble_session(config, d, std::move(plan), table_pair);
        write_session_dir(dir + "/" + session.dyad_id, session);
        for (const RawParticipant& p : session.participants) {
            rows.emplace_back(p.participant_id, p.questionnaire);
        }
        session_dirs.push_back(session.dyad_id);
        table.samples.push_back(std::move(table_pair.first));
        table.samples.push_back(std::move(table_pair.second));
    }

    write_questionnaire_csv(dir + "/questionnaire.csv", rows);
    {
        std::ofstream lex(dir + "/lexicon.lex", std::ios::binary);
        if (!lex) throw InputError("cannot open '" + dir + "/lexicon.lex' for writing");
        lex << demo_lexicon_text();
        if (!lex) throw InputError("failed while writing '" + dir + "/lexicon.lex'");
    }
    nlohmann::ordered_json j;
    j["format"] = "rapport-corpus";
    j["gender_encoding"] = demo_gender_encoding();
    j["lexicon"] = "lexicon.lex";
    j["questionnaires"] = "questionnaire.csv";
    j["sessions"] = session_dirs;
    std::ofstream out(dir + "/corpus.json", std::ios::binary);
    if (!out) throw InputError("cannot open '" + dir + "/corpus.json' for writing");
    out << j.dump(1) << '\n';
    if (!out) throw InputError("failed while writing '" + dir + "/corpus.json'");

    table.validate();
    return table;
}

std::pair<Sample, Sample> extract_raw_session(const RawSession& session, const Lexicon& lexicon,
                                              const std::map<std::string, double>& encoding) {
    std::array<ParticipantArtifacts, 2> arts;
    for (int p = 0; p < 2; ++p) {
        const RawParticipant& part = session.participants[p];
        arts[p].participant_id = part.participant_id;
        arts[p].timeline =
            segment_speech(part.audio).shifted(part.audio.start_offset, session.duration);
        arts[p].tokens = tokenize(part.transcript);
        arts[p].frames = part.frames;
        arts[p].game_log = part.game_log;
        arts[p].questionnaire = part.questionnaire.response;
        arts[p].affiliation_items = part.questionnaire.affiliation_items;
    }
    return build_samples(arts[0], arts[1], session.dyad_id, lexicon, encoding);
}

const std::string& demo_lexicon_text() {
    static const std::string text = R"LEX(# Open demonstration lexicon for communication-content features.
# Format: "%categories" section with "name: word word stem*" lines; an optional
# "%summaries" section defines weighted composites of category rates.
# Word lists are small, hand-written approximations in the LIWC spirit; they
# are NOT the commercial LIWC dictionaries.

%categories
i: i i'm i've i'll i'd me my mine myself
we: we we're we've we'll we'd us our ours ourselves lets let's
you: you you're you've you'll you'd your yours yourself yourselves
number: one two three four five six seven eight nine ten eleven twelve twenty hundred thousand first second third half quarter couple dozen number* digit* count*
posemo: good great nice love* happ* joy* glad awesome excellent perfect* win* fun funny sweet super brilliant beaut* cheer* hope* proud relax* excit* amaz* enjoy*
negemo: bad sad mad hate* angr* annoy* awful terrible horri* worr* fear* afraid lose losing lost fail* stress* upset ugh damn wrong* panic* frustrat*
affect: good great nice love* happ* joy* glad awesome excellent perfect* fun funny sweet bad sad mad hate* angr* annoy* awful terrible worr* fear* excit* amaz* upset care* feel* felt emotion*
social: friend* buddy partner* team* talk* tell* told say* said ask* answer* help* share* thank* please sorry welcome together everyone somebody people person* social* chat* listen*
affiliation: ally allies together team* teammate* friend* partner* us we our join* belong* communit* cooperat* collaborat* bond* unite* loyal* support*
motion: go going gone went move* moving run* running walk* push* pull* slide* shift* turn* drop* lift* carry* bring* took take taking throw* roll* rotat*
space: up down left right above below under over near far close behind ahead front back side* corner* edge* top bottom middle center inside outside here there room* area* row* column*
time: now then today tonight yesterday tomorrow soon later early late before after during while when whenever minute* second* hour* day* week* month* year* moment* start* begin* end* finish* last first next
insight: think* thought know* knew understand* realiz* believ* idea* reason* consider* figure* sense* mean* learn*
cause: because cause* effect* hence therefore thus since make* made force* depend* result* lead* produce*
certain: always never definitely certain* sure* absolutely clear* obvious* exact* total* complete* every all
tentative: maybe perhaps guess* seem* appear* sort kind somewhat possib* probab* might may hopefully roughly almost
power: boss* lead* leader* control* command* order* rule* power* strong* weak* win* beat* domina* charge
reward: reward* prize* bonus* score* point* gain* benefit* achiev* succe* earn*
risk: risk* danger* careful* caution* avoid* threat* unsafe safe* protect* problem*
work: work* task* goal* plan* strateg* project* job* effort* focus* practice*

%summaries
# Composite dimensions on the 0-100 rate scale, built from category rates.
analytic = 30 + 1.5*cause + 1.5*insight + 1.0*number + 0.8*work - 1.2*i - 0.8*affect
clout = 40 + 1.6*we + 1.4*you + 1.2*power - 1.6*i - 0.8*tentative
authentic = 35 + 1.8*i + 0.9*insight - 1.0*power - 0.6*certain
tone = 50 + 1.8*posemo - 2.2*negemo + 0.5*reward - 0.5*risk
)LEX";
    return text;
}

const Lexicon& demo_lexicon() {
    static const Lexicon lex = parse_lexicon(demo_lexicon_text(), "<builtin demo lexicon>");
    return lex;
}

const std::map<std::string, double>& demo_gender_encoding() {
    static const std::map<std::string, double> encoding = {
        {"female", 0.0}, {"male", 1.0}, {"nonbinary", 2.0}};
    return encoding;
}

}  // namespace rapport
