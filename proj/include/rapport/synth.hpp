#pragma once

// Synthetic dyadic sessions with a planted latent affiliation signal. Each
// dyad gets raw artifacts (audio, transcript, frame series, game log,
// questionnaire) plus a ground-truth feature table computed by running the
// real extractors on the intended in-memory artifacts; the only difference
// between the table and a full disk round-trip is VAD quantization noise in
// the chronemic features.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rapport/pipeline.hpp"
#include "rapport/schema.hpp"
#include "rapport/vad.hpp"

namespace rapport {

struct SynthConfig {
    int n_dyads = 23;
    double signal_strength = 0.8;  // in [0,1]; 0 yields a null corpus
    double noise_sd = 1.0;         // scales the non-signal variation
    std::uint64_t seed = 0;
    // Categories whose generating processes depend on affiliation; the rest
    // are pure noise. Defaults to every category.
    std::vector<Category> affected_channels = {
        Category::chronemics,      Category::comm_content, Category::eye_blink,
        Category::in_game_behaviour, Category::facial_expression, Category::performance,
        Category::self_report,
    };
};

struct RawParticipant {
    std::string participant_id;
    AudioTrack audio;  // empty in table-only generation
    std::string transcript;
    FrameSeries frames;
    GameLog game_log;
    QuestionnaireRow questionnaire;
};

struct RawSession {
    std::string dyad_id;
    double duration = 0.0;
    std::array<RawParticipant, 2> participants;
};

struct SynthCorpus {
    std::vector<RawSession> sessions;
    Dataset table;  // ground-truth features + affiliation labels
};

// Full in-memory corpus, audio included. Deterministic in config.seed;
// per-dyad streams are split from it, so dyad d is identical across calls
// that share a seed regardless of n_dyads.
SynthCorpus generate(const SynthConfig& config);

// The ground-truth table alone, skipping audio rendering; bitwise identical
// to generate(config).table.
Dataset generate_table(const SynthConfig& config);

// Writes a corpus in the session-manifest layout load_corpus reads, one
// session at a time (bounded memory), and returns the ground-truth table.
Dataset write_corpus(const std::string& dir, const SynthConfig& config);

// Runs the real extraction stack (VAD, tokenizer, ...) on one in-memory
// session; the generator's self-consistency oracle.
std::pair<Sample, Sample> extract_raw_session(const RawSession& session, const Lexicon& lexicon,
                                              const std::map<std::string, double>& encoding);

// The category lexicon generated corpora are written with; the embedded text
// is kept byte-identical to data/liwc_open.lex.
const std::string& demo_lexicon_text();
const Lexicon& demo_lexicon();
const std::map<std::string, double>& demo_gender_encoding();

}  // namespace rapport
