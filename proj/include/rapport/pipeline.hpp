#pragma once

// Corpus plumbing: the session-manifest directory layout, questionnaire
// parsing, and the assembly of one participant's extracted parts into a
// schema-ordered feature row. Everything here is shared by the extraction CLI
// and the synthetic-corpus generator, so the two can never drift apart on
// layout or feature order.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rapport/lexicon.hpp"
#include "rapport/schema.hpp"
#include "rapport/telemetry.hpp"
#include "rapport/timeline.hpp"
#include "rapport/traits.hpp"
#include "rapport/visual.hpp"

namespace rapport {

// The per-participant ingredients of a feature row; validity flags inside the
// parts decide which cells become NA.
struct FeatureParts {
    SpeakerStats speaker;
    int conversational_turns = 0;
    SilenceStats silence;
    bool dominant_speak_time = false;
    bool dominant_turns = false;
    ContentFeatures content;
    BlinkFeatures blink;
    FacialFeatures facial;
    std::vector<double> performance;  // the 12 score features, schema order
    std::pair<int, int> pushes;       // vertical, horizontal
    TraitFeatures traits;
};

// Lays the parts out in the standard 75-feature schema order.
FeatureVector assemble_features(const FeatureParts& parts);

// One participant's in-memory artifacts, ready for feature assembly. The
// timeline is post-VAD when the source is audio, or the generator's intended
// timeline when computing ground-truth tables.
struct ParticipantArtifacts {
    std::string participant_id;
    SegmentTimeline timeline;
    std::vector<std::string> tokens;
    FrameSeries frames;
    GameLog game_log;
    QuestionnaireResponse questionnaire;
    std::vector<double> affiliation_items;  // 11 items, 1..7
};

// Builds the two samples of one session: pairwise chronemics, per-participant
// everything else, affiliation from the questionnaire items. Partner gender is
// taken from the other participant's questionnaire.
std::pair<Sample, Sample> build_samples(const ParticipantArtifacts& a,
                                        const ParticipantArtifacts& b, const std::string& dyad_id,
                                        const Lexicon& lexicon,
                                        const std::map<std::string, double>& gender_encoding);

// --------------------------------------------------------------------------
// on-disk corpus layout
//
// corpus_dir/
//   corpus.json        {"format":"rapport-corpus","gender_encoding":{...},
//                       "lexicon":"lexicon.lex","questionnaires":"questionnaire.csv",
//                       "sessions":["d01",...]}
//   lexicon.lex        category lexicon for the transcripts
//   questionnaire.csv  one row per participant (see header in pipeline.cpp)
//   d01/manifest.json  {"dyad_id":"d01","duration":330,"participants":[
//                        {"id":"d01a","audio":"d01a.wav","transcript":"d01a.txt",
//                         "frames":"d01a_frames.csv","game_log":"d01a_log.jsonl"}, ...]}
//   d01/<artifacts>    paths in the manifest are relative to the session dir

struct ParticipantRef {
    std::string id;
    std::string audio;
    std::string transcript;
    std::string frames;
    std::string game_log;
};

struct SessionManifest {
    std::string dyad_id;
    double duration = 0.0;
    std::array<ParticipantRef, 2> participants;
};

SessionManifest read_session_manifest(const std::string& path);

struct QuestionnaireRow {
    QuestionnaireResponse response;  // partner_gender left unset; derived from pairing
    std::vector<double> affiliation_items;
};

struct Corpus {
    std::string dir;
    std::map<std::string, double> gender_encoding;
    Lexicon lexicon;
    std::vector<SessionManifest> sessions;                // one per session dir
    std::vector<std::string> session_dirs;                // absolute-ish paths
    std::map<std::string, QuestionnaireRow> questionnaires;  // by participant id
};

// Reads corpus.json, the lexicon, the questionnaire table, and every session
// manifest. A corpus without sessions is an input error ("no sessions").
Corpus load_corpus(const std::string& dir);

// Questionnaire CSV reader/writer (shared file, one row per participant).
std::map<std::string, QuestionnaireRow> read_questionnaire_csv(const std::string& path);
void write_questionnaire_csv(const std::string& path,
                             const std::vector<std::pair<std::string, QuestionnaireRow>>& rows);

// Extracts one session from disk: WAV -> VAD timeline (aligned to the
// manifest duration), transcript -> tokens, frames/log/questionnaire as is.
std::pair<Sample, Sample> extract_session(const Corpus& corpus, std::size_t session_index);

// Full extraction: every session, dataset validated. Errors name the
// offending file.
Dataset extract_corpus(const std::string& dir);

}  // namespace rapport
