#include "rapport/pipeline.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "rapport/error.hpp"
#include "rapport/stats.hpp"
#include "rapport/vad.hpp"
#include "rapport/wav.hpp"

namespace rapport {

namespace {

// Schema layout offsets; the widths are pinned by FeatureSchema::standard()
// and double-checked below before any assignment.
constexpr std::size_t kChronemics = 0;    // 12
constexpr std::size_t kContent = 12;      // 17
constexpr std::size_t kBlink = 29;        // 2
constexpr std::size_t kInGame = 31;       // 2
constexpr std::size_t kFacial = 33;       // 16, mean/peaks interleaved
constexpr std::size_t kPerformance = 49;  // 12
constexpr std::size_t kSelfReport = 61;   // 14

void set_flag(FeatureVector& fv, std::size_t i, bool b) { fv.set(i, b ? 1.0 : 0.0); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw InputError("failed while reading '" + path + "'");
    return std::move(buf).str();
}

FeatureParts participant_parts(const ParticipantArtifacts& self,
                               const ParticipantArtifacts& other, bool first,
                               const Lexicon& lexicon,
                               const std::map<std::string, double>& gender_encoding) {
    FeatureParts parts;
    parts.speaker = speaker_features(self.timeline);
    const auto turns = first ? conversational_turns(self.timeline, other.timeline)
                             : conversational_turns(other.timeline, self.timeline);
    parts.conversational_turns = first ? turns.first : turns.second;
    parts.silence = silence_features(self.timeline, other.timeline);
    const DominanceFlags dom = dominance(self.timeline, other.timeline);
    parts.dominant_speak_time = dom.speak_time_a;
    parts.dominant_turns = dom.turns_a;
    parts.content = content_features(self.tokens, lexicon);
    parts.blink = blink_features(self.frames);
    parts.facial = facial_features(self.frames);
    parts.performance = performance_features(self.game_log);
    parts.pushes = behaviour_features(self.game_log);
    QuestionnaireResponse resp = self.questionnaire;
    resp.partner_gender = other.questionnaire.gender;
    parts.traits = trait_features(resp, gender_encoding);
    return parts;
}

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

// ---- questionnaire CSV ----------------------------------------------------

std::vector<std::string> questionnaire_columns() {
    std::vector<std::string> cols = {"participant_id",  "age",
                                     "gender",          "gamer_identification",
                                     "genre_puzzles",   "genre_casual",
                                     "brainhex_socializer"};
    for (int i = 1; i <= 10; ++i) cols.push_back("tipi_" + std::to_string(i));
    for (int i = 1; i <= 6; ++i) cols.push_back("gts_" + std::to_string(i));
    for (int i = 1; i <= 11; ++i) cols.push_back("affil_" + std::to_string(i));
    return cols;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_number(const std::string& field, const std::string& path, std::size_t line_no,
                    const std::string& column) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw InputError("'" + path + "' line " + std::to_string(line_no) + ": column '" +
                         column + "' has non-numeric value '" + field + "'");
    }
    return v;
}

int parse_item(const std::string& field, const std::string& path, std::size_t line_no,
               const std::string& column) {
    const double v = parse_number(field, path, line_no, column);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw InputError("'" + path + "' line " + std::to_string(line_no) + ": column '" +
                         column + "' must be an integer, got '" + field + "'");
    }
    return i;
}

bool parse_bool_flag(const std::string& field, const std::string& path, std::size_t line_no,
                     const std::string& column) {
    if (field == "0") return false;
    if (field == "1") return true;
    throw InputError("'" + path + "' line " + std::to_string(line_no) + ": column '" + column +
                     "' must be 0 or 1, got '" + field + "'");
}

}  // namespace

FeatureVector assemble_features(const FeatureParts& parts) {
    const FeatureSchema& schema = FeatureSchema::standard();
    FeatureVector fv(schema.size());
    if (schema.size() != kSelfReport + 14) {
        throw InputError("assemble_features: schema width does not match the pinned layout");
    }

    const SpeakerStats& sp = parts.speaker;
    fv.set(kChronemics + 0, sp.time_speaking);
    fv.set(kChronemics + 1, sp.count_speech_segments);
    fv.set(kChronemics + 2, parts.conversational_turns);
    if (sp.avg_speech_valid) fv.set(kChronemics + 3, sp.avg_speech_segment_length);
    if (sp.avg_pause_valid) fv.set(kChronemics + 4, sp.avg_pause_segment_length);
    if (sp.sd_speech_valid) fv.set(kChronemics + 5, sp.sd_speech_segment_length);
    set_flag(fv, kChronemics + 6, parts.dominant_speak_time);
    set_flag(fv, kChronemics + 7, parts.dominant_turns);
    fv.set(kChronemics + 8, parts.silence.time_silence);
    fv.set(kChronemics + 9, parts.silence.fraction_time_silence);
    if (parts.silence.avg_valid) fv.set(kChronemics + 10, parts.silence.average_silence_length);
    fv.set(kChronemics + 11, parts.silence.first_silence_length);

    if (parts.content.values.size() != 17 || parts.content.valid.size() != 17) {
        throw InputError("assemble_features: content feature block must have 17 entries");
    }
    for (std::size_t i = 0; i < 17; ++i) {
        if (parts.content.valid[i]) fv.set(kContent + i, parts.content.values[i]);
    }

    if (parts.blink.valid) {
        fv.set(kBlink + 0, parts.blink.mean_rate);
        fv.set(kBlink + 1, parts.blink.sd_rate);
    }

    fv.set(kInGame + 0, parts.pushes.first);
    fv.set(kInGame + 1, parts.pushes.second);

    if (parts.facial.valid) {
        for (int c = 0; c < kEmotionChannels; ++c) {
            fv.set(kFacial + 2 * static_cast<std::size_t>(c), parts.facial.mean[c]);
            fv.set(kFacial + 2 * static_cast<std::size_t>(c) + 1, parts.facial.peaks[c]);
        }
    }

    if (parts.performance.size() != 12) {
        throw InputError("assemble_features: performance block must have 12 entries");
    }
    for (std::size_t i = 0; i < 12; ++i) fv.set(kPerformance + i, parts.performance[i]);

    for (std::size_t i = 0; i < 14; ++i) {
        if (parts.traits.valid[i]) fv.set(kSelfReport + i, parts.traits.values[i]);
    }
    return fv;
}

std::pair<Sample, Sample> build_samples(const ParticipantArtifacts& a,
                                        const ParticipantArtifacts& b, const std::string& dyad_id,
                                        const Lexicon& lexicon,
                                        const std::map<std::string, double>& gender_encoding) {
    if (a.timeline.duration() != b.timeline.duration()) {
        throw InputError("session '" + dyad_id +
                         "': participant timelines cover different durations");
    }
    Sample sa;
    sa.participant_id = a.participant_id;
    sa.dyad_id = dyad_id;
    sa.features = assemble_features(participant_parts(a, b, true, lexicon, gender_encoding));
    sa.affiliation = score_affiliation(a.affiliation_items);

    Sample sb;
    sb.participant_id = b.participant_id;
    sb.dyad_id = dyad_id;
    sb.features = assemble_features(participant_parts(b, a, false, lexicon, gender_encoding));
    sb.affiliation = score_affiliation(b.affiliation_items);
    return {std::move(sa), std::move(sb)};
}

SessionManifest read_session_manifest(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    try {
        SessionManifest m;
        m.dyad_id = j.at("dyad_id").get<std::string>();
        m.duration = j.at("duration").get<double>();
        if (!(m.duration > 0.0)) {
            throw InputError("'" + path + "': session duration must be positive");
        }
        const auto& parts = j.at("participants");
        if (!parts.is_array() || parts.size() != 2) {
            throw InputError("'" + path + "': manifest must list exactly two participants");
        }
        for (std::size_t i = 0; i < 2; ++i) {
            ParticipantRef& ref = m.participants[i];
            ref.id = parts[i].at("id").get<std::string>();
            ref.audio = parts[i].at("audio").get<std::string>();
            ref.transcript = parts[i].at("transcript").get<std::string>();
            ref.frames = parts[i].at("frames").get<std::string>();
            ref.game_log = parts[i].at("game_log").get<std::string>();
        }
        if (m.participants[0].id == m.participants[1].id) {
            throw InputError("'" + path + "': the two participants share the id '" +
                             m.participants[0].id + "'");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is missing manifest fields: " + e.what());
    }
}

std::map<std::string, QuestionnaireRow> read_questionnaire_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");

    const std::vector<std::string> cols = questionnaire_columns();
    std::string header_line;
    std::ostringstream expected;
    for (std::size_t i = 0; i < cols.size(); ++i) expected << (i ? "," : "") << cols[i];
    if (!std::getline(in, header_line) || header_line != expected.str()) {
        throw InputError("'" + path + "': questionnaire header does not match '" +
                         expected.str() + "'");
    }

    std::map<std::string, QuestionnaireRow> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != cols.size()) {
            throw InputError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cols.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        const std::string& id = fields[0];
        if (id.empty()) {
            throw InputError("'" + path + "' line " + std::to_string(line_no) +
                             ": empty participant_id");
        }
        QuestionnaireRow row;
        QuestionnaireResponse& r = row.response;
        r.age = parse_number(fields[1], path, line_no, cols[1]);
        r.gender = fields[2];
        r.gamer_identification = parse_number(fields[3], path, line_no, cols[3]);
        r.genre_puzzles = parse_bool_flag(fields[4], path, line_no, cols[4]);
        r.genre_casual = parse_bool_flag(fields[5], path, line_no, cols[5]);
        r.brainhex_socializer = parse_bool_flag(fields[6], path, line_no, cols[6]);
        for (std::size_t i = 0; i < 10; ++i) {
            r.tipi[i] = parse_item(fields[7 + i], path, line_no, cols[7 + i]);
        }
        for (std::size_t i = 0; i < 6; ++i) {
            r.gts[i] = parse_item(fields[17 + i], path, line_no, cols[17 + i]);
        }
        row.affiliation_items.resize(11);
        for (std::size_t i = 0; i < 11; ++i) {
            row.affiliation_items[i] = parse_number(fields[23 + i], path, line_no, cols[23 + i]);
        }
        if (!rows.emplace(id, std::move(row)).second) {
            throw InputError("'" + path + "' line " + std::to_string(line_no) +
                             ": duplicate participant_id '" + id + "'");
        }
    }
    if (in.bad()) throw InputError("failed while reading '" + path + "'");
    return rows;
}

void write_questionnaire_csv(const std::string& path,
                             const std::vector<std::pair<std::string, QuestionnaireRow>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    const std::vector<std::string> cols = questionnaire_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& [id, row] : rows) {
        if (id.find_first_of(",\n\r") != std::string::npos ||
            row.response.gender.find_first_of(",\n\r") != std::string::npos) {
            throw InputError("questionnaire fields must not contain commas or line breaks ('" +
                             id + "')");
        }
        if (row.affiliation_items.size() != 11) {
            throw InputError("participant '" + id + "' must have 11 affiliation items, has " +
                             std::to_string(row.affiliation_items.size()));
        }
        const QuestionnaireResponse& r = row.response;
        out << id << ',' << format_double(r.age) << ',' << r.gender << ','
            << format_double(r.gamer_identification) << ',' << (r.genre_puzzles ? 1 : 0) << ','
            << (r.genre_casual ? 1 : 0) << ',' << (r.brainhex_socializer ? 1 : 0);
        for (int v : r.tipi) out << ',' << v;
        for (int v : r.gts) out << ',' << v;
        for (double v : row.affiliation_items) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out) throw InputError("failed while writing '" + path + "'");
}

Corpus load_corpus(const std::string& dir) {
    const std::string corpus_path = dir + "/corpus.json";
    const nlohmann::json j = parse_json_file(corpus_path);
    Corpus corpus;
    corpus.dir = dir;
    try {
        if (j.at("format").get<std::string>() != "rapport-corpus") {
            throw InputError("'" + corpus_path + "' is not a corpus description");
        }
        for (const auto& [name, value] : j.at("gender_encoding").items()) {
            corpus.gender_encoding[name] = value.get<double>();
        }
        corpus.lexicon = load_lexicon(dir + "/" + j.at("lexicon").get<std::string>());
        corpus.questionnaires =
            read_questionnaire_csv(dir + "/" + j.at("questionnaires").get<std::string>());
        const auto& sessions = j.at("sessions");
        if (!sessions.is_array() || sessions.empty()) {
            throw InputError("corpus '" + dir + "' has no sessions");
        }
        for (const auto& s : sessions) {
            const std::string session_dir = dir + "/" + s.get<std::string>();
            corpus.sessions.push_back(read_session_manifest(session_dir + "/manifest.json"));
            corpus.session_dirs.push_back(session_dir);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + corpus_path + "' is missing corpus fields: " + e.what());
    }
    return corpus;
}

std::pair<Sample, Sample> extract_session(const Corpus& corpus, std::size_t session_index) {
    if (session_index >= corpus.sessions.size()) {
        throw InputError("extract_session: session index out of range");
    }
    const SessionManifest& manifest = corpus.sessions[session_index];
    const std::string& session_dir = corpus.session_dirs[session_index];

    std::array<ParticipantArtifacts, 2> arts;
    for (std::size_t i = 0; i < 2; ++i) {
        const ParticipantRef& ref = manifest.participants[i];
        ParticipantArtifacts& art = arts[i];
        art.participant_id = ref.id;
        const AudioTrack track = read_wav(session_dir + "/" + ref.audio);
        art.timeline = segment_speech(track).shifted(track.start_offset, manifest.duration);
        art.tokens = tokenize(read_text_file(session_dir + "/" + ref.transcript));
        art.frames = read_frames_csv(session_dir + "/" + ref.frames);
        art.game_log = read_game_log(session_dir + "/" + ref.game_log);
        const auto it = corpus.questionnaires.find(ref.id);
        if (it == corpus.questionnaires.end()) {
            throw InputError("corpus '" + corpus.dir + "': no questionnaire row for participant '" +
                             ref.id + "'");
        }
        art.questionnaire = it->second.response;
        art.affiliation_items = it->second.affiliation_items;
    }
    return build_samples(arts[0], arts[1], manifest.dyad_id, corpus.lexicon,
                         corpus.gender_encoding);
}

Dataset extract_corpus(const std::string& dir) {
    const Corpus corpus = load_corpus(dir);
    Dataset data;
    data.samples.reserve(2 * corpus.sessions.size());
    for (std::size_t i = 0; i < corpus.sessions.size(); ++i) {
        auto [a, b] = extract_session(corpus, i);
        data.samples.push_back(std::move(a));
        data.samples.push_back(std::move(b));
    }
    data.validate();
    return data;
}

}  // namespace rapport
