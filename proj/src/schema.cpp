#include "rapport/schema.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rapport/error.hpp"

namespace rapport {

const char* to_string(Category c) {
    switch (c) {
        case Category::chronemics: return "chronemics";
        case Category::comm_content: return "comm_content";
        case Category::eye_blink: return "eye_blink";
        case Category::in_game_behaviour: return "in_game_behaviour";
        case Category::facial_expression: return "facial_expression";
        case Category::performance: return "performance";
        case Category::self_report: return "self_report";
    }
    return "?";
}

std::optional<Category> category_from_string(const std::string& s) {
    for (int i = 0; i < kCategoryCount; ++i) {
        const Category c = static_cast<Category>(i);
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

namespace {

std::vector<SchemaEntry> standard_entries() {
    using C = Category;
    std::vector<SchemaEntry> e;
    e.reserve(75);
    auto add = [&e](C c, std::initializer_list<const char*> names) {
        for (const char* n : names) e.push_back({n, c});
    };
    add(C::chronemics,
        {"TimeSpeaking", "CountSpeechSegments", "CountConversationalTurns",
         "AvgSpeechSegmentLength", "AvgPauseSegmentLength", "SDSpeechSegmentLength",
         "IsDominantSpeakTime", "IsDominantConvTurns", "TimeSilence", "FractionTimeSilence",
         "AverageSilenceLength", "FirstSilenceLength"});
    add(C::comm_content,
        {"CountTotalWords", "CountWordsAnalytic", "CountWordsClout", "CountWordsAuthentic",
         "CountWordsTone", "CountWordsPronounI", "CountWordsPronounWe", "CountWordsPronounYou",
         "CountWordsNumber", "CountWordsAffect", "CountWordsPosEmo", "CountWordsNegEmo",
         "CountWordsSocial", "CountWordsAffilitation", "CountWordsMotion", "CountWordsSpace",
         "CountWordsTime"});
    add(C::eye_blink, {"MeanBlinkRate", "StdBlinkRate"});
    add(C::in_game_behaviour, {"CountVerticalPushes", "CountHorizontalPushes"});
    add(C::facial_expression,
        {"EngagementMean", "EngagementPeaks", "ContemptMean", "ContemptPeaks", "SurpriseMean",
         "SurprisePeaks", "AngerMean", "AngerPeaks", "SadnessMean", "SadnessPeaks", "DisgustMean",
         "DisgustPeaks", "FearMean", "FearPeaks", "JoyMean", "JoyPeaks"});
    add(C::performance,
        {"ScoreRound1", "ScoreRound2", "ScoreCollector", "ScorePusher", "ScoreDiffRounds",
         "ScoreAbsDiffRounds", "ScoreDiffRole", "ScoreAbsDiffRole", "ScoreOverall", "ScoreMean",
         "ScoreMin", "ScoreMax"});
    add(C::self_report,
        {"Age", "GamerIdentification", "GenrePuzzles", "GenreCasual", "SameGenderCoPlayer",
         "Gender", "GenderCoPlayer", "Extraversion", "Agreeableness", "Conscientiousness",
         "EmotionalStability", "Openness", "PropensityToTrust", "BrainhexSocializer"});
    return e;
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<SchemaEntry> entries) : entries_(std::move(entries)) {}

const FeatureSchema& FeatureSchema::standard() {
    static const FeatureSchema schema(standard_entries());
    return schema;
}

std::size_t FeatureSchema::index_of(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw InputError("schema: unknown feature name '" + name + "'");
}

std::optional<std::size_t> FeatureSchema::find(const std::string& name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name) return i;
    return std::nullopt;
}

std::vector<int> FeatureSchema::category_indices(Category c) const {
    std::vector<int> idx;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].category == c) idx.push_back(static_cast<int>(i));
    return idx;
}

std::uint64_t FeatureSchema::hash() const {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit offset basis
    auto mix = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& e : entries_) {
        mix(e.name);
        mix("|");
        mix(to_string(e.category));
        mix("\n");
    }
    return h;
}

void FeatureVector::set(std::size_t i, double v) {
    if (!std::isfinite(v)) throw NumericError("feature vector: non-finite value at index " + std::to_string(i));
    values[i] = v;
    valid[i] = 1;
}

void FeatureVector::set_invalid(std::size_t i) {
    values[i] = 0.0;
    valid[i] = 0;
}

void Dataset::validate() const {
    const auto& schema = FeatureSchema::standard();
    std::map<std::string, int> dyad_counts;
    for (const auto& s : samples) {
        if (s.features.size() != schema.size())
            throw InputError("dataset: sample '" + s.participant_id + "' has " +
                             std::to_string(s.features.size()) + " features, schema has " +
                             std::to_string(schema.size()));
        for (std::size_t i = 0; i < s.features.size(); ++i)
            if (s.features.is_valid(i) && !std::isfinite(s.features.values[i]))
                throw InputError("dataset: non-finite valid cell in sample '" + s.participant_id +
                                 "', feature '" + schema.entry(i).name + "'");
        if (!(s.affiliation >= 1.0 && s.affiliation <= 7.0))
            throw InputError("dataset: affiliation out of [1,7] for sample '" + s.participant_id + "'");
        dyad_counts[s.dyad_id]++;
    }
    for (const auto& [dyad, count] : dyad_counts)
        if (count != 2)
            throw InputError("dataset: dyad '" + dyad + "' appears " + std::to_string(count) +
                             " times, expected exactly 2");
}

std::vector<std::string> Dataset::dyad_ids_sorted() const {
    std::vector<std::string> ids;
    for (const auto& s : samples) {
        bool seen = false;
        for (const auto& d : ids)
            if (d == s.dyad_id) { seen = true; break; }
        if (!seen) ids.push_back(s.dyad_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    // Fields in the feature table never contain commas or quotes.
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double_strict(const std::string& s, const std::string& context) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw InputError("csv: bad numeric value '" + s + "' in " + context);
    return v;
}

}  // namespace

void write_feature_csv(const std::string& path, const Dataset& data) {
    const auto& schema = FeatureSchema::standard();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("csv: cannot open '" + path + "' for writing");
    out << "participant_id,dyad_id,affiliation";
    for (const auto& e : schema.entries()) out << ',' << e.name;
    out << '\n';
    for (const auto& s : data.samples) {
        out << s.participant_id << ',' << s.dyad_id << ',' << format_double(s.affiliation);
        for (std::size_t i = 0; i < schema.size(); ++i) {
            out << ',';
            if (s.features.is_valid(i))
                out << format_double(s.features.values[i]);
            else
                out << "NA";
        }
        out << '\n';
    }
    if (!out) throw InputError("csv: write failed for '" + path + "'");
}

Dataset read_feature_csv(const std::string& path) {
    const auto& schema = FeatureSchema::standard();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError("csv: '" + path + "' is empty");
    const auto header = split_csv_line(line);
    const std::size_t expected = 3 + schema.size();
    if (header.size() != expected)
        throw InputError("csv: '" + path + "' header has " + std::to_string(header.size()) +
                         " columns, expected " + std::to_string(expected));
    if (header[0] != "participant_id" || header[1] != "dyad_id" || header[2] != "affiliation")
        throw InputError("csv: '" + path + "' must start with participant_id,dyad_id,affiliation");
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (header[3 + i] != schema.entry(i).name)
            throw InputError("csv: '" + path + "' column " + std::to_string(3 + i) + " is '" +
                             header[3 + i] + "', expected '" + schema.entry(i).name + "'");

    Dataset data;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected)
            throw InputError("csv: '" + path + "' line " + std::to_string(line_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(expected));
        Sample s;
        s.participant_id = fields[0];
        s.dyad_id = fields[1];
        const std::string ctx = path + " line " + std::to_string(line_no);
        s.affiliation = parse_double_strict(fields[2], ctx);
        s.features = FeatureVector(schema.size());
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const std::string& f = fields[3 + i];
            if (f == "NA")
                s.features.set_invalid(i);
            else
                s.features.set(i, parse_double_strict(f, ctx));
        }
        data.samples.push_back(std::move(s));
    }
    data.validate();
    return data;
}

}  // namespace rapport
