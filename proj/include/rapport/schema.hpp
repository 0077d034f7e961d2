#pragma once

// The 75-feature behavioral schema shared by every pipeline stage: extraction
// fills it, imputation repairs it, models consume it. Feature order and names
// are frozen; serialized artifacts carry a schema hash so stale models are
// refused instead of silently misaligned.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rapport {

enum class Category {
    chronemics,
    comm_content,
    eye_blink,
    in_game_behaviour,
    facial_expression,
    performance,
    self_report,
};

constexpr int kCategoryCount = 7;

const char* to_string(Category c);
std::optional<Category> category_from_string(const std::string& s);

struct SchemaEntry {
    std::string name;
    Category category;
};

class FeatureSchema {
public:
    // The canonical 75-feature schema (12 chronemics, 17 communication content,
    // 2 eye blink, 2 in-game behaviour, 16 facial expression, 12 performance,
    // 14 self-report).
    static const FeatureSchema& standard();

    std::size_t size() const { return entries_.size(); }
    const SchemaEntry& entry(std::size_t i) const { return entries_[i]; }
    const std::vector<SchemaEntry>& entries() const { return entries_; }

    // Index of a feature name; throws InputError for unknown names.
    std::size_t index_of(const std::string& name) const;
    std::optional<std::size_t> find(const std::string& name) const;

    std::vector<int> category_indices(Category c) const;

    // FNV-1a over "name|category" lines; used to fence serialized models.
    std::uint64_t hash() const;

private:
    explicit FeatureSchema(std::vector<SchemaEntry> entries);
    std::vector<SchemaEntry> entries_;
};

// A row of feature values plus per-feature validity. Invalid cells hold 0 and
// mean "missing": extraction could not produce a trustworthy value.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::uint8_t> valid;

    FeatureVector() = default;
    explicit FeatureVector(std::size_t n) : values(n, 0.0), valid(n, 0) {}

    std::size_t size() const { return values.size(); }

    void set(std::size_t i, double v);       // marks valid; rejects non-finite
    void set_invalid(std::size_t i);         // zeroes and marks missing
    bool is_valid(std::size_t i) const { return valid[i] != 0; }
};

struct Sample {
    std::string participant_id;
    std::string dyad_id;
    FeatureVector features;
    double affiliation = 0.0;
    std::optional<bool> high_affiliation;  // set by median_split
};

struct Dataset {
    std::vector<Sample> samples;

    // Checks schema width, finite valid cells, affiliation range, and that
    // every dyad id appears exactly twice. Throws InputError on violation.
    void validate() const;

    std::vector<std::string> dyad_ids_sorted() const;
};

// Feature-table CSV: header "participant_id,dyad_id,affiliation,<75 names>",
// one row per participant, invalid cells as NA. Doubles are written with
// shortest-round-trip formatting, so a write/read cycle is lossless.
void write_feature_csv(const std::string& path, const Dataset& data);
Dataset read_feature_csv(const std::string& path);

// Shortest-round-trip double formatting used by every text emitter.
std::string format_double(double v);

}  // namespace rapport
