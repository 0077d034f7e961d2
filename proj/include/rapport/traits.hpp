#pragma once

// Self-report instruments: TIPI Big Five scoring, the six-item trust scale,
// demographics, and the 14 self-report schema features.

#include <array>
#include <map>
#include <optional>
#include <string>

namespace rapport {

struct QuestionnaireResponse {
    std::array<int, 10> tipi = {};  // 1..7
    std::array<int, 6> gts = {};    // 1..5
    double gamer_identification = 0.0;
    bool genre_puzzles = false;
    bool genre_casual = false;
    bool brainhex_socializer = false;
    double age = 0.0;
    std::string gender;                         // free text, mapped via encoding
    std::optional<std::string> partner_gender;  // absent when partner metadata missing
};

// Big Five from TIPI: trait = mean(direct item, 8 - reverse item).
// Order: Extraversion, Agreeableness, Conscientiousness, EmotionalStability,
// Openness. Items out of 1..7 are input errors naming the item.
std::array<double, 5> tipi_scores(const std::array<int, 10>& items);

// Propensity to trust: mean of the six items on the 1-5 scale.
double gts_score(const std::array<int, 6>& gts);

// The 14 self-report features in schema order. Gender values are encoded via
// the dataset-level mapping; an unmapped value is an input error. Partner
// fields (SameGenderCoPlayer, GenderCoPlayer) are invalid when partner
// metadata is missing.
struct TraitFeatures {
    std::array<double, 14> values = {};
    std::array<bool, 14> valid = {};
};

TraitFeatures trait_features(const QuestionnaireResponse& resp,
                             const std::map<std::string, double>& gender_encoding);

}  // namespace rapport
