#include "rapport/traits.hpp"

#include <string>

#include "rapport/error.hpp"

namespace rapport {

std::array<double, 5> tipi_scores(const std::array<int, 10>& items) {
    for (std::size_t i = 0; i < items.size(); ++i)
        if (items[i] < 1 || items[i] > 7)
            throw InputError("tipi: item " + std::to_string(i + 1) + " out of 1..7");
    // Standard key: direct/reverse item pairs per trait (1-based indices):
    // E: 1, 6R; A: 2R, 7; C: 3, 8R; ES: 4R, 9; O: 5, 10R.
    auto pair_score = [&](int direct, int reverse) {
        return 0.5 * (static_cast<double>(items[direct - 1]) +
                      (8.0 - static_cast<double>(items[reverse - 1])));
    };
    return {pair_score(1, 6),
            0.5 * ((8.0 - static_cast<double>(items[2 - 1])) + static_cast<double>(items[7 - 1])),
            pair_score(3, 8),
            0.5 * ((8.0 - static_cast<double>(items[4 - 1])) + static_cast<double>(items[9 - 1])),
            pair_score(5, 10)};
}

double gts_score(const std::array<int, 6>& gts) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gts.size(); ++i) {
        if (gts[i] < 1 || gts[i] > 5)
            throw InputError("trust scale: item " + std::to_string(i + 1) + " out of 1..5");
        sum += static_cast<double>(gts[i]);
    }
    return sum / 6.0;
}

TraitFeatures trait_features(const QuestionnaireResponse& resp,
                             const std::map<std::string, double>& gender_encoding) {
    TraitFeatures out;
    auto encode_gender = [&gender_encoding](const std::string& g) {
        const auto it = gender_encoding.find(g);
        if (it == gender_encoding.end())
            throw InputError("traits: gender value '" + g + "' missing from the encoding map");
        return it->second;
    };

    const auto tipi = tipi_scores(resp.tipi);
    const double trust = gts_score(resp.gts);
    const double own_gender = encode_gender(resp.gender);

    // Schema order: Age, GamerIdentification, GenrePuzzles, GenreCasual,
    // SameGenderCoPlayer, Gender, GenderCoPlayer, Extraversion, Agreeableness,
    // Conscientiousness, EmotionalStability, Openness, PropensityToTrust,
    // BrainhexSocializer.
    auto set = [&out](std::size_t i, double v) {
        out.values[i] = v;
        out.valid[i] = true;
    };
    set(0, resp.age);
    set(1, resp.gamer_identification);
    set(2, resp.genre_puzzles ? 1.0 : 0.0);
    set(3, resp.genre_casual ? 1.0 : 0.0);
    if (resp.partner_gender.has_value()) {
        const double partner = encode_gender(*resp.partner_gender);
        set(4, partner == own_gender ? 1.0 : 0.0);
        set(6, partner);
    }
    set(5, own_gender);
    set(7, tipi[0]);
    set(8, tipi[1]);
    set(9, tipi[2]);
    set(10, tipi[3]);
    set(11, tipi[4]);
    set(12, trust);
    set(13, resp.brainhex_socializer ? 1.0 : 0.0);
    return out;
}

}  // namespace rapport
