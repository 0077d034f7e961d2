// Lexicon parsing, tokenization, and rate features, including a naive
// rescanning oracle for the matcher.

#include <sstream>

#include "doctest.h"
#include "rapport/error.hpp"
#include "rapport/lexicon.hpp"
#include "rapport/rng.hpp"

using namespace rapport;

namespace {

// Naive re-matcher used as an oracle: linear scan over all patterns.
bool naive_match(const LexiconCategory& cat, const std::string& token) {
    for (const auto& w : cat.exact)
        if (w == token) return true;
    for (const auto& p : cat.prefixes)
        if (token.size() >= p.size() && token.substr(0, p.size()) == p) return true;
    return false;
}

Lexicon tiny_lexicon() {
    return parse_lexicon(
        "%categories\n"
        "we: we us our\n"
        "posemo: won win* great\n"
        "analytic: because therefore\n"
        "clout: we us\n"          // overlaps 'we' on purpose
        "authentic: i i'm\n"
        "tone: great awful\n"
        "i: i i'm me\n"
        "you: you\n"
        "number: one two three\n"
        "affect: great awful won\n"
        "negemo: awful\n"
        "social: friend buddy\n"
        "affiliation: team together we\n"
        "motion: go push\n"
        "space: up down\n"
        "time: now later\n",
        "tiny");
}

}  // namespace

TEST_CASE("tokenize: lowercased runs with internal apostrophes") {
    const auto t1 = tokenize("I'm ready.");
    REQUIRE(t1.size() == 2);
    CHECK(t1[0] == "i'm");
    CHECK(t1[1] == "ready");

    const auto t2 = tokenize("  'quoted' can't--stop 3rd ");
    REQUIRE(t2.size() == 4);
    CHECK(t2[0] == "quoted");  // edge apostrophes trimmed
    CHECK(t2[1] == "can't");
    CHECK(t2[2] == "stop");
    CHECK(t2[3] == "3rd");

    CHECK(tokenize("...!?").empty());
    CHECK(tokenize("").empty());
}

TEST_CASE("lexicon: parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_lexicon("we: us\n", "x"),
                         "lexicon: x line 1: content before %categories", InputError);
    CHECK_THROWS_AS(parse_lexicon("%categories\nwe us\n", "x"), InputError);        // no colon
    CHECK_THROWS_AS(parse_lexicon("%categories\nwe: a\nwe: b\n", "x"), InputError);  // duplicate
    CHECK_THROWS_AS(parse_lexicon("%categories\nwe: a*b\n", "x"), InputError);  // internal star
    CHECK_THROWS_AS(parse_lexicon("%categories\nwe:\n", "x"), InputError);      // empty list
    CHECK_THROWS_AS(parse_lexicon("%categories\nwe: a\n%summaries\ns = 1 + 2*nope\n", "x"),
                    InputError);  // unknown category in formula
}

TEST_CASE("content_features: worked example with overlap") {
    const Lexicon lex = tiny_lexicon();
    const auto tokens = tokenize("We won! We actually won!");
    REQUIRE(tokens.size() == 5);
    const ContentFeatures cf = content_features(tokens, lex);
    CHECK(cf.values[0] == 5.0);  // CountTotalWords
    // Rate order after the count: analytic, clout, authentic, tone, i, we, you,
    // number, affect, posemo, negemo, social, affiliation, motion, space, time.
    CHECK(cf.values[6] == 40.0);   // we: 2 of 5
    CHECK(cf.values[10] == 40.0);  // posemo: 'won' twice
    CHECK(cf.values[9] == 40.0);   // affect includes 'won' too (multi-category)
    CHECK(cf.values[2] == 40.0);   // clout includes 'we'
    CHECK(cf.values[13] == 40.0);  // affiliation includes 'we'
    for (bool v : cf.valid) CHECK(v);
}

TEST_CASE("content_features: empty transcript has count 0 and invalid rates") {
    const Lexicon lex = tiny_lexicon();
    const ContentFeatures cf = content_features({}, lex);
    CHECK(cf.values[0] == 0.0);
    CHECK(cf.valid[0]);
    for (std::size_t i = 1; i < cf.valid.size(); ++i) CHECK_FALSE(cf.valid[i]);
}

TEST_CASE("content_features: doubling the transcript leaves rates unchanged") {
    const Lexicon lex = tiny_lexicon();
    auto tokens = tokenize("we won because one friend went up now");
    auto doubled = tokens;
    doubled.insert(doubled.end(), tokens.begin(), tokens.end());
    const ContentFeatures a = content_features(tokens, lex);
    const ContentFeatures b = content_features(doubled, lex);
    CHECK(b.values[0] == 2.0 * a.values[0]);
    for (std::size_t i = 1; i < a.values.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("content_features: missing schema category is a named error") {
    const Lexicon lex = parse_lexicon("%categories\nwe: us\n", "x");
    CHECK_THROWS_WITH_AS(content_features(tokenize("hello there"), lex),
                         "lexicon: category 'analytic' required by the feature schema is missing",
                         InputError);
}

TEST_CASE("lexicon: stems match any suffix including empty") {
    const Lexicon lex = tiny_lexicon();
    const LexiconCategory* posemo = lex.find_category("posemo");
    REQUIRE(posemo != nullptr);
    CHECK(category_matches(*posemo, "win"));
    CHECK(category_matches(*posemo, "winning"));
    CHECK(category_matches(*posemo, "won"));
    CHECK_FALSE(category_matches(*posemo, "wi"));
    CHECK_FALSE(category_matches(*posemo, "lost"));
}

TEST_CASE("lexicon: matcher agrees with naive oracle on random tokens") {
    Rng rng(555);
    // Random small lexicon over a 4-letter alphabet.
    LexiconCategory cat;
    cat.name = "random";
    const std::string alphabet = "abcd";
    auto random_word = [&](int min_len, int max_len) {
        const int len = rng.uniform_int(min_len, max_len);
        std::string w;
        for (int i = 0; i < len; ++i)
            w.push_back(alphabet[static_cast<std::size_t>(rng.uniform_int(0, 3))]);
        return w;
    };
    for (int i = 0; i < 40; ++i) cat.exact.push_back(random_word(1, 5));
    for (int i = 0; i < 20; ++i) cat.prefixes.push_back(random_word(1, 3));
    std::sort(cat.exact.begin(), cat.exact.end());
    std::sort(cat.prefixes.begin(), cat.prefixes.end());

    for (int trial = 0; trial < 5000; ++trial) {
        const std::string token = random_word(1, 6);
        CHECK(category_matches(cat, token) == naive_match(cat, token));
    }
}

TEST_CASE("lexicon: summary formulas override like-named categories and clamp") {
    const Lexicon lex = parse_lexicon(
        "%categories\n"
        "analytic: because\n"
        "clout: we\n"
        "authentic: i\n"
        "tone: great\n"
        "i: i\n"
        "we: we\n"
        "you: you\n"
        "number: one\n"
        "affect: great\n"
        "posemo: great\n"
        "negemo: awful\n"
        "social: friend\n"
        "affiliation: team\n"
        "motion: go\n"
        "space: up\n"
        "time: now\n"
        "%summaries\n"
        "analytic = 10 + 2*number - 1*i\n"
        "tone = 200 + 1*posemo\n",
        "x");
    // 4 tokens: one, one, i, you -> number 50%, i 25%.
    const auto cf = content_features(tokenize("one one I you"), lex);
    CHECK(cf.values[1] == doctest::Approx(10.0 + 2 * 50.0 - 25.0));  // analytic formula
    CHECK(cf.values[4] == 100.0);                                    // tone clamped to rate scale
}

TEST_CASE("lexicon: shipped demonstration lexicon covers the schema mapping") {
    const Lexicon lex = load_lexicon(std::string(RAPPORT_SOURCE_DIR) + "/data/liwc_open.lex");
    for (const auto& [feature, category] : content_category_map()) {
        const bool covered =
            lex.find_category(category) != nullptr || lex.find_summary(category) != nullptr;
        INFO(feature, " -> ", category);
        CHECK(covered);
    }
    // And it actually produces valid features on a sample utterance.
    const auto cf = content_features(
        tokenize("We'll win together, I think we make a great team this time!"), lex);
    for (bool v : cf.valid) CHECK(v);
    CHECK(cf.values[13] > 0.0);  // affiliation words present
}
