#pragma once

// Closed-vocabulary content analysis: a category lexicon (word lists with
// optional '*' stems, plus optional weighted summary formulas) is matched
// against a tokenized transcript, producing word-rate features as percent of
// total words. One token may match any number of categories.

#include <string>
#include <vector>

namespace rapport {

struct LexiconCategory {
    std::string name;
    std::vector<std::string> exact;     // sorted, lowercase
    std::vector<std::string> prefixes;  // sorted, lowercase, '*' stripped
};

struct SummaryTerm {
    double weight = 0.0;
    std::string category;
};

struct SummaryFormula {
    std::string name;
    double intercept = 0.0;
    std::vector<SummaryTerm> terms;
};

struct Lexicon {
    std::vector<LexiconCategory> categories;
    std::vector<SummaryFormula> summaries;

    const LexiconCategory* find_category(const std::string& name) const;
    const SummaryFormula* find_summary(const std::string& name) const;
};

// Lexicon file format:
//   %categories
//   name: word word ano*ther ...
//   %summaries            (optional section)
//   name = 12.5 + 0.5*cat1 - 0.25*cat2
// '#' starts a comment; categories must be unique; '*' only ends a pattern.
Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(const std::string& text, const std::string& origin);

// Lowercased maximal runs of letters/digits with internal apostrophes kept
// ("I'm ready." -> ["i'm", "ready"]). Bytes >= 0x80 are treated as letters so
// UTF-8 words survive intact.
std::vector<std::string> tokenize(const std::string& text);

// True if token matches the category (exact word or stem prefix).
bool category_matches(const LexiconCategory& cat, const std::string& token);

// The 17 communication-content features in schema order: CountTotalWords,
// then 16 rates in percent of total words. With zero tokens the count is 0
// (valid) and every rate is invalid.
struct ContentFeatures {
    std::vector<double> values;        // size 17
    std::vector<bool> valid;           // size 17
};

ContentFeatures content_features(const std::vector<std::string>& tokens, const Lexicon& lex);

// Maps each rate feature name to the lexicon category it reads.
const std::vector<std::pair<std::string, std::string>>& content_category_map();

}  // namespace rapport
