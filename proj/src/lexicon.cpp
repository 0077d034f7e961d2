#include "rapport/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rapport/error.hpp"

namespace rapport {

const LexiconCategory* Lexicon::find_category(const std::string& name) const {
    for (const auto& c : categories)
        if (c.name == name) return &c;
    return nullptr;
}

const SummaryFormula* Lexicon::find_summary(const std::string& name) const {
    for (const auto& s : summaries)
        if (s.name == name) return &s;
    return nullptr;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw InputError("lexicon: " + origin + " line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& s, const std::string& origin, std::size_t line) {
    double v = 0.0;
    // from_chars accepts '-' but not an explicit '+'.
    const char* first = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (first == s.data() + s.size() || res.ec != std::errc() ||
        res.ptr != s.data() + s.size())
        fail(origin, line, "bad number '" + s + "'");
    return v;
}

// Parses "name = intercept + w*cat - w*cat ..." after normalizing spacing.
SummaryFormula parse_summary_line(const std::string& name, const std::string& rhs,
                                  const std::string& origin, std::size_t line) {
    SummaryFormula f;
    f.name = name;
    // Tokenize into signed terms.
    std::vector<std::string> terms;
    std::string cur;
    std::string compact;
    for (char c : rhs)
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (compact.empty()) fail(origin, line, "empty summary formula");
    for (std::size_t i = 0; i < compact.size(); ++i) {
        const char c = compact[i];
        // A sign splits terms unless it follows a number's exponent marker
        // (digit or dot, then e/E), as in 1.5e-2.
        const bool in_exponent =
            i >= 2 && (compact[i - 1] == 'e' || compact[i - 1] == 'E') &&
            (std::isdigit(static_cast<unsigned char>(compact[i - 2])) || compact[i - 2] == '.');
        if ((c == '+' || c == '-') && i > 0 && !in_exponent) {
            terms.push_back(cur);
            cur.clear();
            cur.push_back(c);
        } else {
            cur.push_back(c);
        }
    }
    terms.push_back(cur);

    bool have_intercept = false;
    for (const auto& term : terms) {
        if (term.empty() || term == "+" || term == "-") fail(origin, line, "malformed term");
        const std::size_t star = term.find('*');
        if (star == std::string::npos) {
            if (have_intercept) fail(origin, line, "multiple intercepts");
            f.intercept = parse_number(term, origin, line);
            have_intercept = true;
        } else {
            SummaryTerm t;
            t.weight = parse_number(term.substr(0, star), origin, line);
            t.category = term.substr(star + 1);
            if (t.category.empty()) fail(origin, line, "term missing category name");
            f.terms.push_back(t);
        }
    }
    return f;
}

}  // namespace

Lexicon parse_lexicon(const std::string& text, const std::string& origin) {
    Lexicon lex;
    enum class Section { none, categories, summaries } section = Section::none;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string line = strip(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line == "%categories") { section = Section::categories; continue; }
        if (line == "%summaries") { section = Section::summaries; continue; }
        if (line[0] == '%') fail(origin, line_no, "unknown section '" + line + "'");
        if (section == Section::none) fail(origin, line_no, "content before %categories");

        if (section == Section::categories) {
            const std::size_t colon = line.find(':');
            if (colon == std::string::npos) fail(origin, line_no, "expected 'name: words...'");
            const std::string name = strip(line.substr(0, colon));
            if (name.empty()) fail(origin, line_no, "empty category name");
            if (!seen.insert(name).second) fail(origin, line_no, "duplicate category '" + name + "'");
            LexiconCategory cat;
            cat.name = name;
            std::istringstream words(line.substr(colon + 1));
            std::string w;
            while (words >> w) {
                w = lower(w);
                const std::size_t star = w.find('*');
                if (star != std::string::npos) {
                    if (star != w.size() - 1)
                        fail(origin, line_no, "'*' must be final in pattern '" + w + "'");
                    if (star == 0) fail(origin, line_no, "bare '*' pattern");
                    cat.prefixes.push_back(w.substr(0, star));
                } else {
                    cat.exact.push_back(w);
                }
            }
            if (cat.exact.empty() && cat.prefixes.empty())
                fail(origin, line_no, "category '" + name + "' has no patterns");
            std::sort(cat.exact.begin(), cat.exact.end());
            cat.exact.erase(std::unique(cat.exact.begin(), cat.exact.end()), cat.exact.end());
            std::sort(cat.prefixes.begin(), cat.prefixes.end());
            cat.prefixes.erase(std::unique(cat.prefixes.begin(), cat.prefixes.end()),
                               cat.prefixes.end());
            lex.categories.push_back(std::move(cat));
        } else {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) fail(origin, line_no, "expected 'name = formula'");
            const std::string name = strip(line.substr(0, eq));
            if (name.empty()) fail(origin, line_no, "empty summary name");
            if (lex.find_summary(name)) fail(origin, line_no, "duplicate summary '" + name + "'");
            lex.summaries.push_back(
                parse_summary_line(name, line.substr(eq + 1), origin, line_no));
        }
    }
    if (lex.categories.empty()) throw InputError("lexicon: " + origin + ": no categories defined");
    // Summary terms must reference defined categories.
    for (const auto& s : lex.summaries)
        for (const auto& t : s.terms)
            if (!lex.find_category(t.category))
                throw InputError("lexicon: " + origin + ": summary '" + s.name +
                                 "' references unknown category '" + t.category + "'");
    return lex;
}

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("lexicon: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_lexicon(ss.str(), path);
}

std::vector<std::string> tokenize(const std::string& text) {
    auto is_word_byte = [](unsigned char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c >= 0x80 || c == '\'';
    };
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) { ++i; continue; }
        std::size_t j = i;
        while (j < n && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
        // Trim apostrophes at the run edges; they only survive internally.
        std::size_t b = i, e = j;
        while (b < e && text[b] == '\'') ++b;
        while (e > b && text[e - 1] == '\'') --e;
        if (e > b) {
            std::string tok = text.substr(b, e - b);
            for (char& c : tok)
                if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            tokens.push_back(std::move(tok));
        }
        i = j;
    }
    return tokens;
}

bool category_matches(const LexiconCategory& cat, const std::string& token) {
    if (std::binary_search(cat.exact.begin(), cat.exact.end(), token)) return true;
    // A stem matches when it is a prefix of the token (empty suffix allowed).
    // Candidates are the sorted prefixes <= token; walk back while they share
    // the token's leading byte to keep the scan short.
    auto it = std::upper_bound(cat.prefixes.begin(), cat.prefixes.end(), token);
    while (it != cat.prefixes.begin()) {
        --it;
        const std::string& p = *it;
        if (p.size() <= token.size() && token.compare(0, p.size(), p) == 0) return true;
        if (p.empty() || token.empty() || p[0] != token[0]) break;
        // Shorter prefixes of the same leading byte may still match; continue.
    }
    return false;
}

const std::vector<std::pair<std::string, std::string>>& content_category_map() {
    static const std::vector<std::pair<std::string, std::string>> map = {
        {"CountWordsAnalytic", "analytic"},   {"CountWordsClout", "clout"},
        {"CountWordsAuthentic", "authentic"}, {"CountWordsTone", "tone"},
        {"CountWordsPronounI", "i"},          {"CountWordsPronounWe", "we"},
        {"CountWordsPronounYou", "you"},      {"CountWordsNumber", "number"},
        {"CountWordsAffect", "affect"},       {"CountWordsPosEmo", "posemo"},
        {"CountWordsNegEmo", "negemo"},       {"CountWordsSocial", "social"},
        {"CountWordsAffilitation", "affiliation"}, {"CountWordsMotion", "motion"},
        {"CountWordsSpace", "space"},         {"CountWordsTime", "time"},
    };
    return map;
}

ContentFeatures content_features(const std::vector<std::string>& tokens, const Lexicon& lex) {
    const auto& map = content_category_map();
    ContentFeatures out;
    out.values.assign(17, 0.0);
    out.valid.assign(17, false);
    out.values[0] = static_cast<double>(tokens.size());
    out.valid[0] = true;  // a zero word count is a real observation
    if (tokens.empty()) return out;

    const double total = static_cast<double>(tokens.size());
    auto rate_of = [&](const std::string& category) {
        const LexiconCategory* cat = lex.find_category(category);
        if (!cat)
            throw InputError("lexicon: category '" + category +
                             "' required by the feature schema is missing");
        std::size_t matches = 0;
        for (const auto& tok : tokens)
            if (category_matches(*cat, tok)) ++matches;
        return 100.0 * static_cast<double>(matches) / total;
    };

    for (std::size_t f = 0; f < map.size(); ++f) {
        const auto& [feature, category] = map[f];
        double value = 0.0;
        if (const SummaryFormula* formula = lex.find_summary(category)) {
            value = formula->intercept;
            for (const auto& t : formula->terms) value += t.weight * rate_of(t.category);
            value = std::clamp(value, 0.0, 100.0);  // summaries stay on the rate scale
        } else {
            value = rate_of(category);
        }
        (void)feature;
        out.values[f + 1] = value;
        out.valid[f + 1] = true;
    }
    return out;
}

}  // namespace rapport
