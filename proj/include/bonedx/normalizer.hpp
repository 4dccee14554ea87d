#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexer.hpp"
#include "model.hpp"

namespace bonedx {

namespace detail {

// Decodes one UTF-8 code point at `i`, advancing it. Malformed input yields
// U+FFFD and consumes one byte.
inline char32_t decodeUtf8(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) { return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80; };
    auto bits = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F); };
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
        cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        cp = (static_cast<char32_t>(b0 & 0x1F) << 6) | bits(1);
        len = cp >= 0x80 ? 2 : 1;
    } else if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        cp = (static_cast<char32_t>(b0 & 0x0F) << 12) | (bits(1) << 6) | bits(2);
        len = cp >= 0x800 && (cp < 0xD800 || cp > 0xDFFF) ? 3 : 1;
    } else if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        cp = (static_cast<char32_t>(b0 & 0x07) << 18) | (bits(1) << 12) | (bits(2) << 6) | bits(3);
        len = cp >= 0x10000 && cp <= 0x10FFFF ? 4 : 1;
    }
    if (len == 1 && b0 >= 0x80) cp = 0xFFFD;
    i += len;
    return cp;
}

inline void encodeUtf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Letters from the Latin, Greek and Cyrillic blocks. Scripts outside these
// ranges are not recognised as letters.
inline bool isLetter(char32_t c) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    if (c == 0xAA || c == 0xB5 || c == 0xBA) return true;
    if (c >= 0xC0 && c <= 0xFF) return c != 0xD7 && c != 0xF7;
    if (c >= 0x100 && c <= 0x24F) return true;   // Latin Extended-A/B
    if (c >= 0x250 && c <= 0x2AF) return true;   // IPA extensions
    if (c >= 0x1E00 && c <= 0x1EFF) return true; // Latin Extended Additional
    if (c == 0x386 || (c >= 0x388 && c <= 0x38A) || c == 0x38C) return true;
    if (c >= 0x38E && c <= 0x3FF) return c != 0x3A2 && c != 0x3F6;
    if (c >= 0x400 && c <= 0x481) return true;
    if (c >= 0x48A && c <= 0x52F) return true;
    return false;
}

// Simple lowercase mapping over the letters above. Every result is a letter
// that maps to itself.
inline char32_t foldCase(char32_t c) {
    if (c >= 'A' && c <= 'Z') return c + 32;
    if (c < 0x80) return c;
    if (c == 0xB5) return 0x3BC;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    if (c == 0x17F) return 's';
    if (c >= 0x100 && c <= 0x137) return c | 1;
    if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
    if (c >= 0x14A && c <= 0x177) return c | 1;
    if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
    if (c == 0x1A0 || c == 0x1AF) return c + 1;
    if (c >= 0x1CD && c <= 0x1DC) return (c & 1) ? c + 1 : c;
    if (c >= 0x1DE && c <= 0x1EF) return c | 1;
    if (c >= 0x1F8 && c <= 0x21F) return c | 1;
    if (c >= 0x222 && c <= 0x233) return c | 1;
    if (c == 0x1E9E) return 0xDF;
    if (c >= 0x1E00 && c <= 0x1E95) return c | 1;
    if (c >= 0x1EA0 && c <= 0x1EFF) return c | 1;
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 37;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 63;
    if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
    if (c == 0x3C2) return 0x3C3;
    if (c >= 0x400 && c <= 0x40F) return c + 80;
    if (c >= 0x410 && c <= 0x42F) return c + 32;
    if (c >= 0x460 && c <= 0x481) return c | 1;
    if (c >= 0x48A && c <= 0x4BF) return c | 1;
    if (c == 0x4C0) return 0x4CF;
    if (c >= 0x4C1 && c <= 0x4CE) return (c & 1) ? c + 1 : c;
    if (c >= 0x4D0 && c <= 0x52F) return c | 1;
    return c;
}

} // namespace detail

// Replaces everything that is not a letter or ASCII digit by a space,
// lowercases, and splits on whitespace. Combining marks count as separators,
// so decomposed accents split a word.
inline std::vector<std::string> normalizeText(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string cur;
    for (std::size_t i = 0; i < raw.size();) {
        const char32_t c = detail::decodeUtf8(raw, i);
        if ((c >= '0' && c <= '9') || detail::isLetter(c)) {
            detail::encodeUtf8(detail::foldCase(c), cur);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

inline std::string joinTokens(const std::vector<std::string>& ts) {
    std::string s;
    for (std::size_t i = 0; i < ts.size(); ++i) s += (i ? " " : "") + ts[i];
    return s;
}

// Phrase (normalized token sequence) -> canonical ontology identifier.
class Lexicon {
public:
    // Returns the id already bound to the phrase when it conflicts.
    std::optional<std::string> add(std::vector<std::string> phrase, std::string id) {
        auto [it, fresh] = entries_.emplace(std::move(phrase), id);
        if (!fresh && it->second != id) return it->second;
        maxLen_ = std::max(maxLen_, it->first.size());
        return std::nullopt;
    }
    std::optional<std::string> lookup(const std::vector<std::string>& phrase) const {
        auto it = entries_.find(phrase);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t maxPhraseLength() const { return maxLen_; }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::vector<std::string>, std::string>& entries() const { return entries_; }

private:
    std::map<std::vector<std::string>, std::string> entries_;
    std::size_t maxLen_ = 0;
};

// Lines of the form  "phrase" -> Identifier ; '#' starts a comment. Phrases
// must already be in normalized form. With an ontology, every identifier must
// be a declared class or individual of it.
inline Parsed<Lexicon> loadLexicon(std::string_view text, const Ontology* onto = nullptr, std::string file = {}) {
    Parsed<Lexicon> out;
    Lexicon lex;
    std::optional<Signature> sig;
    if (onto) sig = declaredSignature(*onto);
    std::map<std::vector<std::string>, int> firstLine;
    int lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineNo;
        auto err = [&](std::size_t col, std::string expected, std::string found) {
            out.errors.push_back({file, lineNo, static_cast<int>(col) + 1, std::move(expected), std::move(found)});
        };
        std::size_t i = 0;
        auto skipWs = [&] {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        };
        skipWs();
        if (i == line.size() || line[i] == '#') continue;
        if (line[i] != '"') {
            err(i, "a quoted phrase", std::string(line.substr(i, 1)));
            continue;
        }
        const std::size_t close = line.find('"', i + 1);
        if (close == std::string_view::npos) {
            err(line.size(), "closing '\"'", "end of line");
            continue;
        }
        const std::string phrase(line.substr(i + 1, close - i - 1));
        const std::size_t phraseCol = i;
        i = close + 1;
        skipWs();
        if (line.substr(i, 2) != "->") {
            err(i, "'->'", i < line.size() ? std::string(line.substr(i, 1)) : "end of line");
            continue;
        }
        i += 2;
        skipWs();
        const std::size_t idStart = i;
        while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_')) ++i;
        const std::string id(line.substr(idStart, i - idStart));
        if (id.empty() || std::isdigit(static_cast<unsigned char>(id[0]))) {
            err(idStart, "an identifier", idStart < line.size() ? std::string(line.substr(idStart, 1)) : "end of line");
            continue;
        }
        skipWs();
        if (i < line.size() && line[i] != '#') {
            err(i, "end of line", std::string(line.substr(i, 1)));
            continue;
        }
        auto tokens = normalizeText(phrase);
        if (tokens.empty() || joinTokens(tokens) != phrase) {
            err(phraseCol, "a normalized phrase (\"" + joinTokens(tokens) + "\")", "\"" + phrase + "\"");
            continue;
        }
        if (sig && !sig->concepts.count(id) && !sig->individuals.count(id)) {
            err(idStart, "a class or individual of ontology '" + onto->name + "'", id);
            continue;
        }
        if (auto prev = lex.add(tokens, id)) {
            err(phraseCol, "phrase \"" + phrase + "\" to keep its id " + *prev + " (line " +
                               std::to_string(firstLine[tokens]) + ")", id);
            continue;
        }
        firstLine.emplace(tokens, lineNo);
    }
    if (out.errors.empty()) out.value = std::move(lex);
    return out;
}

struct TermMatch {
    std::size_t start = 0, end = 0; // token span [start, end)
    std::string phrase;
    std::string id;
};

struct UnmatchedToken {
    std::size_t index = 0;
    std::string token;
};

struct NormalizationReport {
    std::vector<std::string> tokens;
    std::vector<TermMatch> matches;
    std::vector<UnmatchedToken> unmatched;

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& m : matches) out.push_back(m.id);
        return out;
    }
};

// Greedy leftmost-longest phrase matching.
inline NormalizationReport mapToTerminology(const std::vector<std::string>& tokens, const Lexicon& lex) {
    NormalizationReport rep;
    rep.tokens = tokens;
    std::size_t i = 0;
    while (i < tokens.size()) {
        bool hit = false;
        for (std::size_t len = std::min(lex.maxPhraseLength(), tokens.size() - i); len >= 1; --len) {
            std::vector<std::string> span(tokens.begin() + i, tokens.begin() + i + len);
            if (auto id = lex.lookup(span)) {
                rep.matches.push_back({i, i + len, joinTokens(span), *id});
                i += len;
                hit = true;
                break;
            }
        }
        if (!hit) {
            rep.unmatched.push_back({i, tokens[i]});
            ++i;
        }
    }
    return rep;
}

inline NormalizationReport normalize(std::string_view raw, const Lexicon& lex) {
    return mapToTerminology(normalizeText(raw), lex);
}

} // namespace bonedx
