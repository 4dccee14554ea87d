#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lexer.hpp"

namespace bonedx {

inline constexpr std::array<std::string_view, 3> kSeverityValues{"mild", "moderate", "severe"};
inline constexpr std::array<std::string_view, 4> kFrequencyValues{"rare", "occasional", "frequent", "constant"};

struct SymptomEntry {
    std::string type;
    std::optional<std::string> severity, frequency;
    friend bool operator==(const SymptomEntry&, const SymptomEntry&) = default;
};

struct CaseRecord {
    std::string id;
    std::optional<std::int64_t> age;
    std::optional<std::string> ageGroup;
    std::vector<SymptomEntry> symptoms;
    std::vector<std::string> locations, causes, imaging;
    std::optional<std::string> diagnosisText;
    std::optional<std::string> diseaseCategory;
    friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

namespace detail {

inline bool isIdentifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

template <std::size_t N>
std::string joinAllowed(const std::array<std::string_view, N>& xs) {
    std::string out = "one of {";
    for (std::size_t i = 0; i < N; ++i) out += (i ? ", " : "") + std::string(xs[i]);
    return out + "}";
}

// nlohmann::json keeps no source positions, so field errors are located by
// scanning for the n-th occurrence of the quoted key in the raw text.
class CaseLocator {
public:
    explicit CaseLocator(std::string_view text) : text_(text) {}

    std::pair<int, int> atOffset(std::size_t off) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < off && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
        return {line, col};
    }

    // Position of the value following the n-th `"key"` (0-based), or 1:1.
    std::pair<int, int> valueOf(std::string_view key, std::size_t nth = 0) const {
        const std::string needle = "\"" + std::string(key) + "\"";
        std::size_t pos = 0;
        for (std::size_t k = 0;; ++k) {
            pos = text_.find(needle, pos);
            if (pos == std::string_view::npos) return {1, 1};
            if (k == nth) break;
            pos += needle.size();
        }
        std::size_t v = pos + needle.size();
        while (v < text_.size() && (std::isspace(static_cast<unsigned char>(text_[v])) || text_[v] == ':')) ++v;
        return atOffset(v);
    }

private:
    std::string_view text_;
};

} // namespace detail

// Parses a case-record JSON document. Unknown fields, wrong types, and
// severity/frequency values outside their enumerations are errors.
inline Parsed<CaseRecord> parseCase(std::string_view text, std::string file = {}) {
    Parsed<CaseRecord> out;
    detail::CaseLocator loc(text);
    auto err = [&](std::pair<int, int> at, std::string expected, std::string found) {
        out.errors.push_back({file, at.first, at.second, std::move(expected), std::move(found)});
    };

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto at = loc.atOffset(e.byte > 0 ? e.byte - 1 : 0);
        err(at, "well-formed JSON", e.what());
        return out;
    }
    if (!doc.is_object()) {
        err({1, 1}, "a JSON object", doc.type_name());
        return out;
    }

    CaseRecord rec;
    std::size_t severitySeen = 0, frequencySeen = 0, typeSeen = 0;
    auto str = [&](const nlohmann::json& v, std::string_view key, std::size_t nth = 0) -> std::optional<std::string> {
        if (v.is_string()) return v.get<std::string>();
        err(loc.valueOf(key, nth), "a string for \"" + std::string(key) + "\"", v.dump());
        return std::nullopt;
    };
    auto identList = [&](const nlohmann::json& v, std::string_view key, std::vector<std::string>& dst) {
        if (!v.is_array()) {
            err(loc.valueOf(key), "a list of identifiers for \"" + std::string(key) + "\"", v.dump());
            return;
        }
        for (const auto& x : v) {
            if (!x.is_string() || !detail::isIdentifier(x.get_ref<const std::string&>())) {
                err(loc.valueOf(key), "identifiers in \"" + std::string(key) + "\"", x.dump());
                continue;
            }
            dst.push_back(x.get<std::string>());
        }
    };

    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const auto& v = it.value();
        if (key == "id") {
            if (auto s = str(v, key)) {
                if (!detail::isIdentifier(*s)) err(loc.valueOf(key), "an id made of letters, digits and '_'", v.dump());
                rec.id = *s;
            }
        } else if (key == "age") {
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
                rec.age = v.get<std::int64_t>();
            else
                err(loc.valueOf(key), "a non-negative integer for \"age\"", v.dump());
        } else if (key == "ageGroup") {
            rec.ageGroup = str(v, key);
        } else if (key == "diagnosisText") {
            rec.diagnosisText = str(v, key);
        } else if (key == "diseaseCategory") {
            rec.diseaseCategory = str(v, key);
        } else if (key == "locations") {
            identList(v, key, rec.locations);
        } else if (key == "causes") {
            identList(v, key, rec.causes);
        } else if (key == "imaging") {
            identList(v, key, rec.imaging);
        } else if (key == "symptoms") {
            if (!v.is_array()) {
                err(loc.valueOf(key), "a list of symptom objects", v.dump());
                continue;
            }
            for (const auto& s : v) {
                if (!s.is_object()) {
                    err(loc.valueOf(key), "a symptom object {type, severity, frequency}", s.dump());
                    continue;
                }
                SymptomEntry entry;
                bool hasType = false;
                for (auto f = s.begin(); f != s.end(); ++f) {
                    if (f.key() == "type") {
                        auto t = str(f.value(), "type", typeSeen++);
                        if (t && detail::isIdentifier(*t)) {
                            entry.type = *t;
                            hasType = true;
                        } else if (t) {
                            err(loc.valueOf("type", typeSeen - 1), "an identifier for symptom type", f.value().dump());
                        }
                    } else if (f.key() == "severity") {
                        const std::size_t nth = severitySeen++;
                        auto t = str(f.value(), "severity", nth);
                        if (t && std::find(kSeverityValues.begin(), kSeverityValues.end(), *t) == kSeverityValues.end())
                            err(loc.valueOf("severity", nth), "severity " + detail::joinAllowed(kSeverityValues),
                                f.value().dump());
                        else if (t)
                            entry.severity = *t;
                    } else if (f.key() == "frequency") {
                        const std::size_t nth = frequencySeen++;
                        auto t = str(f.value(), "frequency", nth);
                        if (t && std::find(kFrequencyValues.begin(), kFrequencyValues.end(), *t) == kFrequencyValues.end())
                            err(loc.valueOf("frequency", nth), "frequency " + detail::joinAllowed(kFrequencyValues),
                                f.value().dump());
                        else if (t)
                            entry.frequency = *t;
                    } else {
                        err(loc.valueOf(f.key()), "a symptom field (type, severity, frequency)", "\"" + f.key() + "\"");
                    }
                }
                if (!hasType && !s.contains("type")) err(loc.valueOf(key), "a \"type\" in every symptom", s.dump());
                rec.symptoms.push_back(std::move(entry));
            }
        } else {
            err(loc.valueOf(key), "a case field (id, age, ageGroup, symptoms, locations, causes, imaging, "
                                  "diagnosisText, diseaseCategory)",
                "\"" + key + "\"");
        }
    }
    if (!doc.contains("id")) err({1, 1}, "an \"id\" field", "none");

    std::stable_sort(out.errors.begin(), out.errors.end(), [](const ParseError& a, const ParseError& b) {
        return std::tie(a.line, a.column) < std::tie(b.line, b.column);
    });
    if (out.errors.empty()) out.value = std::move(rec);
    return out;
}

inline nlohmann::ordered_json toJson(const CaseRecord& c) {
    nlohmann::ordered_json j;
    j["id"] = c.id;
    if (c.age) j["age"] = *c.age;
    if (c.ageGroup) j["ageGroup"] = *c.ageGroup;
    j["symptoms"] = nlohmann::ordered_json::array();
    for (const auto& s : c.symptoms) {
        nlohmann::ordered_json e;
        e["type"] = s.type;
        if (s.severity) e["severity"] = *s.severity;
        if (s.frequency) e["frequency"] = *s.frequency;
        j["symptoms"].push_back(std::move(e));
    }
    j["locations"] = c.locations;
    j["causes"] = c.causes;
    j["imaging"] = c.imaging;
    if (c.diagnosisText) j["diagnosisText"] = *c.diagnosisText;
    if (c.diseaseCategory) j["diseaseCategory"] = *c.diseaseCategory;
    return j;
}

} // namespace bonedx
