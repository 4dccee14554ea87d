#include <gtest/gtest.h>

#include "support.hpp"

using namespace bonedx;
using namespace bonedx::testing;

namespace {

Lexicon bundledLexicon() { return loadBoneDx().lexicon; }

} // namespace

TEST(Normalizer, GoldenSet) {
    for (const auto& gold : normalizerGoldenSet()) EXPECT_EQ(normalizeText(gold.raw), gold.tokens) << gold.raw;
}

TEST(Normalizer, MatchesAsciiReference) {
    Gen g(5);
    for (int i = 0; i < 2000; ++i) {
        const std::string s = randomText(g, true);
        EXPECT_EQ(normalizeText(s), asciiReference(s)) << s;
    }
}

TEST(Normalizer, Idempotent) {
    Gen g(6);
    for (int i = 0; i < 2000; ++i) {
        const auto once = normalizeText(randomText(g, false));
        EXPECT_EQ(normalizeText(joinTokens(once)), once);
    }
}

TEST(Normalizer, FoldedLettersAreFixedPoints) {
    for (char32_t c = 0; c < 0x3000; ++c) {
        if (!detail::isLetter(c)) continue;
        const char32_t f = detail::foldCase(c);
        ASSERT_TRUE(detail::isLetter(f)) << std::hex << static_cast<unsigned>(c);
        ASSERT_EQ(detail::foldCase(f), f) << std::hex << static_cast<unsigned>(c);
    }
}

TEST(Normalizer, Utf8RoundTrip) {
    for (char32_t c : {U'a', U'é', U'Ж', U'日', U'\U0001F9B4'}) {
        std::string s;
        detail::encodeUtf8(c, s);
        std::size_t i = 0;
        EXPECT_EQ(detail::decodeUtf8(s, i), c);
        EXPECT_EQ(i, s.size());
    }
    std::size_t i = 0;
    EXPECT_EQ(detail::decodeUtf8("\xC0\xAF", i), U'\uFFFD'); // overlong
}

TEST(Lexicon, LeftmostLongestMatch) {
    const Lexicon lex = bundledLexicon();
    const auto rep = normalize("Fracture of the femoral neck; femoral neck fracture (X-ray)", lex);
    ASSERT_EQ(rep.ids(), (std::vector<std::string>{"Fracture", "FemoralNeck", "FemoralNeckFracture", "XRay"}));
    EXPECT_EQ(rep.matches[2].start, 5u);
    EXPECT_EQ(rep.matches[2].end, 8u);
    std::vector<std::string> unmatched;
    for (const auto& u : rep.unmatched) unmatched.push_back(u.token);
    EXPECT_EQ(unmatched, (std::vector<std::string>{"of", "the"}));
}

TEST(Lexicon, SpellingVariantsShareAnId) {
    const Lexicon lex = bundledLexicon();
    EXPECT_EQ(normalize("Osteo-arthritis", lex).ids(), std::vector<std::string>{"Osteoarthritis"});
    EXPECT_EQ(normalize("OSTEOARTHRITIS", lex).ids(), std::vector<std::string>{"Osteoarthritis"});
    EXPECT_TRUE(normalize("zzqq", lex).matches.empty());
    EXPECT_EQ(normalize("zzqq", lex).unmatched.size(), 1u);
    EXPECT_TRUE(normalize("", lex).tokens.empty());
}

TEST(Lexicon, LoaderErrors) {
    const auto o = parseOrDie("Class(Fracture) Individual(XRay)");
    EXPECT_TRUE(loadLexicon("\"fracture\" -> Fracture  # ok\n\"x ray\" -> XRay\n", &o).ok());

    auto unnormalized = loadLexicon("\"X-Ray\" -> XRay\n", &o, "l.lex");
    ASSERT_EQ(unnormalized.errors.size(), 1u);
    EXPECT_EQ(unnormalized.errors[0].line, 1);
    EXPECT_EQ(unnormalized.errors[0].column, 1);

    auto unknown = loadLexicon("\n\"bone\" -> Bone\n", &o);
    ASSERT_EQ(unknown.errors.size(), 1u);
    EXPECT_EQ(unknown.errors[0].line, 2);
    EXPECT_EQ(unknown.errors[0].found, "Bone");

    auto conflict = loadLexicon("\"fracture\" -> Fracture\n\"fracture\" -> XRay\n", &o);
    ASSERT_EQ(conflict.errors.size(), 1u);
    EXPECT_EQ(conflict.errors[0].line, 2);

    EXPECT_TRUE(loadLexicon("\"fracture\" -> Fracture\n\"fracture\" -> Fracture\n", &o).ok());
    EXPECT_FALSE(loadLexicon("fracture -> Fracture\n").ok());
}
