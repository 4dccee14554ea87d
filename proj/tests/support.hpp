#pragma once
// Shared helpers for the unit and acceptance suites: seeded generators of
// small ontologies and fact sets, plus fixture paths.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <bonedx/bonedx.hpp>

namespace bonedx::testing {

inline std::filesystem::path dataDir() { return BONEDX_DATA_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return dataDir() / "fixtures" / name; }

inline Ontology parseOrDie(const std::string& text) {
    auto p = parseOntology(text);
    if (!p.ok()) throw std::runtime_error("fixture does not parse:\n" + describeErrors(p.errors));
    return *p.value;
}

inline std::vector<Rule> rulesOrDie(const std::string& text, const Ontology* o = nullptr) {
    std::optional<Signature> sig;
    if (o) sig = declaredSignature(*o);
    auto p = parseRules(text, sig ? &*sig : nullptr);
    if (!p.ok()) throw std::runtime_error("rules do not parse:\n" + describeErrors(p.errors));
    return *p.value;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int below(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
    bool coin(int percent = 50) { return below(100) < percent; }
    template <typename T>
    const T& pick(const std::vector<T>& xs) { return xs[below(static_cast<int>(xs.size()))]; }

    // Random ALC concept over the given names; depth bounds nesting.
    ConceptExpr concept_(const std::vector<std::string>& cs, const std::vector<std::string>& rs, int depth) {
        using C = ConceptExpr;
        const int leafOdds = depth <= 0 ? 100 : 40;
        if (coin(leafOdds)) {
            const int k = below(12);
            if (k == 0) return C::top();
            if (k == 1) return C::bottom();
            return C::atomic(pick(cs));
        }
        const int choices = rs.empty() ? 3 : 5;
        switch (below(choices)) {
            case 0: return C::negation(concept_(cs, rs, depth - 1));
            case 1: return C::conjunction({concept_(cs, rs, depth - 1), concept_(cs, rs, depth - 1)});
            case 2: return C::disjunction({concept_(cs, rs, depth - 1), concept_(cs, rs, depth - 1)});
            case 3: return C::exists(pick(rs), concept_(cs, rs, depth - 1));
            default: return C::forAll(pick(rs), concept_(cs, rs, depth - 1));
        }
    }

    // TBox with at most `maxConcepts` names, `maxRoles` roles and `maxAxioms`
    // axioms, the shape the bounded-model oracle can enumerate.
    Ontology smallTBox(int maxConcepts, int maxRoles, int maxAxioms, std::vector<std::string>& cs,
                       std::vector<std::string>& rs) {
        static const std::vector<std::string> conceptNames{"A", "B", "C"}, roleNames{"r", "s"};
        cs.assign(conceptNames.begin(), conceptNames.begin() + 1 + below(maxConcepts));
        rs.assign(roleNames.begin(), roleNames.begin() + below(maxRoles + 1));
        Ontology o;
        o.name = "random";
        for (const auto& c : cs) o.declaredClasses.insert(c);
        const int n = below(maxAxioms + 1);
        for (int i = 0; i < n; ++i) {
            const int kind = below(rs.empty() ? 3 : 4);
            if (kind == 0) {
                o.axioms.push_back(SubClassOf{concept_(cs, rs, 2), concept_(cs, rs, 2)});
            } else if (kind == 1) {
                o.axioms.push_back(EquivalentClasses{ConceptExpr::atomic(pick(cs)), concept_(cs, rs, 2)});
            } else if (kind == 2) {
                o.axioms.push_back(DisjointClasses{{concept_(cs, rs, 1), concept_(cs, rs, 1)}});
            } else {
                ObjectPropertyDecl d{pick(rs), std::nullopt, std::nullopt};
                if (coin()) d.domain = pick(cs);
                if (coin() || !d.domain) d.range = pick(cs);
                o.axioms.push_back(d);
            }
        }
        return o;
    }

    std::string ident(const std::string& prefix, int n) { return prefix + std::to_string(below(n)); }

    Literal literal() {
        switch (below(3)) {
            case 0: return std::int64_t{below(2001) - 1000};
            case 1: {
                static const std::vector<std::string> pool{"", "mild", "a \"quoted\" word", "back\\slash", "x y z",
                                                           "naïve", "ümlaut #hash", "comma, paren)"};
                return pick(pool);
            }
            default: {
                static const std::vector<std::string> pool{"2023-01-05T10:00:00", "1999-12-31T23:59:59Z", "2024-02-29"};
                return DateTime{pick(pool)};
            }
        }
    }

    DataRestriction restriction() {
        DataRestriction r;
        if (coin()) {
            static const std::vector<CompareOp> ops{CompareOp::GreaterEq, CompareOp::LessEq, CompareOp::Greater,
                                                    CompareOp::Less, CompareOp::Equal};
            r.kind = DataRestriction::Kind::NumericCompare;
            r.op = pick(ops);
            r.bound = below(200) - 50;
        } else {
            r.kind = DataRestriction::Kind::OneOf;
            static const std::vector<std::string> vals{"rare", "occasional", "frequent", "constant"};
            for (const auto& v : vals)
                if (coin()) r.values.push_back(v);
            if (r.values.empty()) r.values.push_back("rare");
        }
        return r;
    }

    // Concept that may also use DataSome restrictions.
    ConceptExpr richConcept(const std::vector<std::string>& cs, const std::vector<std::string>& rs,
                            const std::vector<std::string>& ds, int depth) {
        if (!ds.empty() && coin(15)) return ConceptExpr::dataSome(pick(ds), restriction());
        if (depth <= 0 || coin(35)) return ConceptExpr::atomic(pick(cs));
        using C = ConceptExpr;
        switch (below(6)) {
            case 0: return C::negation(richConcept(cs, rs, ds, depth - 1));
            case 1: return C::conjunction({richConcept(cs, rs, ds, depth - 1), richConcept(cs, rs, ds, depth - 1),
                                           richConcept(cs, rs, ds, depth - 1)});
            case 2: return C::disjunction({richConcept(cs, rs, ds, depth - 1), richConcept(cs, rs, ds, depth - 1)});
            case 3: return C::exists(pick(rs), richConcept(cs, rs, ds, depth - 1));
            case 4: return C::forAll(pick(rs), richConcept(cs, rs, ds, depth - 1));
            default: return coin() ? C::top() : C::bottom();
        }
    }

    // Every statement kind of the surface syntax, for round-trip tests.
    Ontology richOntology() {
        Ontology o;
        o.name = "gen" + std::to_string(below(1000));
        std::vector<std::string> cs, rs, ds, is;
        const int nc = 1 + below(8), nr = 1 + below(4), nd = below(4), ni = below(6);
        for (int i = 0; i < nc; ++i) cs.push_back("C" + std::to_string(i));
        for (int i = 0; i < nr; ++i) rs.push_back("r" + std::to_string(i));
        for (int i = 0; i < nd; ++i) ds.push_back("d" + std::to_string(i));
        for (int i = 0; i < ni; ++i) is.push_back("i" + std::to_string(i));
        for (const auto& c : cs)
            if (coin(80)) o.declaredClasses.insert(c);
        for (const auto& r : rs) {
            ObjectPropertyDecl d{r, std::nullopt, std::nullopt};
            if (coin(40)) d.domain = pick(cs);
            if (coin(40)) d.range = pick(cs);
            o.axioms.push_back(d);
        }
        for (const auto& p : ds) {
            DataPropertyDecl d{p, std::nullopt, std::nullopt};
            if (coin(40)) d.domain = pick(cs);
            if (coin(60)) {
                DataRange r;
                const int k = below(4);
                r.kind = static_cast<DataRange::Kind>(k);
                if (r.kind == DataRange::Kind::OneOf) r.values = {"mild", "moderate", "severe"};
                d.range = r;
            }
            o.axioms.push_back(d);
        }
        const int na = below(10);
        for (int i = 0; i < na; ++i) {
            switch (below(5)) {
                case 0:
                case 1: o.axioms.push_back(SubClassOf{richConcept(cs, rs, ds, 3), richConcept(cs, rs, ds, 3)}); break;
                case 2: o.axioms.push_back(EquivalentClasses{richConcept(cs, rs, ds, 2), richConcept(cs, rs, ds, 2)}); break;
                case 3: {
                    DisjointClasses d;
                    const int k = 2 + below(3);
                    for (int j = 0; j < k; ++j) d.classes.push_back(richConcept(cs, rs, ds, 1));
                    o.axioms.push_back(d);
                    break;
                }
                default:
                    if (coin()) {
                        SubPropertyChainOf ch;
                        const int k = 2 + below(2);
                        for (int j = 0; j < k; ++j) ch.chain.push_back(pick(rs));
                        ch.super = pick(rs);
                        o.axioms.push_back(ch);
                    } else {
                        o.axioms.push_back(InverseOf{pick(rs), pick(rs)});
                    }
            }
        }
        for (const auto& ind : is) {
            o.declaredIndividuals.insert(ind);
            const int nt = below(3);
            for (int j = 0; j < nt; ++j) o.abox.push_back(ClassAssertion{ind, richConcept(cs, rs, ds, 1)});
            if (!is.empty() && coin()) o.abox.push_back(ObjectPropertyAssertion{pick(rs), ind, pick(is)});
            if (!ds.empty() && coin()) o.abox.push_back(DataPropertyAssertion{pick(ds), ind, literal()});
        }
        return o;
    }

private:
    std::mt19937_64 rng_;
};

// Hand-tokenized inputs: letters (Latin, Greek, Cyrillic) and ASCII digits
// survive lowercased, everything else separates tokens.
struct GoldenText {
    const char* raw;
    std::vector<std::string> tokens;
};

inline const std::vector<GoldenText>& normalizerGoldenSet() {
    static const std::vector<GoldenText> set{
        {"", {}},
        {"   \t ", {}},
        {"Femoral-Neck FRACTURE", {"femoral", "neck", "fracture"}},
        {"X-ray", {"x", "ray"}},
        {"Osteo-Arthritis!!", {"osteo", "arthritis"}},
        {"T2-weighted MRI", {"t2", "weighted", "mri"}},
        {"Paget's disease", {"paget", "s", "disease"}},
        {"pain(severe);swelling", {"pain", "severe", "swelling"}},
        {"\xC3\x89PAULE douloureuse", {"\xC3\xA9paule", "douloureuse"}},
        {"Stra\xC3\x9F" "e", {"stra\xC3\x9F" "e"}},
        {"\xCE\x9F\xCE\xA3\xCE\xA4\xCE\x9F", {"\xCE\xBF\xCF\x83\xCF\x84\xCE\xBF"}},
        {"\xD0\x9A\xD0\x9E\xD0\xA1\xD0\xA2\xD0\xAC", {"\xD0\xBA\xD0\xBE\xD1\x81\xD1\x82\xD1\x8C"}},
        {"tab\tand\nnewline", {"tab", "and", "newline"}},
        {"3rd metatarsal", {"3rd", "metatarsal"}},
        {"\xC2\xBD inch", {"inch"}},
        {"a\xC2\xA0" "b", {"a", "b"}},
        {"cafe\xCC\x81s", {"cafe", "s"}},
        {"bone \xF0\x9F\xA6\xB4 pain", {"bone", "pain"}},
        {"\xC4\xB0STANBUL", {"istanbul"}},
        {"\xFF" "broken\xC3 utf8", {"broken", "utf8"}},
    };
    return set;
}

// ASCII-only reference: non-alphanumerics become spaces, then lowercase and
// split on whitespace.
inline std::vector<std::string> asciiReference(const std::string& s) {
    std::string t = s;
    for (auto& ch : t) ch = std::isalnum(static_cast<unsigned char>(ch)) ? static_cast<char>(std::tolower(ch)) : ' ';
    std::istringstream in(t);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

inline std::string randomText(Gen& g, bool asciiOnly) {
    static const std::vector<std::string> pieces{
        "a",  "Z",  "q",  "7",  " ",  "-",  "'",  "\t", "\n", ".",  "(",  "_",  "\xC3\xA9", "\xC3\x89", "\xC3\x9F",
        "\xCE\xA3", "\xCF\x82", "\xD0\x96", "\xD0\xB6", "\xC4\xB0", "\xC5\xBF", "\xCC\x81", "\xE2\x80\x94",
        "\xE6\x97\xA5", "\xF0\x9F\xA6\xB4", "\xFF", "\xC3", "\xE2\x82", "\xC2\xA0", "\xE1\xBA\x9E", "\xC2\xB5"};
    const int n = g.below(24);
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (asciiOnly)
            s += static_cast<char>(32 + g.below(95));
        else
            s += g.pick(pieces);
    }
    return s;
}

// Direct set-semantics evaluation over a finite interpretation; used to
// check that a model the bounded oracle reports really is one.
inline std::set<int> extension(const BoundedInterpretation& m, const ConceptExpr& c) {
    using K = ConceptExpr::Kind;
    std::set<int> all;
    for (int e = 0; e < m.domainSize; ++e) all.insert(e);
    auto minus = [&](const std::set<int>& x) {
        std::set<int> out;
        for (int e : all)
            if (!x.count(e)) out.insert(e);
        return out;
    };
    auto succ = [&](const std::string& r, int e) {
        std::set<int> out;
        if (auto it = m.roles.find(r); it != m.roles.end())
            for (auto [a, b] : it->second)
                if (a == e) out.insert(b);
        return out;
    };
    switch (c.kind()) {
        case K::Top: return all;
        case K::Bottom: return {};
        case K::Atomic:
        case K::DataSome: {
            auto it = m.concepts.find(c.is(K::Atomic) ? c.name() : dataRestrictionKey(c.name(), c.restriction()));
            return it == m.concepts.end() ? std::set<int>{} : std::set<int>(it->second.begin(), it->second.end());
        }
        case K::Not: return minus(extension(m, c.operands()[0]));
        case K::And: {
            std::set<int> out = all;
            for (const auto& x : c.operands()) {
                auto ex = extension(m, x);
                std::set<int> keep;
                for (int e : out)
                    if (ex.count(e)) keep.insert(e);
                out = keep;
            }
            return out;
        }
        case K::Or: {
            std::set<int> out;
            for (const auto& x : c.operands())
                for (int e : extension(m, x)) out.insert(e);
            return out;
        }
        case K::Exists:
        case K::ForAll: {
            const auto filler = extension(m, c.operands()[0]);
            std::set<int> out;
            for (int e : all) {
                const auto s = succ(c.name(), e);
                const bool any = std::any_of(s.begin(), s.end(), [&](int x) { return filler.count(x) > 0; });
                const bool every = std::all_of(s.begin(), s.end(), [&](int x) { return filler.count(x) > 0; });
                if (c.is(K::Exists) ? any : every) out.insert(e);
            }
            return out;
        }
    }
    return {};
}

inline bool subset(const std::set<int>& a, const std::set<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// True when `m` satisfies every class-level axiom of `o` (chains and
// inverses excepted) and `c` is non-empty in it.
inline bool isModelOf(const BoundedInterpretation& m, const Ontology& o, const ConceptExpr& c) {
    for (const auto& ax : o.axioms) {
        if (auto s = std::get_if<SubClassOf>(&ax)) {
            if (!subset(extension(m, s->sub), extension(m, s->sup))) return false;
        } else if (auto e = std::get_if<EquivalentClasses>(&ax)) {
            if (extension(m, e->first) != extension(m, e->second)) return false;
        } else if (auto d = std::get_if<DisjointClasses>(&ax)) {
            for (std::size_t i = 0; i < d->classes.size(); ++i)
                for (std::size_t j = i + 1; j < d->classes.size(); ++j) {
                    auto a = extension(m, d->classes[i]), b = extension(m, d->classes[j]);
                    for (int x : a)
                        if (b.count(x)) return false;
                }
        } else if (auto p = std::get_if<ObjectPropertyDecl>(&ax)) {
            auto it = m.roles.find(p->name);
            if (it == m.roles.end()) continue;
            const auto dom = p->domain ? extension(m, ConceptExpr::atomic(*p->domain)) : std::set<int>{};
            const auto ran = p->range ? extension(m, ConceptExpr::atomic(*p->range)) : std::set<int>{};
            for (auto [a, b] : it->second) {
                if (p->domain && !dom.count(a)) return false;
                if (p->range && !ran.count(b)) return false;
            }
        }
    }
    return !extension(m, c).empty();
}

// Facts of the corpus ABox plus one mapped case, for rule-engine tests.
inline FactBase caseFacts(const Ontology& corpus, const Hierarchy& h, const Lexicon& lex, const CaseRecord& c) {
    FactBase fb = FactBase::fromAssertions(corpus.abox);
    for (const auto& a : mapCase(c, corpus, h, &lex).facts) fb.add(a);
    return fb;
}

} // namespace bonedx::testing
