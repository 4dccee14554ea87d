#include <gtest/gtest.h>

#include "support.hpp"

using namespace bonedx;
using namespace bonedx::testing;

namespace {

Assertion cls(const std::string& c, const std::string& x) { return ClassAssertion{x, ConceptExpr::atomic(c)}; }
Assertion rel(const std::string& r, const std::string& s, const std::string& o) { return ObjectPropertyAssertion{r, s, o}; }
Assertion dat(const std::string& p, const std::string& s, Literal v) { return DataPropertyAssertion{p, s, std::move(v)}; }

FactBase facts(const std::vector<Assertion>& xs) {
    FactBase fb;
    for (const auto& a : xs) fb.add(a);
    return fb;
}

// Least fixpoint by trying every assignment of every rule's variables over
// the active domain. Integer-only builtins; no class hierarchy.
using Element = std::variant<std::string, Literal>;

std::set<Assertion> bruteForce(std::set<Assertion> known, const std::vector<Rule>& rules) {
    for (;;) {
        std::set<Element> domain;
        for (const auto& a : known) {
            if (auto c = std::get_if<ClassAssertion>(&a)) domain.insert(c->individual);
            if (auto r = std::get_if<ObjectPropertyAssertion>(&a)) {
                domain.insert(r->subject);
                domain.insert(r->object);
            }
            if (auto d = std::get_if<DataPropertyAssertion>(&a)) {
                domain.insert(d->subject);
                domain.insert(d->value);
            }
        }
        const std::vector<Element> dom(domain.begin(), domain.end());
        std::set<Assertion> fresh;
        for (const auto& rule : rules) {
            std::vector<std::string> vars;
            auto note = [&](const Term& t) {
                if (auto v = std::get_if<Variable>(&t); v && std::find(vars.begin(), vars.end(), v->name) == vars.end())
                    vars.push_back(v->name);
            };
            for (const auto& a : rule.body)
                for (const auto& t : a.args) note(t);
            std::vector<std::size_t> pick(vars.size(), 0);
            if (dom.empty() && !vars.empty()) continue;
            for (;;) {
                auto value = [&](const Term& t) -> Element {
                    if (auto v = std::get_if<Variable>(&t))
                        return dom[pick[std::find(vars.begin(), vars.end(), v->name) - vars.begin()]];
                    if (auto i = std::get_if<Individual>(&t)) return i->name;
                    return std::get<Literal>(t);
                };
                auto ground = [&](const Atom& a) -> std::optional<Assertion> {
                    auto name = [&](const Term& t) -> std::optional<std::string> {
                        auto e = value(t);
                        if (auto s = std::get_if<std::string>(&e)) return *s;
                        return std::nullopt;
                    };
                    if (a.kind == Atom::Kind::Class) {
                        auto x = name(a.args[0]);
                        if (!x) return std::nullopt;
                        return cls(a.predicate, *x);
                    }
                    auto s = name(a.args[0]);
                    if (!s) return std::nullopt;
                    if (a.kind == Atom::Kind::ObjectProperty) {
                        auto o = name(a.args[1]);
                        if (!o) return std::nullopt;
                        return rel(a.predicate, *s, *o);
                    }
                    auto v = value(a.args[1]);
                    if (auto l = std::get_if<Literal>(&v)) return dat(a.predicate, *s, *l);
                    return std::nullopt;
                };
                bool holds = true;
                for (const auto& a : rule.body) {
                    if (a.kind == Atom::Kind::Builtin) {
                        auto x = value(a.args[0]), y = value(a.args[1]);
                        auto xi = std::get_if<Literal>(&x), yi = std::get_if<Literal>(&y);
                        if (!xi || !yi) {
                            holds = false;
                            break;
                        }
                        const auto p = std::get<std::int64_t>(*xi), q = std::get<std::int64_t>(*yi);
                        const bool ok = a.builtin == BuiltinOp::GreaterThanOrEqual ? p >= q
                                        : a.builtin == BuiltinOp::LessThan       ? p < q
                                                                                  : p == q;
                        if (!ok) {
                            holds = false;
                            break;
                        }
                        continue;
                    }
                    auto g = ground(a);
                    if (!g || !known.count(*g)) {
                        holds = false;
                        break;
                    }
                }
                if (holds)
                    for (const auto& h : rule.head)
                        if (auto g = ground(h); g && !known.count(*g)) fresh.insert(*g);
                std::size_t k = 0;
                while (k < pick.size() && ++pick[k] == dom.size()) pick[k++] = 0;
                if (k == pick.size()) break;
            }
        }
        if (fresh.empty()) return known;
        known.insert(fresh.begin(), fresh.end());
    }
}

struct RandomProgram {
    std::vector<Assertion> facts;
    std::vector<Rule> rules;
};

RandomProgram randomProgram(Gen& g) {
    const std::vector<std::string> classes{"P", "Q", "R"}, roles{"r", "s"}, inds{"a", "b", "c", "d"};
    const std::vector<std::string> vars{"x", "y", "z"};
    RandomProgram p;
    const int nf = 2 + g.below(8);
    for (int i = 0; i < nf; ++i) {
        switch (g.below(3)) {
            case 0: p.facts.push_back(cls(g.pick(classes), g.pick(inds))); break;
            case 1: p.facts.push_back(rel(g.pick(roles), g.pick(inds), g.pick(inds))); break;
            default: p.facts.push_back(dat("n", g.pick(inds), std::int64_t{g.below(5)}));
        }
    }
    const int nr = 1 + g.below(3);
    for (int i = 0; i < nr; ++i) {
        Rule r;
        r.name = "g" + std::to_string(i);
        std::vector<std::string> bound;
        const int nb = 1 + g.below(3);
        for (int j = 0; j < nb; ++j) {
            const std::string x = g.pick(vars), y = g.pick(vars);
            switch (g.below(4)) {
                case 0: r.body.push_back(Atom::classAtom(g.pick(classes), Variable{x})); bound.push_back(x); break;
                case 1:
                    r.body.push_back(Atom::objectAtom(g.pick(roles), Variable{x}, Variable{y}));
                    bound.push_back(x);
                    bound.push_back(y);
                    break;
                case 2:
                    r.body.push_back(Atom::objectAtom(g.pick(roles), Variable{x}, Individual{g.pick(inds)}));
                    bound.push_back(x);
                    break;
                default: {
                    const std::string v = "v" + std::to_string(j);
                    r.body.push_back(Atom::dataAtom("n", Variable{x}, Variable{v}));
                    static const std::vector<BuiltinOp> ops{BuiltinOp::GreaterThanOrEqual, BuiltinOp::LessThan,
                                                            BuiltinOp::Equal};
                    r.body.push_back(Atom::builtinAtom(g.pick(ops), {Variable{v}, Literal{std::int64_t{g.below(5)}}}));
                    bound.push_back(x);
                }
            }
        }
        const std::string h1 = g.pick(bound), h2 = g.pick(bound);
        if (g.coin())
            r.head.push_back(Atom::classAtom(g.pick(classes), Variable{h1}));
        else
            r.head.push_back(Atom::objectAtom(g.pick(roles), Variable{h1}, Variable{h2}));
        p.rules.push_back(std::move(r));
    }
    return p;
}

} // namespace

TEST(Builtins, OrderingAndEquality) {
    using L = std::vector<Literal>;
    EXPECT_TRUE(evalBuiltin(BuiltinOp::GreaterThanOrEqual, L{std::int64_t{55}, std::int64_t{50}}));
    EXPECT_FALSE(evalBuiltin(BuiltinOp::GreaterThanOrEqual, L{std::int64_t{45}, std::int64_t{50}}));
    EXPECT_TRUE(evalBuiltin(BuiltinOp::LessThan, L{DateTime{"2023-01-01"}, DateTime{"2023-06-01"}}));
    EXPECT_TRUE(evalBuiltin(BuiltinOp::Equal, L{std::string("a"), std::string("a")}));
    EXPECT_TRUE(evalBuiltin(BuiltinOp::OneOf, L{std::string("mild"), std::string("severe"), std::string("mild")}));
    EXPECT_FALSE(evalBuiltin(BuiltinOp::OneOf, L{std::string("extreme"), std::string("mild")}));
}

TEST(Builtins, TypeMismatchThrows) {
    using L = std::vector<Literal>;
    EXPECT_THROW(evalBuiltin(BuiltinOp::GreaterThan, L{std::string("5"), std::int64_t{3}}), BuiltinTypeError);
    EXPECT_THROW(evalBuiltin(BuiltinOp::Equal, L{std::int64_t{1}, DateTime{"1"}}), BuiltinTypeError);
    EXPECT_THROW(evalBuiltin(BuiltinOp::OneOf, L{std::int64_t{1}, std::string("1")}), BuiltinTypeError);
}

TEST(RuleEngine, BuiltinOnIndividualIsReported) {
    const auto o = parseOrDie("Class(P) ObjectProperty(r) Individual(a) Individual(b)");
    const auto rules = rulesOrDie("Rule(bad: r(?x, ?y) ^ greaterThan(?y, 3) -> P(?x))", &o);
    EXPECT_THROW(saturate(facts({rel("r", "a", "b")}), rules), BuiltinTypeError);
}

TEST(RuleEngine, FactSetSemanticsAndOrigins) {
    FactBase fb;
    EXPECT_TRUE(fb.add(cls("P", "a")).second);
    EXPECT_FALSE(fb.add(cls("P", "a")).second);
    EXPECT_EQ(fb.size(), 1u);
    auto [i, fresh] = fb.addDerived(cls("Q", "a"), "r", {0});
    EXPECT_TRUE(fresh);
    EXPECT_EQ(fb[i].origin, FactBase::Origin::Derived);
    EXPECT_EQ(FactBase::traceId(i), "t1");
    EXPECT_EQ(renderFact(dat("p", "a", std::string("v"))), "p(a, \"v\")");
}

TEST(RuleEngine, TransitiveClosureWithProvenance) {
    const auto rules = rulesOrDie("Rule(trans: p(?x, ?y) ^ p(?y, ?z) -> p(?x, ?z))");
    const auto res = saturate(facts({rel("p", "a", "b"), rel("p", "b", "c"), rel("p", "c", "d")}), rules);
    const auto d = res.derivedSet();
    EXPECT_EQ(d, (std::set<Assertion>{rel("p", "a", "c"), rel("p", "b", "d"), rel("p", "a", "d")}));
    for (auto i : res.derived) {
        EXPECT_EQ(res.facts[i].premises.size(), 2u);
        EXPECT_TRUE(replayTrace(res.facts, i, rules));
    }
}

TEST(RuleEngine, ClassAtomsUseTheHierarchy) {
    const auto o = parseOrDie("Class(Fracture) Class(HipFracture) SubClassOf(HipFracture Fracture) Class(Treated)");
    const Hierarchy h = classify(o);
    const auto rules = rulesOrDie("Rule(t: Fracture(?x) -> Treated(?x))");
    EXPECT_EQ(saturate(facts({cls("HipFracture", "f")}), rules, h).derivedSet(),
              std::set<Assertion>{cls("Treated", "f")});
    EXPECT_TRUE(saturate(facts({cls("HipFracture", "f")}), rules).derived.empty());
}

TEST(RuleEngine, RBoxCompilation) {
    const auto o = parseOrDie(R"(
ObjectProperty(hasLocation) ObjectProperty(isPartOf) ObjectProperty(hasPart)
SubPropertyChainOf(hasLocation isPartOf -> hasLocation)
InverseOf(isPartOf hasPart))");
    const auto rules = compileRBox(o);
    ASSERT_EQ(rules.size(), 3u);
    const auto res = saturate(facts({rel("hasLocation", "d1", "FemoralNeck"), rel("isPartOf", "FemoralNeck", "Femur"),
                                     rel("isPartOf", "Femur", "LowerLimb")}),
                              rules);
    const auto d = res.derivedSet();
    EXPECT_TRUE(d.count(rel("hasLocation", "d1", "Femur")));
    EXPECT_TRUE(d.count(rel("hasLocation", "d1", "LowerLimb")));
    EXPECT_TRUE(d.count(rel("hasPart", "Femur", "FemoralNeck")));
    EXPECT_FALSE(d.count(rel("hasLocation", "FemoralNeck", "Femur")));
}

TEST(RuleEngine, DataRestrictionsBecomeRules) {
    const auto o = parseOrDie(R"(
DataProperty(hasAge range=int) Class(Old)
EquivalentClasses(Old DataSome(hasAge >= 50)))");
    const auto rules = compileDataRestrictions(o);
    ASSERT_EQ(rules.size(), 1u);
    const auto key = dataRestrictionKey("hasAge", DataRestriction::compare(CompareOp::GreaterEq, 50));
    const auto res = saturate(facts({dat("hasAge", "p55", std::int64_t{55}), dat("hasAge", "p45", std::int64_t{45})}), rules);
    EXPECT_EQ(res.derivedSet(), std::set<Assertion>{cls(key, "p55")});
}

TEST(RuleEngine, LintFlagsCrossProducts) {
    const auto warn = lintRules(rulesOrDie("Rule(x: A(?a) ^ B(?b) -> r(?a, ?b)) Rule(y: r(?a, ?b) -> B(?b))"));
    ASSERT_EQ(warn.size(), 1u);
    EXPECT_NE(warn[0].find("rule x"), std::string::npos);
}

TEST(RuleEngine, SemiNaiveMatchesBruteForce) {
    Gen g(99);
    int nonTrivial = 0;
    for (int i = 0; i < 300; ++i) {
        const auto p = randomProgram(g);
        const auto semi = saturate(facts(p.facts), p.rules);
        std::set<Assertion> start(p.facts.begin(), p.facts.end());
        EXPECT_EQ(semi.facts.factSet(), bruteForce(start, p.rules)) << serializeRules(p.rules);
        EXPECT_EQ(semi.facts.factSet(), saturateNaive(facts(p.facts), p.rules).facts.factSet());
        for (auto k : semi.derived) ASSERT_TRUE(replayTrace(semi.facts, k, p.rules));
        nonTrivial += !semi.derived.empty();
    }
    EXPECT_GT(nonTrivial, 50);
}

TEST(RuleEngine, CorpusRulesOnFixtures) {
    const BoneDx c = loadBoneDx();
    const Hierarchy h = classify(c.ontology);
    std::vector<Rule> rules = c.rules;
    for (auto&& r : compileRBox(c.ontology)) rules.push_back(r);
    for (const auto& rule : c.rules) {
        for (const char* kind : {"pos", "neg"}) {
            const auto extra = parseOrDie(readFile(fixture("rules/" + rule.name + "." + kind + ".bdo")));
            FactBase fb = FactBase::fromAssertions(c.ontology.abox);
            for (const auto& a : extra.abox) fb.add(a);
            const auto res = saturate(fb, rules, h);
            const bool fired = std::any_of(res.derived.begin(), res.derived.end(),
                                           [&](std::size_t i) { return res.facts[i].rule == rule.name; });
            EXPECT_EQ(fired, std::string(kind) == "pos") << rule.name << " " << kind;
        }
    }
}
