#include <gtest/gtest.h>

#include "support.hpp"

using namespace bonedx;
using namespace bonedx::testing;

namespace {

ParseError onlyError(const std::string& text) {
    auto p = parseOntology(text, "t.bdo");
    EXPECT_FALSE(p.ok());
    EXPECT_EQ(p.errors.size(), 1u) << describeErrors(p.errors);
    return p.errors.empty() ? ParseError{} : p.errors.front();
}

} // namespace

TEST(OntologyParser, ReadsEveryStatementKind) {
    const auto o = parseOrDie(R"(
Ontology(demo
  Class(A) Class(B) Class(C)   # trailing comment
  ObjectProperty(r domain=A range=B)
  ObjectProperty(s)
  DataProperty(age domain=A range=int)
  DataProperty(sev range=oneOf("mild" "severe"))
  SubClassOf(A Some(r B))
  EquivalentClasses(C And(A DataSome(age >= 50)))
  DisjointClasses(B C)
  SubPropertyChainOf(r s -> r)
  InverseOf(r s)
  Individual(a types=(A Not(B)) facts=((r b)) data=((age 51) (sev "mild")))
  Individual(b)
))");
    EXPECT_EQ(o.name, "demo");
    EXPECT_EQ(o.declaredClasses, (std::set<std::string>{"A", "B", "C"}));
    EXPECT_EQ(o.declaredIndividuals, (std::set<std::string>{"a", "b"}));
    EXPECT_EQ(o.axioms.size(), 9u);
    EXPECT_EQ(o.abox.size(), 5u);
    const auto* age = axiomFor<DataPropertyDecl>(o, "age");
    ASSERT_NE(age, nullptr);
    EXPECT_EQ(age->range->kind, DataRange::Kind::Integer);
    EXPECT_NE(std::find(o.abox.begin(), o.abox.end(), Assertion{DataPropertyAssertion{"age", "a", std::int64_t{51}}}),
              o.abox.end());
}

TEST(OntologyParser, WrapperIsOptional) {
    const auto o = parseOrDie("Class(A)\nIndividual(x types=(A))\n");
    EXPECT_EQ(o.declaredClasses.count("A"), 1u);
    EXPECT_EQ(o.abox.size(), 1u);
}

TEST(OntologyParser, SubClassOfWithOneOperandIsOneError) {
    const auto e = onlyError("SubClassOf(A)");
    EXPECT_EQ(e.line, 1);
    EXPECT_EQ(e.column, 13);
    EXPECT_EQ(e.found, "')'");
    EXPECT_EQ(e.describe().rfind("t.bdo:1:13: error: expected ", 0), 0u) << e.describe();
}

TEST(OntologyParser, ErrorPositionsCountLinesAndCodePoints) {
    const auto e = onlyError("Class(A)\n# é comment\nClass(B)\n  Individual(\"é\")");
    EXPECT_EQ(e.line, 4);
    EXPECT_EQ(e.column, 14);
}

TEST(OntologyParser, UnknownStatementAndUnterminatedInput) {
    EXPECT_EQ(onlyError("Klass(A)").column, 1);
    const auto e = onlyError("SubClassOf(A Some(r B)");
    EXPECT_NE(e.found.find("end of input"), std::string::npos) << e.describe();
}

TEST(OntologyParser, DuplicateDeclarationsAreRejected) {
    auto p = parseOntology("Class(A)\nClass(A)\n");
    EXPECT_FALSE(p.ok());
}

TEST(OntologyParser, IntegerOutOfRange) {
    auto p = parseOntology("DataProperty(n)\nIndividual(x data=((n 99999999999999999999)))");
    ASSERT_FALSE(p.ok());
    EXPECT_NE(p.errors[0].expected.find("64-bit"), std::string::npos);
}

TEST(OntologyParser, StringEscapesRoundTrip) {
    Ontology o;
    o.name = "esc";
    o.declaredIndividuals = {"x"};
    o.axioms.push_back(DataPropertyDecl{"note", std::nullopt, std::nullopt});
    o.abox.push_back(DataPropertyAssertion{"note", "x", std::string("say \"hi\" \\ # not a comment")});
    auto back = parseOntology(serializeOntology(o));
    ASSERT_TRUE(back.ok()) << describeErrors(back.errors);
    EXPECT_EQ(*back, o);
}

TEST(OntologyParser, SerializationIsAFixedPoint) {
    Gen g(11);
    for (int i = 0; i < 50; ++i) {
        const Ontology o = g.richOntology();
        const std::string once = serializeOntology(o);
        auto back = parseOntology(once);
        ASSERT_TRUE(back.ok()) << describeErrors(back.errors) << "\n" << once;
        EXPECT_EQ(*back, o) << once;
        EXPECT_EQ(serializeOntology(*back), once);
    }
}

TEST(RuleParser, ReadsAtomsConstantsAndBuiltins) {
    const auto rules = rulesOrDie(R"(
Rule(r1: Patient(?p) ^ hasAge(?p, ?a) ^ greaterThanOrEqual(?a, 50) ^ hasSymptom(?p, Pain)
  -> requiresTreatment(?p, AnalgesicProtocol))
Rule(r2: hasSeverity(?s, ?v) ^ oneOf(?v, "mild", "moderate") -> Mild(?s)))");
    ASSERT_EQ(rules.size(), 2u);
    EXPECT_EQ(rules[0].name, "r1");
    EXPECT_EQ(rules[0].body.size(), 4u);
    EXPECT_EQ(rules[0].body[2].kind, Atom::Kind::Builtin);
    EXPECT_EQ(rules[0].body[2].builtin, BuiltinOp::GreaterThanOrEqual);
    EXPECT_EQ(rules[1].body[1].args.size(), 3u);
    auto back = parseRules(serializeRules(rules));
    ASSERT_TRUE(back.ok()) << describeErrors(back.errors);
    EXPECT_EQ(*back, rules);
}

TEST(RuleParser, UnsafeHeadVariableIsRejected) {
    auto p = parseRules("Rule(bad: A(?x) -> r(?x, ?y))");
    ASSERT_FALSE(p.ok());
    EXPECT_EQ(p.errors.size(), 1u);
}

TEST(RuleParser, BuiltinVariableMustBeBoundByTheBody) {
    auto p = parseRules("Rule(bad: A(?x) ^ greaterThan(?n, 3) -> B(?x))");
    EXPECT_FALSE(p.ok());
}

TEST(RuleParser, PredicatesAreCheckedAgainstASignature) {
    const auto o = parseOrDie("Class(A)\nClass(B)\nObjectProperty(r)");
    const Signature sig = declaredSignature(o);
    EXPECT_TRUE(parseRules("Rule(ok: A(?x) ^ r(?x, ?y) -> B(?y))", &sig).ok());
    auto p = parseRules("Rule(bad: A(?x) ^ q(?x, ?y) -> B(?y))", &sig);
    ASSERT_FALSE(p.ok());
    EXPECT_EQ(p.errors[0].found, "q");
}

TEST(CaseParser, ReadsAFixture) {
    auto p = parseCase(readFile(fixture("femoral_neck.json")), "femoral_neck.json");
    ASSERT_TRUE(p.ok()) << describeErrors(p.errors);
    EXPECT_EQ(p.value->id, "fn_elderly");
    EXPECT_EQ(p.value->age, 72);
    ASSERT_EQ(p.value->symptoms.size(), 1u);
    EXPECT_EQ(p.value->symptoms[0].severity, "severe");
    EXPECT_EQ(p.value->locations, std::vector<std::string>{"FemoralNeck"});
}

TEST(CaseParser, BadSeverityPointsAtTheValue) {
    const std::string text = readFile(fixture("bad_severity.json"));
    auto p = parseCase(text, "bad_severity.json");
    ASSERT_FALSE(p.ok());
    ASSERT_EQ(p.errors.size(), 1u);
    const auto& e = p.errors[0];
    EXPECT_EQ(e.found, "\"extreme\"");
    // The reported position must land on the offending value.
    std::size_t off = 0;
    for (int l = 1; l < e.line; ++l) off = text.find('\n', off) + 1;
    EXPECT_EQ(text.substr(off + e.column - 1, 9), "\"extreme\"");
}

TEST(CaseParser, CollectsSeveralErrors) {
    auto p = parseCase(R"({"id": "x y", "age": -3, "symptoms": [{"type": "Pain", "severity": "mild", "frequency": "daily"}]})");
    EXPECT_FALSE(p.ok());
    EXPECT_EQ(p.errors.size(), 3u) << describeErrors(p.errors);
}

TEST(CaseParser, MalformedJson) {
    auto p = parseCase("{\"id\": ");
    ASSERT_FALSE(p.ok());
    EXPECT_EQ(p.errors.size(), 1u);
}

TEST(CaseParser, JsonRoundTrip) {
    for (const auto& c : generateCases(3, publishedDistribution(40))) {
        auto back = parseCase(toJson(c).dump());
        ASSERT_TRUE(back.ok()) << describeErrors(back.errors);
        EXPECT_EQ(toJson(*back), toJson(c));
    }
}
