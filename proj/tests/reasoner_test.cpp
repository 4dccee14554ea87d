#include <gtest/gtest.h>

#include "support.hpp"

using namespace bonedx;
using namespace bonedx::testing;

namespace {

using C = ConceptExpr;
C atom(const char* n) { return C::atomic(n); }

} // namespace

TEST(Tableau, TransitiveToldSubsumption) {
    const auto o = parseOrDie("Class(A) Class(B) Class(C) SubClassOf(A B) SubClassOf(B C)");
    EXPECT_TRUE(isSubsumedBy(o, atom("A"), atom("C")));
    EXPECT_FALSE(isSubsumedBy(o, atom("C"), atom("A")));
}

TEST(Tableau, ExistsAgainstForAllClashes) {
    const Ontology empty;
    const auto c = C::conjunction({C::exists("r", atom("A")), C::forAll("r", C::negation(atom("A")))});
    EXPECT_FALSE(isSatisfiable(empty, c));
    EXPECT_TRUE(isSatisfiable(empty, C::conjunction({C::exists("r", atom("A")), C::forAll("r", atom("B"))})));
}

TEST(Tableau, CyclicDefinitionNeedsBlocking) {
    const auto o = parseOrDie("Class(A) ObjectProperty(r) SubClassOf(A Some(r A))");
    EXPECT_TRUE(isSatisfiable(o, atom("A")));
    const auto bad = parseOrDie("Class(A) Class(B) ObjectProperty(r) SubClassOf(A Some(r A)) SubClassOf(A All(r Not(A)))");
    EXPECT_FALSE(isSatisfiable(bad, atom("A")));
}

TEST(Tableau, ReasoningByCases) {
    const auto o = parseOrDie(
        "Class(A) Class(B) Class(C) Class(D) SubClassOf(A Or(B C)) SubClassOf(B D) SubClassOf(C D)");
    EXPECT_TRUE(isSubsumedBy(o, atom("A"), atom("D")));
    EXPECT_FALSE(isSubsumedBy(o, atom("A"), atom("B")));
}

TEST(Tableau, GeneralInclusionOnComplexLeftSide) {
    const auto o = parseOrDie("Class(A) Class(B) ObjectProperty(r) SubClassOf(Some(r A) B)");
    EXPECT_TRUE(isSubsumedBy(o, C::exists("r", C::conjunction({atom("A"), atom("X")})), atom("B")));
    EXPECT_FALSE(isSubsumedBy(o, C::exists("r", atom("X")), atom("B")));
}

TEST(Tableau, DomainAndRangeApplyToEdges) {
    const auto o = parseOrDie("Class(A) Class(B) ObjectProperty(r domain=A range=B)");
    EXPECT_TRUE(isSubsumedBy(o, C::exists("r", C::top()), atom("A")));
    EXPECT_TRUE(isSubsumedBy(o, C::exists("r", C::top()), C::exists("r", atom("B"))));
    EXPECT_FALSE(isSubsumedBy(o, C::top(), atom("A")));
}

TEST(Tableau, DisjointnessMakesConjunctionUnsatisfiable) {
    const auto o = parseOrDie("Class(A) Class(B) Class(C) DisjointClasses(A B C)");
    EXPECT_FALSE(isSatisfiable(o, C::conjunction({atom("A"), atom("C")})));
    EXPECT_TRUE(isSatisfiable(o, atom("A")));
}

TEST(Tableau, EquivalenceIsTwoWay) {
    const auto o = parseOrDie("Class(M) Class(T) Class(X) EquivalentClasses(M And(T X))");
    EXPECT_TRUE(isSubsumedBy(o, C::conjunction({atom("T"), atom("X")}), atom("M")));
    EXPECT_TRUE(isSubsumedBy(o, atom("M"), atom("X")));
}

TEST(Tableau, BudgetExhaustionThrows) {
    const auto o = parseOrDie("Class(A) ObjectProperty(r) SubClassOf(A Some(r A)) SubClassOf(Thing Or(A Some(r A)))");
    EXPECT_THROW(isSatisfiable(o, atom("A"), ReasonerOptions{1}), ResourceLimit);
}

TEST(Tableau, ClassifyEmptyOntology) {
    const Hierarchy h = classify(Ontology{});
    EXPECT_EQ(h.groups().size(), 2u);
    EXPECT_TRUE(h.subsumedBy("Nothing", "Thing"));
}

TEST(Tableau, ClassifyGroupsEquivalentsAndUnsatisfiables) {
    const auto o = parseOrDie(
        "Class(A) Class(B) Class(C) Class(U) EquivalentClasses(A B) SubClassOf(C A) SubClassOf(U Nothing)");
    const Hierarchy h = classify(o);
    EXPECT_EQ(h.groupOf("A"), h.groupOf("B"));
    EXPECT_EQ(h.groupOf("U"), h.groupOf("Nothing"));
    EXPECT_TRUE(h.subsumedBy("C", "B"));
    EXPECT_FALSE(h.subsumedBy("A", "C"));
    const Hierarchy back = Hierarchy::fromJson(nlohmann::json::parse(h.toJson().dump()));
    EXPECT_EQ(back, h);
}

TEST(Tableau, InconsistentABox) {
    const auto o = parseOrDie("Class(A) Class(B) DisjointClasses(A B) Individual(x types=(A B))");
    EXPECT_FALSE(isConsistent(o));
    EXPECT_THROW(classify(o), Inconsistent);
}

TEST(Tableau, UniversalsFlowAlongAssertedEdges) {
    const auto o = parseOrDie(
        "Class(A) Class(B) ObjectProperty(r) Individual(x types=(All(r B)) facts=((r y))) Individual(y types=(A))");
    Reasoner r(o);
    EXPECT_TRUE(r.isInstance("y", atom("B")));
    EXPECT_FALSE(r.isInstance("x", atom("B")));
    EXPECT_FALSE(r.isConsistent({ClassAssertion{"y", C::negation(atom("B"))}}));
}

TEST(Tableau, RealizationNeedsCaseAnalysis) {
    const auto o = parseOrDie(R"(
Class(A) Class(B) Class(C) Class(D)
SubClassOf(B D) SubClassOf(C D)
Individual(x types=(Or(B C)))
Individual(y types=(B)))");
    const auto z = realize(o);
    EXPECT_EQ(z.at("x").mostSpecific, std::vector<std::string>{"D"});
    EXPECT_EQ(z.at("y").mostSpecific, std::vector<std::string>{"B"});
    EXPECT_EQ(z.at("y").types, (std::vector<std::string>{"B", "D", "Thing"}));
}

TEST(Tableau, CorpusMalignancy) {
    const BoneDx c = loadBoneDx();
    Reasoner r(c.ontology);
    EXPECT_TRUE(r.isSubsumedBy(atom("Osteosarcoma"), atom("MalignantTumor")));
    EXPECT_TRUE(r.isSubsumedBy(atom("Osteosarcoma"), atom("Malignant")));
    EXPECT_TRUE(r.isSubsumedBy(atom("CartilaginousTumor"), atom("BenignTumor")));
    EXPECT_FALSE(r.isSubsumedBy(atom("CartilaginousTumor"), atom("Malignant")));
    EXPECT_FALSE(r.isSatisfiable(C::conjunction({atom("Malignant"), atom("Benign")})));
}

// Tableau claims against an independent finite-model search: a model the
// oracle finds (and that passes direct evaluation) refutes any claim of
// unsatisfiability.
TEST(Tableau, AgreesWithBoundedModels) {
    Gen g(2024);
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        std::vector<std::string> cs, rs;
        const Ontology o = g.smallTBox(3, 2, 4, cs, rs);
        const ConceptExpr q = g.concept_(cs, rs, 2);
        const auto [nc, nr] = oracleSignatureSize(o, q);
        const int scope = largestFeasibleScope(nc, nr, 3);
        ASSERT_GT(scope, 0);
        const auto m = findModel(o, q, {scope, 10'000'000});
        const bool sat = isSatisfiable(o, q);
        if (m) {
            ASSERT_TRUE(isModelOf(*m, o, q)) << m->describe();
            EXPECT_TRUE(sat) << serializeOntology(o) << "\nquery " << render(q) << "\nmodel " << m->describe();
            ++checked;
        }
    }
    EXPECT_GT(checked, 30);
}

TEST(Oracle, FindsTheSmallestModel) {
    const auto o = parseOrDie("Class(A) Class(B) SubClassOf(A B)");
    const auto m = findModel(o, atom("A"));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->domainSize, 1);
    EXPECT_TRUE(isModelOf(*m, o, atom("A")));
}

TEST(Oracle, UnsatisfiableVisitsEveryCandidate) {
    const auto o = parseOrDie("Class(A) Class(B) ObjectProperty(r) SubClassOf(A Nothing)");
    const auto s = searchModel(o, C::conjunction({atom("A"), C::exists("r", atom("B"))}), {2, 10'000'000});
    EXPECT_FALSE(s.model);
    // Two concept names and one role: 2^(2k) * 2^(k*k) interpretations of size k.
    const std::uint64_t expected = (1u << 2) * (1u << 1) + (1u << 4) * (1u << 4);
    EXPECT_EQ(s.visited, expected);
}

TEST(Oracle, CounterexampleRefutesNonEntailment) {
    const auto o = parseOrDie("Class(A) Class(B) Class(C) SubClassOf(A Or(B C))");
    const auto e = checkEntailment(o, atom("A"), atom("B"));
    ASSERT_EQ(e.verdict, EntailmentVerdict::CounterexampleFound);
    const auto& m = *e.counterexample;
    EXPECT_TRUE(isModelOf(m, o, C::conjunction({atom("A"), C::negation(atom("B"))})));
    EXPECT_EQ(checkEntailment(o, C::conjunction({atom("A"), C::negation(atom("C"))}), atom("B")).verdict,
              EntailmentVerdict::NoCounterexampleWithinScope);
}

TEST(Oracle, BudgetIsCheckedBeforeSearching) {
    const auto o = parseOrDie("Class(A) Class(B) Class(C) ObjectProperty(r) ObjectProperty(s)");
    const auto q = C::conjunction({atom("A"), C::exists("r", atom("B")), C::exists("s", atom("C"))});
    EXPECT_THROW(searchModel(o, q, {3, 1000}), BudgetExceeded);
    EXPECT_EQ(largestFeasibleScope(3, 2, 3), 2);
    EXPECT_EQ(largestFeasibleScope(3, 0, 3), 3);
}
