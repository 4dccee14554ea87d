#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "case_record.hpp"
#include "normalizer.hpp"
#include "rules.hpp"
#include "tableau.hpp"

namespace bonedx {

// Age thresholds for the derived hasAgeGroup fact when a case gives only an age.
inline constexpr std::int64_t kElderlyFromAge = 65;
inline constexpr std::int64_t kAdultFromAge = 18;

struct CaseMappingError : std::runtime_error {
    explicit CaseMappingError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems(std::move(problems)) {}
    std::vector<std::string> problems;

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string s;
        for (const auto& p : ps) s += (s.empty() ? "" : "; ") + p;
        return s;
    }
};

struct CaseABox {
    std::string patient, finding;
    std::vector<Assertion> facts;
    std::vector<std::string> diagnosisTerms; // lexicon ids found in diagnosisText
};

inline std::string caseIndividualPrefix(const std::string& id) {
    std::string s;
    for (char c : id) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s = "case_" + s;
    return s;
}

// One patient and one finding individual per case. Symptoms, locations,
// causes and imaging refer to the ontology's named individuals; disease
// classes named in diagnosisText (via the lexicon) type the finding.
inline CaseABox mapCase(const CaseRecord& c, const Ontology& o, const Hierarchy& h, const Lexicon* lex = nullptr) {
    std::vector<std::string> problems;
    auto known = [&](const std::string& name, const char* field) {
        if (!o.declaredIndividuals.count(name))
            problems.push_back(std::string(field) + " '" + name + "' is not an individual of ontology '" + o.name + "'");
    };
    for (const auto& s : c.symptoms) known(s.type, "symptom");
    for (const auto& l : c.locations) known(l, "location");
    for (const auto& x : c.causes) known(x, "cause");
    for (const auto& x : c.imaging) known(x, "imaging");
    if (c.ageGroup) known(*c.ageGroup, "ageGroup");

    CaseABox m;
    const std::string prefix = caseIndividualPrefix(c.id);
    m.patient = prefix + "_patient";
    m.finding = prefix + "_finding";
    auto& f = m.facts;
    auto cls = [&](const std::string& ind, const std::string& name) { f.push_back(ClassAssertion{ind, ConceptExpr::atomic(name)}); };

    cls(m.patient, "Patient");
    cls(m.finding, "BoneDisease");
    if (c.diseaseCategory) {
        const std::string k = *c.diseaseCategory == "Inflammatory" ? "Inflammation" : *c.diseaseCategory;
        if (h.contains(k) && h.subsumedBy(k, "BoneDisease"))
            cls(m.finding, k);
        else
            problems.push_back("diseaseCategory '" + *c.diseaseCategory + "' names no disease class");
    }
    if (c.diagnosisText && lex) {
        for (const auto& id : normalize(*c.diagnosisText, *lex).ids()) {
            m.diagnosisTerms.push_back(id);
            if (h.contains(id) && h.subsumedBy(id, "BoneDisease")) cls(m.finding, id);
        }
    }
    if (c.age) {
        f.push_back(DataPropertyAssertion{"hasAge", m.patient, *c.age});
        f.push_back(DataPropertyAssertion{"hasAge", m.finding, *c.age});
    }
    if (c.ageGroup)
        f.push_back(ObjectPropertyAssertion{"hasAgeGroup", m.patient, *c.ageGroup});
    else if (c.age)
        f.push_back(ObjectPropertyAssertion{"hasAgeGroup", m.patient,
                                            *c.age >= kElderlyFromAge ? "Elderly" : *c.age >= kAdultFromAge ? "Adult" : "Child"});
    for (const auto& s : c.symptoms) {
        f.push_back(ObjectPropertyAssertion{"hasSymptom", m.patient, s.type});
        f.push_back(ObjectPropertyAssertion{"hasSymptom", m.finding, s.type});
        if (s.severity) f.push_back(DataPropertyAssertion{"hasSeverity", s.type, *s.severity});
        if (s.frequency) f.push_back(DataPropertyAssertion{"hasFrequency", s.type, *s.frequency});
    }
    for (const auto& l : c.locations) f.push_back(ObjectPropertyAssertion{"hasLocation", m.finding, l});
    for (const auto& x : c.causes) f.push_back(ObjectPropertyAssertion{"hasCause", m.finding, x});
    for (const auto& x : c.imaging) f.push_back(ObjectPropertyAssertion{"hasImaging", m.finding, x});

    if (!problems.empty()) throw CaseMappingError(std::move(problems));
    return m;
}

// ---------------------------------------------------------------------------
// Joint realization / rule saturation

struct Inference {
    FactBase facts;
    std::size_t ontologyFacts = 0; // facts [0, ontologyFacts) come from the ontology's ABox
    RealizationMap realized;
    std::size_t iterations = 0;

    std::vector<std::size_t> derived() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < facts.size(); ++i)
            if (facts[i].origin == FactBase::Origin::Derived) out.push_back(i);
        return out;
    }
};

class DiagnosisEngine {
public:
    DiagnosisEngine(Ontology o, std::vector<Rule> rules, Lexicon lex = {}, ReasonerOptions opts = {})
        : onto_(std::move(o)), lex_(std::move(lex)), reasoner_(onto_, opts) {
        hierarchy_ = reasoner_.classify();
        rules_ = std::move(rules);
        for (auto&& r : compileRBox(onto_)) rules_.push_back(std::move(r));
        for (auto&& r : compileDataRestrictions(onto_)) rules_.push_back(std::move(r));
        dataKeys_ = dataRestrictions(onto_);
    }

    const Ontology& ontology() const { return onto_; }
    const Hierarchy& hierarchy() const { return hierarchy_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const Lexicon& lexicon() const { return lex_; }

    // Alternates rule saturation and realization until neither adds a fact.
    // Realized named types enter the fact base as Entailed class facts; with
    // `focus`, only those individuals are realized.
    Inference infer(const std::vector<Assertion>& extra = {}, const std::set<std::string>* focus = nullptr) {
        Inference inf;
        inf.facts = FactBase::fromAssertions(onto_.abox);
        inf.ontologyFacts = inf.facts.size();
        std::vector<Assertion> complex;
        for (const auto& a : extra) {
            auto c = std::get_if<ClassAssertion>(&a);
            if (c && !c->concept_.is(ConceptExpr::Kind::Atomic) && !c->concept_.is(ConceptExpr::Kind::DataSome))
                complex.push_back(a);
            else
                inf.facts.add(a);
        }
        for (;;) {
            ++inf.iterations;
            inf.facts = saturate(std::move(inf.facts), rules_, hierarchy_).facts;
            std::vector<Assertion> forReasoner = complex;
            for (std::size_t i = inf.ontologyFacts; i < inf.facts.size(); ++i) {
                const auto& e = inf.facts[i];
                if (e.origin == FactBase::Origin::Entailed) continue;
                forReasoner.push_back(toReasonerFact(e.fact));
            }
            inf.realized = reasoner_.realize(forReasoner, focus);
            bool grew = false;
            for (const auto& [ind, r] : inf.realized)
                for (const auto& t : r.types)
                    if (t != "Thing" && inf.facts.add(ClassAssertion{ind, ConceptExpr::atomic(t)}, FactBase::Origin::Entailed).second)
                        grew = true;
            if (!grew) break;
        }
        return inf;
    }

private:
    // Placeholder class facts produced by compiled data rules stand for
    // DataSome restrictions; the reasoner gets the restriction back.
    Assertion toReasonerFact(const Assertion& a) const {
        if (auto c = std::get_if<ClassAssertion>(&a); c && c->concept_.is(ConceptExpr::Kind::Atomic))
            if (auto it = dataKeys_.find(c->concept_.name()); it != dataKeys_.end()) return ClassAssertion{c->individual, it->second};
        return a;
    }

    Ontology onto_;
    Lexicon lex_;
    Reasoner reasoner_;
    Hierarchy hierarchy_;
    std::vector<Rule> rules_;
    std::map<std::string, ConceptExpr> dataKeys_;
};

// ---------------------------------------------------------------------------
// Reports

struct ReportEntry {
    std::string individual, value, trace;
};

struct ProvenanceEntry {
    std::string trace, fact, origin, rule;
    std::vector<std::string> premises;
    std::uint32_t generation = 0;
};

struct DiagnosisReport {
    std::string caseId;
    std::vector<ReportEntry> suspectDiagnoses, requiredTreatments, requiredImaging;
    std::string malignancy = "unknown";
    std::map<std::string, Realization> realized;
    std::vector<std::string> diagnosisTerms;
    std::vector<ProvenanceEntry> provenance;
};

inline const char* originName(FactBase::Origin o) {
    switch (o) {
        case FactBase::Origin::Asserted: return "asserted";
        case FactBase::Origin::Entailed: return "entailed";
        case FactBase::Origin::Derived: return "derived";
    }
    return "?";
}

// malignant / benign when some realized type of a clinical individual falls
// under MalignantTumor / BenignTumor.
inline std::string malignancyOf(const std::map<std::string, Realization>& realized, const Hierarchy& h) {
    bool malignant = false, benign = false;
    for (const auto& [_, r] : realized)
        for (const auto& t : r.types) {
            malignant = malignant || (h.contains("MalignantTumor") && h.subsumedBy(t, "MalignantTumor"));
            benign = benign || (h.contains("BenignTumor") && h.subsumedBy(t, "BenignTumor"));
        }
    if (malignant && !benign) return "malignant";
    if (benign && !malignant) return "benign";
    return "unknown";
}

inline DiagnosisReport diagnose(DiagnosisEngine& engine, const CaseRecord& c) {
    const CaseABox m = mapCase(c, engine.ontology(), engine.hierarchy(), &engine.lexicon());
    const std::set<std::string> focus{m.patient, m.finding};
    const Inference inf = engine.infer(m.facts, &focus);
    const FactBase& fb = inf.facts;

    DiagnosisReport rep;
    rep.caseId = c.id;
    rep.diagnosisTerms = m.diagnosisTerms;
    rep.realized.insert(inf.realized.begin(), inf.realized.end());
    rep.malignancy = malignancyOf(rep.realized, engine.hierarchy());

    std::set<std::size_t> shown;
    for (std::size_t i = 0; i < fb.size(); ++i) {
        const auto* o = std::get_if<ObjectPropertyAssertion>(&fb[i].fact);
        if (!o || !focus.count(o->subject)) continue;
        std::vector<ReportEntry>* dst = o->role == "suspectDiagnosis"    ? &rep.suspectDiagnoses
                                        : o->role == "requiresTreatment" ? &rep.requiredTreatments
                                        : o->role == "requiresImaging"   ? &rep.requiredImaging
                                                                         : nullptr;
        if (!dst) continue;
        dst->push_back({o->subject, o->object, FactBase::traceId(i)});
        shown.insert(i);
    }
    // Provenance: every fact the listed inferences rest on, plus the case's own assertions.
    std::set<std::size_t> keep;
    std::vector<std::size_t> stack(shown.begin(), shown.end());
    for (std::size_t i = inf.ontologyFacts; i < fb.size(); ++i)
        if (fb[i].origin == FactBase::Origin::Asserted) stack.push_back(i);
    while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        if (!keep.insert(i).second) continue;
        for (auto p : fb[i].premises) stack.push_back(p);
    }
    for (auto i : keep) {
        const auto& e = fb[i];
        ProvenanceEntry p{FactBase::traceId(i), renderFact(e.fact), originName(e.origin), e.rule, {}, e.generation};
        for (auto q : e.premises) p.premises.push_back(FactBase::traceId(q));
        rep.provenance.push_back(std::move(p));
    }
    std::sort(rep.provenance.begin(), rep.provenance.end(), [](const auto& a, const auto& b) {
        return std::stoul(a.trace.substr(1)) < std::stoul(b.trace.substr(1));
    });
    return rep;
}

inline nlohmann::ordered_json toJson(const DiagnosisReport& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["case"] = r.caseId;
    auto entries = [](const std::vector<ReportEntry>& xs, const char* key) {
        J a = J::array();
        for (const auto& e : xs) a.push_back({{"individual", e.individual}, {key, e.value}, {"trace", e.trace}});
        return a;
    };
    j["suspectDiagnoses"] = entries(r.suspectDiagnoses, "diagnosis");
    j["requiredTreatments"] = entries(r.requiredTreatments, "treatment");
    j["requiredImaging"] = entries(r.requiredImaging, "exam");
    j["malignancy"] = r.malignancy;
    J real = J::object();
    for (const auto& [ind, z] : r.realized) real[ind] = {{"mostSpecific", z.mostSpecific}, {"types", z.types}};
    j["realized"] = real;
    j["diagnosisTerms"] = r.diagnosisTerms;
    J prov = J::array();
    for (const auto& p : r.provenance) {
        J e{{"trace", p.trace}, {"fact", p.fact}, {"origin", p.origin}, {"generation", p.generation}};
        if (!p.rule.empty()) e["rule"] = p.rule;
        if (!p.premises.empty()) e["premises"] = p.premises;
        prov.push_back(std::move(e));
    }
    j["provenance"] = prov;
    return j;
}

inline std::string renderReport(const DiagnosisReport& r) {
    std::ostringstream os;
    os << "case: " << r.caseId << "\n";
    os << "malignancy: " << r.malignancy << "\n";
    auto list = [&](const char* title, const std::vector<ReportEntry>& xs) {
        os << title << ":";
        if (xs.empty()) os << " none";
        os << "\n";
        for (const auto& e : xs) os << "  " << e.value << " (" << e.individual << ") [" << e.trace << "]\n";
    };
    list("suspect diagnoses", r.suspectDiagnoses);
    list("required treatments", r.requiredTreatments);
    list("required imaging", r.requiredImaging);
    os << "realized types:\n";
    for (const auto& [ind, z] : r.realized) {
        os << "  " << ind << ":";
        for (const auto& t : z.mostSpecific) os << " " << t;
        os << "\n";
    }
    if (!r.diagnosisTerms.empty()) {
        os << "diagnosis text terms:";
        for (const auto& t : r.diagnosisTerms) os << " " << t;
        os << "\n";
    }
    os << "provenance:\n";
    for (const auto& p : r.provenance) {
        os << "  " << p.trace << " " << p.fact << " <- " << (p.rule.empty() ? p.origin : p.rule);
        for (std::size_t i = 0; i < p.premises.size(); ++i) os << (i ? ", " : " (") << p.premises[i];
        if (!p.premises.empty()) os << ")";
        os << "\n";
    }
    return os.str();
}

// Indented proof tree for `trace`, read from a report's provenance section.
// Returns nullopt when the report does not contain the trace.
inline std::optional<std::string> explainTrace(const nlohmann::json& report, const std::string& trace) {
    std::map<std::string, const nlohmann::json*> byId;
    if (!report.contains("provenance") || !report["provenance"].is_array()) return std::nullopt;
    for (const auto& e : report["provenance"]) byId[e.value("trace", "")] = &e;
    if (!byId.count(trace)) return std::nullopt;
    std::string out;
    auto walk = [&](const std::string& id, int depth, auto&& self) -> void {
        const std::string pad(2 * depth, ' ');
        auto it = byId.find(id);
        if (it == byId.end()) {
            out += pad + "[" + id + "] (not in report)\n";
            return;
        }
        const auto& e = *it->second;
        const std::string origin = e.value("origin", "");
        out += pad + e.value("fact", "") + "  [" + id + "] ";
        if (origin == "derived") {
            out += "rule " + e.value("rule", "") + "\n";
            for (const auto& p : e.value("premises", std::vector<std::string>{})) self(p, depth + 1, self);
        } else {
            out += origin + "\n";
        }
    };
    walk(trace, 0, walk);
    return out;
}

} // namespace bonedx
