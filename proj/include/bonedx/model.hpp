#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "concept.hpp"

namespace bonedx {

// Literal values. dateTime is kept as its ISO-8601 text and compared
// lexicographically.
struct DateTime {
    std::string iso;
    friend bool operator==(const DateTime&, const DateTime&) = default;
    friend auto operator<=>(const DateTime&, const DateTime&) = default;
};

using Literal = std::variant<std::int64_t, std::string, DateTime>;

inline std::string renderLiteral(const Literal& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (auto s = std::get_if<std::string>(&v)) {
        std::string out = "\"";
        for (char ch : *s) {
            if (ch == '"' || ch == '\\') out += '\\';
            out += ch;
        }
        return out + '"';
    }
    return "dateTime(\"" + std::get<DateTime>(v).iso + "\")";
}

inline const char* literalTypeName(const Literal& v) {
    switch (v.index()) {
        case 0: return "int";
        case 1: return "string";
        default: return "dateTime";
    }
}

struct DataRange {
    enum class Kind { Integer, String, DateTime, OneOf };
    Kind kind = Kind::String;
    std::vector<std::string> values; // OneOf only

    bool admits(const Literal& v) const {
        switch (kind) {
            case Kind::Integer: return std::holds_alternative<std::int64_t>(v);
            case Kind::String: return std::holds_alternative<std::string>(v);
            case Kind::DateTime: return std::holds_alternative<DateTime>(v);
            case Kind::OneOf: {
                auto s = std::get_if<std::string>(&v);
                return s && std::find(values.begin(), values.end(), *s) != values.end();
            }
        }
        return false;
    }

    friend bool operator==(const DataRange&, const DataRange&) = default;
    friend auto operator<=>(const DataRange&, const DataRange&) = default;
};

inline std::string renderDataRange(const DataRange& r) {
    switch (r.kind) {
        case DataRange::Kind::Integer: return "int";
        case DataRange::Kind::String: return "string";
        case DataRange::Kind::DateTime: return "dateTime";
        case DataRange::Kind::OneOf: {
            std::string out = "oneOf(";
            for (std::size_t i = 0; i < r.values.size(); ++i) {
                if (i) out += ", ";
                out += renderLiteral(r.values[i]);
            }
            return out + ")";
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Axioms

struct SubClassOf {
    ConceptExpr sub, sup;
    friend bool operator==(const SubClassOf&, const SubClassOf&) = default;
    friend auto operator<=>(const SubClassOf&, const SubClassOf&) = default;
};

struct EquivalentClasses {
    ConceptExpr first, second;
    friend bool operator==(const EquivalentClasses&, const EquivalentClasses&) = default;
    friend auto operator<=>(const EquivalentClasses&, const EquivalentClasses&) = default;
};

struct DisjointClasses {
    std::vector<ConceptExpr> classes;
    friend bool operator==(const DisjointClasses&, const DisjointClasses&) = default;
    friend auto operator<=>(const DisjointClasses&, const DisjointClasses&) = default;
};

// Declares an object property; domain/range imply membership (open world).
struct ObjectPropertyDecl {
    std::string name;
    std::optional<std::string> domain, range;
    friend bool operator==(const ObjectPropertyDecl&, const ObjectPropertyDecl&) = default;
    friend auto operator<=>(const ObjectPropertyDecl&, const ObjectPropertyDecl&) = default;
};

struct DataPropertyDecl {
    std::string name;
    std::optional<std::string> domain;
    std::optional<DataRange> range;
    friend bool operator==(const DataPropertyDecl&, const DataPropertyDecl&) = default;
    friend auto operator<=>(const DataPropertyDecl&, const DataPropertyDecl&) = default;
};

// r1 o r2 o ... o rn  implies  super
struct SubPropertyChainOf {
    std::vector<std::string> chain;
    std::string super;
    friend bool operator==(const SubPropertyChainOf&, const SubPropertyChainOf&) = default;
    friend auto operator<=>(const SubPropertyChainOf&, const SubPropertyChainOf&) = default;
};

struct InverseOf {
    std::string first, second;
    friend bool operator==(const InverseOf&, const InverseOf&) = default;
    friend auto operator<=>(const InverseOf&, const InverseOf&) = default;
};

using Axiom = std::variant<SubClassOf, EquivalentClasses, DisjointClasses, ObjectPropertyDecl, DataPropertyDecl,
                           SubPropertyChainOf, InverseOf>;

// ---------------------------------------------------------------------------
// Assertions

struct ClassAssertion {
    std::string individual;
    ConceptExpr concept_;
    friend bool operator==(const ClassAssertion&, const ClassAssertion&) = default;
    friend auto operator<=>(const ClassAssertion&, const ClassAssertion&) = default;
};

struct ObjectPropertyAssertion {
    std::string role, subject, object;
    friend bool operator==(const ObjectPropertyAssertion&, const ObjectPropertyAssertion&) = default;
    friend auto operator<=>(const ObjectPropertyAssertion&, const ObjectPropertyAssertion&) = default;
};

struct DataPropertyAssertion {
    std::string property, subject;
    Literal value;
    friend bool operator==(const DataPropertyAssertion&, const DataPropertyAssertion&) = default;
    friend auto operator<=>(const DataPropertyAssertion&, const DataPropertyAssertion&) = default;
};

using Assertion = std::variant<ClassAssertion, ObjectPropertyAssertion, DataPropertyAssertion>;

inline const std::string& subjectOf(const Assertion& a) {
    return std::visit([](const auto& x) -> const std::string& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, ClassAssertion>)
            return x.individual;
        else
            return x.subject;
    }, a);
}

// ---------------------------------------------------------------------------
// Rules

struct Variable {
    std::string name;
    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

struct Individual {
    std::string name;
    friend bool operator==(const Individual&, const Individual&) = default;
    friend auto operator<=>(const Individual&, const Individual&) = default;
};

using Term = std::variant<Variable, Individual, Literal>;

inline std::string renderTerm(const Term& t) {
    if (auto v = std::get_if<Variable>(&t)) return "?" + v->name;
    if (auto i = std::get_if<Individual>(&t)) return i->name;
    return renderLiteral(std::get<Literal>(t));
}

enum class BuiltinOp { GreaterThanOrEqual, LessThanOrEqual, GreaterThan, LessThan, Equal, OneOf };

inline const char* toString(BuiltinOp op) {
    switch (op) {
        case BuiltinOp::GreaterThanOrEqual: return "greaterThanOrEqual";
        case BuiltinOp::LessThanOrEqual: return "lessThanOrEqual";
        case BuiltinOp::GreaterThan: return "greaterThan";
        case BuiltinOp::LessThan: return "lessThan";
        case BuiltinOp::Equal: return "equal";
        case BuiltinOp::OneOf: return "oneOf";
    }
    return "?";
}

inline std::optional<BuiltinOp> builtinFromName(std::string_view name) {
    for (auto op : {BuiltinOp::GreaterThanOrEqual, BuiltinOp::LessThanOrEqual, BuiltinOp::GreaterThan,
                    BuiltinOp::LessThan, BuiltinOp::Equal, BuiltinOp::OneOf})
        if (name == toString(op)) return op;
    return std::nullopt;
}

struct Atom {
    enum class Kind { Class, ObjectProperty, DataProperty, Builtin };
    Kind kind = Kind::Class;
    std::string predicate; // concept or property name; empty for builtins
    BuiltinOp builtin = BuiltinOp::Equal;
    std::vector<Term> args;

    static Atom classAtom(std::string c, Term t) { return {Kind::Class, std::move(c), BuiltinOp::Equal, {std::move(t)}}; }
    static Atom objectAtom(std::string r, Term s, Term o) {
        return {Kind::ObjectProperty, std::move(r), BuiltinOp::Equal, {std::move(s), std::move(o)}};
    }
    static Atom dataAtom(std::string p, Term s, Term v) {
        return {Kind::DataProperty, std::move(p), BuiltinOp::Equal, {std::move(s), std::move(v)}};
    }
    static Atom builtinAtom(BuiltinOp op, std::vector<Term> args) {
        return {Kind::Builtin, {}, op, std::move(args)};
    }

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

inline std::string renderAtom(const Atom& a) {
    std::string out = a.kind == Atom::Kind::Builtin ? toString(a.builtin) : a.predicate;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += renderTerm(a.args[i]);
    }
    return out + ')';
}

struct Rule {
    std::string name;
    std::vector<Atom> body;
    std::vector<Atom> head;
    friend bool operator==(const Rule&, const Rule&) = default;
};

inline std::string renderRule(const Rule& r) {
    auto join = [](const std::vector<Atom>& atoms) {
        std::string out;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) out += " ^ ";
            out += renderAtom(atoms[i]);
        }
        return out;
    };
    return "Rule(" + r.name + ": " + join(r.body) + " -> " + join(r.head) + ")";
}

// ---------------------------------------------------------------------------
// Ontology

struct Signature {
    std::set<std::string> concepts, roles, dataProperties, individuals;
    friend bool operator==(const Signature&, const Signature&) = default;
};

struct Ontology {
    std::string name = "unnamed";
    std::set<std::string> declaredClasses;
    std::set<std::string> declaredIndividuals;
    std::vector<Axiom> axioms; // TBox and RBox, including property declarations
    std::vector<Assertion> abox;

    // Order-insensitive over axioms and assertions.
    friend bool operator==(const Ontology& a, const Ontology& b) {
        auto sorted = [](auto v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        return a.name == b.name && a.declaredClasses == b.declaredClasses &&
               a.declaredIndividuals == b.declaredIndividuals && sorted(a.axioms) == sorted(b.axioms) &&
               sorted(a.abox) == sorted(b.abox);
    }
};

template <typename T>
const T* axiomFor(const Ontology& o, const std::string& name) {
    for (const auto& ax : o.axioms)
        if (auto p = std::get_if<T>(&ax); p && p->name == name) return p;
    return nullptr;
}

// Names declared by the ontology's declaration statements.
inline Signature declaredSignature(const Ontology& o) {
    Signature s;
    s.concepts = o.declaredClasses;
    s.individuals = o.declaredIndividuals;
    for (const auto& ax : o.axioms) {
        if (auto p = std::get_if<ObjectPropertyDecl>(&ax)) s.roles.insert(p->name);
        if (auto p = std::get_if<DataPropertyDecl>(&ax)) s.dataProperties.insert(p->name);
    }
    return s;
}

// Declared names plus every name used anywhere in axioms and assertions.
inline Signature signatureOf(const Ontology& o) {
    Signature s = declaredSignature(o);
    auto addConcept = [&](const ConceptExpr& c) {
        forEachName(c, [&](const std::string& n) { s.concepts.insert(n); },
                    [&](const std::string& n) { s.roles.insert(n); },
                    [&](const std::string& n) { s.dataProperties.insert(n); });
    };
    for (const auto& ax : o.axioms) {
        std::visit([&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SubClassOf>) {
                addConcept(x.sub);
                addConcept(x.sup);
            } else if constexpr (std::is_same_v<T, EquivalentClasses>) {
                addConcept(x.first);
                addConcept(x.second);
            } else if constexpr (std::is_same_v<T, DisjointClasses>) {
                for (const auto& c : x.classes) addConcept(c);
            } else if constexpr (std::is_same_v<T, ObjectPropertyDecl>) {
                if (x.domain) s.concepts.insert(*x.domain);
                if (x.range) s.concepts.insert(*x.range);
            } else if constexpr (std::is_same_v<T, DataPropertyDecl>) {
                if (x.domain) s.concepts.insert(*x.domain);
            } else if constexpr (std::is_same_v<T, SubPropertyChainOf>) {
                s.roles.insert(x.chain.begin(), x.chain.end());
                s.roles.insert(x.super);
            } else if constexpr (std::is_same_v<T, InverseOf>) {
                s.roles.insert(x.first);
                s.roles.insert(x.second);
            }
        }, ax);
    }
    for (const auto& a : o.abox) {
        std::visit([&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ClassAssertion>) {
                s.individuals.insert(x.individual);
                addConcept(x.concept_);
            } else if constexpr (std::is_same_v<T, ObjectPropertyAssertion>) {
                s.roles.insert(x.role);
                s.individuals.insert(x.subject);
                s.individuals.insert(x.object);
            } else {
                s.dataProperties.insert(x.property);
                s.individuals.insert(x.subject);
            }
        }, a);
    }
    // Top and Bottom are spelled Thing/Nothing but are not concept names.
    s.concepts.erase("Thing");
    s.concepts.erase("Nothing");
    return s;
}

// Union of two ontologies; the first one's name is kept.
inline Ontology merge(Ontology base, const Ontology& extra) {
    base.declaredClasses.insert(extra.declaredClasses.begin(), extra.declaredClasses.end());
    base.declaredIndividuals.insert(extra.declaredIndividuals.begin(), extra.declaredIndividuals.end());
    for (const auto& ax : extra.axioms)
        if (std::find(base.axioms.begin(), base.axioms.end(), ax) == base.axioms.end()) base.axioms.push_back(ax);
    base.abox.insert(base.abox.end(), extra.abox.begin(), extra.abox.end());
    return base;
}

} // namespace bonedx
