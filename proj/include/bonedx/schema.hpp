#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "model.hpp"

namespace bonedx {

struct Violation {
    enum class Kind { UndeclaredName, EnumViolation, LiteralTypeMismatch, DomainViolation, RangeViolation };
    Kind kind;
    std::string subject; // offending name or individual
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline const char* toString(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::UndeclaredName: return "undeclared-name";
        case Violation::Kind::EnumViolation: return "enum-violation";
        case Violation::Kind::LiteralTypeMismatch: return "literal-type-mismatch";
        case Violation::Kind::DomainViolation: return "domain-violation";
        case Violation::Kind::RangeViolation: return "range-violation";
    }
    return "?";
}

namespace detail {

// Told subsumers and told disjointness over atomic names. Only syntactic
// consequences are drawn, so every reported clash is a real contradiction.
class ToldTaxonomy {
public:
    explicit ToldTaxonomy(const Ontology& o) {
        for (const auto& ax : o.axioms) {
            if (auto p = std::get_if<SubClassOf>(&ax)) {
                addSub(p->sub, p->sup);
            } else if (auto p = std::get_if<EquivalentClasses>(&ax)) {
                addSub(p->first, p->second);
                addSub(p->second, p->first);
            } else if (auto p = std::get_if<DisjointClasses>(&ax)) {
                for (std::size_t i = 0; i < p->classes.size(); ++i)
                    for (std::size_t j = i + 1; j < p->classes.size(); ++j)
                        if (p->classes[i].is(ConceptExpr::Kind::Atomic) && p->classes[j].is(ConceptExpr::Kind::Atomic))
                            addDisjoint(p->classes[i].name(), p->classes[j].name());
            }
        }
    }

    std::set<std::string> supers(const std::string& name) const {
        std::set<std::string> seen{name};
        std::vector<std::string> stack{name};
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            auto it = up_.find(cur);
            if (it == up_.end()) continue;
            for (const auto& s : it->second)
                if (seen.insert(s).second) stack.push_back(s);
        }
        return seen;
    }

    bool disjoint(const std::string& a, const std::string& b) const {
        auto sa = supers(a), sb = supers(b);
        for (const auto& x : sa)
            for (const auto& y : sb)
                if (disjoint_.count({x, y})) return true;
        return false;
    }

private:
    void addSub(const ConceptExpr& sub, const ConceptExpr& sup) {
        if (!sub.is(ConceptExpr::Kind::Atomic)) return;
        collect(sub.name(), sup);
    }
    void collect(const std::string& from, const ConceptExpr& sup) {
        using K = ConceptExpr::Kind;
        if (sup.is(K::Atomic)) {
            up_[from].insert(sup.name());
        } else if (sup.is(K::And)) {
            for (const auto& c : sup.operands()) collect(from, c);
        } else if (sup.is(K::Not) && sup.operand().is(K::Atomic)) {
            addDisjoint(from, sup.operand().name());
        }
    }
    void addDisjoint(const std::string& a, const std::string& b) {
        disjoint_.insert({a, b});
        disjoint_.insert({b, a});
    }

    std::map<std::string, std::set<std::string>> up_;
    std::set<std::pair<std::string, std::string>> disjoint_;
};

} // namespace detail

// Flags provable schema violations only: undeclared names, literals outside
// the declared data range, and assertions whose subject/object carries an
// asserted type that is told-disjoint with the declared domain/range.
// Unasserted subjects are never flagged; domain and range imply membership.
inline std::vector<Violation> validateSchema(const Ontology& o) {
    std::vector<Violation> out;
    const Signature declared = declaredSignature(o);
    const Signature used = signatureOf(o);

    auto undeclared = [&](const std::set<std::string>& all, const std::set<std::string>& decl, const char* what) {
        for (const auto& n : all)
            if (!decl.count(n))
                out.push_back({Violation::Kind::UndeclaredName, n, std::string(what) + " '" + n + "' is used but not declared"});
    };
    undeclared(used.concepts, declared.concepts, "class");
    undeclared(used.roles, declared.roles, "object property");
    undeclared(used.dataProperties, declared.dataProperties, "data property");
    undeclared(used.individuals, declared.individuals, "individual");

    std::map<std::string, std::vector<std::string>> assertedTypes;
    for (const auto& a : o.abox)
        if (auto c = std::get_if<ClassAssertion>(&a); c && c->concept_.is(ConceptExpr::Kind::Atomic))
            assertedTypes[c->individual].push_back(c->concept_.name());

    detail::ToldTaxonomy taxonomy(o);
    auto checkMembership = [&](const std::string& ind, const std::string& cls, Violation::Kind kind,
                               const std::string& prop) {
        auto it = assertedTypes.find(ind);
        if (it == assertedTypes.end()) return;
        for (const auto& t : it->second)
            if (taxonomy.disjoint(t, cls))
                out.push_back({kind, ind,
                               "'" + ind + "' is asserted " + t + ", which is disjoint with " + cls + " required by " +
                                   std::string(kind == Violation::Kind::DomainViolation ? "domain" : "range") +
                                   " of " + prop});
    };

    for (const auto& a : o.abox) {
        if (auto p = std::get_if<ObjectPropertyAssertion>(&a)) {
            if (auto decl = axiomFor<ObjectPropertyDecl>(o, p->role)) {
                if (decl->domain) checkMembership(p->subject, *decl->domain, Violation::Kind::DomainViolation, p->role);
                if (decl->range) checkMembership(p->object, *decl->range, Violation::Kind::RangeViolation, p->role);
            }
        } else if (auto d = std::get_if<DataPropertyAssertion>(&a)) {
            auto decl = axiomFor<DataPropertyDecl>(o, d->property);
            if (!decl) continue;
            if (decl->domain) checkMembership(d->subject, *decl->domain, Violation::Kind::DomainViolation, d->property);
            if (!decl->range || decl->range->admits(d->value)) continue;
            if (decl->range->kind == DataRange::Kind::OneOf && std::holds_alternative<std::string>(d->value)) {
                out.push_back({Violation::Kind::EnumViolation, d->subject,
                               d->property + "(" + d->subject + ", " + renderLiteral(d->value) +
                                   "): value not in " + renderDataRange(*decl->range)});
            } else {
                out.push_back({Violation::Kind::LiteralTypeMismatch, d->subject,
                               d->property + "(" + d->subject + ", " + renderLiteral(d->value) + "): expected " +
                                   renderDataRange(*decl->range) + ", found " + literalTypeName(d->value)});
            }
        }
    }
    return out;
}

} // namespace bonedx
