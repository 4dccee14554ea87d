#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bonedx {

enum class CompareOp { GreaterEq, LessEq, Greater, Less, Equal };

inline const char* toString(CompareOp op) {
    switch (op) {
        case CompareOp::GreaterEq: return ">=";
        case CompareOp::LessEq: return "<=";
        case CompareOp::Greater: return ">";
        case CompareOp::Less: return "<";
        case CompareOp::Equal: return "=";
    }
    return "?";
}

inline bool compareInts(CompareOp op, std::int64_t lhs, std::int64_t rhs) {
    switch (op) {
        case CompareOp::GreaterEq: return lhs >= rhs;
        case CompareOp::LessEq: return lhs <= rhs;
        case CompareOp::Greater: return lhs > rhs;
        case CompareOp::Less: return lhs < rhs;
        case CompareOp::Equal: return lhs == rhs;
    }
    return false;
}

// Restriction on the value of a data property: an integer comparison or an
// enumeration of string literals.
struct DataRestriction {
    enum class Kind { NumericCompare, OneOf };

    Kind kind = Kind::NumericCompare;
    CompareOp op = CompareOp::GreaterEq;
    std::int64_t bound = 0;
    std::vector<std::string> values;

    static DataRestriction compare(CompareOp op, std::int64_t bound) {
        DataRestriction r;
        r.kind = Kind::NumericCompare;
        r.op = op;
        r.bound = bound;
        return r;
    }

    static DataRestriction oneOf(std::vector<std::string> values) {
        if (values.empty()) throw std::invalid_argument("oneOf restriction needs at least one value");
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j)
                if (values[i] == values[j])
                    throw std::invalid_argument("oneOf restriction has duplicate value \"" + values[i] + "\"");
        DataRestriction r;
        r.kind = Kind::OneOf;
        r.values = std::move(values);
        return r;
    }

    friend bool operator==(const DataRestriction&, const DataRestriction&) = default;
    friend auto operator<=>(const DataRestriction&, const DataRestriction&) = default;
};

inline std::string renderRestriction(const DataRestriction& r) {
    if (r.kind == DataRestriction::Kind::NumericCompare)
        return std::string(toString(r.op)) + " " + std::to_string(r.bound);
    std::string out = "oneOf(";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        if (i) out += ", ";
        out += '"' + r.values[i] + '"';
    }
    return out + ")";
}

// ALC concept expression. Immutable value type; And/Or carry at least two
// operands, Not/Exists/ForAll exactly one.
class ConceptExpr {
public:
    enum class Kind { Atomic, Top, Bottom, Not, And, Or, Exists, ForAll, DataSome };

    static ConceptExpr atomic(std::string name) { return ConceptExpr(Kind::Atomic, std::move(name), {}); }
    static ConceptExpr top() { return ConceptExpr(Kind::Top, {}, {}); }
    static ConceptExpr bottom() { return ConceptExpr(Kind::Bottom, {}, {}); }
    static ConceptExpr negation(ConceptExpr c) { return ConceptExpr(Kind::Not, {}, {std::move(c)}); }

    static ConceptExpr conjunction(std::vector<ConceptExpr> cs) {
        if (cs.size() < 2) throw std::invalid_argument("And needs at least two operands");
        return ConceptExpr(Kind::And, {}, std::move(cs));
    }
    static ConceptExpr disjunction(std::vector<ConceptExpr> cs) {
        if (cs.size() < 2) throw std::invalid_argument("Or needs at least two operands");
        return ConceptExpr(Kind::Or, {}, std::move(cs));
    }
    static ConceptExpr exists(std::string role, ConceptExpr filler) {
        return ConceptExpr(Kind::Exists, std::move(role), {std::move(filler)});
    }
    static ConceptExpr forAll(std::string role, ConceptExpr filler) {
        return ConceptExpr(Kind::ForAll, std::move(role), {std::move(filler)});
    }
    static ConceptExpr dataSome(std::string prop, DataRestriction r) {
        ConceptExpr c(Kind::DataSome, std::move(prop), {});
        c.restriction_ = std::move(r);
        return c;
    }

    Kind kind() const { return kind_; }
    bool is(Kind k) const { return kind_ == k; }

    // Concept name for Atomic, role for Exists/ForAll, property for DataSome.
    const std::string& name() const { return name_; }
    std::span<const ConceptExpr> operands() const { return args_; }
    const ConceptExpr& operand() const { return args_.front(); }
    const DataRestriction& restriction() const { return *restriction_; }

    friend bool operator==(const ConceptExpr& a, const ConceptExpr& b) { return (a <=> b) == 0; }

    friend std::strong_ordering operator<=>(const ConceptExpr& a, const ConceptExpr& b) {
        if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
        if (auto c = a.name_.compare(b.name_); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        if (a.restriction_ && b.restriction_) {
            if (*a.restriction_ < *b.restriction_) return std::strong_ordering::less;
            if (*b.restriction_ < *a.restriction_) return std::strong_ordering::greater;
        }
        const std::size_t n = std::min(a.args_.size(), b.args_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
        return a.args_.size() <=> b.args_.size();
    }

private:
    ConceptExpr(Kind k, std::string name, std::vector<ConceptExpr> args)
        : kind_(k), name_(std::move(name)), args_(std::move(args)) {}

    Kind kind_;
    std::string name_;
    std::vector<ConceptExpr> args_;
    std::optional<DataRestriction> restriction_;
};

// Functional-syntax rendering, the same text the ontology serializer emits.
inline std::string render(const ConceptExpr& c) {
    using K = ConceptExpr::Kind;
    auto list = [](const char* head, std::span<const ConceptExpr> xs) {
        std::string out = std::string(head) + "(";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += ' ';
            out += render(xs[i]);
        }
        return out + ")";
    };
    switch (c.kind()) {
        case K::Atomic: return c.name();
        case K::Top: return "Thing";
        case K::Bottom: return "Nothing";
        case K::Not: return "Not(" + render(c.operand()) + ")";
        case K::And: return list("And", c.operands());
        case K::Or: return list("Or", c.operands());
        case K::Exists: return "Some(" + c.name() + " " + render(c.operand()) + ")";
        case K::ForAll: return "All(" + c.name() + " " + render(c.operand()) + ")";
        case K::DataSome: return "DataSome(" + c.name() + " " + renderRestriction(c.restriction()) + ")";
    }
    return {};
}

// Stable name for a data restriction when it is treated as an opaque atomic
// concept (tableau placeholder, rule-engine discharge target). Contains spaces,
// so it can never collide with a declared identifier.
inline std::string dataRestrictionKey(const std::string& prop, const DataRestriction& r) {
    return prop + " some " + renderRestriction(r);
}

// Negation normal form: negation only in front of atomic concepts and
// DataSome placeholders.
inline ConceptExpr nnf(const ConceptExpr& c, bool negated = false) {
    using K = ConceptExpr::Kind;
    auto mapAll = [&](std::span<const ConceptExpr> xs, bool neg) {
        std::vector<ConceptExpr> out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(nnf(x, neg));
        return out;
    };
    switch (c.kind()) {
        case K::Atomic:
        case K::DataSome:
            return negated ? ConceptExpr::negation(c) : c;
        case K::Top: return negated ? ConceptExpr::bottom() : c;
        case K::Bottom: return negated ? ConceptExpr::top() : c;
        case K::Not: return nnf(c.operand(), !negated);
        case K::And:
            return negated ? ConceptExpr::disjunction(mapAll(c.operands(), true))
                           : ConceptExpr::conjunction(mapAll(c.operands(), false));
        case K::Or:
            return negated ? ConceptExpr::conjunction(mapAll(c.operands(), true))
                           : ConceptExpr::disjunction(mapAll(c.operands(), false));
        case K::Exists:
            return negated ? ConceptExpr::forAll(c.name(), nnf(c.operand(), true))
                           : ConceptExpr::exists(c.name(), nnf(c.operand(), false));
        case K::ForAll:
            return negated ? ConceptExpr::exists(c.name(), nnf(c.operand(), true))
                           : ConceptExpr::forAll(c.name(), nnf(c.operand(), false));
    }
    return c;
}

inline bool isNnf(const ConceptExpr& c) {
    using K = ConceptExpr::Kind;
    if (c.is(K::Not)) return c.operand().is(K::Atomic) || c.operand().is(K::DataSome);
    for (const auto& x : c.operands())
        if (!isNnf(x)) return false;
    return true;
}

// Flattens nested And/Or, sorts and deduplicates their operands. A list that
// collapses to one operand is replaced by that operand.
inline ConceptExpr canonicalize(const ConceptExpr& c) {
    using K = ConceptExpr::Kind;
    switch (c.kind()) {
        case K::Atomic:
        case K::Top:
        case K::Bottom:
        case K::DataSome:
            return c;
        case K::Not: return ConceptExpr::negation(canonicalize(c.operand()));
        case K::Exists: return ConceptExpr::exists(c.name(), canonicalize(c.operand()));
        case K::ForAll: return ConceptExpr::forAll(c.name(), canonicalize(c.operand()));
        case K::And:
        case K::Or: {
            std::vector<ConceptExpr> flat;
            for (const auto& x : c.operands()) {
                ConceptExpr y = canonicalize(x);
                if (y.kind() == c.kind())
                    flat.insert(flat.end(), y.operands().begin(), y.operands().end());
                else
                    flat.push_back(std::move(y));
            }
            std::sort(flat.begin(), flat.end());
            flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
            if (flat.size() == 1) return flat.front();
            return c.is(K::And) ? ConceptExpr::conjunction(std::move(flat))
                                : ConceptExpr::disjunction(std::move(flat));
        }
    }
    return c;
}

// Calls f(name) for every atomic concept name, f is not called for Top/Bottom.
template <typename ConceptFn, typename RoleFn, typename DataFn>
void forEachName(const ConceptExpr& c, ConceptFn&& onConcept, RoleFn&& onRole, DataFn&& onData) {
    using K = ConceptExpr::Kind;
    switch (c.kind()) {
        case K::Atomic: onConcept(c.name()); return;
        case K::Exists:
        case K::ForAll: onRole(c.name()); break;
        case K::DataSome: onData(c.name()); return;
        default: break;
    }
    for (const auto& x : c.operands()) forEachName(x, onConcept, onRole, onData);
}

} // namespace bonedx
