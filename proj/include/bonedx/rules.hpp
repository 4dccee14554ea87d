#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hierarchy.hpp"
#include "model.hpp"

namespace bonedx {

struct BuiltinTypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Builtins

inline bool evalBuiltin(BuiltinOp op, const std::vector<Literal>& args) {
    auto fail = [&](const std::string& why) -> bool {
        std::string shown;
        for (std::size_t i = 0; i < args.size(); ++i) shown += (i ? ", " : "") + renderLiteral(args[i]);
        throw BuiltinTypeError(std::string(toString(op)) + "(" + shown + "): " + why);
    };
    if (op == BuiltinOp::OneOf) {
        if (args.size() < 2) return fail("needs a value and at least one candidate");
        auto v = std::get_if<std::string>(&args[0]);
        if (!v) return fail("oneOf applies to strings");
        bool hit = false;
        for (std::size_t i = 1; i < args.size(); ++i) {
            auto c = std::get_if<std::string>(&args[i]);
            if (!c) return fail("oneOf candidates must be strings");
            hit = hit || *c == *v;
        }
        return hit;
    }
    if (args.size() != 2) return fail("needs exactly two arguments");
    const Literal &a = args[0], &b = args[1];
    if (op == BuiltinOp::Equal) {
        if (a.index() != b.index())
            return fail(std::string("cannot compare ") + literalTypeName(a) + " with " + literalTypeName(b));
        return a == b;
    }
    auto order = [&]() -> int {
        if (auto x = std::get_if<std::int64_t>(&a), y = std::get_if<std::int64_t>(&b); x && y)
            return *x < *y ? -1 : (*x > *y ? 1 : 0);
        if (auto x = std::get_if<DateTime>(&a), y = std::get_if<DateTime>(&b); x && y)
            return x->iso.compare(y->iso) < 0 ? -1 : (x->iso == y->iso ? 0 : 1);
        fail(std::string("ordering needs two integers or two dateTimes, got ") + literalTypeName(a) + " and " +
             literalTypeName(b));
        return 0;
    };
    const int c = order();
    switch (op) {
        case BuiltinOp::GreaterThanOrEqual: return c >= 0;
        case BuiltinOp::LessThanOrEqual: return c <= 0;
        case BuiltinOp::GreaterThan: return c > 0;
        case BuiltinOp::LessThan: return c < 0;
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// Facts

// Ground facts with set semantics and provenance. Class facts are atomic
// (concept name or data-restriction key).
class FactBase {
public:
    enum class Origin { Asserted, Entailed, Derived };

    struct Entry {
        Assertion fact;
        std::uint32_t generation = 0;
        Origin origin = Origin::Asserted;
        std::string rule;                  // Derived only
        std::vector<std::size_t> premises; // Derived only, in rule-body order
    };

    // Returns the index of the fact and whether it was new.
    std::pair<std::size_t, bool> add(const Assertion& a, Origin origin = Origin::Asserted) {
        return insert({normalizeFact(a), 0, origin, {}, {}});
    }

    std::pair<std::size_t, bool> addDerived(const Assertion& a, std::string rule, std::vector<std::size_t> premises) {
        std::uint32_t gen = 0;
        for (auto p : premises) gen = std::max(gen, entries_[p].generation);
        return insert({normalizeFact(a), gen + 1, Origin::Derived, std::move(rule), std::move(premises)});
    }

    std::size_t size() const { return entries_.size(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }

    std::optional<std::size_t> find(const Assertion& a) const {
        auto it = index_.find(key(normalizeFact(a)));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Assertion& a) const { return find(a).has_value(); }

    std::set<Assertion> factSet() const {
        std::set<Assertion> s;
        for (const auto& e : entries_) s.insert(e.fact);
        return s;
    }

    static FactBase fromAssertions(const std::vector<Assertion>& abox) {
        FactBase fb;
        for (const auto& a : abox) {
            if (auto c = std::get_if<ClassAssertion>(&a);
                c && !c->concept_.is(ConceptExpr::Kind::Atomic) && !c->concept_.is(ConceptExpr::Kind::DataSome))
                continue; // complex types reach rules through realization
            fb.add(a);
        }
        return fb;
    }

    static std::string traceId(std::size_t i) { return "t" + std::to_string(i); }

    // Class name of an atomic class fact; DataSome becomes its restriction key.
    static std::string className(const ClassAssertion& c) {
        if (c.concept_.is(ConceptExpr::Kind::DataSome)) return dataRestrictionKey(c.concept_.name(), c.concept_.restriction());
        return c.concept_.name();
    }

private:
    static Assertion normalizeFact(const Assertion& a) {
        if (auto c = std::get_if<ClassAssertion>(&a)) {
            if (!c->concept_.is(ConceptExpr::Kind::Atomic) && !c->concept_.is(ConceptExpr::Kind::DataSome))
                throw std::invalid_argument("class facts must be atomic: " + render(c->concept_));
        }
        return a;
    }

    static std::string key(const Assertion& a) {
        if (auto c = std::get_if<ClassAssertion>(&a)) return "C\x1f" + className(*c) + "\x1f" + c->individual;
        if (auto o = std::get_if<ObjectPropertyAssertion>(&a)) return "O\x1f" + o->role + "\x1f" + o->subject + "\x1f" + o->object;
        const auto& d = std::get<DataPropertyAssertion>(a);
        return "D\x1f" + d.property + "\x1f" + d.subject + "\x1f" + renderLiteral(d.value);
    }

    std::pair<std::size_t, bool> insert(Entry e) {
        auto [it, fresh] = index_.emplace(key(e.fact), entries_.size());
        if (fresh) entries_.push_back(std::move(e));
        return {it->second, fresh};
    }

    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Ground fact in rule-atom notation: C(a), r(a, b), p(a, "v").
inline std::string renderFact(const Assertion& a) {
    if (auto c = std::get_if<ClassAssertion>(&a)) {
        if (c->concept_.is(ConceptExpr::Kind::Atomic)) return c->concept_.name() + "(" + c->individual + ")";
        return "(" + render(c->concept_) + ")(" + c->individual + ")";
    }
    if (auto o = std::get_if<ObjectPropertyAssertion>(&a)) return o->role + "(" + o->subject + ", " + o->object + ")";
    const auto& d = std::get<DataPropertyAssertion>(a);
    return d.property + "(" + d.subject + ", " + renderLiteral(d.value) + ")";
}

struct InferenceResult {
    FactBase facts;                   // input facts followed by derived ones
    std::vector<std::size_t> derived; // indices of derived facts, in derivation order
    std::size_t rounds = 0;

    std::set<Assertion> derivedSet() const {
        std::set<Assertion> s;
        for (auto i : derived) s.insert(facts[i].fact);
        return s;
    }
};

// ---------------------------------------------------------------------------
// Rule compilation

// SubPropertyChainOf and InverseOf as rules (the tableau ignores both).
inline std::vector<Rule> compileRBox(const Ontology& o) {
    std::vector<Rule> out;
    auto v = [](std::size_t i) { return Term{Variable{"x" + std::to_string(i)}}; };
    for (const auto& ax : o.axioms) {
        if (auto c = std::get_if<SubPropertyChainOf>(&ax)) {
            Rule r;
            r.name = "chain";
            for (const auto& role : c->chain) r.name += "_" + role;
            for (std::size_t i = 0; i < c->chain.size(); ++i) r.body.push_back(Atom::objectAtom(c->chain[i], v(i), v(i + 1)));
            r.head.push_back(Atom::objectAtom(c->super, v(0), v(c->chain.size())));
            out.push_back(std::move(r));
        } else if (auto inv = std::get_if<InverseOf>(&ax)) {
            out.push_back({"inverse_" + inv->first + "_" + inv->second, {Atom::objectAtom(inv->first, v(0), v(1))},
                           {Atom::objectAtom(inv->second, v(1), v(0))}});
            out.push_back({"inverse_" + inv->second + "_" + inv->first, {Atom::objectAtom(inv->second, v(0), v(1))},
                           {Atom::objectAtom(inv->first, v(1), v(0))}});
        }
    }
    return out;
}

// Every DataSome restriction used by the ontology, keyed by its placeholder name.
inline std::map<std::string, ConceptExpr> dataRestrictions(const Ontology& o) {
    std::map<std::string, ConceptExpr> out;
    auto walk = [&](const ConceptExpr& c, auto&& self) -> void {
        if (c.is(ConceptExpr::Kind::DataSome)) out.emplace(dataRestrictionKey(c.name(), c.restriction()), c);
        for (const auto& x : c.operands()) self(x, self);
    };
    for (const auto& ax : o.axioms) {
        if (auto p = std::get_if<SubClassOf>(&ax)) {
            walk(p->sub, walk);
            walk(p->sup, walk);
        } else if (auto p = std::get_if<EquivalentClasses>(&ax)) {
            walk(p->first, walk);
            walk(p->second, walk);
        } else if (auto p = std::get_if<DisjointClasses>(&ax)) {
            for (const auto& c : p->classes) walk(c, walk);
        }
    }
    for (const auto& a : o.abox)
        if (auto c = std::get_if<ClassAssertion>(&a)) walk(c->concept_, walk);
    return out;
}

// One rule per DataSome restriction: p(?x, ?v) ^ test(?v) -> placeholder(?x).
// This is where asserted literal values discharge the restrictions the
// tableau treats as opaque.
inline std::vector<Rule> compileDataRestrictions(const Ontology& o) {
    std::vector<Rule> out;
    for (const auto& [key, c] : dataRestrictions(o)) {
        const auto& r = c.restriction();
        Rule rule;
        rule.name = "data_" + c.name();
        Term x = Variable{"x"}, v = Variable{"v"};
        rule.body.push_back(Atom::dataAtom(c.name(), x, v));
        if (r.kind == DataRestriction::Kind::NumericCompare) {
            static const std::map<CompareOp, std::pair<BuiltinOp, const char*>> ops{
                {CompareOp::GreaterEq, {BuiltinOp::GreaterThanOrEqual, "ge"}},
                {CompareOp::LessEq, {BuiltinOp::LessThanOrEqual, "le"}},
                {CompareOp::Greater, {BuiltinOp::GreaterThan, "gt"}},
                {CompareOp::Less, {BuiltinOp::LessThan, "lt"}},
                {CompareOp::Equal, {BuiltinOp::Equal, "eq"}}};
            const auto& [op, tag] = ops.at(r.op);
            rule.name += std::string("_") + tag + "_" + std::to_string(r.bound);
            rule.body.push_back(Atom::builtinAtom(op, {v, Literal{r.bound}}));
        } else {
            rule.name += "_oneOf";
            std::vector<Term> args{v};
            for (const auto& s : r.values) {
                args.push_back(Literal{s});
                rule.name += "_" + s;
            }
            rule.body.push_back(Atom::builtinAtom(BuiltinOp::OneOf, std::move(args)));
        }
        rule.head.push_back(Atom::classAtom(key, x));
        out.push_back(std::move(rule));
    }
    return out;
}

// Warnings for rules whose body variables fall into several unconnected
// groups: such a body matches the cross product of the groups.
inline std::vector<std::string> lintRules(const std::vector<Rule>& rules) {
    std::vector<std::string> out;
    for (const auto& r : rules) {
        std::map<std::string, std::string> parent;
        auto find = [&](std::string v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (const auto& a : r.body)
            for (const auto& t : a.args)
                if (auto v = std::get_if<Variable>(&t)) parent.emplace(v->name, v->name);
        for (const auto& a : r.body) {
            std::optional<std::string> first;
            for (const auto& t : a.args)
                if (auto v = std::get_if<Variable>(&t)) {
                    if (!first)
                        first = v->name;
                    else
                        parent[find(v->name)] = find(*first);
                }
        }
        std::map<std::string, std::vector<std::string>> groups;
        for (const auto& [v, _] : parent) groups[find(v)].push_back("?" + v);
        if (groups.size() < 2) continue;
        std::string msg = "rule " + r.name + ": body variables form " + std::to_string(groups.size()) +
                          " unconnected groups (";
        bool firstGroup = true;
        for (const auto& [_, vs] : groups) {
            msg += firstGroup ? "" : " | ";
            firstGroup = false;
            for (std::size_t i = 0; i < vs.size(); ++i) msg += (i ? " " : "") + vs[i];
        }
        out.push_back(msg + "); matches are a cross product");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

// Indexes a FactBase for joins. Facts are indexed in insertion order, so each
// per-predicate list is sorted by fact index and ranges are cheap to slice.
class RuleMatcher {
public:
    RuleMatcher(FactBase& fb, const std::vector<Rule>& rules, const Hierarchy& h) : fb_(fb), h_(h) {
        for (const auto& r : rules)
            for (const auto& a : r.body)
                if (a.kind == Atom::Kind::Class) classPreds_.insert(a.predicate);
    }

    void catchUp() {
        for (; indexed_ < fb_.size(); ++indexed_) {
            const std::size_t i = indexed_;
            const Assertion& f = fb_[i].fact;
            if (auto c = std::get_if<ClassAssertion>(&f)) {
                const std::string d = FactBase::className(*c);
                for (const auto& cp : classPreds_) {
                    if (!matchesClass(d, cp)) continue;
                    auto [it, fresh] = classMember_.emplace(cp + '\x1f' + c->individual, i);
                    if (fresh) classIdx_[cp].push_back(i);
                }
            } else if (auto o = std::get_if<ObjectPropertyAssertion>(&f)) {
                objByPred_[o->role].push_back(i);
                objBySubj_[o->role + '\x1f' + o->subject].push_back(i);
            } else {
                const auto& d = std::get<DataPropertyAssertion>(f);
                dataByPred_[d.property].push_back(i);
                dataBySubj_[d.property + '\x1f' + d.subject].push_back(i);
            }
        }
    }

    // Applies `rule` with body atom `deltaPos` (a non-builtin index, or -1 for
    // none) restricted to [deltaLo, hi), atoms before it to [0, deltaLo) and
    // atoms after it to [0, hi). New facts are appended to the FactBase.
    void apply(const Rule& rule, int deltaPos, std::size_t deltaLo, std::size_t hi, std::vector<std::size_t>& derived) {
        Binding b;
        std::vector<std::size_t> premises(rule.body.size(), SIZE_MAX);
        // Join order: delta atom first, then the rest in body order.
        std::vector<int> order;
        if (deltaPos >= 0) order.push_back(deltaPos);
        for (int i = 0; i < static_cast<int>(rule.body.size()); ++i)
            if (i != deltaPos && rule.body[i].kind != Atom::Kind::Builtin) order.push_back(i);
        auto range = [&](int i) -> std::pair<std::size_t, std::size_t> {
            if (deltaPos < 0) return {0, hi};
            if (i == deltaPos) return {deltaLo, hi};
            if (i < deltaPos) return {0, deltaLo};
            return {0, hi};
        };
        join(rule, order, 0, range, b, premises, derived);
    }

    const FactBase& facts() const { return fb_; }

private:
    struct Value {
        bool literal = false;
        std::string name; // individual
        Literal lit;
        bool operator==(const Value& o) const { return literal == o.literal && (literal ? lit == o.lit : name == o.name); }
    };
    using Binding = std::map<std::string, Value>;

    bool matchesClass(const std::string& d, const std::string& c) {
        if (d == c) return true;
        auto key = d + '\x1f' + c;
        if (auto it = subsCache_.find(key); it != subsCache_.end()) return it->second;
        bool r = h_.contains(d) && h_.contains(c) && h_.subsumedBy(d, c);
        subsCache_.emplace(std::move(key), r);
        return r;
    }

    // Unifies a term with a value; records new bindings in `bound`.
    static bool unify(const Term& t, const Value& v, Binding& b, std::vector<std::string>& bound) {
        if (auto var = std::get_if<Variable>(&t)) {
            auto it = b.find(var->name);
            if (it != b.end()) return it->second == v;
            b.emplace(var->name, v);
            bound.push_back(var->name);
            return true;
        }
        if (auto ind = std::get_if<Individual>(&t)) return !v.literal && v.name == ind->name;
        return v.literal && v.lit == std::get<Literal>(t);
    }

    static std::optional<Value> resolve(const Term& t, const Binding& b) {
        if (auto var = std::get_if<Variable>(&t)) {
            auto it = b.find(var->name);
            if (it == b.end()) return std::nullopt;
            return it->second;
        }
        if (auto ind = std::get_if<Individual>(&t)) return Value{false, ind->name, {}};
        return Value{true, {}, std::get<Literal>(t)};
    }

    static std::pair<std::vector<std::size_t>::const_iterator, std::vector<std::size_t>::const_iterator>
    slice(const std::vector<std::size_t>& v, std::pair<std::size_t, std::size_t> r) {
        return {std::lower_bound(v.begin(), v.end(), r.first), std::lower_bound(v.begin(), v.end(), r.second)};
    }

    bool builtinsHold(const Rule& rule, const Binding& b) {
        for (const auto& a : rule.body) {
            if (a.kind != Atom::Kind::Builtin) continue;
            std::vector<Literal> args;
            bool ready = true;
            for (const auto& t : a.args) {
                auto v = resolve(t, b);
                if (!v) {
                    ready = false;
                    break;
                }
                if (!v->literal)
                    throw BuiltinTypeError("rule " + rule.name + ": " + toString(a.builtin) + " applied to individual " +
                                           v->name + describe(b));
                args.push_back(v->lit);
            }
            if (!ready) continue;
            try {
                if (!evalBuiltin(a.builtin, args)) return false;
            } catch (const BuiltinTypeError& e) {
                throw BuiltinTypeError("rule " + rule.name + ": " + e.what() + describe(b));
            }
        }
        return true;
    }

    static std::string describe(const Binding& b) {
        std::string s = " with {";
        bool first = true;
        for (const auto& [k, v] : b) {
            s += (first ? "?" : ", ?") + k + "=" + (v.literal ? renderLiteral(v.lit) : v.name);
            first = false;
        }
        return s + "}";
    }

    template <typename RangeFn>
    void join(const Rule& rule, const std::vector<int>& order, std::size_t k, RangeFn& range, Binding& b,
              std::vector<std::size_t>& premises, std::vector<std::size_t>& derived) {
        if (!builtinsHold(rule, b)) return;
        if (k == order.size()) return fire(rule, b, premises, derived);
        const int ai = order[k];
        const Atom& a = rule.body[ai];
        const auto r = range(ai);
        auto tryFact = [&](std::size_t idx, const Value& s, const std::optional<Value>& o) {
            std::vector<std::string> bound;
            bool ok = unify(a.args[0], s, b, bound) && (!o || unify(a.args[1], *o, b, bound));
            if (ok) {
                premises[ai] = idx;
                join(rule, order, k + 1, range, b, premises, derived);
            }
            for (const auto& v : bound) b.erase(v);
        };
        if (a.kind == Atom::Kind::Class) {
            auto subj = resolve(a.args[0], b);
            if (subj) {
                if (subj->literal) return;
                auto it = classMember_.find(a.predicate + '\x1f' + subj->name);
                if (it != classMember_.end() && it->second >= r.first && it->second < r.second)
                    tryFact(it->second, *subj, std::nullopt);
                return;
            }
            auto lst = classIdx_.find(a.predicate);
            if (lst == classIdx_.end()) return;
            auto [lo, hiIt] = slice(lst->second, r);
            for (auto it = lo; it != hiIt; ++it) {
                const auto& c = std::get<ClassAssertion>(fb_[*it].fact);
                tryFact(*it, Value{false, c.individual, {}}, std::nullopt);
            }
            return;
        }
        const bool data = a.kind == Atom::Kind::DataProperty;
        auto& byPred = data ? dataByPred_ : objByPred_;
        auto& bySubj = data ? dataBySubj_ : objBySubj_;
        const std::vector<std::size_t>* lst = nullptr;
        if (auto subj = resolve(a.args[0], b)) {
            if (subj->literal) return;
            auto it = bySubj.find(a.predicate + '\x1f' + subj->name);
            if (it != bySubj.end()) lst = &it->second;
        } else {
            auto it = byPred.find(a.predicate);
            if (it != byPred.end()) lst = &it->second;
        }
        if (!lst) return;
        auto [lo, hiIt] = slice(*lst, r);
        // Copy the slice bounds: firing appends to the FactBase, not to these
        // lists (indexing is deferred to catchUp), so iterators stay valid.
        for (auto it = lo; it != hiIt; ++it) {
            const Assertion& f = fb_[*it].fact;
            if (data) {
                const auto& d = std::get<DataPropertyAssertion>(f);
                tryFact(*it, Value{false, d.subject, {}}, Value{true, {}, d.value});
            } else {
                const auto& o = std::get<ObjectPropertyAssertion>(f);
                tryFact(*it, Value{false, o.subject, {}}, Value{false, o.object, {}});
            }
        }
    }

    void fire(const Rule& rule, const Binding& b, const std::vector<std::size_t>& premises,
              std::vector<std::size_t>& derived) {
        std::vector<std::size_t> used;
        for (auto p : premises)
            if (p != SIZE_MAX) used.push_back(p);
        for (const auto& h : rule.head) {
            std::vector<Value> vs;
            for (const auto& t : h.args) vs.push_back(*resolve(t, b));
            std::optional<Assertion> fact;
            if (h.kind == Atom::Kind::Class && !vs[0].literal)
                fact = ClassAssertion{vs[0].name, ConceptExpr::atomic(h.predicate)};
            else if (h.kind == Atom::Kind::ObjectProperty && !vs[0].literal && !vs[1].literal)
                fact = ObjectPropertyAssertion{h.predicate, vs[0].name, vs[1].name};
            else if (h.kind == Atom::Kind::DataProperty && !vs[0].literal && vs[1].literal)
                fact = DataPropertyAssertion{h.predicate, vs[0].name, vs[1].lit};
            if (!fact) continue; // ill-typed binding; nothing to derive
            auto [idx, fresh] = fb_.addDerived(*fact, rule.name, used);
            if (fresh) derived.push_back(idx);
        }
    }

    FactBase& fb_;
    const Hierarchy& h_;
    std::set<std::string> classPreds_;
    std::size_t indexed_ = 0;
    std::unordered_map<std::string, std::vector<std::size_t>> classIdx_, objByPred_, objBySubj_, dataByPred_, dataBySubj_;
    std::unordered_map<std::string, std::size_t> classMember_;
    std::unordered_map<std::string, bool> subsCache_;
};

} // namespace detail

// Semi-naive forward chaining to the least fixpoint. ClassAtom C(?x) matches
// any class fact D(a) with D subsumed by C in `h`.
inline InferenceResult saturate(FactBase facts, const std::vector<Rule>& rules, const Hierarchy& h = Hierarchy()) {
    InferenceResult res{std::move(facts), {}, 0};
    detail::RuleMatcher m(res.facts, rules, h);
    std::size_t deltaLo = 0;
    for (;;) {
        const std::size_t hi = res.facts.size();
        if (deltaLo == hi) break;
        m.catchUp();
        ++res.rounds;
        for (const auto& r : rules)
            for (int i = 0; i < static_cast<int>(r.body.size()); ++i)
                if (r.body[i].kind != Atom::Kind::Builtin) m.apply(r, i, deltaLo, hi, res.derived);
        deltaLo = hi;
    }
    return res;
}

// Naive evaluation: every round re-joins every rule against all facts.
inline InferenceResult saturateNaive(FactBase facts, const std::vector<Rule>& rules, const Hierarchy& h = Hierarchy()) {
    InferenceResult res{std::move(facts), {}, 0};
    detail::RuleMatcher m(res.facts, rules, h);
    for (;;) {
        const std::size_t hi = res.facts.size();
        m.catchUp();
        ++res.rounds;
        for (const auto& r : rules) m.apply(r, -1, 0, hi, res.derived);
        if (res.facts.size() == hi) break;
    }
    return res;
}

// Re-applies the recorded rule to the recorded premises and checks that it
// yields the fact at `idx`.
inline bool replayTrace(const FactBase& fb, std::size_t idx, const std::vector<Rule>& rules, const Hierarchy& h = Hierarchy()) {
    const auto& e = fb[idx];
    if (e.origin != FactBase::Origin::Derived) return false;
    auto rule = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.name == e.rule; });
    if (rule == rules.end()) return false;
    FactBase local;
    for (auto p : e.premises) {
        if (p >= idx) return false; // premises precede their conclusion
        local.add(fb[p].fact);
    }
    auto res = saturateNaive(local, {*rule}, h);
    for (auto i : res.derived)
        if (res.facts[i].fact == e.fact) return true;
    return false;
}

} // namespace bonedx
