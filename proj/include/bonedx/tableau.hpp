#pragma once

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hierarchy.hpp"
#include "model.hpp"

namespace bonedx {

struct ResourceLimit : std::runtime_error {
    explicit ResourceLimit(std::size_t budget)
        : std::runtime_error("tableau expansion budget of " + std::to_string(budget) + " nodes exceeded") {}
};

struct Inconsistent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReasonerOptions {
    std::size_t nodeBudget = 1'000'000; // per query
};

struct Realization {
    std::vector<std::string> types;        // every entailed named concept, sorted, Thing included
    std::vector<std::string> mostSpecific; // one representative per minimal group
    friend bool operator==(const Realization&, const Realization&) = default;
};

using RealizationMap = std::map<std::string, Realization>;

namespace detail {

enum class CKind : std::uint8_t { Top, Bottom, Atom, NotAtom, And, Or, Exists, ForAll };

struct CNode {
    CKind kind;
    std::uint32_t name = 0; // atom index for Atom/NotAtom, role index for Exists/ForAll
    std::vector<std::uint32_t> args;
};

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// Hash-consed NNF concepts. Ids 0 and 1 are Top and Bottom. And operands are
// sorted by id; Or operands keep their syntactic order, which is the
// branching order.
class ConceptPool {
public:
    static constexpr std::uint32_t kTop = 0, kBottom = 1;

    ConceptPool() {
        make(CKind::Top, 0, {});
        make(CKind::Bottom, 0, {});
        neg_ = {kBottom, kTop};
    }

    std::size_t size() const { return nodes_.size(); }
    const CNode& node(std::uint32_t id) const { return nodes_[id]; }

    std::uint32_t atomIndex(const std::string& name) {
        auto [it, fresh] = atomIdx_.emplace(name, static_cast<std::uint32_t>(atomNames_.size()));
        if (fresh) {
            atomNames_.push_back(name);
            placeholderProp_.push_back(-1);
            atomPos_.push_back(0);
            atomNeg_.push_back(0);
            atomPos_.back() = make(CKind::Atom, it->second, {});
            atomNeg_[it->second] = make(CKind::NotAtom, it->second, {});
            neg_[atomPos_[it->second]] = atomNeg_[it->second];
            neg_[atomNeg_[it->second]] = atomPos_[it->second];
        }
        return it->second;
    }
    std::optional<std::uint32_t> findAtom(const std::string& name) const {
        auto it = atomIdx_.find(name);
        if (it == atomIdx_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t atomCount() const { return atomNames_.size(); }
    const std::string& atomName(std::uint32_t a) const { return atomNames_[a]; }
    std::uint32_t atom(std::uint32_t a) const { return atomPos_[a]; }
    std::uint32_t notAtom(std::uint32_t a) const { return atomNeg_[a]; }
    bool isPlaceholder(std::uint32_t a) const { return placeholderProp_[a] >= 0; }
    int placeholderProperty(std::uint32_t a) const { return placeholderProp_[a]; }

    std::uint32_t roleIndex(const std::string& name) {
        auto [it, fresh] = roleIdx_.emplace(name, static_cast<std::uint32_t>(roleNames_.size()));
        if (fresh) roleNames_.push_back(name);
        return it->second;
    }
    std::size_t roleCount() const { return roleNames_.size(); }

    std::uint32_t dataIndex(const std::string& name) {
        auto [it, fresh] = dataIdx_.emplace(name, static_cast<std::uint32_t>(dataNames_.size()));
        if (fresh) dataNames_.push_back(name);
        return it->second;
    }
    std::size_t dataCount() const { return dataNames_.size(); }

    std::uint32_t conj(std::vector<std::uint32_t> xs) {
        std::vector<std::uint32_t> flat;
        for (auto x : xs) {
            if (x == kBottom) return kBottom;
            if (x == kTop) continue;
            if (nodes_[x].kind == CKind::And)
                flat.insert(flat.end(), nodes_[x].args.begin(), nodes_[x].args.end());
            else
                flat.push_back(x);
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        if (flat.empty()) return kTop;
        if (flat.size() == 1) return flat[0];
        return make(CKind::And, 0, std::move(flat));
    }

    std::uint32_t disj(std::vector<std::uint32_t> xs) {
        std::vector<std::uint32_t> flat;
        auto push = [&](std::uint32_t x) {
            if (std::find(flat.begin(), flat.end(), x) == flat.end()) flat.push_back(x);
        };
        for (auto x : xs) {
            if (x == kTop) return kTop;
            if (x == kBottom) continue;
            if (nodes_[x].kind == CKind::Or)
                for (auto y : nodes_[x].args) push(y);
            else
                push(x);
        }
        if (flat.empty()) return kBottom;
        if (flat.size() == 1) return flat[0];
        std::uint32_t id = make(CKind::Or, 0, flat);
        for (auto a : flat) negate(a); // BCP needs every operand's complement
        return id;
    }

    std::uint32_t exists(std::uint32_t role, std::uint32_t filler) {
        if (filler == kBottom) return kBottom;
        return make(CKind::Exists, role, {filler});
    }
    std::uint32_t forAll(std::uint32_t role, std::uint32_t filler) {
        if (filler == kTop) return kTop;
        return make(CKind::ForAll, role, {filler});
    }

    std::uint32_t negate(std::uint32_t id) {
        if (id < neg_.size() && neg_[id] != kNone) return neg_[id];
        const CNode n = nodes_[id];
        std::uint32_t r = kTop;
        switch (n.kind) {
            case CKind::Top: r = kBottom; break;
            case CKind::Bottom: r = kTop; break;
            case CKind::Atom: r = atomNeg_[n.name]; break;
            case CKind::NotAtom: r = atomPos_[n.name]; break;
            case CKind::And:
            case CKind::Or: {
                std::vector<std::uint32_t> ys;
                for (auto a : n.args) ys.push_back(negate(a));
                r = n.kind == CKind::And ? disj(std::move(ys)) : conj(std::move(ys));
                break;
            }
            case CKind::Exists: r = forAll(n.name, negate(n.args[0])); break;
            case CKind::ForAll: r = exists(n.name, negate(n.args[0])); break;
        }
        setNeg(id, r);
        setNeg(r, id);
        return r;
    }

    // Interns a concept already in negation normal form.
    std::uint32_t intern(const ConceptExpr& c) {
        using K = ConceptExpr::Kind;
        switch (c.kind()) {
            case K::Top: return kTop;
            case K::Bottom: return kBottom;
            case K::Atomic: return atom(atomIndex(c.name()));
            case K::DataSome: {
                auto a = atomIndex(dataRestrictionKey(c.name(), c.restriction()));
                placeholderProp_[a] = static_cast<int>(dataIndex(c.name()));
                return atom(a);
            }
            case K::Not: {
                const auto& o = c.operand();
                if (o.is(K::Atomic) || o.is(K::DataSome)) return negate(intern(o));
                return intern(nnf(c));
            }
            case K::And:
            case K::Or: {
                std::vector<std::uint32_t> xs;
                for (const auto& x : c.operands()) xs.push_back(intern(x));
                return c.is(K::And) ? conj(std::move(xs)) : disj(std::move(xs));
            }
            case K::Exists: return exists(roleIndex(c.name()), intern(c.operand()));
            case K::ForAll: return forAll(roleIndex(c.name()), intern(c.operand()));
        }
        return kTop;
    }

private:
    static constexpr std::uint32_t kNone = 0xffffffffu;

    void setNeg(std::uint32_t id, std::uint32_t n) {
        if (neg_.size() <= id) neg_.resize(nodes_.size(), kNone);
        neg_[id] = n;
    }

    std::uint32_t make(CKind k, std::uint32_t name, std::vector<std::uint32_t> args) {
        std::vector<std::uint32_t> key;
        key.reserve(args.size() + 2);
        key.push_back(static_cast<std::uint32_t>(k));
        key.push_back(name);
        key.insert(key.end(), args.begin(), args.end());
        auto [it, fresh] = index_.emplace(std::move(key), static_cast<std::uint32_t>(nodes_.size()));
        if (fresh) {
            nodes_.push_back({k, name, std::move(args)});
            neg_.resize(nodes_.size(), kNone);
        }
        return it->second;
    }

    std::vector<CNode> nodes_;
    std::vector<std::uint32_t> neg_;
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> index_;
    std::map<std::string, std::uint32_t> atomIdx_, roleIdx_, dataIdx_;
    std::vector<std::string> atomNames_, roleNames_, dataNames_;
    std::vector<std::uint32_t> atomPos_, atomNeg_;
    std::vector<int> placeholderProp_;
};

// Closed node label plus the disjunctions it still has to decide.
struct NodeLabel {
    std::vector<std::uint32_t> items; // sorted
    std::vector<std::uint32_t> open;  // Or ids with no operand in items and >= 2 live operands
};

} // namespace detail

// ALC tableau reasoner. The TBox is compiled once (absorption into lazy
// unfolding, the remainder internalized as universal constraints) and reused
// for every query. Not thread-safe: give each thread its own instance.
class Reasoner {
public:
    explicit Reasoner(const Ontology& o, ReasonerOptions opts = {}) : onto_(o), opts_(opts) { compile(); }

    const Ontology& ontology() const { return onto_; }
    std::size_t nodesUsed() const { return lastNodes_; }

    bool isSatisfiable(const ConceptExpr& c) {
        startQuery();
        return satRoot({pool_.intern(nnf(c))}, nullptr);
    }

    bool isSubsumedBy(const ConceptExpr& c, const ConceptExpr& d) {
        startQuery();
        auto ic = pool_.intern(nnf(c));
        auto nd = pool_.intern(nnf(d, true));
        return !satRoot({ic, nd}, nullptr);
    }

    bool isConsistent() { return isConsistent({}); }

    bool isConsistent(const std::vector<Assertion>& extra) {
        ABox box = buildABox(extra);
        startQuery();
        std::vector<detail::NodeLabel> state;
        return aboxSatisfiable(box, nullptr, state);
    }

    // Transitively reduced hierarchy over the signature's concept names.
    const Hierarchy& classify() {
        if (hierarchy_) return *hierarchy_;
        if (!isConsistent()) throw Inconsistent("ontology '" + onto_.name + "' has no model");
        hierarchy_ = computeHierarchy();
        return *hierarchy_;
    }

    // Entailed named types of every individual in the ontology's ABox plus
    // `extra`. With `only`, just those individuals are realized.
    RealizationMap realize(const std::vector<Assertion>& extra = {}, const std::set<std::string>* only = nullptr) {
        const Hierarchy& h = classify();
        ABox box = buildABox(extra);
        startQuery();
        std::vector<detail::NodeLabel> model;
        if (!aboxSatisfiable(box, nullptr, model)) throw Inconsistent("ABox has no model");

        RealizationMap out;
        for (std::size_t i = 0; i < box.names.size(); ++i) {
            if (only && !only->count(box.names[i])) continue;
            std::set<std::string> entailed{"Thing"};
            for (auto id : model[i].items) {
                const auto& n = pool_.node(id);
                if (n.kind != detail::CKind::Atom || pool_.isPlaceholder(n.name)) continue;
                const std::string& name = pool_.atomName(n.name);
                if (!h.contains(name)) continue;
                bool sure = std::binary_search(box.base[i].items.begin(), box.base[i].items.end(), id);
                if (!sure) {
                    startQuery();
                    std::vector<detail::NodeLabel> ignored;
                    const std::pair<std::size_t, std::uint32_t> negated{i, pool_.notAtom(n.name)};
                    sure = !aboxSatisfiable(box, &negated, ignored);
                }
                if (sure) entailed.insert(name);
            }
            // Close under the hierarchy and its equivalence groups.
            std::set<std::size_t> groups;
            for (const auto& n : entailed)
                for (auto g : h.ancestorGroups(*h.groupOf(n))) groups.insert(g);
            Realization r;
            for (auto g : groups)
                for (const auto& n : h.groups()[g]) r.types.push_back(n);
            std::sort(r.types.begin(), r.types.end());
            for (auto g : groups) {
                bool minimal = std::none_of(groups.begin(), groups.end(),
                                            [&](std::size_t o) { return o != g && h.subsumedBy(o, g); });
                if (minimal) r.mostSpecific.push_back(h.representative(g));
            }
            std::sort(r.mostSpecific.begin(), r.mostSpecific.end());
            out.emplace(box.names[i], std::move(r));
        }
        return out;
    }

    // Instance check: ABox + extra entails ind : c.
    bool isInstance(const std::string& ind, const ConceptExpr& c, const std::vector<Assertion>& extra = {}) {
        auto more = extra;
        more.push_back(ClassAssertion{ind, ConceptExpr::negation(c)});
        return !isConsistent(more);
    }

private:
    using Label = std::vector<std::uint32_t>;

    struct ABox {
        std::vector<std::string> names;
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out; // (role, target)
        std::vector<Label> initial;
        std::vector<detail::NodeLabel> base; // deterministic closure, filled by aboxSatisfiable
        bool baseReady = false;
        bool baseClash = false;
    };

    // ---------------------------------------------------------------- compile

    void compile() {
        for (const auto& ax : onto_.axioms) {
            if (auto p = std::get_if<ObjectPropertyDecl>(&ax)) {
                auto r = pool_.roleIndex(p->name);
                grow();
                if (p->domain) roleDomain_[r] = pool_.atom(pool_.atomIndex(*p->domain));
                if (p->range) roleRange_[r] = pool_.atom(pool_.atomIndex(*p->range));
            } else if (auto p = std::get_if<DataPropertyDecl>(&ax)) {
                auto d = pool_.dataIndex(p->name);
                grow();
                if (p->domain) dataDomain_[d] = pool_.atom(pool_.atomIndex(*p->domain));
            }
        }
        for (const auto& ax : onto_.axioms) {
            if (auto p = std::get_if<SubClassOf>(&ax)) {
                absorb(p->sub, p->sup);
            } else if (auto p = std::get_if<EquivalentClasses>(&ax)) {
                absorb(p->first, p->second);
                absorb(p->second, p->first);
            } else if (auto p = std::get_if<DisjointClasses>(&ax)) {
                for (std::size_t i = 0; i < p->classes.size(); ++i)
                    for (std::size_t j = i + 1; j < p->classes.size(); ++j)
                        absorb(p->classes[i], ConceptExpr::negation(p->classes[j]));
            }
        }
        // Make sure every signature name has an atom, so classification sees it.
        for (const auto& n : signatureOf(onto_).concepts) pool_.atomIndex(n);
        grow();
    }

    void grow() {
        unfold_.resize(pool_.atomCount());
        roleDomain_.resize(pool_.roleCount(), detail::ConceptPool::kTop);
        roleRange_.resize(pool_.roleCount(), detail::ConceptPool::kTop);
        dataDomain_.resize(pool_.dataCount(), detail::ConceptPool::kTop);
    }

    void addUnfold(std::uint32_t atomIdx, std::uint32_t d) {
        grow();
        if (d != detail::ConceptPool::kTop) unfold_[atomIdx].push_back(d);
    }

    void addUniversal(std::uint32_t d) {
        if (d != detail::ConceptPool::kTop &&
            std::find(universal_.begin(), universal_.end(), d) == universal_.end())
            universal_.push_back(d);
    }

    static bool atomLike(const ConceptExpr& c) {
        return c.is(ConceptExpr::Kind::Atomic) || c.is(ConceptExpr::Kind::DataSome);
    }

    void absorb(const ConceptExpr& subRaw, const ConceptExpr& supRaw) {
        using K = ConceptExpr::Kind;
        const ConceptExpr sub = canonicalize(nnf(subRaw));
        const std::uint32_t d = pool_.intern(nnf(supRaw));
        grow();
        if (sub.is(K::Bottom)) return;
        if (sub.is(K::Top)) return addUniversal(d);
        if (atomLike(sub)) return addUnfold(pool_.node(pool_.intern(sub)).name, d);
        if (sub.is(K::Or)) {
            for (const auto& x : sub.operands()) absorb(x, supRaw);
            return;
        }
        if (sub.is(K::And)) {
            // Prefer a data placeholder (rarely present), else the first atom.
            auto ops = sub.operands();
            auto pick = std::find_if(ops.begin(), ops.end(), [](const ConceptExpr& x) { return x.is(K::DataSome); });
            if (pick == ops.end()) pick = std::find_if(ops.begin(), ops.end(), [](const ConceptExpr& x) { return x.is(K::Atomic); });
            if (pick != ops.end()) {
                std::vector<std::uint32_t> rest;
                for (auto it = ops.begin(); it != ops.end(); ++it)
                    if (it != pick) rest.push_back(pool_.intern(*it));
                const std::uint32_t restC = pool_.conj(rest);
                const std::uint32_t gate = pool_.disj({pool_.negate(restC), d});
                grow();
                return addUnfold(pool_.node(pool_.intern(*pick)).name, gate);
            }
        }
        const std::uint32_t whole = pool_.intern(sub);
        addUniversal(pool_.disj({pool_.negate(whole), d}));
        grow();
    }

    // ----------------------------------------------------------------- labels

    void startQuery() {
        lastNodes_ = 0;
    }

    void tick() {
        if (++lastNodes_ > opts_.nodeBudget) throw ResourceLimit(opts_.nodeBudget);
    }

    bool marked(std::uint32_t id) const { return id < stamp_.size() && stamp_[id] == gen_; }
    void mark(std::uint32_t id) {
        if (stamp_.size() <= id) stamp_.resize(pool_.size() + 64, 0);
        stamp_[id] = gen_;
    }

    // Adds `adds` to a closed label and re-closes it: And, lazy unfolding,
    // domains, atomic clashes, and unit propagation over disjunctions.
    // Returns false on a clash.
    bool extend(detail::NodeLabel& lab, std::span<const std::uint32_t> adds) {
        using detail::CKind;
        grow();
        ++gen_;
        if (gen_ == 0) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            gen_ = 1;
        }
        for (auto x : lab.items) mark(x);
        std::vector<std::uint32_t> fresh, queue(adds.begin(), adds.end()), ors = lab.open;
        std::size_t qi = 0;
        auto add = [&](std::uint32_t x) {
            if (!marked(x)) queue.push_back(x);
        };
        auto drain = [&]() -> bool {
            while (qi < queue.size()) {
                const std::uint32_t id = queue[qi++];
                if (marked(id)) continue;
                mark(id);
                fresh.push_back(id);
                const detail::CNode& n = pool_.node(id);
                switch (n.kind) {
                    case CKind::Bottom: return false;
                    case CKind::Atom: {
                        if (marked(pool_.notAtom(n.name))) return false;
                        for (auto d : unfold_[n.name]) add(d);
                        if (int p = pool_.placeholderProperty(n.name); p >= 0) add(dataDomain_[p]);
                        break;
                    }
                    case CKind::NotAtom:
                        if (marked(pool_.atom(n.name))) return false;
                        break;
                    case CKind::And:
                        for (auto a : n.args) add(a);
                        break;
                    case CKind::Or: ors.push_back(id); break;
                    case CKind::Exists: add(roleDomain_[n.name]); break;
                    default: break;
                }
            }
            return true;
        };
        if (!drain()) return false;
        for (;;) {
            bool changed = false;
            std::vector<std::uint32_t> current;
            current.swap(ors); // drain() may append newly found disjunctions to `ors`
            for (auto o : current) {
                const auto& args = pool_.node(o).args;
                bool sat = false;
                std::uint32_t live = 0, last = 0;
                for (auto a : args) {
                    if (marked(a)) {
                        sat = true;
                        break;
                    }
                    if (a == detail::ConceptPool::kBottom || marked(pool_.negate(a))) continue;
                    ++live;
                    last = a;
                }
                if (sat) continue;
                if (live == 0) return false;
                if (live == 1) {
                    add(last);
                    if (!drain()) return false;
                    changed = true;
                    continue;
                }
                ors.push_back(o);
            }
            std::sort(ors.begin(), ors.end());
            ors.erase(std::unique(ors.begin(), ors.end()), ors.end());
            if (!changed) break;
        }
        std::sort(fresh.begin(), fresh.end());
        Label merged;
        merged.reserve(lab.items.size() + fresh.size());
        std::merge(lab.items.begin(), lab.items.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
        lab.items = std::move(merged);
        lab.open = std::move(ors);
        return true;
    }

    Label childSeed(const Label& parent, std::uint32_t role, std::uint32_t filler) {
        Label seed{filler, roleRange_[role]};
        for (auto id : parent) {
            const auto& n = pool_.node(id);
            if (n.kind == detail::CKind::ForAll && n.name == role) seed.push_back(n.args[0]);
        }
        seed.insert(seed.end(), universal_.begin(), universal_.end());
        return seed;
    }

    // ------------------------------------------------------------ tree search

    bool satRoot(const Label& seed, Label* finalLabel) {
        Label s = seed;
        s.insert(s.end(), universal_.begin(), universal_.end());
        std::vector<const Label*> ancestors;
        return satNode(s, ancestors, finalLabel);
    }

    bool satNode(const Label& seed, std::vector<const Label*>& ancestors, Label* finalLabel) {
        tick();
        detail::NodeLabel lab;
        if (!extend(lab, seed)) return false;
        if (unsatCache_.count(lab.items)) return false;
        if (!finalLabel && satCache_.count(lab.items)) return true;
        const std::size_t depth = ancestors.size();
        for (std::size_t k = 0; k < depth; ++k)
            if (std::includes(ancestors[k]->begin(), ancestors[k]->end(), lab.items.begin(), lab.items.end())) {
                minBlocker_ = std::min(minBlocker_, k);
                return true;
            }
        // A sat answer is context-free unless something below was blocked by
        // a node above this one.
        const std::size_t outer = minBlocker_;
        minBlocker_ = SIZE_MAX;
        const bool ok = expand(lab, ancestors, finalLabel);
        if (!ok)
            unsatCache_.insert(lab.items);
        else if (minBlocker_ >= depth)
            satCache_.insert(lab.items);
        minBlocker_ = std::min(outer, minBlocker_);
        return ok;
    }

    bool expand(const detail::NodeLabel& lab, std::vector<const Label*>& ancestors, Label* finalLabel) {
        if (!lab.open.empty()) {
            const std::uint32_t o = lab.open.front();
            for (auto a : pool_.node(o).args) {
                tick();
                detail::NodeLabel next = lab;
                const std::uint32_t one[] = {a};
                if (!extend(next, one)) continue;
                if (expand(next, ancestors, finalLabel)) return true;
            }
            return false;
        }
        if (!childrenSatisfiable(lab.items, ancestors)) return false;
        if (finalLabel) *finalLabel = lab.items;
        return true;
    }

    bool childrenSatisfiable(const Label& items, std::vector<const Label*>& ancestors) {
        ancestors.push_back(&items);
        bool ok = true;
        for (auto id : items) {
            const auto& n = pool_.node(id);
            if (n.kind != detail::CKind::Exists) continue;
            if (!satNode(childSeed(items, n.name, n.args[0]), ancestors, nullptr)) {
                ok = false;
                break;
            }
        }
        ancestors.pop_back();
        return ok;
    }

    // ------------------------------------------------------------------ ABox

    ABox buildABox(const std::vector<Assertion>& extra) {
        ABox box;
        std::map<std::string, std::size_t> idx;
        auto ind = [&](const std::string& n) {
            auto [it, fresh] = idx.emplace(n, box.names.size());
            if (fresh) {
                box.names.push_back(n);
                box.out.emplace_back();
                box.initial.emplace_back(universal_);
            }
            return it->second;
        };
        for (const auto& n : onto_.declaredIndividuals) ind(n);
        auto take = [&](const Assertion& a) {
            if (auto c = std::get_if<ClassAssertion>(&a)) {
                auto i = ind(c->individual);
                box.initial[i].push_back(pool_.intern(nnf(c->concept_)));
            } else if (auto p = std::get_if<ObjectPropertyAssertion>(&a)) {
                auto s = ind(p->subject), t = ind(p->object);
                auto r = pool_.roleIndex(p->role);
                grow();
                box.out[s].emplace_back(r, static_cast<std::uint32_t>(t));
                box.initial[s].push_back(roleDomain_[r]);
                box.initial[t].push_back(roleRange_[r]);
            } else if (auto d = std::get_if<DataPropertyAssertion>(&a)) {
                auto i = ind(d->subject);
                auto p = pool_.dataIndex(d->property);
                grow();
                box.initial[i].push_back(dataDomain_[p]);
            }
        };
        for (const auto& a : onto_.abox) take(a);
        for (const auto& a : extra) take(a);
        for (auto& o : box.out) {
            std::sort(o.begin(), o.end());
            o.erase(std::unique(o.begin(), o.end()), o.end());
        }
        return box;
    }

    // Extends labels[i] by `adds` and pushes universal restrictions along
    // ABox edges until nothing changes.
    bool propagate(const ABox& box, std::vector<detail::NodeLabel>& labels, std::vector<Label>& pending) {
        std::vector<std::size_t> work;
        std::vector<char> queued(labels.size(), 0);
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (!pending[i].empty()) {
                work.push_back(i);
                queued[i] = 1;
            }
        while (!work.empty()) {
            const std::size_t i = work.back();
            work.pop_back();
            queued[i] = 0;
            Label adds = std::move(pending[i]);
            pending[i].clear();
            if (!extend(labels[i], adds)) return false;
            for (auto [role, j] : box.out[i]) {
                for (auto id : labels[i].items) {
                    const auto& n = pool_.node(id);
                    if (n.kind != detail::CKind::ForAll || n.name != role) continue;
                    const std::uint32_t f = n.args[0];
                    if (std::binary_search(labels[j].items.begin(), labels[j].items.end(), f)) continue;
                    pending[j].push_back(f);
                    if (!queued[j]) {
                        queued[j] = 1;
                        work.push_back(j);
                    }
                }
            }
        }
        return true;
    }

    // Satisfiability of the ABox, optionally with one extra concept on one
    // individual. On success `model` holds one complete clash-free state.
    bool aboxSatisfiable(ABox& box, const std::pair<std::size_t, std::uint32_t>* extra,
                         std::vector<detail::NodeLabel>& model) {
        if (!box.baseReady) {
            box.base.assign(box.names.size(), {});
            std::vector<Label> pending = box.initial;
            box.baseClash = !propagate(box, box.base, pending);
            box.baseReady = true;
        }
        if (box.baseClash) return false;
        std::vector<detail::NodeLabel> labels = box.base;
        if (extra) {
            std::vector<Label> pending(labels.size());
            pending[extra->first].push_back(extra->second);
            if (!propagate(box, labels, pending)) return false;
        }
        return aboxSearch(box, searchOrder(box, extra ? extra->first : 0), labels, model);
    }

    // Individuals in breadth-first order over ABox edges (either direction)
    // from `start`, then the rest. Branching near the query individual first
    // keeps clashes there from being retried under every unrelated choice.
    static std::vector<std::size_t> searchOrder(const ABox& box, std::size_t start) {
        const std::size_t n = box.names.size();
        std::vector<std::vector<std::size_t>> adj(n);
        for (std::size_t i = 0; i < n; ++i)
            for (auto [role, j] : box.out[i]) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        std::vector<std::size_t> order;
        std::vector<char> seen(n, 0);
        for (std::size_t root = 0; root <= n; ++root) {
            const std::size_t r = root == 0 ? start : root - 1;
            if (r >= n || seen[r]) continue;
            seen[r] = 1;
            for (std::size_t head = order.size(), at = (order.push_back(r), head); at < order.size(); ++at)
                for (auto j : adj[order[at]])
                    if (!seen[j]) {
                        seen[j] = 1;
                        order.push_back(j);
                    }
        }
        return order;
    }

    // Decides open disjunctions individual by individual. A fully decided
    // individual has its anonymous successors checked right away; a label
    // only grows later, so an unsatisfiable one stays unsatisfiable.
    bool aboxSearch(const ABox& box, const std::vector<std::size_t>& order, std::vector<detail::NodeLabel>& labels,
                    std::vector<detail::NodeLabel>& model) {
        tick();
        for (auto i : order) {
            if (labels[i].open.empty()) {
                std::vector<const Label*> ancestors;
                if (!childrenSatisfiable(labels[i].items, ancestors)) return false;
                continue;
            }
            const std::uint32_t o = labels[i].open.front();
            for (auto a : pool_.node(o).args) {
                std::vector<detail::NodeLabel> next = labels;
                std::vector<Label> pending(labels.size());
                pending[i].push_back(a);
                if (!propagate(box, next, pending)) continue;
                if (aboxSearch(box, order, next, model)) return true;
            }
            return false;
        }
        model = labels;
        return true;
    }

    // ---------------------------------------------------------- classify

    Hierarchy computeHierarchy() {
        const auto sigConcepts = signatureOf(onto_).concepts;
        std::vector<std::string> names(sigConcepts.begin(), sigConcepts.end());
        const std::size_t n = names.size();
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < n; ++i) pos[names[i]] = i;

        auto namesIn = [&](const Label& l) {
            std::vector<std::size_t> out;
            for (auto id : l) {
                const auto& node = pool_.node(id);
                if (node.kind != detail::CKind::Atom || pool_.isPlaceholder(node.name)) continue;
                if (auto it = pos.find(pool_.atomName(node.name)); it != pos.end()) out.push_back(it->second);
            }
            return out;
        };
        auto detNames = [&](const Label& seed) {
            detail::NodeLabel l;
            Label s = seed;
            s.insert(s.end(), universal_.begin(), universal_.end());
            extend(l, s);
            return namesIn(l.items);
        };

        // Names equivalent to Thing.
        std::vector<char> isTop(n, 0);
        {
            startQuery();
            Label root;
            satRoot({}, &root);
            auto det = detNames({});
            for (auto j : det) isTop[j] = 1;
            for (auto j : namesIn(root)) {
                if (isTop[j]) continue;
                startQuery();
                isTop[j] = !satRoot({pool_.notAtom(*pool_.findAtom(names[j]))}, nullptr);
            }
        }

        std::vector<char> unsat(n, 0);
        std::vector<std::vector<std::size_t>> sup(n); // sorted subsumer name indices incl. self
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t a = pool_.atom(*pool_.findAtom(names[i]));
            startQuery();
            Label root;
            if (!satRoot({a}, &root)) {
                unsat[i] = 1;
                continue;
            }
            auto det = detNames({a});
            std::set<std::size_t> s(det.begin(), det.end());
            s.insert(i);
            for (std::size_t j = 0; j < n; ++j)
                if (isTop[j]) s.insert(j);
            for (auto j : namesIn(root)) {
                if (s.count(j)) continue;
                startQuery();
                if (!satRoot({a, pool_.notAtom(*pool_.findAtom(names[j]))}, nullptr)) s.insert(j);
            }
            sup[i].assign(s.begin(), s.end());
        }

        // Equivalence groups.
        std::vector<std::vector<std::string>> groups{{"Thing"}, {"Nothing"}};
        std::vector<std::size_t> groupOf(n, 0);
        std::vector<char> assigned(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            if (unsat[i]) {
                groups[1].push_back(names[i]);
                groupOf[i] = 1;
                assigned[i] = 1;
                continue;
            }
            if (isTop[i]) {
                groups[0].push_back(names[i]);
                groupOf[i] = 0;
                assigned[i] = 1;
                continue;
            }
            std::vector<std::string> g{names[i]};
            groupOf[i] = groups.size();
            assigned[i] = 1;
            for (auto j : sup[i]) {
                if (j == i || assigned[j] || unsat[j] || isTop[j]) continue;
                if (std::binary_search(sup[j].begin(), sup[j].end(), i)) {
                    g.push_back(names[j]);
                    groupOf[j] = groups.size();
                    assigned[j] = 1;
                }
            }
            groups.push_back(std::move(g));
        }

        // Strict subsumer groups, then transitive reduction.
        const std::size_t G = groups.size();
        std::vector<std::set<std::size_t>> strictSup(G);
        for (std::size_t i = 0; i < n; ++i) {
            if (unsat[i] || isTop[i]) continue;
            for (auto j : sup[i])
                if (groupOf[j] != groupOf[i] && groupOf[j] != Hierarchy::kTop) strictSup[groupOf[i]].insert(groupOf[j]);
        }
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        std::vector<char> hasChild(G, 0);
        for (std::size_t g = 2; g < G; ++g) {
            bool any = false;
            for (auto p : strictSup[g]) {
                bool direct = std::none_of(strictSup[g].begin(), strictSup[g].end(),
                                           [&](std::size_t q) { return q != p && strictSup[q].count(p); });
                if (direct) {
                    edges.emplace_back(g, p);
                    hasChild[p] = 1;
                    any = true;
                }
            }
            if (!any) {
                edges.emplace_back(g, Hierarchy::kTop);
                hasChild[Hierarchy::kTop] = 1;
            }
        }
        for (std::size_t g = 0; g < G; ++g)
            if (g != Hierarchy::kBottom && !hasChild[g]) edges.emplace_back(Hierarchy::kBottom, g);
        return Hierarchy(std::move(groups), std::move(edges));
    }

    Ontology onto_;
    ReasonerOptions opts_;
    detail::ConceptPool pool_;
    std::vector<std::vector<std::uint32_t>> unfold_;
    std::vector<std::uint32_t> roleDomain_, roleRange_, dataDomain_;
    Label universal_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t gen_ = 0;
    std::size_t lastNodes_ = 0, minBlocker_ = SIZE_MAX;
    std::unordered_set<Label, detail::VecHash> unsatCache_, satCache_;
    std::optional<Hierarchy> hierarchy_;
};

inline bool isSatisfiable(const Ontology& o, const ConceptExpr& c, ReasonerOptions opts = {}) {
    return Reasoner(o, opts).isSatisfiable(c);
}
inline bool isSubsumedBy(const Ontology& o, const ConceptExpr& c, const ConceptExpr& d, ReasonerOptions opts = {}) {
    return Reasoner(o, opts).isSubsumedBy(c, d);
}
inline bool isConsistent(const Ontology& o, ReasonerOptions opts = {}) { return Reasoner(o, opts).isConsistent(); }
inline Hierarchy classify(const Ontology& o, ReasonerOptions opts = {}) { return Reasoner(o, opts).classify(); }
inline RealizationMap realize(const Ontology& o, ReasonerOptions opts = {}) { return Reasoner(o, opts).realize(); }

} // namespace bonedx
