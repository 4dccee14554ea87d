#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

// Brute-force finite model finder over tiny signatures. Test support only:
// it checks the tableau from the outside and shares none of its code.
namespace bonedx {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundedInterpretation {
    int domainSize = 0;
    std::map<std::string, std::vector<int>> concepts;           // name -> elements
    std::map<std::string, std::vector<std::pair<int, int>>> roles; // name -> pairs

    std::string describe() const {
        std::string out = "domain {";
        for (int e = 0; e < domainSize; ++e) out += (e ? ", e" : "e") + std::to_string(e);
        out += "}";
        for (const auto& [n, es] : concepts) {
            out += "; " + n + " = {";
            for (std::size_t i = 0; i < es.size(); ++i) out += (i ? ", e" : "e") + std::to_string(es[i]);
            out += "}";
        }
        for (const auto& [n, ps] : roles) {
            out += "; " + n + " = {";
            for (std::size_t i = 0; i < ps.size(); ++i)
                out += std::string(i ? ", " : "") + "(e" + std::to_string(ps[i].first) + ",e" + std::to_string(ps[i].second) + ")";
            out += "}";
        }
        return out;
    }
};

struct OracleOptions {
    int maxScope = 3;                      // at most 4
    std::uint64_t budget = 10'000'000;     // candidate interpretations
};

struct ModelSearch {
    std::optional<BoundedInterpretation> model;
    std::uint64_t visited = 0;
};

namespace detail {

// Concept compiled against the oracle's name tables; evaluation yields the
// extension as a bitmask over at most four elements.
struct OracleConcept {
    ConceptExpr::Kind kind;
    int index = -1; // concept or role index
    std::vector<int> args;
};

class OracleProblem {
public:
    OracleProblem(const Ontology& o, const ConceptExpr& target) {
        for (const auto& ax : o.axioms) {
            if (auto p = std::get_if<SubClassOf>(&ax)) {
                incl_.push_back({compile(p->sub), compile(p->sup)});
            } else if (auto p = std::get_if<EquivalentClasses>(&ax)) {
                int a = compile(p->first), b = compile(p->second);
                incl_.push_back({a, b});
                incl_.push_back({b, a});
            } else if (auto p = std::get_if<DisjointClasses>(&ax)) {
                std::vector<int> cs;
                for (const auto& c : p->classes) cs.push_back(compile(c));
                for (std::size_t i = 0; i < cs.size(); ++i)
                    for (std::size_t j = i + 1; j < cs.size(); ++j) disjoint_.push_back({cs[i], cs[j]});
            } else if (auto p = std::get_if<ObjectPropertyDecl>(&ax)) {
                int r = role(p->name);
                if (p->domain) domain_.push_back({r, conceptId(*p->domain)});
                if (p->range) range_.push_back({r, conceptId(*p->range)});
            } else if (auto p = std::get_if<DataPropertyDecl>(&ax)) {
                if (p->domain) dataDomain_.push_back({p->name, conceptId(*p->domain)});
            }
        }
        target_ = compile(target);
        // Data restrictions on a property fall inside that property's domain.
        for (const auto& [prop, dom] : dataDomain_)
            for (const auto& [key, idx] : placeholders_)
                if (key.first == prop) incl_.push_back({atomNode(idx), atomNode(dom)});
    }

    int conceptCount() const { return static_cast<int>(conceptNames_.size()); }
    int roleCount() const { return static_cast<int>(roleNames_.size()); }

    static std::uint64_t candidates(int nc, int nr, int k) {
        const int bits = nc * k + nr * k * k;
        if (bits >= 63) return UINT64_MAX;
        return std::uint64_t{1} << bits;
    }

    ModelSearch search(const OracleOptions& opt) {
        if (opt.maxScope < 1 || opt.maxScope > 4) throw std::invalid_argument("oracle scope must be 1..4");
        ModelSearch res;
        const int nc = conceptCount(), nr = roleCount();
        std::uint64_t planned = 0;
        for (int k = 1; k <= opt.maxScope; ++k) {
            const std::uint64_t n = candidates(nc, nr, k);
            if (n == UINT64_MAX || planned + n > opt.budget)
                throw BudgetExceeded("scope " + std::to_string(k) + " with " + std::to_string(nc) + " concepts and " +
                                     std::to_string(nr) + " roles exceeds the budget of " + std::to_string(opt.budget) +
                                     " interpretations");
            planned += n;
        }
        for (int k = 1; k <= opt.maxScope; ++k) {
            if (enumerate(k, res)) return res;
        }
        return res;
    }

private:
    int conceptId(const std::string& n) {
        auto [it, fresh] = conceptIdx_.emplace(n, static_cast<int>(conceptNames_.size()));
        if (fresh) conceptNames_.push_back(n);
        return it->second;
    }
    int role(const std::string& n) {
        auto [it, fresh] = roleIdx_.emplace(n, static_cast<int>(roleNames_.size()));
        if (fresh) roleNames_.push_back(n);
        return it->second;
    }
    int atomNode(int conceptIndex) {
        nodes_.push_back({ConceptExpr::Kind::Atomic, conceptIndex, {}});
        return static_cast<int>(nodes_.size()) - 1;
    }

    int compile(const ConceptExpr& c) {
        using K = ConceptExpr::Kind;
        OracleConcept n{c.kind(), -1, {}};
        switch (c.kind()) {
            case K::Atomic: n.index = conceptId(c.name()); break;
            case K::DataSome: {
                const std::string key = dataRestrictionKey(c.name(), c.restriction());
                n.kind = K::Atomic;
                n.index = conceptId(key);
                placeholders_.emplace(std::make_pair(c.name(), key), n.index);
                break;
            }
            case K::Exists:
            case K::ForAll:
                n.index = role(c.name());
                n.args.push_back(compile(c.operand()));
                break;
            default:
                for (const auto& x : c.operands()) n.args.push_back(compile(x));
                break;
        }
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::uint32_t eval(int id) const {
        using K = ConceptExpr::Kind;
        const OracleConcept& n = nodes_[id];
        switch (n.kind) {
            case K::Atomic: return ext_[n.index];
            case K::Top: return full_;
            case K::Bottom: return 0;
            case K::Not: return full_ & ~eval(n.args[0]);
            case K::And: {
                std::uint32_t m = full_;
                for (int a : n.args) m &= eval(a);
                return m;
            }
            case K::Or: {
                std::uint32_t m = 0;
                for (int a : n.args) m |= eval(a);
                return m;
            }
            case K::Exists:
            case K::ForAll: {
                const std::uint32_t f = eval(n.args[0]);
                std::uint32_t m = 0;
                for (int e = 0; e < k_; ++e) {
                    const std::uint32_t succ = succ_[n.index * 4 + e];
                    const bool in = n.kind == K::Exists ? (succ & f) != 0 : (succ & ~f) == 0;
                    if (in) m |= 1u << e;
                }
                return m;
            }
            default: return 0;
        }
    }

    bool holds() const {
        for (auto [a, b] : incl_)
            if (eval(a) & ~eval(b)) return false;
        for (auto [a, b] : disjoint_)
            if (eval(a) & eval(b)) return false;
        for (auto [r, c] : domain_)
            for (int e = 0; e < k_; ++e)
                if (succ_[r * 4 + e] && !(ext_[c] >> e & 1u)) return false;
        for (auto [r, c] : range_)
            for (int e = 0; e < k_; ++e)
                if (succ_[r * 4 + e] & ~ext_[c]) return false;
        return eval(target_) != 0;
    }

    bool enumerate(int k, ModelSearch& res) {
        k_ = k;
        full_ = (1u << k) - 1;
        const int nc = conceptCount(), nr = roleCount();
        ext_.assign(nc, 0);
        succ_.assign(static_cast<std::size_t>(std::max(nr, 1)) * 4, 0);
        const std::uint64_t roleSpace = std::uint64_t{1} << (nr * k * k);
        const std::uint64_t conceptSpace = std::uint64_t{1} << (nc * k);
        for (std::uint64_t rbits = 0; rbits < roleSpace; ++rbits) {
            for (int r = 0; r < nr; ++r)
                for (int e = 0; e < k; ++e)
                    succ_[r * 4 + e] = static_cast<std::uint32_t>((rbits >> ((r * k + e) * k)) & full_);
            for (std::uint64_t cbits = 0; cbits < conceptSpace; ++cbits) {
                ++res.visited;
                for (int c = 0; c < nc; ++c) ext_[c] = static_cast<std::uint32_t>((cbits >> (c * k)) & full_);
                if (holds()) {
                    res.model = snapshot();
                    return true;
                }
            }
        }
        return false;
    }

    BoundedInterpretation snapshot() const {
        BoundedInterpretation m;
        m.domainSize = k_;
        for (int c = 0; c < conceptCount(); ++c) {
            auto& v = m.concepts[conceptNames_[c]];
            for (int e = 0; e < k_; ++e)
                if (ext_[c] >> e & 1u) v.push_back(e);
        }
        for (int r = 0; r < roleCount(); ++r) {
            auto& v = m.roles[roleNames_[r]];
            for (int e = 0; e < k_; ++e)
                for (int f = 0; f < k_; ++f)
                    if (succ_[r * 4 + e] >> f & 1u) v.emplace_back(e, f);
        }
        return m;
    }

    std::vector<OracleConcept> nodes_;
    std::map<std::string, int> conceptIdx_, roleIdx_;
    std::vector<std::string> conceptNames_, roleNames_;
    std::map<std::pair<std::string, std::string>, int> placeholders_;
    std::vector<std::pair<int, int>> incl_, disjoint_, domain_, range_;
    std::vector<std::pair<std::string, int>> dataDomain_;
    int target_ = -1;

    int k_ = 1;
    std::uint32_t full_ = 1;
    std::vector<std::uint32_t> ext_, succ_;
};

} // namespace detail

// Searches interpretations of size 1..maxScope for a model of the TBox in
// which `c` is non-empty. Chains and inverses are ignored, as in the tableau;
// DataSome restrictions are opaque names. The ABox is not consulted.
inline ModelSearch searchModel(const Ontology& o, const ConceptExpr& c, OracleOptions opt = {}) {
    return detail::OracleProblem(o, c).search(opt);
}

inline std::optional<BoundedInterpretation> findModel(const Ontology& o, const ConceptExpr& c, OracleOptions opt = {}) {
    return searchModel(o, c, opt).model;
}

enum class EntailmentVerdict {
    CounterexampleFound,
    NoCounterexampleWithinScope, // unknown-positive: not a proof of entailment
};

struct EntailmentCheck {
    EntailmentVerdict verdict;
    std::optional<BoundedInterpretation> counterexample;
};

inline EntailmentCheck checkEntailment(const Ontology& o, const ConceptExpr& c, const ConceptExpr& d,
                                       OracleOptions opt = {}) {
    auto m = findModel(o, ConceptExpr::conjunction({c, ConceptExpr::negation(d)}), opt);
    if (m) return {EntailmentVerdict::CounterexampleFound, std::move(m)};
    return {EntailmentVerdict::NoCounterexampleWithinScope, std::nullopt};
}

// Number of (concept, role) names the oracle enumerates for this query.
inline std::pair<int, int> oracleSignatureSize(const Ontology& o, const ConceptExpr& c) {
    detail::OracleProblem p(o, c);
    return {p.conceptCount(), p.roleCount()};
}

// Largest scope <= cap whose cumulative candidate count fits the budget, or 0.
inline int largestFeasibleScope(int nc, int nr, int cap = 3, std::uint64_t budget = 10'000'000) {
    std::uint64_t total = 0;
    int best = 0;
    for (int k = 1; k <= cap; ++k) {
        const auto n = detail::OracleProblem::candidates(nc, nr, k);
        if (n == UINT64_MAX || total + n > budget) break;
        total += n;
        best = k;
    }
    return best;
}

} // namespace bonedx
