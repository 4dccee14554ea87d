#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bonedx {

// Classified concept hierarchy. Group 0 holds Thing and everything equivalent
// to it, group 1 holds Nothing and every unsatisfiable name. Edges are direct
// (transitively reduced) child -> parent pairs between groups.
class Hierarchy {
public:
    static constexpr std::size_t kTop = 0, kBottom = 1;

    Hierarchy() : Hierarchy({{"Thing"}, {"Nothing"}}, {}) {}

    Hierarchy(std::vector<std::vector<std::string>> groups, std::vector<std::pair<std::size_t, std::size_t>> edges)
        : groups_(std::move(groups)), edges_(std::move(edges)) {
        if (groups_.size() < 2 || groups_[kTop].empty() || groups_[kTop][0] != "Thing" || groups_[kBottom].empty() ||
            groups_[kBottom][0] != "Nothing")
            throw std::invalid_argument("hierarchy needs Thing and Nothing as groups 0 and 1");
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (std::size_t g = 0; g < groups_.size(); ++g)
            for (const auto& n : groups_[g])
                if (!index_.emplace(n, g).second) throw std::invalid_argument("name '" + n + "' in two groups");
        parents_.assign(groups_.size(), {});
        children_.assign(groups_.size(), {});
        for (auto [c, p] : edges_) {
            if (c >= groups_.size() || p >= groups_.size() || c == p) throw std::invalid_argument("bad hierarchy edge");
            parents_[c].push_back(p);
            children_[p].push_back(c);
        }
        // Reflexive-transitive ancestors per group; the caller guarantees acyclicity.
        ancestors_.assign(groups_.size(), {});
        std::vector<int> state(groups_.size(), 0);
        for (std::size_t g = 0; g < groups_.size(); ++g) computeAncestors(g, state);
    }

    const std::vector<std::vector<std::string>>& groups() const { return groups_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    const std::string& representative(std::size_t g) const { return groups_[g].front(); }

    std::optional<std::size_t> groupOf(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const std::string& name) const { return index_.count(name) > 0; }

    // True iff `child` is subsumed by `parent` according to the hierarchy.
    bool subsumedBy(const std::string& child, const std::string& parent) const {
        auto c = groupOf(child), p = groupOf(parent);
        if (!c || !p) return child == parent;
        return subsumedBy(*c, *p);
    }
    bool subsumedBy(std::size_t child, std::size_t parent) const {
        if (child == kBottom || parent == kTop) return true;
        return std::binary_search(ancestors_[child].begin(), ancestors_[child].end(), parent);
    }

    const std::vector<std::size_t>& parentGroups(std::size_t g) const { return parents_[g]; }
    const std::vector<std::size_t>& childGroups(std::size_t g) const { return children_[g]; }
    const std::vector<std::size_t>& ancestorGroups(std::size_t g) const { return ancestors_[g]; }

    std::vector<std::string> parents(const std::string& name) const { return names(parents_, name); }
    std::vector<std::string> children(const std::string& name) const { return names(children_, name); }

    std::vector<std::string> equivalents(const std::string& name) const {
        auto g = groupOf(name);
        return g ? groups_[*g] : std::vector<std::string>{name};
    }

    nlohmann::ordered_json toJson() const {
        nlohmann::ordered_json j;
        j["groups"] = groups_;
        j["edges"] = nlohmann::ordered_json::array();
        for (auto [c, p] : edges_) j["edges"].push_back({representative(c), representative(p)});
        return j;
    }

    static Hierarchy fromJson(const nlohmann::json& j) {
        auto groups = j.at("groups").get<std::vector<std::vector<std::string>>>();
        std::map<std::string, std::size_t> idx;
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (const auto& n : groups[g]) idx[n] = g;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : j.at("edges")) edges.emplace_back(idx.at(e.at(0).get<std::string>()), idx.at(e.at(1).get<std::string>()));
        return Hierarchy(std::move(groups), std::move(edges));
    }

    // One line per equivalence group with more than one name, then one line
    // per direct edge, both in group order.
    std::string toText() const {
        std::string out;
        for (const auto& g : groups_) {
            if (g.size() < 2) continue;
            out += g[0];
            for (std::size_t i = 1; i < g.size(); ++i) out += " == " + g[i];
            out += "\n";
        }
        for (auto [c, p] : edges_) out += representative(c) + " -> " + representative(p) + "\n";
        return out;
    }

    friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
        return a.groups_ == b.groups_ && a.edges_ == b.edges_;
    }

private:
    void computeAncestors(std::size_t g, std::vector<int>& state) {
        if (state[g] == 2) return;
        if (state[g] == 1) throw std::invalid_argument("hierarchy has a cycle through '" + representative(g) + "'");
        state[g] = 1;
        std::vector<std::size_t> acc{g};
        for (auto p : parents_[g]) {
            computeAncestors(p, state);
            acc.insert(acc.end(), ancestors_[p].begin(), ancestors_[p].end());
        }
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        ancestors_[g] = std::move(acc);
        state[g] = 2;
    }

    std::vector<std::string> names(const std::vector<std::vector<std::size_t>>& adj, const std::string& name) const {
        std::vector<std::string> out;
        if (auto g = groupOf(name))
            for (auto x : adj[*g]) out.push_back(representative(x));
        return out;
    }

    std::vector<std::vector<std::string>> groups_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> parents_, children_, ancestors_;
};

} // namespace bonedx
