#include "cakecut/prefgraph.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace cakecut {

void PreferenceGraph::add_edge(int agent, int node, int witness) {
    auto& es = edges[agent];
    for (auto& e : es) {
        if (e.node == node) {
            e.witness = std::min(e.witness, witness);
            return;
        }
    }
    es.push_back({node, witness});
    std::sort(es.begin(), es.end());
}

std::vector<int> PreferenceGraph::y_set(int original, const std::vector<Piece>& table) const {
    std::vector<int> ids;
    for (const auto& p : table) {
        auto it = rep.find(p.id);
        if (it != rep.end() && it->second == original) ids.push_back(p.id);
    }
    return ids;
}

std::string PreferenceGraph::to_string() const {
    std::ostringstream os;
    for (int a = 0; a < n_agents; ++a) {
        os << "agent " << a << " ->";
        if (!known[a]) {
            os << " ?";
        } else {
            for (const auto& e : edges[a]) os << " " << e.node;
        }
        os << "\n";
    }
    return os.str();
}

PreferenceGraph build_graph(const std::vector<Piece>& pieces,
                            const std::vector<ValueMeasure>& measures) {
    PreferenceGraph g;
    g.init(static_cast<int>(measures.size()));
    for (const auto& p : pieces) {
        g.originals.push_back(p.id);
        g.rep[p.id] = p.id;
    }
    std::sort(g.originals.begin(), g.originals.end());
    for (int a = 0; a < g.n_agents; ++a) {
        Rat best(-1);
        for (const auto& p : pieces) best = std::max(best, eval(measures[a], p));
        for (const auto& p : pieces)
            if (eval(measures[a], p) == best) g.add_edge(a, p.id, p.id);
        g.known[a] = true;
    }
    return g;
}

void reduce_assumption1(PreferenceGraph& g, const std::set<int>& just_cut, int cutter) {
    for (int a = 0; a < g.n_agents; ++a) {
        if (a == cutter || !g.known[a]) continue;
        auto& es = g.edges[a];
        bool has_outside = std::any_of(es.begin(), es.end(), [&](const auto& e) {
            return !just_cut.count(e.witness);
        });
        if (!has_outside) continue;  // whole preferred set was just cut: keep it
        std::erase_if(es, [&](const auto& e) { return just_cut.count(e.witness) != 0; });
        if (es.empty())
            throw contradiction_error("assumption-1 reduction left an agent edgeless");
    }
}

void reduce_assumption2(PreferenceGraph& g, const std::vector<Piece>& new_pieces) {
    std::set<int> used;
    for (const auto& np : new_pieces) {
        assert(np.is_new);
        // Agents currently holding an edge witnessed by this new piece.
        std::vector<int> holders;
        for (int a = 0; a < g.n_agents; ++a)
            for (const auto& e : g.edges[a])
                if (e.witness == np.id) holders.push_back(a);

        std::vector<int> candidates;
        if (!used.count(np.origin)) candidates.push_back(np.origin);
        for (int o : g.originals)
            if (o != np.origin && !used.count(o)) candidates.push_back(o);
        if (candidates.empty())
            throw contradiction_error("more new pieces than originals in one query");

        auto collides = [&](int o) {
            for (int a : holders)
                for (const auto& e : g.edges[a])
                    if (e.witness != np.id && e.node == o) return true;
            return false;
        };
        int chosen = candidates.front();
        for (int o : candidates) {
            if (!collides(o)) {
                chosen = o;
                break;
            }
        }
        used.insert(chosen);
        g.rep[np.id] = chosen;
        for (int a = 0; a < g.n_agents; ++a) {
            auto& es = g.edges[a];
            for (std::size_t i = 0; i < es.size(); ++i) {
                if (es[i].witness != np.id) continue;
                int w = es[i].witness;
                es.erase(es.begin() + static_cast<long>(i));
                g.add_edge(a, chosen, w);
                break;
            }
        }
    }
}

namespace {

bool kuhn_augment(const PreferenceGraph& g, int agent, std::map<int, int>& owner,
                  std::set<int>& visited) {
    for (const auto& e : g.edges[agent]) {
        if (visited.count(e.node)) continue;
        visited.insert(e.node);
        auto it = owner.find(e.node);
        if (it == owner.end() || kuhn_augment(g, it->second, owner, visited)) {
            owner[e.node] = agent;
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<std::vector<int>> hall_check(const PreferenceGraph& g) {
    std::vector<int> agents;
    for (int a = 0; a < g.n_agents; ++a)
        if (g.known[a]) agents.push_back(a);
    std::vector<std::vector<int>> violating;
    const std::size_t n = agents.size();
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> subset;
        std::set<int> nbhd;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            subset.push_back(agents[i]);
            for (const auto& e : g.edges[agents[i]]) nbhd.insert(e.node);
        }
        if (nbhd.size() < subset.size()) violating.push_back(subset);
    }
    // Keep only minimal violating sets.
    std::vector<std::vector<int>> minimal;
    for (const auto& s : violating) {
        bool has_proper_subset = std::any_of(violating.begin(), violating.end(), [&](const auto& t) {
            return t.size() < s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end());
        });
        if (!has_proper_subset) minimal.push_back(s);
    }
    return minimal;
}

Matching max_matching(const PreferenceGraph& g, const std::vector<int>& pick_order) {
    std::map<int, int> owner;  // node -> agent
    for (int a : pick_order) {
        if (!g.known[a]) continue;
        std::set<int> visited;
        if (!kuhn_augment(g, a, owner, visited)) throw no_matching_error(hall_check(g));
    }
    Matching m;
    for (const auto& [node, agent] : owner) m.piece_of_agent[agent] = node;
    return m;
}

bool matching_for_every_preference(const PreferenceGraph& g, int unknown) {
    PreferenceGraph probe = g;
    probe.known[unknown] = true;
    std::vector<int> order;
    order.push_back(unknown);
    for (int a = 0; a < g.n_agents; ++a)
        if (a != unknown && g.known[a]) order.push_back(a);
    for (int o : g.originals) {
        probe.edges[unknown] = {{o, o}};
        try {
            max_matching(probe, order);
        } catch (const no_matching_error&) {
            return false;
        }
    }
    return true;
}

FinalAssignment finalize_allocation(const Matching& m, const PreferenceGraph& g,
                                    const std::vector<Piece>& table,
                                    const std::vector<ValueMeasure>& measures) {
    FinalAssignment fa;
    std::set<int> taken;
    for (const auto& [agent, node] : m.piece_of_agent) {
        std::vector<int> ys = g.y_set(node, table);
        assert(!ys.empty());
        const Piece* best = nullptr;
        Rat best_v;
        for (int id : ys) {
            auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Piece& p) { return p.id == id; });
            Rat v = eval(measures[static_cast<std::size_t>(agent)], *it);
            if (!best || v > best_v) {
                best = &*it;
                best_v = v;
            }
        }
        fa.piece_of_agent[agent] = best->id;
        taken.insert(best->id);
    }
    for (const auto& p : table)
        if (!taken.count(p.id)) fa.disposed.push_back(p.id);
    return fa;
}

}  // namespace cakecut
