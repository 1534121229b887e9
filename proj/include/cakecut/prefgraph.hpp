#pragma once

#include "cakecut/measure.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cakecut {

// Bipartite agent -> piece "prefers" graph, maintained in reduced form: its
// piece nodes are the original (first-query) pieces, and every later piece
// is folded onto an original through `rep` (an injective folding).
// Each edge keeps a witness: the concrete piece that is actually a best
// piece for the agent and is represented by the target node.
struct PreferenceGraph {
    struct Edge {
        int node;     // original piece id
        int witness;  // concrete piece id, rep[witness] == node
        auto operator<=>(const Edge&) const = default;
    };

    int n_agents = 0;
    std::vector<int> originals;                 // node ids, ascending
    std::vector<std::vector<Edge>> edges;       // per agent, sorted by node
    std::vector<bool> known;                    // agent has a computed edge set
    std::map<int, int> rep;                     // piece id -> original id

    void init(int agents) {
        n_agents = agents;
        edges.assign(agents, {});
        known.assign(agents, false);
        originals.clear();
        rep.clear();
    }
    bool has_edge(int agent, int node) const {
        for (const auto& e : edges[agent])
            if (e.node == node) return true;
        return false;
    }
    void add_edge(int agent, int node, int witness);
    int degree(int agent) const { return static_cast<int>(edges[agent].size()); }
    // Y-set of an original: all table pieces folded onto it.
    std::vector<int> y_set(int original, const std::vector<Piece>& table) const;
    std::string to_string() const;  // plain-text adjacency listing
};

// Initial graph over the given pieces: edge (a, p) iff p is of maximal value
// for agent a, ties kept. Every piece is its own node.
PreferenceGraph build_graph(const std::vector<Piece>& pieces,
                            const std::vector<ValueMeasure>& measures);

// Assumption-1 reduction: after `cutter` cut the pieces in `just_cut`, every
// other agent that prefers a just-cut piece and some piece outside the
// just-cut family loses its edges into the family. The cutter is exempt.
void reduce_assumption1(PreferenceGraph& g, const std::set<int>& just_cut, int cutter);

// Assumption-2 reduction: folds the new pieces onto distinct originals and
// redirects any edge whose witness is a new piece. The injection prefers the
// piece's origin root, then ascending original index, and avoids collapsing
// two edges of the same agent onto one node whenever possible.
void reduce_assumption2(PreferenceGraph& g, const std::vector<Piece>& new_pieces);

// All minimal agent subsets S (over agents with known edge sets) violating
// Hall's condition |N(S)| < |S|. Empty result iff a saturating matching of
// the known agents exists.
std::vector<std::vector<int>> hall_check(const PreferenceGraph& g);

struct Matching {
    std::map<int, int> piece_of_agent;  // agent -> original node
};

struct no_matching_error : contradiction_error {
    std::vector<std::vector<int>> violations;
    explicit no_matching_error(std::vector<std::vector<int>> v)
        : contradiction_error("no saturating matching"), violations(std::move(v)) {}
};

// Saturating matching of all known agents, deterministic: agents are
// augmented in `pick_order` and edges tried in ascending node order.
// Throws no_matching_error carrying the Hall violations when none exists.
Matching max_matching(const PreferenceGraph& g, const std::vector<int>& pick_order);

// True iff a saturating matching exists no matter which single node the
// `unknown` agent prefers. This is the guarantee the division algorithms
// lean on, checked directly.
bool matching_for_every_preference(const PreferenceGraph& g, int unknown);

struct FinalAssignment {
    std::map<int, int> piece_of_agent;  // agent -> concrete piece id (best in Y-set)
    std::vector<int> disposed;          // unallocated table piece ids
};

// Each matched agent receives its best concrete piece inside the Y-set of
// its matched original; everything else is disposed.
FinalAssignment finalize_allocation(const Matching& m, const PreferenceGraph& g,
                                    const std::vector<Piece>& table,
                                    const std::vector<ValueMeasure>& measures);

}  // namespace cakecut
