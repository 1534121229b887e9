#pragma once

#include "cakecut/connected.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cakecut::symbolic {

// A symbolic piece: an original (1-based index) plus a trim trail. Each
// trail element is the cutting agent's letter repeated (k-1) times, so "4b"
// is piece 4 trimmed by b during Equalize(2) and "3bb" during Equalize(3).
struct SymPiece {
    int origin = 0;
    std::vector<std::string> trail;

    std::string name() const;
    bool original() const { return trail.empty(); }
    std::optional<SymPiece> parent() const;
    auto operator<=>(const SymPiece&) const = default;
};

// One value relation known to hold for an agent: V(hi) >= V(lo), or strictly.
struct ValueFact {
    int agent;
    SymPiece hi, lo;
    bool strict;
    bool equal;  // equality: V(hi) == V(lo); strict must be false
};

// Shared symbolic state of one case analysis: the cutters' total orders over
// the originals, accumulated value facts (answers and case assumptions) and
// inferred global containments. Case splits copy the state.
struct SymState {
    int n_agents = 0;
    int n_originals = 0;
    std::vector<std::vector<int>> asc_order;  // per agent, ascending originals; empty if unknown
    std::vector<ValueFact> facts;
    std::vector<std::pair<SymPiece, SymPiece>> containments;  // (small, big), strict inclusion
    std::set<SymPiece> seen;                                  // every piece ever referenced

    void note(const SymPiece& p) { seen.insert(p); }
};

// Decides derivable comparisons for one agent from the state. The weak and
// strict reachability closures are computed once; candidate queries are then
// pure lookups (assuming "p strictly above q" only closes a strict cycle
// when q already weakly reaches p).
class Web {
  public:
    Web(const SymState& st, int agent);
    // V(hi) > V(lo) is entailed.
    bool entails_gt(const SymPiece& hi, const SymPiece& lo) const;
    // V(hi) >= V(lo) is derivable.
    bool reaches(const SymPiece& hi, const SymPiece& lo) const;
    // Consistency of "best strictly above all others".
    bool can_be_strict_best(const SymPiece& p, const std::vector<SymPiece>& all) const;
    // Consistency of "these pieces, as a set, are strictly above `kth`, and
    // `kth` strictly above the rest".
    bool can_be_top_set(const std::vector<SymPiece>& top, const SymPiece& kth,
                        const std::vector<SymPiece>& all) const;

  private:
    int id(const SymPiece& p) const;
    bool bit(const std::vector<uint64_t>& row, int j) const { return row[j >> 6] >> (j & 63) & 1; }
    std::vector<SymPiece> nodes_;
    std::map<SymPiece, int> index_;
    std::size_t words_ = 0;
    std::vector<std::vector<uint64_t>> reach_;   // weak >=
    std::vector<std::vector<uint64_t>> strict_;  // strict >
};

// Result of symbolically applying one Equalize(k) as the opening query of a
// branch: answer equalities, inferred global relations, resulting pieces.
struct StepOutcome {
    SymPiece kth_best;
    std::vector<SymPiece> trims;                               // ascending cutter preference
    std::vector<std::pair<SymPiece, SymPiece>> new_relations;  // printed "small<big"
    std::vector<SymPiece> pieces_after;
};

StepOutcome apply_opening_equalize(SymState& st, int cutter, int k);

// Pieces that can consistently be the agent's strict best among `pieces`.
std::vector<SymPiece> consistent_best_pieces(const SymState& st, int agent,
                                             const std::vector<SymPiece>& pieces);

// The full proof document for the 4-agent algorithm.
struct ProofNode {
    std::string line;
    std::vector<std::pair<std::string, ProofNode>> children;  // assume-text (may be empty) -> subtree
};

struct ProofCase {
    int index = 0;
    std::vector<int> carl_order;  // ascending
    ProofNode root;
    int succeeded_branch = -1;           // deepest branch reached
    std::vector<std::string> relations;  // all printed global relations
};

struct ProofDoc {
    std::vector<ProofCase> cases;
    bool proved = false;
    std::string render() const;
};

// Walks all 24 preference orders of the third agent through the four-branch
// template, case-splitting on every consistent best piece, and emits the
// textual proof. Throws contradiction_error if any leaf cannot succeed.
ProofDoc prove_4agent();

// One branch simulated under a given state; returns the failing-candidate
// assumption texts (empty = branch always succeeds here).
struct BranchSim {
    std::string answer_line;
    bool always_succeeds = false;
    bool forced_fail = false;
    std::vector<std::string> fail_cases;
};
BranchSim simulate_branch(const SymState& st, int cutter, int k, int responder);

// Counterexample search over a branch template. Orders of the non-cutting
// agents are enumerated (first cutter's order fixed ascending); returns the
// first profile for which every branch can fail in one consistent world.
struct CounterExample {
    std::vector<std::vector<int>> orders;  // ascending order per cutter agent
    std::vector<std::string> world;        // the consistent failing assignment
};

struct SearchTemplate {
    int n_agents;
    std::vector<BranchScript> scripts;  // queries after the opening Equalize(n)
};

SearchTemplate remark_template_5();
SearchTemplate algorithm_template_4();

std::optional<CounterExample> search_template(const SearchTemplate& tmpl);

// Verifies that every branch of the template can fail under the given
// cutter orders (ascending). Used for the published footnote profile.
bool profile_defeats_all_branches(const SearchTemplate& tmpl,
                                  const std::vector<std::vector<int>>& orders,
                                  std::vector<std::string>* world = nullptr);

}  // namespace cakecut::symbolic
