#pragma once

#include "cakecut/connected.hpp"

#include <map>
#include <optional>

namespace cakecut {

// Plan extracted from a solvable domination graph.
struct SolutionPlan {
    enum class Kind { separation, sequence } kind;
    // separation: group2 fully dominates group1; group1 divides the remainder.
    std::vector<int> group1, group2;
    // sequence: seq[i] dominates seq[j] for i < j; the remaining agent cuts
    // equal pieces and agents pick in reverse sequence order.
    std::vector<int> sequence;
    int cutter = -1;
};

struct CompetitionRecord {
    int blocker = -1;
    int competitor = -1;
    Rat delta_v;
    int round = -1;
    int sig_piece = -1;     // round-piece id the blocker competed for
    int second_piece = -1;  // the blocker's second-best round piece
    std::map<int, int> alternative;  // agent -> round-piece id with blocker deferring
};

// Cumulative state of an entire-cake division: bundles handed out per round
// (hand-off deferred so a hard-case reassignment can rewrite one round), the
// shrinking remainder, and the monotone domination graph.
class EntireCakeState {
  public:
    EntireCakeState(const std::vector<ValueMeasure>& measures, std::vector<int> agents,
                    Piece cake);

    struct RoundResult {
        long trims = 0;          // k: number of trimmed pieces
        int sig_taker = -1;      // agent holding the significant piece, -1 when k == 0
        Rat sig_value;           // VIP's value of the significant trimming
        bool skipped = false;    // VIP valued the remainder at zero
    };

    // One EFVIP run with Equalize*: the VIP cuts equal pieces, the branch
    // engine trims, everyone takes a piece, trimmings become the remainder.
    RoundResult run_star_round(int vip, int designated_last);

    // Exact k-domination test on cumulative bundles: gap >= remainder / k.
    bool k_dominates(int a, int b, long k) const;
    bool fully_dominates(int a, int b) const;

    // Repeats VIP rounds until `a` fully dominates `b`; bounded by the
    // certified ceiling of ln k / ln(n/(n-1)).
    void promote_k_domination(int a, int b);

    // Keeps the already-dominated agent out of the cutting
    // seats until the VIP k-dominates a second agent.
    void acquire_two_edges(int vip);

    std::optional<SolutionPlan> solvable() const;
    void execute(const SolutionPlan& plan);

    // Top-level driver for the agents of this state (n <= 4).
    void divide();

    Piece bundle(int agent) const;
    const Piece& remainder() const { return remainder_; }
    const std::map<std::pair<int, int>, long>& edges() const { return edges_; }
    void add_edge(int src, int dst, long k);
    const std::vector<int>& agents() const { return agents_; }
    long star_rounds() const { return star_rounds_; }
    const QueryLog& log() const { return log_; }
    const std::vector<std::string>& events() const { return events_; }

  private:
    struct Round {
        int vip = -1, last = -1;
        std::map<int, Piece> given;  // agent -> piece handed out this round
    };
    Rat value(int agent, const Piece& p) const { return eval((*measures_)[agent], p); }
    int sub_index(int agent) const;

    const std::vector<ValueMeasure>* measures_;
    std::vector<int> agents_;  // global agent ids participating here
    Piece remainder_;
    std::vector<Round> rounds_;
    std::map<std::pair<int, int>, long> edges_;  // k, 0 = full domination
    std::vector<int> edge_order_;                // insertion order of vip edges (dst per src)
    std::map<int, std::vector<int>> targets_;    // src -> dst in acquisition order
    std::vector<CompetitionRecord> competitions_;
    std::vector<std::string> events_;
    QueryLog log_;
    long star_rounds_ = 0;
};

// Entire-cake envy-free division for 1 <= n <= 4 agents: the remainder is
// empty, envy is exactly zero. Throws std::domain_error for n > 4.
Allocation divide_entire(const std::vector<ValueMeasure>& measures,
                         long* star_rounds_out = nullptr);

long entire_round_bound(int n);

}  // namespace cakecut
