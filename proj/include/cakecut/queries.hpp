#pragma once

#include "cakecut/measure.hpp"

#include <vector>

namespace cakecut {

// Per-agent counts of issued queries. Monotone nondecreasing.
struct QueryLog {
    struct Counts {
        long evals = 0;
        long marks = 0;
        long equalize = 0;
        long equalize_star = 0;
        long total() const { return evals + marks + equalize + equalize_star; }
    };
    std::vector<Counts> agents;

    explicit QueryLog(std::size_t n = 0) : agents(n) {}
    void ensure(std::size_t n) {
        if (agents.size() < n) agents.resize(n);
    }
    long total() const {
        long t = 0;
        for (const auto& c : agents) t += c.total();
        return t;
    }
    void absorb(const QueryLog& other) {
        ensure(other.agents.size());
        for (std::size_t i = 0; i < other.agents.size(); ++i) {
            agents[i].evals += other.agents[i].evals;
            agents[i].marks += other.agents[i].marks;
            agents[i].equalize += other.agents[i].equalize;
            agents[i].equalize_star += other.agents[i].equalize_star;
        }
    }
    // Queries issued after `before` was snapshotted.
    static QueryLog since(const QueryLog& after, const QueryLog& before) {
        QueryLog d(after.agents.size());
        for (std::size_t i = 0; i < after.agents.size(); ++i) {
            const auto& b = i < before.agents.size() ? before.agents[i] : Counts{};
            d.agents[i].evals = after.agents[i].evals - b.evals;
            d.agents[i].marks = after.agents[i].marks - b.marks;
            d.agents[i].equalize = after.agents[i].equalize - b.equalize;
            d.agents[i].equalize_star = after.agents[i].equalize_star - b.equalize_star;
        }
        return d;
    }
};

// Optimal equal value l*: the largest l such that at least k pieces of value
// l can be cut from sticks of the given lengths.
// Throws std::domain_error("degenerate sticks") when all lengths are zero.
Rat stick_division(const std::vector<Rat>& lengths, int k);

enum class PieceRole { equalized, leftover };

struct CutPlan {
    Rat l_star;
    struct PieceCuts {
        int piece_id;
        std::vector<Rat> marks;  // cut positions inside the piece, left to right
    };
    std::vector<PieceCuts> cuts;
    struct Produced {
        int piece_id;
        PieceRole role;
    };
    std::vector<Produced> produced;  // filled in when the plan is applied

    int total_cuts() const {
        int c = 0;
        for (const auto& pc : cuts) c += static_cast<int>(pc.marks.size());
        return c;
    }
};

// Equalize(k): cuts so the agent has at least k best pieces, all of value
// exactly l*, and no piece of greater value. Minimal cuts via stick division.
CutPlan plan_equalize(const ValueMeasure& m, const std::vector<Piece>& table, int k);

// Equalize*(k): trims the agent's best k-1 pieces down to the value of its
// k-th best piece. Trimmings are reserved, not part of the table afterwards.
CutPlan plan_equalize_star(const ValueMeasure& m, const std::vector<Piece>& table, int k);

}  // namespace cakecut
