#pragma once

#include "cakecut/division.hpp"

namespace cakecut {

// One speculative execution branch: a fixed sequence of Equalize queries.
struct BranchStep {
    int agent;
    int k;
};
using BranchScript = std::vector<BranchStep>;

std::string branch_name(const BranchScript& script, const std::vector<std::string>* names = nullptr);

// Branch success: every agent in `known` prefers at least two
// pieces after reductions, and a saturating matching exists for every
// possible preference of `last`.
bool branch_succeeds(const Division& d, const std::vector<int>& known, int last);

// Runs the scripts in order on copies of `d`, adopts the first succeeding
// one and returns its index. Throws contradiction_error if none succeeds.
int run_branch_engine(Division& d, const std::vector<BranchScript>& scripts,
                      const std::vector<int>& known, int last, bool star);

// Connected piece per agent, envy-free, every agent >= 1/2^(n-1), the first
// cutter (VIP) >= 1/(2^(n-2)+1); cuts the cake into exactly 2^(n-1) pieces
// on inputs without value ties.
Allocation divide_n_connected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                              int vip);

// Variant with floor 1/((3/4)*2^(n-1)+1) for n >= 4: the last three agents
// are handled by the four-branch engine.
Allocation divide_n_connected_improved(const std::vector<ValueMeasure>& measures,
                                       const Piece& cake, int vip);

// Envy-free and proportional for 3 agents with connected pieces, via nine
// speculative branches.
Allocation divide_3_connected(const std::vector<ValueMeasure>& measures, const Piece& cake);

// Envy-free for 4 agents with connected pieces: floor 1/7 for everyone and
// 1/4 for the VIP. `designated_last` never cuts (defaults to the last agent
// by index among the non-VIPs).
Allocation divide_4_connected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                              int vip, int designated_last = -1);

// Simulates one branch of the 4-agent algorithm after the VIP's opening cut;
// used by tests to probe individual branches.
bool simulate_4agent_branch(const std::vector<ValueMeasure>& measures, const Piece& cake,
                            int vip, int designated_last, const BranchScript& script);

}  // namespace cakecut
