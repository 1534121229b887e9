#pragma once

#include "cakecut/connected.hpp"

#include <functional>

namespace cakecut {

// One round of a reduction loop: what was allocated and the running values.
struct RoundTrace {
    int t = 0;
    Piece allocated;
    std::vector<Rat> round_gain;  // V'_t per agent
    std::vector<Rat> cumulative;  // V_t per agent
    std::string note;
};

using EfvipRoutine =
    std::function<Allocation(const std::vector<ValueMeasure>&, const Piece& cake, int vip)>;

// Runs the EFVIP routine n times on successive remainders, rotating the VIP
// in agent-index order; the concatenation is envy-free and gives every agent
// the VIP's 1/M floor.
Allocation weak_reduction(const std::vector<ValueMeasure>& measures, const Piece& cake,
                          const EfvipRoutine& efvip, std::vector<RoundTrace>* traces = nullptr);

// Repeats the n-agent connected algorithm on successive remainders with one
// fixed VIP until the VIP holds at least (1-eps)/n of the cake; the number
// of rounds is the certified ceiling of (2^(n-2)+1) ln(1/eps) / n.
Allocation strong_reduction(const std::vector<ValueMeasure>& measures, const Piece& cake,
                            int vip, const Rat& eps, std::vector<RoundTrace>* traces = nullptr);

long strong_reduction_rounds(int n, const Rat& eps);

// Disconnected pieces for n agents: every agent at least (1-eps)/n, exactly
// envy-free; weak reduction over the strong reduction.
Allocation divide_n_disconnected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                                 const Rat& eps, std::vector<RoundTrace>* traces = nullptr);

}  // namespace cakecut
