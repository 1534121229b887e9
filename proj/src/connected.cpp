#include "cakecut/connected.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cakecut {

namespace {

// Builds per-agent bundles from a finalized assignment.
Allocation collect(const Division& d, const FinalAssignment& fa, int piece_count,
                   int chosen_branch) {
    std::vector<Piece> bundles(d.n_agents());
    for (auto& b : bundles) b = Piece{};
    for (const auto& [agent, pid] : fa.piece_of_agent) bundles[agent] = d.piece_by_id(pid);
    Piece rem;
    for (int pid : fa.disposed) rem = merge_pieces(rem, d.piece_by_id(pid));
    for (const auto& r : d.reserve()) rem = merge_pieces(rem, r);
    Allocation al = assemble_allocation(d.measures(), std::move(bundles), std::move(rem));
    al.log = d.log();
    al.piece_count = piece_count;
    al.chosen_branch = chosen_branch;
    al.trace = d.trace();
    return al;
}

std::vector<int> rotated_order(int n, int vip) {
    std::vector<int> order{vip};
    for (int a = 0; a < n; ++a)
        if (a != vip) order.push_back(a);
    return order;
}

// Matching over the concrete pieces and true maxima, ignoring the folded
// graph. Every guarantee survives it: each agent receives a best piece of
// the same M-piece partition. Throws no_matching_error when even the
// concrete preferences admit no system of distinct representatives.
FinalAssignment piece_level_assignment(Division& d, const std::vector<int>& picks) {
    PreferenceGraph flat;
    flat.init(d.n_agents());
    for (const auto& p : d.table()) {
        flat.originals.push_back(p.id);
        flat.rep[p.id] = p.id;
    }
    for (int a = 0; a < d.n_agents(); ++a) {
        d.log().agents[static_cast<std::size_t>(a)].evals +=
            static_cast<long>(d.table().size());
        Rat best(-1);
        for (const auto& p : d.table()) best = std::max(best, d.value(a, p));
        for (const auto& p : d.table())
            if (d.value(a, p) == best) flat.add_edge(a, p.id, p.id);
        flat.known[a] = true;
    }
    FinalAssignment fa =
        finalize_allocation(max_matching(flat, picks), flat, d.table(), d.measures());
    d.trace().push_back("reduced graph too narrow: used a piece-level matching");
    return fa;
}

// Folded-graph matching first, concrete pieces second. Exact value ties can
// fold two of a cutter's preferred pieces onto one node and cost it the
// Hall width the reductions promise; the concrete preferences often still
// have distinct representatives.
FinalAssignment match_with_piece_fallback(Division& d, const std::vector<int>& picks) {
    try {
        return d.finalize(d.match(picks));
    } catch (const no_matching_error&) {
        return piece_level_assignment(d, picks);
    }
}

// Speculative-branch ladder: the certified node criterion first; when
// every branch fails it (dominant pieces split in half defeat the folded
// bookkeeping), each branch is retried with the piece-level matching.
std::pair<int, FinalAssignment> run_branch_ladder(Division& d,
                                                  const std::vector<BranchScript>& scripts,
                                                  const std::vector<int>& known, int last,
                                                  const std::vector<int>& picks) {
    try {
        int branch = run_branch_engine(d, scripts, known, last, /*star=*/false);
        d.reveal_preference(last);
        return {branch, d.finalize(d.match(picks))};
    } catch (const contradiction_error&) {
    }
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        Division trial = d;
        for (const auto& step : scripts[i]) trial.equalize(step.agent, step.k);
        try {
            FinalAssignment fa = piece_level_assignment(trial, picks);
            d = std::move(trial);
            return {static_cast<int>(i), fa};
        } catch (const no_matching_error&) {
        }
    }
    throw contradiction_error("no branch admits even a piece-level matching");
}

}  // namespace

std::string branch_name(const BranchScript& script, const std::vector<std::string>* names) {
    std::ostringstream os;
    for (std::size_t i = 0; i < script.size(); ++i) {
        if (i) os << "; ";
        if (names)
            os << (*names)[script[i].agent];
        else
            os << "agent" << script[i].agent;
        os << ":equalize(" << script[i].k << ")";
    }
    return os.str();
}

bool branch_succeeds(const Division& d, const std::vector<int>& known, int last) {
    for (int a : known)
        if (!d.graph().known[a] || d.graph().degree(a) < 2) return false;
    return matching_for_every_preference(d.graph(), last);
}

int run_branch_engine(Division& d, const std::vector<BranchScript>& scripts,
                      const std::vector<int>& known, int last, bool star) {
    QueryLog wasted(static_cast<std::size_t>(d.n_agents()));
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        Division trial = d;
        for (const auto& step : scripts[i]) {
            if (star)
                trial.equalize_star(step.agent, step.k);
            else
                trial.equalize(step.agent, step.k);
        }
        if (branch_succeeds(trial, known, last)) {
            d = std::move(trial);
            d.log().absorb(wasted);  // failed trials asked real queries too
            d.trace().push_back("branch " + std::to_string(i) + " succeeded: " +
                                branch_name(scripts[i]));
            return static_cast<int>(i);
        }
        wasted.absorb(QueryLog::since(trial.log(), d.log()));
    }
    throw contradiction_error("no branch of the speculative engine succeeds");
}

Allocation divide_n_connected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                              int vip) {
    const int n = static_cast<int>(measures.size());
    if (n < 2) throw std::domain_error("connected division needs at least 2 agents");
    std::vector<int> order = rotated_order(n, vip);
    Division d(measures, cake);
    for (int u = n - 1; u >= 1; --u) {
        int agent = order[static_cast<std::size_t>(n - 1 - u)];
        d.equalize(agent, (1 << (u - 1)) + 1);
    }
    d.reveal_preference(order.back());
    std::vector<int> picks(order.rbegin(), order.rend());
    FinalAssignment fa = match_with_piece_fallback(d, picks);
    return collect(d, fa, static_cast<int>(d.table().size()), -1);
}

Allocation divide_n_connected_improved(const std::vector<ValueMeasure>& measures,
                                       const Piece& cake, int vip) {
    const int n = static_cast<int>(measures.size());
    if (n < 4) throw std::domain_error("improved variant needs n >= 4");
    std::vector<int> order = rotated_order(n, vip);
    Division d(measures, cake);
    for (int i = 0; i + 3 < n; ++i) {
        int agent = order[static_cast<std::size_t>(i)];
        d.equalize(agent, 1 + 3 * (1 << (n - i - 4)));
    }
    int b = order[static_cast<std::size_t>(n - 3)];
    int c = order[static_cast<std::size_t>(n - 2)];
    int last = order.back();
    std::vector<BranchScript> scripts = {
        {{b, 2}, {c, 2}}, {{b, 3}, {c, 2}}, {{c, 2}, {b, 2}}, {{c, 3}, {b, 2}}};
    std::vector<int> known(order.begin(), order.end() - 1);
    std::vector<int> picks(order.rbegin(), order.rend());
    auto [branch, fa] = run_branch_ladder(d, scripts, known, last, picks);
    return collect(d, fa, static_cast<int>(d.table().size()), branch);
}

Allocation divide_3_connected(const std::vector<ValueMeasure>& measures, const Piece& cake) {
    assert(measures.size() == 3);
    Rat total[3];
    for (int a = 0; a < 3; ++a) total[a] = eval(measures[a], cake);

    std::vector<BranchScript> scripts;
    for (int first = 0; first < 3; ++first) {
        scripts.push_back({{first, 3}});
        for (int second = 0; second < 3; ++second)
            if (second != first) scripts.push_back({{first, 3}, {second, 2}});
    }

    QueryLog wasted(3);
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        Division trial(measures, cake);
        std::vector<int> cutters;
        for (const auto& step : scripts[i]) {
            trial.equalize(step.agent, step.k);
            cutters.push_back(step.agent);
        }
        std::vector<int> picks;
        for (int a = 2; a >= 0; --a)
            if (std::find(cutters.begin(), cutters.end(), a) == cutters.end()) {
                trial.reveal_preference(a);
                picks.push_back(a);
            }
        picks.insert(picks.end(), cutters.rbegin(), cutters.rend());
        Matching m;
        bool matched = true;
        try {
            m = trial.match(picks);
        } catch (const no_matching_error&) {
            matched = false;
        }
        if (matched) {
            FinalAssignment fa = trial.finalize(m);
            Allocation al = collect(trial, fa, static_cast<int>(trial.table().size()),
                                    static_cast<int>(i));
            bool proportional = true;
            for (int a = 0; a < 3; ++a)
                if (al.envy[a][a] * 3 < total[a]) proportional = false;
            if (al.envy_free() && proportional) {
                al.log.absorb(wasted);
                al.trace.push_back("branch " + std::to_string(i) + " succeeded: " +
                                   branch_name(scripts[i]));
                return al;
            }
        }
        wasted.absorb(trial.log());
    }
    throw contradiction_error("no branch of the 3-agent algorithm succeeds");
}

Allocation divide_4_connected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                              int vip, int designated_last) {
    const int n = static_cast<int>(measures.size());
    assert(n == 4);
    std::vector<int> order = rotated_order(n, vip);
    if (designated_last >= 0) {
        assert(designated_last != vip);
        std::erase(order, designated_last);
        order.push_back(designated_last);
    }
    int b = order[1], c = order[2], last = order[3];

    Division d(measures, cake);
    d.equalize(vip, 4);
    std::vector<BranchScript> scripts = {
        {{b, 2}, {c, 2}}, {{b, 3}, {c, 2}}, {{c, 2}, {b, 2}}, {{c, 3}, {b, 2}}};
    std::vector<int> picks{last, c, b, vip};
    auto [branch, fa] = run_branch_ladder(d, scripts, {vip, b, c}, last, picks);
    return collect(d, fa, static_cast<int>(d.table().size()), branch);
}

bool simulate_4agent_branch(const std::vector<ValueMeasure>& measures, const Piece& cake,
                            int vip, int designated_last, const BranchScript& script) {
    Division d(measures, cake);
    d.equalize(vip, 4);
    for (const auto& step : script) d.equalize(step.agent, step.k);
    std::vector<int> known{vip};
    for (const auto& step : script) known.push_back(step.agent);
    return branch_succeeds(d, known, designated_last);
}

}  // namespace cakecut
