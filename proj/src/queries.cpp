#include "cakecut/queries.hpp"

#include <algorithm>
#include <cassert>

namespace cakecut {

Rat stick_division(const std::vector<Rat>& lengths, int k) {
    if (k < 1) throw std::domain_error("stick division: k must be >= 1");
    if (lengths.empty()) throw std::domain_error("stick division: no sticks");
    bool any = false;
    for (const auto& v : lengths)
        if (sgn(v) > 0) any = true;
    if (!any) throw std::domain_error("degenerate sticks");

    auto count_at = [&](const Rat& l) {
        Int c = 0;
        for (const auto& v : lengths)
            if (sgn(v) > 0) c += floor_quotient(v, l);
        return c;
    };

    // l* is attained at some candidate v_j / i with 1 <= i <= k.
    std::vector<Rat> candidates;
    for (const auto& v : lengths) {
        if (sgn(v) <= 0) continue;
        for (int i = 1; i <= k; ++i) candidates.push_back(Rat(v / i));
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<Rat>());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (const auto& c : candidates)
        if (count_at(c) >= k) return c;
    throw std::logic_error("stick division: no feasible length");  // unreachable
}

namespace {

CutPlan plan_trims(const ValueMeasure& m, const std::vector<Piece>& table, const Rat& target,
                   bool split_to_target) {
    CutPlan plan;
    plan.l_star = target;
    for (const auto& p : table) {
        Rat v = eval(m, p);
        if (v <= target) continue;
        CutPlan::PieceCuts pc;
        pc.piece_id = p.id;
        if (split_to_target) {
            // Equalize: repeatedly cut target-valued pieces off the left end.
            Piece rest = p;
            while (eval(m, rest) > target) {
                Rat x = mark(m, rest, target);
                pc.marks.push_back(x);
                rest = split_at_mark(rest, x).second;
            }
        } else {
            // Equalize*: one trim down to the target value.
            pc.marks.push_back(mark(m, p, target));
        }
        plan.cuts.push_back(std::move(pc));
    }
    return plan;
}

}  // namespace

CutPlan plan_equalize(const ValueMeasure& m, const std::vector<Piece>& table, int k) {
    // k may exceed the table size: the opening query of every algorithm cuts
    // one piece (the whole cake) into k parts.
    if (k < 2) throw std::domain_error("equalize: k must be >= 2");
    std::vector<Rat> values;
    values.reserve(table.size());
    for (const auto& p : table) values.push_back(eval(m, p));
    Rat l_star = stick_division(values, k);
    return plan_trims(m, table, l_star, /*split_to_target=*/true);
}

CutPlan plan_equalize_star(const ValueMeasure& m, const std::vector<Piece>& table, int k) {
    if (k < 2 || static_cast<std::size_t>(k) > table.size())
        throw std::domain_error("equalize*: k exceeds piece count");
    std::vector<Rat> values;
    values.reserve(table.size());
    for (const auto& p : table) values.push_back(eval(m, p));
    // k-th best value, ties broken toward more pieces at the threshold.
    std::vector<Rat> sorted = values;
    std::sort(sorted.begin(), sorted.end(), std::greater<Rat>());
    Rat threshold = sorted[static_cast<std::size_t>(k) - 1];
    return plan_trims(m, table, threshold, /*split_to_target=*/false);
}

}  // namespace cakecut
