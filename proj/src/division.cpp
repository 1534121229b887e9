#include "cakecut/division.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cakecut {

Division::Division(const std::vector<ValueMeasure>& measures, Piece cake)
    : measures_(&measures), cake_(std::move(cake)), log_(measures.size()) {
    cake_.id = next_id_++;
    cake_.origin = cake_.id;
    table_.push_back(cake_);
    graph_.init(n_agents());
    graph_.known.assign(measures.size(), false);
}

const Piece& Division::piece_by_id(int id) const {
    for (const auto& p : table_)
        if (p.id == id) return p;
    for (const auto& p : reserve_)
        if (p.id == id) return p;
    throw std::logic_error("unknown piece id");
}

CutPlan Division::equalize(int agent, int k) {
    log_.agents[agent].equalize++;
    log_.agents[agent].evals += static_cast<long>(table_.size());
    // An agent that values everything on the table at zero is indifferent:
    // the answer is "no cuts" and it prefers every piece.
    bool all_zero = true;
    for (const auto& p : table_)
        if (sgn(value(agent, p)) > 0) all_zero = false;
    CutPlan plan;
    if (all_zero) {
        plan.l_star = Rat(0);
    } else {
        plan = plan_equalize((*measures_)[agent], table_, k);
    }
    apply_plan(agent, plan, /*star=*/false);
    return plan;
}

CutPlan Division::equalize_star(int agent, int k) {
    log_.agents[agent].equalize_star++;
    log_.agents[agent].evals += static_cast<long>(table_.size());
    CutPlan plan = plan_equalize_star((*measures_)[agent], table_, k);
    apply_plan(agent, plan, /*star=*/true);
    return plan;
}

void Division::apply_plan(int agent, CutPlan& plan, bool star) {
    const ValueMeasure& m = (*measures_)[agent];
    log_.agents[agent].marks += plan.total_cuts();

    std::set<int> just_cut;
    std::vector<Piece> new_pieces;
    for (const auto& pc : plan.cuts) {
        auto it = std::find_if(table_.begin(), table_.end(),
                               [&](const Piece& p) { return p.id == pc.piece_id; });
        assert(it != table_.end());
        Piece rest = *it;
        bool first_part = true;
        for (const auto& x : pc.marks) {
            auto [pre, suf] = split_at_mark(rest, x);
            pre.origin = it->origin;
            pre.last_cutter = agent;
            if (first_part) {
                // Leftmost sub-piece inherits the identity.
                pre.id = it->id;
                pre.is_new = it->is_new;
                *it = pre;
                first_part = false;
            } else {
                pre.id = next_id_++;
                pre.is_new = true;
                new_pieces.push_back(pre);
                plan.produced.push_back({pre.id, PieceRole::equalized});
            }
            rest = suf;
        }
        if (!rest.empty()) {
            rest.id = next_id_++;
            rest.origin = it->origin;
            rest.last_cutter = agent;
            rest.is_new = true;
            if (star) {
                reserve_.push_back(rest);  // trimming, reserved for later rounds
            } else {
                bool full_value = eval(m, rest) == plan.l_star;
                new_pieces.push_back(rest);
                plan.produced.push_back(
                    {rest.id, full_value ? PieceRole::equalized : PieceRole::leftover});
            }
        }
        just_cut.insert(it->id);
        it->last_cutter = agent;
    }
    for (const auto& np : new_pieces) just_cut.insert(np.id);
    table_.insert(table_.end(), new_pieces.begin(), new_pieces.end());
    std::sort(table_.begin(), table_.end(),
              [](const Piece& a, const Piece& b) { return a.id < b.id; });

    std::ostringstream ev;
    ev << "agent " << agent << (star ? " equalize*(" : " equalize(") << plan.l_star.get_str()
       << " target): cuts=" << plan.total_cuts();
    trace_.push_back(ev.str());

    if (!first_query_done_) {
        // First query: the pieces on the table become the originals, each
        // the root of its own lineage.
        first_query_done_ = true;
        for (auto& p : table_) {
            p.is_new = false;
            p.origin = p.id;
            graph_.originals.push_back(p.id);
            graph_.rep[p.id] = p.id;
        }
        graph_.edges[agent].clear();
        for (const auto& p : table_)
            if (eval(m, p) == plan.l_star) graph_.add_edge(agent, p.id, p.id);
        graph_.known[agent] = true;
        return;
    }

    // Assumption-1 pruning for the other agents. Agents whose entire
    // preferred set was just cut get asked again (this costs evals).
    reduce_assumption1(graph_, just_cut, agent);
    std::vector<int> rebuild;
    for (int a = 0; a < n_agents(); ++a) {
        if (a == agent || !graph_.known[a]) continue;
        bool all_cut = !graph_.edges[a].empty() &&
                       std::all_of(graph_.edges[a].begin(), graph_.edges[a].end(),
                                   [&](const auto& e) { return just_cut.count(e.witness) != 0; });
        if (all_cut) rebuild.push_back(a);
    }

    // Edges witnessed by new pieces temporarily target the new piece itself;
    // reduce_assumption2 folds them onto originals.
    auto install_preference = [&](int a, const Rat& threshold) {
        graph_.edges[a].clear();
        for (const auto& p : table_) {
            if (value(a, p) != threshold) continue;
            if (p.is_new && !graph_.rep.count(p.id))
                graph_.edges[a].push_back({p.id, p.id});
            else
                graph_.add_edge(a, graph_.rep.at(p.id), p.id);
        }
        graph_.known[a] = true;
    };

    install_preference(agent, plan.l_star);
    for (int a : rebuild) {
        log_.agents[a].evals += static_cast<long>(table_.size());
        Rat best(-1);
        for (const auto& p : table_) best = std::max(best, value(a, p));
        install_preference(a, best);
    }

    reduce_assumption2(graph_, new_pieces);
    for (int a = 0; a < n_agents(); ++a) {
        auto& es = graph_.edges[a];
        std::sort(es.begin(), es.end());
    }
}

void Division::reveal_preference(int agent) {
    log_.agents[agent].evals += static_cast<long>(table_.size());
    Rat best(-1);
    for (const auto& p : table_) best = std::max(best, value(agent, p));
    graph_.edges[agent].clear();
    for (const auto& p : table_)
        if (value(agent, p) == best) graph_.add_edge(agent, graph_.rep.at(p.id), p.id);
    graph_.known[agent] = true;
}

Matching Division::match(const std::vector<int>& pick_order) const {
    return max_matching(graph_, pick_order);
}

FinalAssignment Division::finalize(const Matching& m) const {
    return finalize_allocation(m, graph_, table_, *measures_);
}

bool Allocation::envy_free() const {
    for (std::size_t i = 0; i < envy.size(); ++i)
        for (std::size_t j = 0; j < envy.size(); ++j)
            if (envy[i][i] < envy[i][j]) return false;
    return true;
}

Rat Allocation::min_own_value() const {
    Rat m = envy.empty() ? Rat(0) : envy[0][0];
    for (std::size_t i = 0; i < envy.size(); ++i) m = std::min(m, envy[i][i]);
    return m;
}

int Allocation::max_components() const {
    int c = 0;
    for (const auto& b : bundles) c = std::max(c, b.component_count());
    return c;
}

Allocation assemble_allocation(const std::vector<ValueMeasure>& measures,
                               std::vector<Piece> bundles, Piece remainder) {
    Allocation al;
    al.bundles = std::move(bundles);
    al.remainder = std::move(remainder);
    al.envy.assign(measures.size(), std::vector<Rat>(measures.size(), Rat(0)));
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (std::size_t j = 0; j < measures.size(); ++j)
            al.envy[i][j] = eval(measures[i], al.bundles[j]);
    return al;
}

}  // namespace cakecut
