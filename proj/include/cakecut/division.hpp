#pragma once

#include "cakecut/prefgraph.hpp"
#include "cakecut/queries.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cakecut {

// One in-progress division of a cake (the whole unit interval or any piece
// of it). Owns the table, the reduced preference graph and the query log.
// Copyable by value: branch trials run on copies and only the winning copy
// is kept.
class Division {
  public:
    Division(const std::vector<ValueMeasure>& measures, Piece cake);

    // Issues Equalize(k) to `agent`, applies the cuts, updates the graph.
    // The first query of a division defines the original pieces. The stick
    // division answer maximizes the equalized value (it may split a dominant
    // piece into several parts).
    CutPlan equalize(int agent, int k);
    // Issues Equalize*(k): trimmings leave the table into the reserve.
    CutPlan equalize_star(int agent, int k);

    // Asks `agent` for its preference over the current table and installs
    // the (rep-folded) edges. Used for agents that never cut.
    void reveal_preference(int agent);

    // Saturating matching; agents pick in the given order.
    Matching match(const std::vector<int>& pick_order) const;
    FinalAssignment finalize(const Matching& m) const;

    const std::vector<Piece>& table() const { return table_; }
    const std::vector<Piece>& reserve() const { return reserve_; }
    const Piece& cake() const { return cake_; }
    const PreferenceGraph& graph() const { return graph_; }
    const QueryLog& log() const { return log_; }
    QueryLog& log() { return log_; }
    int n_agents() const { return static_cast<int>(measures_->size()); }
    const std::vector<ValueMeasure>& measures() const { return *measures_; }
    const Piece& piece_by_id(int id) const;
    Rat value(int agent, const Piece& p) const { return eval((*measures_)[agent], p); }

    std::vector<std::string>& trace() { return trace_; }
    const std::vector<std::string>& trace() const { return trace_; }

  private:
    void apply_plan(int agent, CutPlan& plan, bool star);

    const std::vector<ValueMeasure>* measures_;
    Piece cake_;
    std::vector<Piece> table_;    // ascending id
    std::vector<Piece> reserve_;  // Equalize* trimmings, off the table
    PreferenceGraph graph_;
    QueryLog log_;
    std::vector<std::string> trace_;
    int next_id_ = 0;
    bool first_query_done_ = false;
};

// Result of a completed division round or algorithm.
struct Allocation {
    std::vector<Piece> bundles;          // per agent; may be empty pieces
    Piece remainder;
    std::vector<std::vector<Rat>> envy;  // envy[i][j] = V_i(bundles[j])
    QueryLog log;
    int piece_count = 0;  // total pieces the round's cake was cut into
    int chosen_branch = -1;
    std::vector<std::string> trace;

    bool envy_free() const;
    Rat min_own_value() const;
    int max_components() const;
};

// Envy matrix and remainder from final bundles, using the true measures.
Allocation assemble_allocation(const std::vector<ValueMeasure>& measures,
                               std::vector<Piece> bundles, Piece remainder);

}  // namespace cakecut
