#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cakecut/division.hpp"
#include "support/oracles.hpp"
#include "support/random_profiles.hpp"

using namespace cakecut;
using namespace cakecut::testsupport;

namespace {

Piece third(int id, int which) {
    return make_piece(id, {{make_rat(which, 3), make_rat(which + 1, 3)}});
}

std::vector<Piece> three_thirds() { return {third(0, 0), third(1, 1), third(2, 2)}; }

ValueMeasure concentrated_on(int which) {
    // All value inside one third.
    std::vector<Rat> bps{Rat(0), make_rat(1, 3), make_rat(2, 3), Rat(1)};
    std::vector<Rat> dens{Rat(0), Rat(0), Rat(0)};
    dens[static_cast<std::size_t>(which)] = Rat(3);
    return ValueMeasure(bps, dens);
}

}  // namespace

TEST_CASE("build_graph: equal pieces give a complete bipartite graph") {
    std::vector<ValueMeasure> ms{ValueMeasure::uniform(), ValueMeasure::uniform(),
                                 ValueMeasure::uniform()};
    PreferenceGraph g = build_graph(three_thirds(), ms);
    for (int a = 0; a < 3; ++a) CHECK(g.degree(a) == 3);
}

TEST_CASE("build_graph: single agent, single piece") {
    std::vector<ValueMeasure> ms{ValueMeasure::uniform()};
    std::vector<Piece> table{make_whole_cake()};
    PreferenceGraph g = build_graph(table, ms);
    CHECK(g.degree(0) == 1);
}

TEST_CASE("assumption 1: tie with a just-cut piece is dropped") {
    std::vector<ValueMeasure> ms{ValueMeasure::uniform()};
    PreferenceGraph g;
    g.init(1);
    g.originals = {0, 1, 2};
    for (int i = 0; i < 3; ++i) g.rep[i] = i;
    g.add_edge(0, 1, 1);
    g.add_edge(0, 2, 2);
    g.known[0] = true;
    reduce_assumption1(g, {2}, /*cutter=*/7);
    CHECK(g.degree(0) == 1);
    CHECK(g.has_edge(0, 1));

    // No overlap with the just-cut set: unchanged.
    reduce_assumption1(g, {2}, 7);
    CHECK(g.degree(0) == 1);
}

TEST_CASE("assumption 1: the cutter keeps its just-cut pieces") {
    PreferenceGraph g;
    g.init(2);
    g.originals = {0, 1};
    g.rep[0] = 0;
    g.rep[1] = 1;
    g.add_edge(0, 0, 0);
    g.add_edge(0, 1, 1);
    g.known[0] = true;
    reduce_assumption1(g, {0, 1}, /*cutter=*/0);
    CHECK(g.degree(0) == 2);
}

TEST_CASE("assumption 2: leftover folds onto its origin") {
    PreferenceGraph g;
    g.init(2);
    g.originals = {0, 1, 2, 3};
    for (int i = 0; i < 4; ++i) g.rep[i] = i;
    g.known[0] = g.known[1] = true;
    Piece leftover;
    leftover.id = 9;
    leftover.origin = 3;
    leftover.is_new = true;
    g.edges[1].push_back({9, 9});
    reduce_assumption2(g, {leftover});
    CHECK(g.rep.at(9) == 3);
    CHECK(g.has_edge(1, 3));
    // Y-set of original 3 now contains the leftover.
    std::vector<Piece> table{make_piece(3, {{make_rat(3, 4), make_rat(7, 8)}})};
    table.push_back(make_piece(9, {{make_rat(7, 8), Rat(1)}}));
    table[1].origin = 3;
    table[1].is_new = true;
    auto ys = g.y_set(3, table);
    CHECK(ys == std::vector<int>{3, 9});
}

TEST_CASE("assumption 2: collision avoidance keeps the holder's edge count") {
    PreferenceGraph g;
    g.init(1);
    g.originals = {0, 1, 2};
    for (int i = 0; i < 3; ++i) g.rep[i] = i;
    g.known[0] = true;
    // Agent already prefers original 2 and a new half of origin 2.
    g.add_edge(0, 2, 2);
    Piece half;
    half.id = 5;
    half.origin = 2;
    half.is_new = true;
    g.edges[0].push_back({5, 5});
    reduce_assumption2(g, {half});
    CHECK(g.rep.at(5) != 2);  // origin taken by the existing edge
    CHECK(g.degree(0) == 2);
}

TEST_CASE("assumption 2: two new pieces map to distinct originals in index order") {
    PreferenceGraph g;
    g.init(1);
    g.originals = {0, 1, 2, 3};
    for (int i = 0; i < 4; ++i) g.rep[i] = i;
    g.known[0] = true;
    Piece n1, n2;
    n1.id = 7;
    n1.origin = 2;
    n1.is_new = true;
    n2.id = 8;
    n2.origin = 3;
    n2.is_new = true;
    reduce_assumption2(g, {n1, n2});
    CHECK(g.rep.at(7) == 2);
    CHECK(g.rep.at(8) == 3);
}

TEST_CASE("hall_check: joint preference for one piece violates") {
    std::vector<ValueMeasure> ms{ValueMeasure::uniform(), concentrated_on(2),
                                 concentrated_on(2)};
    PreferenceGraph g = build_graph(three_thirds(), ms);
    auto viol = hall_check(g);
    REQUIRE(viol.size() == 1);
    CHECK(viol[0] == std::vector<int>{1, 2});
    CHECK_THROWS_AS(max_matching(g, {0, 1, 2}), no_matching_error);
}

TEST_CASE("hall_check: complete graph has no violation") {
    std::vector<ValueMeasure> ms{ValueMeasure::uniform(), ValueMeasure::uniform(),
                                 ValueMeasure::uniform()};
    PreferenceGraph g = build_graph(three_thirds(), ms);
    CHECK(hall_check(g).empty());
}

TEST_CASE("hall_check: 4-cycle of preferences admits a matching") {
    PreferenceGraph g;
    g.init(4);
    g.originals = {0, 1, 2, 3};
    for (int i = 0; i < 4; ++i) g.rep[i] = i;
    for (int a = 0; a < 4; ++a) {
        g.add_edge(a, a, a);
        g.add_edge(a, (a + 1) % 4, (a + 1) % 4);
        g.known[a] = true;
    }
    CHECK(hall_check(g).empty());
    CHECK(brute_force_saturating_matching(g));
    Matching m = max_matching(g, {3, 2, 1, 0});
    CHECK(m.piece_of_agent.size() == 4);
}

TEST_CASE("hall_check equals exhaustive matching search on random graphs") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> nn(2, 6), pp(2, 7), coin(0, 3);
    for (int iter = 0; iter < 160; ++iter) {
        int n = nn(rng), p = pp(rng);
        PreferenceGraph g;
        g.init(n);
        for (int i = 0; i < p; ++i) {
            g.originals.push_back(i);
            g.rep[i] = i;
        }
        for (int a = 0; a < n; ++a) {
            g.known[a] = true;
            for (int i = 0; i < p; ++i)
                if (coin(rng) == 0) g.add_edge(a, i, i);
            if (g.degree(a) == 0) g.add_edge(a, a % p, a % p);
        }
        bool feasible = brute_force_saturating_matching(g);
        CHECK(hall_check(g).empty() == feasible);
    }
}

TEST_CASE("matching determinism and unique forced matching") {
    PreferenceGraph g;
    g.init(3);
    g.originals = {0, 1, 2};
    for (int i = 0; i < 3; ++i) g.rep[i] = i;
    // Agent 0 prefers only 0; agent 1 prefers {0,1}; agent 2 prefers {1,2}.
    g.add_edge(0, 0, 0);
    g.add_edge(1, 0, 0);
    g.add_edge(1, 1, 1);
    g.add_edge(2, 1, 1);
    g.add_edge(2, 2, 2);
    g.known = {true, true, true};
    Matching m = max_matching(g, {2, 1, 0});
    CHECK(m.piece_of_agent.at(0) == 0);
    CHECK(m.piece_of_agent.at(1) == 1);
    CHECK(m.piece_of_agent.at(2) == 2);
}

TEST_CASE("finalize: the agent takes its best piece inside the Y-set") {
    std::vector<ValueMeasure> ms{concentrated_on(2)};
    PreferenceGraph g;
    g.init(1);
    g.originals = {0};
    g.rep[0] = 0;
    g.rep[1] = 0;  // a later piece folded onto original 0
    g.add_edge(0, 0, 1);
    g.known[0] = true;
    std::vector<Piece> table;
    table.push_back(make_piece(0, {{Rat(0), make_rat(1, 3)}}));
    Piece fold = make_piece(1, {{make_rat(2, 3), Rat(1)}});
    fold.origin = 0;
    fold.is_new = true;
    table.push_back(fold);
    Matching m;
    m.piece_of_agent[0] = 0;
    FinalAssignment fa = finalize_allocation(m, g, table, ms);
    CHECK(fa.piece_of_agent.at(0) == 1);  // the folded piece is worth more
    CHECK(fa.disposed == std::vector<int>{0});
}

TEST_CASE("joint preference k+1 guarantees a matching for any unknown agent") {
    // Random graphs filtered by the hypothesis: every subset of k known
    // agents jointly prefers at least k+1 pieces. Then any single-edge
    // completion of one extra agent still admits a saturating matching.
    std::mt19937 rng(53);
    std::uniform_int_distribution<int> nn(2, 5), pp(3, 7), coin(0, 2);
    int accepted = 0;
    while (accepted < 40) {
        int n = nn(rng), p = pp(rng);
        PreferenceGraph g;
        g.init(n + 1);  // last agent unknown
        for (int i = 0; i < p; ++i) {
            g.originals.push_back(i);
            g.rep[i] = i;
        }
        for (int a = 0; a < n; ++a) {
            g.known[a] = true;
            for (int i = 0; i < p; ++i)
                if (coin(rng) == 0) g.add_edge(a, i, i);
            if (g.degree(a) == 0) g.add_edge(a, a % p, a % p);
        }
        bool hypothesis = true;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::set<int> nbhd;
            int size = 0;
            for (int a = 0; a < n; ++a)
                if (mask >> a & 1) {
                    ++size;
                    for (const auto& e : g.edges[a]) nbhd.insert(e.node);
                }
            if (static_cast<int>(nbhd.size()) < size + 1) hypothesis = false;
        }
        if (!hypothesis) continue;
        ++accepted;
        CHECK(matching_for_every_preference(g, n));
    }
}

TEST_CASE("three-agent graph flow: trim prunes the first cutter's tie") {
    // Uniform first cutter makes thirds; the second agent's Equalize(2)
    // trims its best piece down to its second best, after which the first
    // cutter prefers only its untouched pieces and a matching exists for
    // any preference of the third agent.
    std::vector<ValueMeasure> ms{
        ValueMeasure::uniform(),
        ValueMeasure({Rat(0), make_rat(1, 3), make_rat(2, 3), Rat(1)},
                     {make_rat(9, 10), make_rat(24, 25), make_rat(171, 150)}),
        ValueMeasure::uniform()};
    Division d(ms, make_whole_cake());
    d.equalize(0, 3);
    CHECK(d.graph().degree(0) == 3);
    d.equalize(1, 2);
    // Agent 1's values of the thirds are 3/10, 8/25, 19/50: the best (the
    // right third) is trimmed to 8/25 and both stay preferred.
    CHECK(d.graph().degree(1) == 2);
    CHECK(d.graph().has_edge(1, 1));
    CHECK(d.graph().has_edge(1, 2));
    // The first cutter loses only the just-trimmed piece.
    CHECK(d.graph().degree(0) == 2);
    CHECK(d.graph().has_edge(0, 0));
    CHECK(d.graph().has_edge(0, 1));
    CHECK(matching_for_every_preference(d.graph(), 2));
}
