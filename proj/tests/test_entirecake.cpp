#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cakecut/entirecake.hpp"
#include "support/random_profiles.hpp"

using namespace cakecut;
using namespace cakecut::testsupport;

namespace {

std::vector<ValueMeasure> identical(int n) {
    return std::vector<ValueMeasure>(static_cast<std::size_t>(n), ValueMeasure::uniform());
}

void check_entire(const std::vector<ValueMeasure>& ms, const Allocation& al) {
    CHECK(al.envy_free());
    CHECK(al.remainder.empty());
    Rat width = 0;
    for (const auto& b : al.bundles) width += b.total_length();
    CHECK(width == Rat(1));
    for (std::size_t a = 0; a < ms.size(); ++a) {
        Rat total = 0;
        for (const auto& b : al.bundles) total += eval(ms[a], b);
        CHECK(total == Rat(1));
    }
}

}  // namespace

TEST_CASE("k-domination: empty remainder dominates trivially") {
    auto ms = identical(2);
    EntireCakeState st(ms, {0, 1}, Piece{});
    CHECK(st.k_dominates(0, 1, 1));
    CHECK(st.fully_dominates(0, 1));
}

TEST_CASE("k-domination boundary: gap exactly remainder/k, then one grain less") {
    // Bundles worth 1/2 and 1/4 to agent 0; remainder is the last quarter.
    ValueMeasure u = ValueMeasure::uniform();
    std::vector<ValueMeasure> ms{u, u};
    EntireCakeState st(ms, {0, 1}, make_piece(-1, {{make_rat(3, 4), Rat(1)}}));
    // Feed one synthetic round through the public surface: use a separation
    // plan is overkill here, so probe k_dominates via a handcrafted state.
    // gap = 1/2 - 1/4 = 1/4 = remainder; k=1 holds exactly.
    // (constructed through divide() would be indirect; instead check the
    //  arithmetic with bundles injected by a tiny round.)
    SUBCASE("direct arithmetic") {
        Rat gap = make_rat(1, 4);
        Rat rem = make_rat(1, 4);
        CHECK(gap >= rem / 1);
        CHECK_FALSE(gap - make_rat(1, 1000) >= rem / 1);
    }
}

TEST_CASE("efvip* round: no trimmings mean no remainder and full domination") {
    // Identical agents tie on every piece, so the Equalize* replies need no
    // cuts: all four pieces are taken, nothing is reserved.
    auto ms = identical(4);
    EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
    auto res = st.run_star_round(0, 3);
    CHECK(res.trims == 0);
    CHECK(st.remainder().empty());
    // All-pairs full domination recorded.
    CHECK(st.edges().size() == 12);
}

TEST_CASE("efvip* round: one trim makes the vip 1-dominate the taker") {
    std::mt19937 rng(301);
    for (int iter = 0; iter < 12; ++iter) {
        auto ms = random_profile(rng, 4);
        EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
        auto res = st.run_star_round(0, 3);
        if (res.skipped || res.trims == 0) continue;
        CHECK(res.sig_taker >= 0);
        CHECK(st.k_dominates(0, res.sig_taker, res.trims));
        // The significant trimming is worth at least remainder/k to the vip.
        CHECK(res.sig_value * res.trims >= eval(ms[0], st.remainder()));
    }
}

TEST_CASE("promote: k=1 edges need no extra rounds") {
    ValueMeasure left({Rat(0), make_rat(1, 2), Rat(1)}, {Rat(2), Rat(0)});
    std::vector<ValueMeasure> ms{ValueMeasure::uniform(), left, ValueMeasure::uniform(),
                                 ValueMeasure::uniform()};
    EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
    auto res = st.run_star_round(0, 3);
    if (res.trims == 1) {
        long before = st.star_rounds();
        st.promote_k_domination(0, res.sig_taker);
        CHECK(st.star_rounds() == before);  // gap >= remainder already
        CHECK(st.fully_dominates(0, res.sig_taker));
    }
}

TEST_CASE("promote: after the rounds the full-domination inequality holds exactly") {
    std::mt19937 rng(307);
    int promoted = 0;
    for (int iter = 0; iter < 10 && promoted < 5; ++iter) {
        auto ms = random_profile(rng, 4);
        EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
        auto res = st.run_star_round(0, 3);
        if (res.skipped || res.trims == 0) continue;
        st.promote_k_domination(0, res.sig_taker);
        CHECK(st.fully_dominates(0, res.sig_taker));
        ++promoted;
    }
    CHECK(promoted > 0);
}

TEST_CASE("promote round bound: n=4, k=3 certifies four extra rounds") {
    CHECK(certified_ceil_ln_ratio(Rat(3), make_rat(4, 3)) == 4);
    CHECK(certified_ceil_ln_ratio(Rat(1), make_rat(4, 3)) == 0);
}

TEST_CASE("acquire_two_edges: ends with two distinct targets") {
    std::mt19937 rng(311);
    int checked = 0;
    for (int iter = 0; iter < 10 && checked < 4; ++iter) {
        auto ms = random_profile_fine(rng, 4);
        EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
        st.acquire_two_edges(0);
        if (st.remainder().empty()) continue;
        std::set<int> targets;
        for (const auto& [key, k] : st.edges())
            if (key.first == 0) targets.insert(key.second);
        CHECK(targets.size() >= 2);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("solvable: a single edge among three agents yields the pick sequence") {
    auto ms = identical(3);
    EntireCakeState st(ms, {0, 1, 2}, make_whole_cake());
    st.add_edge(1, 2, 0);
    auto plan = st.solvable();
    REQUIRE(plan.has_value());
    CHECK(plan->kind == SolutionPlan::Kind::sequence);
    CHECK(plan->sequence == std::vector<int>{1, 2});
    CHECK(plan->cutter == 0);
}

TEST_CASE("solvable: two agents each dominating the other two split the group") {
    auto ms = identical(4);
    EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
    st.add_edge(0, 1, 0);
    st.add_edge(0, 2, 0);
    st.add_edge(3, 1, 0);
    st.add_edge(3, 2, 0);
    auto plan = st.solvable();
    REQUIRE(plan.has_value());
    CHECK(plan->kind == SolutionPlan::Kind::separation);
    CHECK(plan->group1 == std::vector<int>{1, 2});
    CHECK(plan->group2 == std::vector<int>{0, 3});
}

TEST_CASE("solvable: empty graph has no plan") {
    auto ms = identical(4);
    EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
    CHECK_FALSE(st.solvable().has_value());
}

TEST_CASE("graphs where three agents each dominate two others are always solvable") {
    // n-1 agents each fully dominating n-2 others: brute-force random graphs
    // with that property and confirm a plan exists.
    std::mt19937 rng(313);
    auto ms = identical(4);
    std::uniform_int_distribution<int> pick(0, 3);
    int tested = 0;
    while (tested < 60) {
        EntireCakeState st(ms, {0, 1, 2, 3}, make_whole_cake());
        // Agents 1..3 each dominate two others chosen at random.
        bool ok = true;
        for (int src = 1; src < 4; ++src) {
            std::set<int> dsts;
            while (dsts.size() < 2) {
                int d = pick(rng);
                if (d != src) dsts.insert(d);
            }
            for (int d : dsts) st.add_edge(src, d, 0);
        }
        if (!ok) continue;
        ++tested;
        CHECK(st.solvable().has_value());
    }
}

TEST_CASE("divide_entire: single agent takes everything") {
    auto ms = identical(1);
    Allocation al = divide_entire(ms);
    check_entire(ms, al);
    CHECK(al.envy[0][0] == Rat(1));
}

TEST_CASE("divide_entire: two agents cut and choose") {
    std::mt19937 rng(317);
    for (int iter = 0; iter < 20; ++iter) {
        auto ms = random_profile(rng, 2);
        Allocation al = divide_entire(ms);
        check_entire(ms, al);
        CHECK(al.envy[0][0] * 2 >= Rat(1));
        CHECK(al.envy[1][1] * 2 >= Rat(1));
    }
}

TEST_CASE("divide_entire: three identical agents finish in one round") {
    auto ms = identical(3);
    long rounds = 0;
    Allocation al = divide_entire(ms, &rounds);
    check_entire(ms, al);
    CHECK(rounds == 1);
    for (int a = 0; a < 3; ++a) CHECK(al.envy[a][a] == make_rat(1, 3));
}

TEST_CASE("divide_entire: a generic 3-agent run follows the trim/choose/divide shape") {
    std::mt19937 rng(331);
    int generic = 0;
    for (int iter = 0; iter < 10 && generic < 3; ++iter) {
        auto ms = random_profile_fine(rng, 3);
        long rounds = 0;
        Allocation al = divide_entire(ms, &rounds);
        check_entire(ms, al);
        // One trimming round, then the dominated-sequence plan divides the
        // trimming into three equal parts picked in reverse order.
        CHECK(rounds == 1);
        bool has_plan = false;
        for (const auto& e : al.trace)
            if (e.find("plan: ") != std::string::npos &&
                e.find("cuts, picks") != std::string::npos)
                has_plan = true;
        CHECK(has_plan);
        ++generic;
    }
    CHECK(generic > 0);
}

TEST_CASE("divide_entire: four agents, random profiles, bounded rounds") {
    std::mt19937 rng(337);
    long bound = entire_round_bound(4);
    CHECK(bound >= 10);
    for (int iter = 0; iter < 15; ++iter) {
        auto ms = random_profile(rng, 4);
        long rounds = 0;
        Allocation al = divide_entire(ms, &rounds);
        check_entire(ms, al);
        CHECK(rounds <= bound);
    }
}

TEST_CASE("divide_entire rejects five agents") {
    auto ms = identical(5);
    CHECK_THROWS_AS(divide_entire(ms), std::domain_error);
}

TEST_CASE("two-agent division with an indifferent cutter splits by length") {
    // A separation plan can hand a pair of agents a remainder the designated
    // cutter values at zero; the cutter is then indifferent between any two
    // halves and the chooser still picks its preferred one.
    ValueMeasure left({Rat(0), make_rat(1, 2), Rat(1)}, {Rat(2), Rat(0)});
    ValueMeasure right({Rat(0), make_rat(1, 2), Rat(1)}, {Rat(0), Rat(2)});
    std::vector<ValueMeasure> ms{left, right};
    Piece rem = make_piece(-1, {{make_rat(1, 2), Rat(1)}});  // worthless to the cutter
    EntireCakeState st(ms, {0, 1}, rem);
    st.divide();
    CHECK(st.remainder().empty());
    Piece b0 = st.bundle(0), b1 = st.bundle(1);
    CHECK(b0.total_length() + b1.total_length() == make_rat(1, 2));
    CHECK(eval(right, b1) >= eval(right, b0));
    CHECK(eval(left, b0) == Rat(0));  // nothing there for the cutter anyway
}
