#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cakecut/reductions.hpp"
#include "support/random_profiles.hpp"

using namespace cakecut;
using namespace cakecut::testsupport;

namespace {

std::vector<ValueMeasure> identical(int n) {
    return std::vector<ValueMeasure>(static_cast<std::size_t>(n), ValueMeasure::uniform());
}

EfvipRoutine four_connected() {
    return [](const std::vector<ValueMeasure>& ms, const Piece& c, int vip) {
        return divide_4_connected(ms, c, vip);
    };
}

}  // namespace

TEST_CASE("weak reduction over the 4-agent routine gives EF(4,4)") {
    std::mt19937 rng(201);
    for (int iter = 0; iter < 25; ++iter) {
        auto ms = random_profile(rng, 4);
        Allocation al = weak_reduction(ms, make_whole_cake(), four_connected());
        CHECK(al.envy_free());
        for (int a = 0; a < 4; ++a) CHECK(al.envy[a][a] * 4 >= Rat(1));
    }
}

TEST_CASE("weak reduction: identical measures finish in the first round") {
    auto ms = identical(4);
    std::vector<RoundTrace> traces;
    Allocation al = weak_reduction(ms, make_whole_cake(), four_connected(), &traces);
    CHECK(al.remainder.empty());
    CHECK(traces.size() == 1);
    for (int a = 0; a < 4; ++a) CHECK(al.envy[a][a] == make_rat(1, 4));
}

TEST_CASE("weak reduction: an early empty remainder stops the loop") {
    // Three agents uniform, one concentrated: the remainder can drain before
    // the last vip rounds; both guarantees already hold then.
    std::vector<ValueMeasure> ms{
        ValueMeasure::uniform(), ValueMeasure::uniform(), ValueMeasure::uniform(),
        ValueMeasure({Rat(0), make_rat(1, 2), Rat(1)}, {Rat(2), Rat(0)})};
    std::vector<RoundTrace> traces;
    Allocation al = weak_reduction(ms, make_whole_cake(), four_connected(), &traces);
    CHECK(al.envy_free());
    for (int a = 0; a < 4; ++a) CHECK(al.envy[a][a] * 4 >= Rat(1));
    CHECK(traces.size() <= 4);
}

TEST_CASE("strong reduction round count certified from the formula") {
    CHECK(strong_reduction_rounds(4, make_rat(1, 10)) == 3);  // ceil(5 ln10 / 4)
    CHECK(strong_reduction_rounds(4, make_rat(1, 100)) == 6);
    CHECK(strong_reduction_rounds(5, make_rat(1, 10)) == 5);  // ceil(9 ln10 / 5)
    CHECK(strong_reduction_rounds(5, make_rat(1, 100)) == 9);
}

TEST_CASE("strong reduction: per-round lower bound holds exactly") {
    std::mt19937 rng(211);
    for (int iter = 0; iter < 6; ++iter) {
        auto ms = random_profile(rng, 4);
        std::vector<RoundTrace> traces;
        Rat eps = make_rat(1, 10);
        Allocation al = strong_reduction(ms, make_whole_cake(), 0, eps, &traces);
        CHECK(al.envy_free());
        CHECK(al.envy[0][0] * 4 >= (1 - eps));
        const Rat m(5);  // 2^(n-2)+1
        Rat bound_base = 1 - Rat(4) / m;
        Rat pow(1);
        for (std::size_t t = 0; t < traces.size(); ++t) {
            pow *= bound_base;
            // V_t >= (1 - (1-n/M)^t) / n, exactly, every round.
            CHECK(traces[t].cumulative[0] * 4 >= 1 - pow);
        }
        CHECK(static_cast<long>(traces.size()) <= strong_reduction_rounds(4, eps));
    }
}

TEST_CASE("strong reduction: a large epsilon needs a single round") {
    std::mt19937 rng(213);
    auto ms = random_profile(rng, 4);
    Rat eps = make_rat(9, 10);
    CHECK(strong_reduction_rounds(4, eps) == 1);
    Allocation al = strong_reduction(ms, make_whole_cake(), 0, eps);
    CHECK(al.envy[0][0] * 4 >= (1 - eps));  // 1/M = 1/5 >= (1-eps)/n = 1/40
}

TEST_CASE("divide_n_disconnected: every agent above (1-eps)/n with zero envy") {
    std::mt19937 rng(217);
    Rat eps = make_rat(1, 10);
    for (int iter = 0; iter < 4; ++iter) {
        auto ms = random_profile(rng, 4);
        Allocation al = divide_n_disconnected(ms, make_whole_cake(), eps);
        CHECK(al.envy_free());
        for (int a = 0; a < 4; ++a) CHECK(al.envy[a][a] * 40 >= Rat(9));
    }
}

TEST_CASE("divide_n_disconnected: identical agents split the allocated cake evenly") {
    // The inner connected routine cuts 2^(n-2)+1 = 5 pieces per round and can
    // only hand out 4, so a 1/5 sliver survives each of the 12 rounds; all
    // agents end exactly equal at (1 - 5^-12)/4, above the (1-eps)/n floor.
    auto ms = identical(4);
    Allocation al = divide_n_disconnected(ms, make_whole_cake(), make_rat(1, 10));
    Rat sliver = 1;
    for (int i = 0; i < 12; ++i) sliver /= 5;
    for (int a = 0; a < 4; ++a) {
        CHECK(al.envy[a][a] == (1 - sliver) / 4);
        CHECK(al.envy[a][a] * 40 >= Rat(9));
    }
}

TEST_CASE("divide_n_disconnected: n=5 with eps=1/100 stays within the query envelope") {
    std::mt19937 rng(219);
    auto ms = random_profile(rng, 5);
    Rat eps = make_rat(1, 100);
    Allocation al = divide_n_disconnected(ms, make_whole_cake(), eps);
    CHECK(al.envy_free());
    for (int a = 0; a < 5; ++a) CHECK(al.envy[a][a] * 500 >= Rat(99));
    // c * 4^n * ln(1/eps) with c = 6 comfortably dominates the measured count.
    auto [ln_lo, ln_hi] = ln_interval(Rat(100));
    CHECK(Rat(al.log.total()) <= Rat(6) * 1024 * ln_hi);
}

TEST_CASE("strong reduction rejects out-of-range epsilon") {
    auto ms = identical(4);
    CHECK_THROWS_AS(strong_reduction(ms, make_whole_cake(), 0, Rat(0)), std::domain_error);
    CHECK_THROWS_AS(strong_reduction(ms, make_whole_cake(), 0, Rat(1)), std::domain_error);
}

TEST_CASE("weak reduction: every agent's round gain is a proportional share of the round") {
    std::mt19937 rng(227);
    for (int iter = 0; iter < 10; ++iter) {
        auto ms = random_profile(rng, 4);
        std::vector<RoundTrace> traces;
        weak_reduction(ms, make_whole_cake(), four_connected(), &traces);
        Piece prev_allocated;  // cumulative allocated after previous rounds
        for (const auto& rt : traces) {
            for (int a = 0; a < 4; ++a) {
                Rat round_cake =
                    eval(ms[a], rt.allocated) - eval(ms[a], prev_allocated);
                CHECK(rt.round_gain[a] * 4 >= round_cake);
            }
            prev_allocated = rt.allocated;
        }
    }
}
