#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cakecut/measure.hpp"
#include "support/oracles.hpp"
#include "support/random_profiles.hpp"

using namespace cakecut;
using namespace cakecut::testsupport;

namespace {

Piece interval_piece(long a_num, long a_den, long b_num, long b_den) {
    return make_piece(1, {{make_rat(a_num, a_den), make_rat(b_num, b_den)}});
}

}  // namespace

TEST_CASE("eval: uniform quarter") {
    ValueMeasure m = ValueMeasure::uniform();
    CHECK(eval(m, interval_piece(0, 1, 1, 4)) == make_rat(1, 4));
}

TEST_CASE("eval: two-segment density, checked against a grid oracle") {
    std::vector<Rat> bps{Rat(0), make_rat(1, 2), Rat(1)};
    std::vector<Rat> dens{make_rat(3, 2), make_rat(1, 2)};
    ValueMeasure m(bps, dens);
    Piece p = interval_piece(1, 4, 3, 4);
    Rat expected = grid_integral(bps, dens, make_rat(1, 4), make_rat(3, 4), 64);
    CHECK(expected == make_rat(1, 2));
    CHECK(eval(m, p) == expected);
}

TEST_CASE("eval: empty piece is zero") {
    ValueMeasure m = ValueMeasure::uniform();
    Piece empty;
    CHECK(eval(m, empty) == Rat(0));
}

TEST_CASE("mark: uniform third") {
    ValueMeasure m = ValueMeasure::uniform();
    CHECK(mark(m, make_whole_cake(), make_rat(1, 3)) == make_rat(1, 3));
}

TEST_CASE("mark: mass concentrated on the left half") {
    ValueMeasure m({Rat(0), make_rat(1, 2), Rat(1)}, {Rat(2), Rat(0)});
    CHECK(mark(m, make_whole_cake(), make_rat(1, 2)) == make_rat(1, 4));
    // Full value is reached at 1/2 already; the leftmost such point wins.
    CHECK(mark(m, make_whole_cake(), Rat(1)) == make_rat(1, 2));
}

TEST_CASE("mark: full target lands on the right endpoint for positive density") {
    ValueMeasure m = ValueMeasure::uniform();
    Piece p = interval_piece(1, 8, 5, 8);
    CHECK(mark(m, p, eval(m, p)) == make_rat(5, 8));
}

TEST_CASE("mark: error paths") {
    ValueMeasure m = ValueMeasure::uniform();
    CHECK_THROWS_AS(mark(m, make_whole_cake(), Rat(2)), std::domain_error);
    CHECK_THROWS_AS(mark(m, make_whole_cake(), Rat(-1)), std::domain_error);
}

TEST_CASE("mark/eval round trip over random measures and targets") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 60; ++iter) {
        ValueMeasure m = random_measure(rng);
        Piece cake = make_whole_cake();
        std::uniform_int_distribution<int> num(0, 16);
        Rat t = make_rat(num(rng), 16);
        Rat x = mark(m, cake, t);
        auto [pre, suf] = split_at_mark(cake, x);
        CHECK(eval(m, pre) == t);
        CHECK(eval(m, pre) + eval(m, suf) == Rat(1));
    }
}

TEST_CASE("additivity and monotonicity on random split points") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
        ValueMeasure m = random_measure(rng);
        std::uniform_int_distribution<int> num(1, 15);
        Rat x = make_rat(num(rng), 16);
        auto [pre, suf] = split_at_mark(make_whole_cake(), x);
        CHECK(eval(m, pre) + eval(m, suf) == Rat(1));
        CHECK(eval(m, pre) <= Rat(1));
        Piece sub = make_piece(2, {{Rat(0), x / 2}});
        CHECK(eval(m, sub) <= eval(m, pre));
    }
}

TEST_CASE("normalization rejects zero mass and fixes totals") {
    CHECK_THROWS(ValueMeasure({Rat(0), Rat(1)}, {Rat(2)}));
    ValueMeasure m = ValueMeasure::normalized({Rat(0), Rat(1)}, {Rat(2)});
    CHECK(eval(m, make_whole_cake()) == Rat(1));
}

TEST_CASE("pieces coalesce adjacent parts and count components") {
    Piece p = make_piece(3, {{Rat(0), make_rat(1, 4)},
                             {make_rat(1, 4), make_rat(1, 2)},
                             {make_rat(3, 4), Rat(1)}});
    CHECK(p.parts.size() == 2);
    CHECK(p.component_count() == 2);
}

TEST_CASE("ln interval brackets known values") {
    auto [lo, hi] = ln_interval(Rat(10), 24);
    CHECK(lo <= hi);
    // 2.302585 < ln 10 < 2.302586
    CHECK(lo > make_rat(2302585, 1000000));
    CHECK(hi < make_rat(2302586, 1000000));
    CHECK(certified_ceil_ln(Rat(10), Rat(5), Rat(4)) == 3);
    CHECK(certified_ceil_ln_ratio(Rat(3), make_rat(4, 3)) == 4);
}
