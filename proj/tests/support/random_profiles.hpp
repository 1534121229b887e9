#pragma once

#include "cakecut/measure.hpp"

#include <random>
#include <vector>

namespace cakecut::testsupport {

// Random piecewise-constant rational measure with up to `max_segments`
// segments, normalized to total 1. Deterministic for a given engine state.
inline ValueMeasure random_measure(std::mt19937& rng, int max_segments = 8) {
    std::uniform_int_distribution<int> seg_count(1, max_segments);
    std::uniform_int_distribution<int> denom(2, 24);
    std::uniform_int_distribution<int> weight(0, 9);
    int k = seg_count(rng);
    // Breakpoints on a random rational grid dense enough for k segments.
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    int d = std::max(denom(rng), k + 2);
    std::uniform_int_distribution<int> numer(1, d - 1);
    while (static_cast<int>(cuts.size()) < k + 1) {
        Rat c = make_rat(numer(rng), d);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rat> dens;
    bool positive = false;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        int w = weight(rng);
        if (w > 0) positive = true;
        dens.push_back(Rat(w));
    }
    if (!positive) dens[0] = Rat(1);
    return ValueMeasure::normalized(cuts, dens);
}

inline std::vector<ValueMeasure> random_profile(std::mt19937& rng, int n, int max_segments = 8) {
    std::vector<ValueMeasure> ms;
    ms.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ms.push_back(random_measure(rng, max_segments));
    return ms;
}

// Tie-free variant: strictly positive densities on a fine random grid, so
// that distinct pieces essentially never share a value and every Equalize
// makes its full complement of cuts. Piecewise-constant measures tie
// systematically once pieces fall inside joint constant-density regions
// (equal value there means equal length, for everyone), so the grid must be
// finer than the piece scale of the algorithm under test.
inline ValueMeasure random_measure_fine(std::mt19937& rng, int max_segments = 8) {
    std::uniform_int_distribution<int> seg_count(std::max(2, max_segments / 2), max_segments);
    std::uniform_int_distribution<int> denom(4 * max_segments + 7, 12 * max_segments + 5);
    std::uniform_int_distribution<int> weight(1, 9973);
    int k = seg_count(rng);
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    int d = denom(rng);
    std::uniform_int_distribution<int> numer(1, d - 1);
    while (static_cast<int>(cuts.size()) < k + 1) {
        Rat c = make_rat(numer(rng), d);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rat> dens;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) dens.push_back(Rat(weight(rng)));
    return ValueMeasure::normalized(cuts, dens);
}

inline std::vector<ValueMeasure> random_profile_fine(std::mt19937& rng, int n,
                                                     int max_segments = 8) {
    std::vector<ValueMeasure> ms;
    ms.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ms.push_back(random_measure_fine(rng, max_segments));
    return ms;
}

}  // namespace cakecut::testsupport
