#pragma once

#include "cakecut/rat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cakecut {

// Raised when agents' replies contradict a guarantee the division algorithms
// are supposed to provide. Reaching one of these is either an engine bug or a
// falsified claim, never a bad-input condition.
struct contradiction_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct Interval {
    Rat lo, hi;  // 0 <= lo <= hi <= 1 within the unit cake

    Rat length() const { return hi - lo; }
    bool empty() const { return lo >= hi; }
};

// A finite union of disjoint intervals with identity and lineage. `origin`
// is the id of the first-query piece this one descends from; `is_new` marks
// pieces created by a cut after the first query.
struct Piece {
    int id = -1;
    std::vector<Interval> parts;  // sorted, pairwise disjoint, non-empty
    int origin = -1;
    std::optional<int> last_cutter;
    bool is_new = false;

    bool empty() const { return parts.empty(); }
    Rat total_length() const;
    // Number of maximal connected components (adjacent parts coalesced).
    int component_count() const;
    std::string to_string() const;
};

Piece make_whole_cake();
Piece make_piece(int id, std::vector<Interval> parts);

// Disjoint union of two pieces (point sets must not overlap); parts are
// merged in order and coalesced when adjacent.
Piece merge_pieces(const Piece& a, const Piece& b);

bool pieces_overlap(const Piece& a, const Piece& b);

// Piecewise-constant density on [0,1]: strictly increasing breakpoints from
// 0 to 1 and one nonnegative density per segment. Total measure must be 1.
class ValueMeasure {
  public:
    ValueMeasure(std::vector<Rat> breakpoints, std::vector<Rat> densities);

    // Integral of the density over [a, b].
    Rat value_of(const Rat& a, const Rat& b) const;
    const std::vector<Rat>& breakpoints() const { return breakpoints_; }
    const std::vector<Rat>& densities() const { return densities_; }

    static ValueMeasure uniform();
    // Normalizes total mass to 1 (rejects zero total).
    static ValueMeasure normalized(std::vector<Rat> breakpoints, std::vector<Rat> densities);

  private:
    std::vector<Rat> breakpoints_;
    std::vector<Rat> densities_;
    std::vector<Rat> prefix_;  // value of [0, breakpoints_[i]]
};

// The eval query: exact value of a piece. Empty piece -> 0.
Rat eval(const ValueMeasure& m, const Piece& p);

// The mark query: leftmost point x such that the prefix of p (traversing its
// intervals left to right) up to x has value exactly `target`. On zero-density
// plateaus the leftmost qualifying point is returned.
// Throws std::domain_error on target < 0 ("negative target") or
// target > eval(m, p) ("insufficient value").
Rat mark(const ValueMeasure& m, const Piece& p, const Rat& target);

// Splits p at x into (prefix, suffix) as point sets; ids are not assigned.
std::pair<Piece, Piece> split_at_mark(const Piece& p, const Rat& x);

}  // namespace cakecut
