#include "cakecut/measure.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cakecut {

Rat Piece::total_length() const {
    Rat s = 0;
    for (const auto& iv : parts) s += iv.length();
    return s;
}

int Piece::component_count() const {
    int c = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (i == 0 || parts[i].lo > parts[i - 1].hi) ++c;
    return c;
}

std::string Piece::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) os << ";";
        os << rat_str(parts[i].lo) << ".." << rat_str(parts[i].hi);
    }
    if (parts.empty()) os << "empty";
    return os.str();
}

Piece make_whole_cake() {
    return make_piece(0, {{Rat(0), Rat(1)}});
}

Piece make_piece(int id, std::vector<Interval> parts) {
    Piece p;
    p.id = id;
    p.origin = id;
    std::erase_if(parts, [](const Interval& iv) { return iv.empty(); });
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    // Coalesce adjacent parts so component counts are geometric, not clerical.
    for (const auto& iv : parts) {
        if (!p.parts.empty() && p.parts.back().hi >= iv.lo) {
            assert(p.parts.back().hi == iv.lo);
            p.parts.back().hi = iv.hi;
        } else {
            p.parts.push_back(iv);
        }
    }
    return p;
}

Piece merge_pieces(const Piece& a, const Piece& b) {
    assert(!pieces_overlap(a, b));
    std::vector<Interval> parts = a.parts;
    parts.insert(parts.end(), b.parts.begin(), b.parts.end());
    Piece m = make_piece(a.id, std::move(parts));
    m.origin = a.origin;
    m.last_cutter = a.last_cutter;
    m.is_new = a.is_new;
    return m;
}

bool pieces_overlap(const Piece& a, const Piece& b) {
    for (const auto& x : a.parts)
        for (const auto& y : b.parts)
            if (x.lo < y.hi && y.lo < x.hi) return true;
    return false;
}

ValueMeasure::ValueMeasure(std::vector<Rat> breakpoints, std::vector<Rat> densities)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
    if (breakpoints_.size() < 2 || densities_.size() + 1 != breakpoints_.size())
        throw std::invalid_argument("measure: breakpoint/density count mismatch");
    if (breakpoints_.front() != 0 || breakpoints_.back() != 1)
        throw std::invalid_argument("measure: breakpoints must span 0..1");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (breakpoints_[i] <= breakpoints_[i - 1])
            throw std::invalid_argument("measure: breakpoints must be strictly increasing");
    for (const auto& d : densities_)
        if (sgn(d) < 0) throw std::invalid_argument("measure: negative density");
    prefix_.assign(breakpoints_.size(), Rat(0));
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        prefix_[i] = prefix_[i - 1] + densities_[i - 1] * (breakpoints_[i] - breakpoints_[i - 1]);
    if (prefix_.back() != 1)
        throw std::invalid_argument("measure: total mass is not 1");
}

ValueMeasure ValueMeasure::uniform() {
    return ValueMeasure({Rat(0), Rat(1)}, {Rat(1)});
}

ValueMeasure ValueMeasure::normalized(std::vector<Rat> breakpoints, std::vector<Rat> densities) {
    Rat total = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        total += densities[i] * (breakpoints[i + 1] - breakpoints[i]);
    if (sgn(total) <= 0) throw std::invalid_argument("measure: zero total mass");
    for (auto& d : densities) d /= total;
    return ValueMeasure(std::move(breakpoints), std::move(densities));
}

Rat ValueMeasure::value_of(const Rat& a, const Rat& b) const {
    if (a >= b) return Rat(0);
    auto prefix_value = [&](const Rat& x) {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t seg = static_cast<std::size_t>(it - breakpoints_.begin());
        if (seg == 0) return Rat(0);
        --seg;  // x lies in [breakpoints_[seg], breakpoints_[seg+1])
        if (seg >= densities_.size()) return prefix_.back();
        return Rat(prefix_[seg] + densities_[seg] * (x - breakpoints_[seg]));
    };
    return prefix_value(b) - prefix_value(a);
}

Rat eval(const ValueMeasure& m, const Piece& p) {
    Rat s = 0;
    for (const auto& iv : p.parts) s += m.value_of(iv.lo, iv.hi);
    return s;
}

Rat mark(const ValueMeasure& m, const Piece& p, const Rat& target) {
    if (sgn(target) < 0) throw std::domain_error("mark: negative target");
    Rat remaining = target;
    Rat pos = p.parts.empty() ? Rat(0) : p.parts.front().lo;
    for (const auto& iv : p.parts) {
        pos = iv.lo;
        if (sgn(remaining) == 0) return pos;
        // Walk the measure segments intersecting this interval.
        const auto& bp = m.breakpoints();
        const auto& dens = m.densities();
        auto it = std::upper_bound(bp.begin(), bp.end(), iv.lo);
        std::size_t seg = static_cast<std::size_t>(it - bp.begin());
        seg = seg == 0 ? 0 : seg - 1;
        Rat cur = iv.lo;
        while (cur < iv.hi) {
            while (seg + 1 < bp.size() && bp[seg + 1] <= cur) ++seg;
            Rat seg_end = std::min(iv.hi, seg < dens.size() ? bp[seg + 1] : iv.hi);
            Rat d = seg < dens.size() ? dens[seg] : Rat(0);
            Rat v = d * (seg_end - cur);
            if (sgn(remaining) == 0) return cur;
            if (v >= remaining && sgn(d) > 0) {
                return Rat(cur + remaining / d);
            }
            remaining -= v;
            cur = seg_end;
        }
        pos = iv.hi;
        if (sgn(remaining) == 0) return pos;
    }
    if (sgn(remaining) == 0) return pos;
    throw std::domain_error("mark: insufficient value");
}

std::pair<Piece, Piece> split_at_mark(const Piece& p, const Rat& x) {
    Piece pre, suf;
    for (const auto& iv : p.parts) {
        if (iv.hi <= x) {
            pre.parts.push_back(iv);
        } else if (iv.lo >= x) {
            suf.parts.push_back(iv);
        } else {
            pre.parts.push_back({iv.lo, x});
            suf.parts.push_back({x, iv.hi});
        }
    }
    return {pre, suf};
}

}  // namespace cakecut
