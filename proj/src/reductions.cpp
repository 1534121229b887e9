#include "cakecut/reductions.hpp"

#include <cassert>
#include <sstream>

namespace cakecut {

namespace {

Piece complement_within(const Piece& cake, const std::vector<Piece>& taken) {
    // Remainder = cake minus the union of taken pieces. All pieces are
    // unions of intervals of the cake, so a sweep over boundary points works.
    std::vector<Interval> holes;
    for (const auto& p : taken)
        for (const auto& iv : p.parts) holes.push_back(iv);
    std::sort(holes.begin(), holes.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> rest;
    for (const auto& iv : cake.parts) {
        Rat cur = iv.lo;
        for (const auto& h : holes) {
            if (h.hi <= cur || h.lo >= iv.hi) continue;
            if (h.lo > cur) rest.push_back({cur, h.lo});
            cur = std::max(cur, h.hi);
        }
        if (cur < iv.hi) rest.push_back({cur, iv.hi});
    }
    return make_piece(-1, std::move(rest));
}

void accumulate(std::vector<Piece>& bundles, const Allocation& sub) {
    for (std::size_t a = 0; a < bundles.size(); ++a)
        bundles[a] = merge_pieces(bundles[a], sub.bundles[a]);
}

}  // namespace

Allocation weak_reduction(const std::vector<ValueMeasure>& measures, const Piece& cake,
                          const EfvipRoutine& efvip, std::vector<RoundTrace>* traces) {
    const int n = static_cast<int>(measures.size());
    std::vector<Piece> bundles(measures.size());
    Piece remainder = cake;
    QueryLog log(measures.size());
    std::vector<std::string> trace;
    for (int vip = 0; vip < n; ++vip) {
        if (remainder.empty()) {
            trace.push_back("round " + std::to_string(vip + 1) + ": remainder empty, done");
            break;
        }
        if (sgn(eval(measures[vip], remainder)) == 0) {
            // The VIP's guarantee already holds: it values the unallocated
            // part at zero, so skipping its round changes nothing for it.
            trace.push_back("round " + std::to_string(vip + 1) + ": vip values remainder 0, skipped");
            continue;
        }
        Allocation sub = efvip(measures, remainder, vip);
        accumulate(bundles, sub);
        remainder = sub.remainder;
        log.absorb(sub.log);
        trace.push_back("round " + std::to_string(vip + 1) + ": vip=agent" + std::to_string(vip));
        if (traces) {
            RoundTrace rt;
            rt.t = vip + 1;
            rt.allocated = complement_within(cake, {remainder});
            for (int a = 0; a < n; ++a) {
                rt.round_gain.push_back(eval(measures[a], sub.bundles[a]));
                rt.cumulative.push_back(eval(measures[a], bundles[a]));
            }
            traces->push_back(std::move(rt));
        }
    }
    Allocation al = assemble_allocation(measures, std::move(bundles), std::move(remainder));
    al.log = log;
    al.trace = std::move(trace);
    return al;
}

long strong_reduction_rounds(int n, const Rat& eps) {
    if (n < 2) throw std::domain_error("strong reduction needs at least 2 agents");
    if (sgn(eps) <= 0 || eps >= 1) throw std::domain_error("epsilon must be in (0,1)");
    long m = (1L << (n - 2)) + 1;
    return certified_ceil_ln(Rat(1 / eps), Rat(m), Rat(n));
}

Allocation strong_reduction(const std::vector<ValueMeasure>& measures, const Piece& cake,
                            int vip, const Rat& eps, std::vector<RoundTrace>* traces) {
    const int n = static_cast<int>(measures.size());
    const Rat m_rat((1L << (n - 2)) + 1);
    const long t_star = strong_reduction_rounds(n, eps);
    std::vector<Piece> bundles(measures.size());
    Piece remainder = cake;
    QueryLog log(measures.size());
    std::vector<std::string> trace;
    const Rat vip_total = eval(measures[vip], cake);

    Rat v_prev(0);  // VIP's cumulative value, as a fraction of the round-0 cake
    for (long t = 1; t <= t_star; ++t) {
        if (remainder.empty() || sgn(eval(measures[vip], remainder)) == 0) {
            trace.push_back("round " + std::to_string(t) + ": nothing left for the vip, done");
            break;
        }
        Allocation sub = divide_n_connected(measures, remainder, vip);
        accumulate(bundles, sub);
        remainder = sub.remainder;
        log.absorb(sub.log);

        Rat v_now = eval(measures[vip], bundles[vip]);
        Rat gain = v_now - v_prev;
        // V'_t >= (1 - n V_{t-1}) / M, exactly, when the cake is the unit
        // total for the VIP; scaled by the VIP's value of the round-0 cake.
        if (gain * m_rat < vip_total - n * v_prev)
            throw contradiction_error("strong reduction round gain below the guaranteed bound");
        v_prev = v_now;
        if (traces) {
            RoundTrace rt;
            rt.t = static_cast<int>(t);
            rt.allocated = complement_within(cake, {remainder});
            for (int a = 0; a < n; ++a) {
                rt.round_gain.push_back(eval(measures[a], sub.bundles[a]));
                rt.cumulative.push_back(eval(measures[a], bundles[a]));
            }
            traces->push_back(std::move(rt));
        }
        trace.push_back("round " + std::to_string(t) + ": vip cumulative " + rat_str(v_now));
    }

    Allocation al = assemble_allocation(measures, std::move(bundles), std::move(remainder));
    al.log = log;
    al.trace = std::move(trace);
    if (al.envy[vip][vip] * n < (1 - eps) * vip_total)
        throw contradiction_error("strong reduction missed the vip floor");
    return al;
}

Allocation divide_n_disconnected(const std::vector<ValueMeasure>& measures, const Piece& cake,
                                 const Rat& eps, std::vector<RoundTrace>* traces) {
    EfvipRoutine inner = [&eps, traces](const std::vector<ValueMeasure>& ms, const Piece& c,
                                        int vip) {
        return strong_reduction(ms, c, vip, eps, traces);
    };
    return weak_reduction(measures, cake, inner, nullptr);
}

}  // namespace cakecut
