#include "cakecut/entirecake.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cakecut {

namespace {

std::string agent_list(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

// n parts of equal length; the fallback partition when the designated
// cutter values the remainder at zero and is therefore indifferent.
std::vector<Piece> split_by_length(const Piece& whole, int n) {
    std::vector<Piece> parts;
    Rat step = whole.total_length() / n;
    Piece rest = whole;
    for (int i = 0; i < n - 1; ++i) {
        Rat walked = 0;
        Rat x = rest.parts.front().lo;
        for (const auto& iv : rest.parts) {
            if (walked + iv.length() >= step) {
                x = iv.lo + (step - walked);
                break;
            }
            walked += iv.length();
            x = iv.hi;
        }
        auto [pre, suf] = split_at_mark(rest, x);
        pre.id = i;
        parts.push_back(pre);
        rest = suf;
    }
    rest.id = n - 1;
    parts.push_back(rest);
    return parts;
}

}  // namespace

EntireCakeState::EntireCakeState(const std::vector<ValueMeasure>& measures,
                                 std::vector<int> agents, Piece cake)
    : measures_(&measures), agents_(std::move(agents)), remainder_(std::move(cake)),
      log_(measures.size()) {
    std::sort(agents_.begin(), agents_.end());
}

int EntireCakeState::sub_index(int agent) const {
    auto it = std::find(agents_.begin(), agents_.end(), agent);
    assert(it != agents_.end());
    return static_cast<int>(it - agents_.begin());
}

Piece EntireCakeState::bundle(int agent) const {
    Piece b;
    for (const auto& r : rounds_) {
        auto it = r.given.find(agent);
        if (it != r.given.end() && !it->second.empty()) b = merge_pieces(b, it->second);
    }
    return b;
}

void EntireCakeState::add_edge(int src, int dst, long k) {
    if (src == dst) return;
    auto key = std::make_pair(src, dst);
    auto it = edges_.find(key);
    if (it == edges_.end()) {
        edges_[key] = k;
        targets_[src].push_back(dst);
        std::ostringstream os;
        os << "edge: " << src << "=>" << dst << (k == 0 ? " (full)" : " (k=" + std::to_string(k) + ")");
        events_.push_back(os.str());
    } else if (k < it->second || k == 0) {
        it->second = k == 0 ? 0 : std::min(it->second, k);
    }
}

bool EntireCakeState::k_dominates(int a, int b, long k) const {
    Piece xa = bundle(a), xb = bundle(b);
    Rat gap = value(a, xa) - value(a, xb);
    if (k == 0) return gap >= value(a, remainder_);
    return gap * k >= value(a, remainder_);
}

bool EntireCakeState::fully_dominates(int a, int b) const {
    return k_dominates(a, b, 0);
}

EntireCakeState::RoundResult EntireCakeState::run_star_round(int vip, int designated_last) {
    const int m = static_cast<int>(agents_.size());
    assert(m == 3 || m == 4);
    RoundResult res;
    if (remainder_.empty() || sgn(value(vip, remainder_)) == 0) {
        // Nothing of value left for the VIP: it dominates everyone outright.
        for (int b : agents_) add_edge(vip, b, 0);
        res.skipped = true;
        return res;
    }
    ++star_rounds_;

    // Local measures restricted to the participating agents, by index.
    std::vector<ValueMeasure> local;
    std::vector<int> local_of_global(measures_->size(), -1);
    for (int a : agents_) {
        local_of_global[static_cast<std::size_t>(a)] = static_cast<int>(local.size());
        local.push_back((*measures_)[static_cast<std::size_t>(a)]);
    }
    int lvip = local_of_global[static_cast<std::size_t>(vip)];
    int llast = local_of_global[static_cast<std::size_t>(designated_last)];

    Division d(local, remainder_);
    d.equalize(lvip, m);
    std::vector<int> cutters;
    for (int a = 0; a < m; ++a)
        if (a != lvip && a != llast) cutters.push_back(a);
    std::vector<BranchScript> scripts;
    if (m == 3) {
        scripts = {{{cutters[0], 2}}};
    } else {
        int b = cutters[0], c = cutters[1];
        scripts = {{{b, 2}, {c, 2}}, {{b, 3}, {c, 2}}, {{c, 2}, {b, 2}}, {{c, 3}, {b, 2}}};
    }
    std::vector<int> known{lvip};
    known.insert(known.end(), cutters.begin(), cutters.end());
    run_branch_engine(d, scripts, known, llast, /*star=*/true);
    d.reveal_preference(llast);
    std::vector<int> picks{llast};
    picks.insert(picks.end(), cutters.rbegin(), cutters.rend());
    picks.push_back(lvip);
    FinalAssignment fa = d.finalize(d.match(picks));
    assert(fa.disposed.empty());  // all trimmed/original pieces are taken

    Round round;
    round.vip = vip;
    round.last = designated_last;
    for (const auto& [la, pid] : fa.piece_of_agent)
        round.given[agents_[static_cast<std::size_t>(la)]] = d.piece_by_id(pid);

    // Trimmings become the next remainder; the most VIP-valuable one is the
    // significant piece and anchors the k-domination edge.
    const auto& trims = d.reserve();
    res.trims = static_cast<long>(trims.size());
    Piece new_rem;
    const Piece* sig = nullptr;
    for (const auto& t : trims) {
        new_rem = merge_pieces(new_rem, t);
        if (!sig || value(vip, t) > value(vip, *sig)) sig = &t;
    }
    // Query-log bookkeeping back to global agent ids.
    for (int a : agents_) {
        const auto& c = d.log().agents[static_cast<std::size_t>(local_of_global[a])];
        auto& g = log_.agents[static_cast<std::size_t>(a)];
        g.evals += c.evals;
        g.marks += c.marks;
        g.equalize += c.equalize;
        g.equalize_star += c.equalize_star;
    }

    rounds_.push_back(round);
    remainder_ = new_rem;

    std::ostringstream ev;
    ev << "round " << rounds_.size() << ": vip=" << vip << " last=" << designated_last
       << " trims=" << res.trims;
    if (res.trims == 0) {
        // Entire round cake allocated: domination is trivial for everyone.
        for (int a : agents_)
            for (int b : agents_) add_edge(a, b, 0);
        events_.push_back(ev.str());
        return res;
    }
    res.sig_value = value(vip, *sig);
    int sig_origin = sig->origin;
    for (const auto& [agent, piece] : round.given)
        if (piece.id == sig_origin) res.sig_taker = agent;
    assert(res.sig_taker >= 0);
    add_edge(vip, res.sig_taker, res.trims);
    if (!k_dominates(vip, res.sig_taker, res.trims))
        throw contradiction_error("significant-piece bound failed");
    ev << " sig_taker=" << res.sig_taker;
    events_.push_back(ev.str());
    return res;
}

void EntireCakeState::promote_k_domination(int a, int b) {
    auto it = edges_.find({a, b});
    assert(it != edges_.end());
    if (it->second == 0) return;
    long k = it->second;
    const int n = static_cast<int>(agents_.size());
    long bound = certified_ceil_ln_ratio(Rat(k), Rat(n, n - 1));
    long used = 0;
    while (!fully_dominates(a, b)) {
        if (used > bound) throw contradiction_error("promotion exceeded its round bound");
        int last = -1;
        for (int x : agents_)
            if (x != a) {
                last = x;
                break;
            }
        run_star_round(a, last);
        ++used;
    }
    it->second = 0;
    events_.push_back("promoted: " + std::to_string(a) + "=>" + std::to_string(b));
}

void EntireCakeState::acquire_two_edges(int vip) {
    const int n = static_cast<int>(agents_.size());
    auto distinct_targets = [&] { return targets_.count(vip) ? targets_[vip].size() : 0u; };

    if (distinct_targets() == 0) {
        int last = -1;
        for (int x : agents_)
            if (x != vip) {
                last = x;
                break;
            }
        RoundResult r = run_star_round(vip, last);
        if (r.skipped || remainder_.empty()) return;
        if (r.trims == 0) return;  // all-pairs full edges already added
    }
    if (distinct_targets() >= 2) return;
    int blocker = targets_[vip].front();

    competitions_.clear();
    for (int attempt = 0; attempt < n + 1; ++attempt) {
        if (distinct_targets() >= 2 || remainder_.empty()) return;
        RoundResult r = run_star_round(vip, blocker);
        if (r.skipped || r.trims == 0) return;
        if (r.sig_taker != blocker) return;  // easy case: second edge acquired

        // Hard case: the blocker itself took the significant piece. Work out
        // who would take it if the blocker deferred to its second-best piece.
        Round& round = rounds_.back();
        int round_idx = static_cast<int>(rounds_.size()) - 1;
        const Piece& sig_piece = round.given.at(blocker);
        const Piece* second = nullptr;
        for (const auto& [agent, piece] : round.given) {
            if (agent == blocker) continue;
            if (!second || value(blocker, piece) > value(blocker, *second) ||
                (value(blocker, piece) == value(blocker, *second) && piece.id < second->id))
                second = &piece;
        }
        assert(second);
        Rat delta = value(blocker, sig_piece) - value(blocker, *second);

        // Alternative assignment: blocker takes its second-best and everyone
        // else is rematched onto a piece it truly prefers. Such a matching
        // exists because the branch criterion verified saturation for every
        // possible preference of the designated-last agent.
        std::map<int, std::vector<int>> pref;
        for (const auto& [agent, piece] : round.given) {
            if (agent == blocker) continue;
            Rat best(-1);
            for (const auto& [a2, p2] : round.given) best = std::max(best, value(agent, p2));
            for (const auto& [a2, p2] : round.given)
                if (value(agent, p2) == best) pref[agent].push_back(p2.id);
        }
        std::map<int, int> owner;  // piece id -> agent
        owner[second->id] = blocker;
        std::function<bool(int, std::set<int>&)> augment = [&](int agent, std::set<int>& seen) {
            for (int pid : pref[agent]) {
                if (pid == second->id || seen.count(pid)) continue;
                seen.insert(pid);
                auto o = owner.find(pid);
                if (o == owner.end() || augment(o->second, seen)) {
                    owner[pid] = agent;
                    return true;
                }
            }
            return false;
        };
        for (const auto& [agent, ignored] : pref) {
            std::set<int> seen;
            if (!augment(agent, seen))
                throw contradiction_error("no alternative matching with the blocker deferring");
        }
        std::map<int, int> alt;
        int competitor = -1;
        for (const auto& [pid, agent] : owner) alt[agent] = pid;
        for (const auto& [pid, agent] : owner)
            if (pid == sig_piece.id) competitor = agent;
        assert(competitor >= 0 && competitor != blocker);

        CompetitionRecord rec;
        rec.blocker = blocker;
        rec.competitor = competitor;
        rec.delta_v = delta;
        rec.round = round_idx;
        rec.sig_piece = sig_piece.id;
        rec.second_piece = second->id;
        rec.alternative = alt;

        auto apply_alt = [&](const CompetitionRecord& cr) {
            Round& rr = rounds_[static_cast<std::size_t>(cr.round)];
            std::map<int, Piece> by_id;
            for (const auto& [agent, piece] : rr.given) by_id[piece.id] = piece;
            std::map<int, Piece> regiven;
            for (const auto& [agent, pid] : cr.alternative) regiven[agent] = by_id.at(pid);
            rr.given = std::move(regiven);
            events_.push_back("reassigned round " + std::to_string(cr.round + 1) + ": blocker " +
                              std::to_string(cr.blocker) + " takes its second-best");
        };

        if (sgn(delta) == 0) {
            // Indifferent blocker: treat as the easy case outright.
            apply_alt(rec);
            add_edge(vip, competitor, r.trims);
            return;
        }
        auto prev = std::find_if(competitions_.begin(), competitions_.end(), [&](const auto& c) {
            return c.blocker == blocker && c.competitor == competitor;
        });
        if (prev != competitions_.end()) {
            // The larger delta cancels the envy caused by the smaller one.
            const CompetitionRecord& loser = prev->delta_v <= delta ? *prev : rec;
            apply_alt(loser);
            add_edge(vip, competitor, r.trims);
            return;
        }
        competitions_.push_back(std::move(rec));
    }
    throw contradiction_error("two-edge acquisition did not terminate within its bound");
}

std::optional<SolutionPlan> EntireCakeState::solvable() const {
    const int n = static_cast<int>(agents_.size());
    auto full = [&](int a, int b) {
        auto it = edges_.find({a, b});
        return it != edges_.end() && it->second == 0;
    };
    // Separation: some nonempty proper subset is fully dominated by the rest.
    for (int size = 1; size < n; ++size) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != size) continue;
            std::vector<int> g1, g2;
            for (int i = 0; i < n; ++i)
                (mask >> i & 1 ? g1 : g2).push_back(agents_[static_cast<std::size_t>(i)]);
            bool ok = true;
            for (int b : g2)
                for (int a : g1)
                    if (!full(b, a)) ok = false;
            if (ok) {
                SolutionPlan plan;
                plan.kind = SolutionPlan::Kind::separation;
                plan.group1 = g1;
                plan.group2 = g2;
                return plan;
            }
        }
    }
    // Dominating sequence of n-1 agents.
    std::vector<int> idx(agents_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::vector<int> seq;
    std::function<bool(std::vector<int>&)> extend = [&](std::vector<int>& cur) {
        if (static_cast<int>(cur.size()) == n - 1) return true;
        for (int a : agents_) {
            if (std::find(cur.begin(), cur.end(), a) != cur.end()) continue;
            bool ok = true;
            for (int before : cur)
                if (!full(before, a)) ok = false;
            if (!ok) continue;
            cur.push_back(a);
            if (extend(cur)) return true;
            cur.pop_back();
        }
        return false;
    };
    if (extend(seq)) {
        SolutionPlan plan;
        plan.kind = SolutionPlan::Kind::sequence;
        plan.sequence = seq;
        for (int a : agents_)
            if (std::find(seq.begin(), seq.end(), a) == seq.end()) plan.cutter = a;
        return plan;
    }
    return std::nullopt;
}

void EntireCakeState::execute(const SolutionPlan& plan) {
    if (remainder_.empty()) return;
    if (plan.kind == SolutionPlan::Kind::separation) {
        events_.push_back("plan: agents " + agent_list(plan.group1) +
                          " divide the remainder (dominated by " + agent_list(plan.group2) + ")");
        EntireCakeState sub(*measures_, plan.group1, remainder_);
        sub.divide();
        Round gift;
        gift.vip = -1;
        gift.last = -1;
        for (int a : plan.group1) gift.given[a] = sub.bundle(a);
        rounds_.push_back(std::move(gift));
        for (const auto& e : sub.events()) events_.push_back("  " + e);
        log_.absorb(sub.log());
        star_rounds_ += sub.star_rounds();
        remainder_ = Piece{};
        return;
    }
    // Sequence plan: the remaining agent cuts the remainder into n equal
    // pieces; picks run from the most dominated agent back to the cutter.
    events_.push_back("plan: " + std::to_string(plan.cutter) + " cuts, picks " +
                      agent_list({plan.sequence.rbegin(), plan.sequence.rend()}) + " then cutter");
    const int n = static_cast<int>(agents_.size());
    std::vector<ValueMeasure> local;
    std::vector<int> lof(measures_->size(), -1);
    for (int a : agents_) {
        lof[static_cast<std::size_t>(a)] = static_cast<int>(local.size());
        local.push_back((*measures_)[static_cast<std::size_t>(a)]);
    }
    Division d(local, remainder_);
    d.equalize(lof[static_cast<std::size_t>(plan.cutter)], n);
    std::vector<Piece> parts(d.table().begin(), d.table().end());
    if (static_cast<int>(parts.size()) < n) {
        // The cutter values the remainder at zero, so any n-way partition is
        // equal in its eyes.
        parts = split_by_length(remainder_, n);
    }
    std::vector<int> picks(plan.sequence.rbegin(), plan.sequence.rend());
    picks.push_back(plan.cutter);
    Round round;
    round.vip = plan.cutter;
    round.last = -1;
    std::set<int> taken;
    for (int agent : picks) {
        const Piece* best = nullptr;
        for (const auto& p : parts) {
            if (taken.count(p.id)) continue;
            if (!best || value(agent, p) > value(agent, *best)) best = &p;
        }
        if (!best) throw contradiction_error("sequence plan ran out of pieces");
        log_.agents[static_cast<std::size_t>(agent)].evals +=
            static_cast<long>(parts.size() - taken.size());
        taken.insert(best->id);
        round.given[agent] = *best;
    }
    for (int a : agents_) {
        const auto& c = d.log().agents[static_cast<std::size_t>(lof[a])];
        auto& g = log_.agents[static_cast<std::size_t>(a)];
        g.evals += c.evals;
        g.marks += c.marks;
        g.equalize += c.equalize;
    }
    rounds_.push_back(std::move(round));
    remainder_ = Piece{};
}

void EntireCakeState::divide() {
    const int n = static_cast<int>(agents_.size());
    if (remainder_.empty()) return;
    if (n == 1) {
        Round r;
        r.given[agents_[0]] = remainder_;
        rounds_.push_back(std::move(r));
        remainder_ = Piece{};
        return;
    }
    if (n == 2) {
        // Cut and choose, on whatever the remainder is. A cutter that values
        // the remainder at zero is indifferent and halves it by length.
        std::vector<ValueMeasure> local{(*measures_)[static_cast<std::size_t>(agents_[0])],
                                        (*measures_)[static_cast<std::size_t>(agents_[1])]};
        Division d(local, remainder_);
        d.equalize(0, 2);
        std::vector<Piece> halves(d.table().begin(), d.table().end());
        if (halves.size() < 2) halves = split_by_length(remainder_, 2);
        log_.agents[static_cast<std::size_t>(agents_[1])].evals += 2;
        Round r;
        bool chooser_takes_first =
            value(agents_[1], halves[0]) >= value(agents_[1], halves[1]);
        r.given[agents_[1]] = halves[chooser_takes_first ? 0 : 1];
        r.given[agents_[0]] = halves[chooser_takes_first ? 1 : 0];
        for (int a : agents_) {
            const auto& c = d.log().agents[a == agents_[0] ? 0 : 1];
            auto& g = log_.agents[static_cast<std::size_t>(a)];
            g.evals += c.evals;
            g.marks += c.marks;
            g.equalize += c.equalize;
        }
        rounds_.push_back(std::move(r));
        remainder_ = Piece{};
        return;
    }

    // n in {3, 4}: build domination edges until the graph is solvable. For
    // three agents a single full edge already gives the dominating sequence;
    // for four, each of the first three agents needs two.
    const int need = n == 3 ? 1 : 2;
    for (std::size_t i = 0; i + 1 < agents_.size(); ++i) {
        int vip = agents_[i];
        if (remainder_.empty()) return;
        if (auto plan = solvable()) {
            execute(*plan);
            return;
        }
        if (static_cast<int>(targets_[vip].size()) < need) {
            if (need == 1) {
                int last = agents_[i == 0 ? agents_.size() - 1 : 0];
                run_star_round(vip, last);
            } else {
                acquire_two_edges(vip);
            }
        }
        for (int dst : targets_[vip]) promote_k_domination(vip, dst);
    }
    if (remainder_.empty()) return;
    if (auto plan = solvable()) {
        execute(*plan);
        return;
    }
    throw contradiction_error("entire-cake loop failed to reach a solvable graph");
}

long entire_round_bound(int n) {
    // Per VIP: one first-edge round, at most n rounds in the two-edge loop,
    // and two promotions of at most ceil(ln(n-1)/ln(n/(n-1))) rounds each;
    // n-1 VIPs, plus the recursion for a separation plan.
    if (n <= 2) return 0;
    long f = certified_ceil_ln_ratio(Rat(n - 1), Rat(n, n - 1));
    long per_vip = 1 + n + 2 * f;
    long total = (n - 1) * per_vip;
    if (n == 4) total += entire_round_bound(3);
    return total;
}

Allocation divide_entire(const std::vector<ValueMeasure>& measures, long* star_rounds_out) {
    const int n = static_cast<int>(measures.size());
    if (n < 1 || n > 4) throw std::domain_error("entire-cake division supports 1..4 agents");
    std::vector<int> agents(measures.size());
    for (int a = 0; a < n; ++a) agents[static_cast<std::size_t>(a)] = a;
    EntireCakeState state(measures, agents, make_whole_cake());
    state.divide();
    std::vector<Piece> bundles;
    bundles.reserve(measures.size());
    for (int a = 0; a < n; ++a) bundles.push_back(state.bundle(a));
    Allocation al = assemble_allocation(measures, std::move(bundles), state.remainder());
    al.log = state.log();
    al.trace = state.events();
    int pieces = 0;
    for (const auto& b : al.bundles) pieces += static_cast<int>(b.parts.size());
    al.piece_count = pieces;
    if (star_rounds_out) *star_rounds_out = state.star_rounds();
    return al;
}

}  // namespace cakecut
