#include "cakecut/proofsearch.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace cakecut::symbolic {

namespace {

char letter(int agent) { return static_cast<char>('a' + agent); }

std::string repeat(char ch, int times) { return std::string(static_cast<std::size_t>(times), ch); }

// Descending preference: best first.
std::vector<int> descending(const std::vector<int>& asc) {
    return {asc.rbegin(), asc.rend()};
}

}  // namespace

std::string SymPiece::name() const {
    std::string s = std::to_string(origin);
    for (const auto& e : trail) s += e;
    return s;
}

std::optional<SymPiece> SymPiece::parent() const {
    if (trail.empty()) return std::nullopt;
    SymPiece p = *this;
    p.trail.pop_back();
    return p;
}

Web::Web(const SymState& st, int agent) {
    for (const auto& p : st.seen) {
        index_[p] = static_cast<int>(nodes_.size());
        nodes_.push_back(p);
    }
    const std::size_t n = nodes_.size();
    words_ = (n + 63) / 64;
    reach_.assign(n, std::vector<uint64_t>(words_, 0));
    strict_.assign(n, std::vector<uint64_t>(words_, 0));
    std::vector<std::pair<int, int>> strict_edges;
    auto set = [&](std::vector<std::vector<uint64_t>>& m, int i, int j) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j) >> 6] |= uint64_t{1}
                                                                            << (j & 63);
    };
    auto add = [&](const SymPiece& hi, const SymPiece& lo, bool strict) {
        set(reach_, id(hi), id(lo));
        if (strict) strict_edges.emplace_back(id(hi), id(lo));
    };
    // The agent's total order over the originals.
    const auto& asc = st.asc_order[static_cast<std::size_t>(agent)];
    for (std::size_t i = 0; i + 1 < asc.size(); ++i)
        add(SymPiece{asc[i + 1], {}}, SymPiece{asc[i], {}}, true);
    // Every trimmed piece lies inside its parent.
    for (const auto& p : st.seen)
        if (auto par = p.parent()) add(*par, p, false);
    // Inferred global containments lift to every agent as weak relations.
    for (const auto& [small, big] : st.containments) add(big, small, false);
    // Accumulated value facts about this agent.
    for (const auto& f : st.facts) {
        if (f.agent != agent) continue;
        add(f.hi, f.lo, f.strict);
        if (f.equal) add(f.lo, f.hi, false);
    }
    for (std::size_t i = 0; i < n; ++i) set(reach_, static_cast<int>(i), static_cast<int>(i));
    // Transitive closure over bitset rows.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (bit(reach_[i], static_cast<int>(k)))
                for (std::size_t w = 0; w < words_; ++w) reach_[i][w] |= reach_[k][w];
    // strict[i][j] iff i reaches a strict edge (h,l) with l reaching j.
    for (const auto& [h, l] : strict_edges) {
        for (std::size_t i = 0; i < n; ++i)
            if (bit(reach_[i], h))
                for (std::size_t w = 0; w < words_; ++w) strict_[i][w] |= reach_[static_cast<std::size_t>(l)][w];
    }
}

int Web::id(const SymPiece& p) const {
    auto it = index_.find(p);
    assert(it != index_.end());
    return it->second;
}

bool Web::entails_gt(const SymPiece& hi, const SymPiece& lo) const {
    return bit(strict_[static_cast<std::size_t>(id(hi))], id(lo));
}

bool Web::reaches(const SymPiece& hi, const SymPiece& lo) const {
    return bit(reach_[static_cast<std::size_t>(id(hi))], id(lo));
}

bool Web::can_be_strict_best(const SymPiece& p, const std::vector<SymPiece>& all) const {
    // Adding p > q for all current q closes a strict cycle exactly when some
    // q already weakly reaches p (the web itself is consistent).
    int pid = id(p);
    for (const auto& q : all) {
        if (q == p) continue;
        if (bit(reach_[static_cast<std::size_t>(id(q))], pid)) return false;
    }
    return true;
}

bool Web::can_be_top_set(const std::vector<SymPiece>& top, const SymPiece& kth,
                         const std::vector<SymPiece>& all) const {
    // New strict edges: t -> kth for t in top, kth -> q for the rest. A
    // strict cycle needs a web path back across one of them.
    int kid = id(kth);
    for (const auto& t : top)
        if (bit(reach_[static_cast<std::size_t>(kid)], id(t))) return false;
    for (const auto& q : all) {
        if (q == kth) continue;
        if (std::find(top.begin(), top.end(), q) != top.end()) continue;
        int qid = id(q);
        if (bit(reach_[static_cast<std::size_t>(qid)], kid)) return false;
        for (const auto& t : top)
            if (bit(reach_[static_cast<std::size_t>(qid)], id(t))) return false;
    }
    return true;
}

StepOutcome apply_opening_equalize(SymState& st, int cutter, int k) {
    // Opening queries act on the fresh original pieces; the cutter trims its
    // best k-1 originals down to its k-th best.
    StepOutcome out;
    std::vector<int> desc = descending(st.asc_order[static_cast<std::size_t>(cutter)]);
    assert(static_cast<int>(desc.size()) >= k);
    out.kth_best = SymPiece{desc[static_cast<std::size_t>(k - 1)], {}};
    std::vector<int> trimmed(desc.begin(), desc.begin() + (k - 1));
    std::sort(trimmed.begin(), trimmed.end(), [&](int x, int y) {
        const auto& asc = st.asc_order[static_cast<std::size_t>(cutter)];
        return std::find(asc.begin(), asc.end(), x) < std::find(asc.begin(), asc.end(), y);
    });

    for (int o : trimmed) {
        SymPiece t{o, {repeat(letter(cutter), k - 1)}};
        st.note(t);
        st.facts.push_back({cutter, t, out.kth_best, false, true});
        st.facts.push_back({cutter, out.kth_best, t, false, true});
        out.trims.push_back(t);
    }
    // Containment inference: a new trim is comparable, as a set, with every
    // other piece cut from the same original whenever the cutter's web
    // decides the value comparison.
    Web web(st, cutter);
    for (const auto& t : out.trims) {
        for (const auto& q : st.seen) {
            if (q.origin != t.origin || q == t || q.original()) continue;
            if (web.entails_gt(q, t))
                st.containments.emplace_back(t, q);
            else if (web.entails_gt(t, q))
                st.containments.emplace_back(q, t);
            else
                continue;
            // Print only comparisons between single-trim pieces of the same
            // depth made by different agents.
            const auto& [small, big] = st.containments.back();
            if (small.trail.size() == 1 && big.trail.size() == 1 &&
                small.trail[0].size() == big.trail[0].size() &&
                small.trail[0][0] != big.trail[0][0])
                out.new_relations.emplace_back(small, big);
        }
    }
    for (int o = 1; o <= st.n_originals; ++o) {
        if (std::find(trimmed.begin(), trimmed.end(), o) != trimmed.end()) continue;
        out.pieces_after.push_back(SymPiece{o, {}});
    }
    out.pieces_after.insert(out.pieces_after.end(), out.trims.begin(), out.trims.end());
    std::sort(out.pieces_after.begin(), out.pieces_after.end());
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Four-agent proof generator
// ---------------------------------------------------------------------------

struct FourCtx {
    // Branch order as explored by the printed proof: the first query of each
    // branch; the responder then answers Equalize(2).
    static constexpr int kBranches = 4;
    struct Step {
        int cutter, k, responder;
    };
    static const std::array<Step, 4>& steps() {
        static const std::array<Step, 4> s{{{1, 2, 2}, {2, 2, 1}, {1, 3, 2}, {2, 3, 1}}};
        return s;
    }
};

std::string piece_list(const std::vector<SymPiece>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? " " : "") + ps[i].name();
    return s;
}

// Sorts pieces ascending by the cutter's derivable preference; ties put
// originals first, then by origin index.
std::vector<SymPiece> sort_by_cutter_ascending(const SymState& st, int cutter,
                                               std::vector<SymPiece> ps) {
    Web web(st, cutter);
    std::sort(ps.begin(), ps.end(), [&](const SymPiece& x, const SymPiece& y) {
        if (web.entails_gt(y, x)) return true;
        if (web.entails_gt(x, y)) return false;
        if (x.original() != y.original()) return x.original();
        return x < y;
    });
    return ps;
}

// Candidate best pieces of `agent` over `pieces`, most plausible first.
std::vector<SymPiece> best_candidates(const SymState& st, int agent,
                                      const std::vector<SymPiece>& pieces) {
    Web web(st, agent);
    std::vector<SymPiece> ordered = pieces;
    const auto& asc = st.asc_order[static_cast<std::size_t>(agent)];
    auto rank = [&](const SymPiece& p) {
        return std::find(asc.begin(), asc.end(), p.origin) - asc.begin();
    };
    std::sort(ordered.begin(), ordered.end(), [&](const SymPiece& x, const SymPiece& y) {
        if (rank(x) != rank(y)) return rank(x) > rank(y);
        if (x.trail.size() != y.trail.size()) return x.trail.size() > y.trail.size();
        return x < y;
    });
    std::vector<SymPiece> cands;
    for (const auto& p : ordered)
        if (web.can_be_strict_best(p, pieces)) cands.push_back(p);
    return cands;
}

struct FourEval {
    bool fails = false;
};

// Outcome of the branch [cutter:E(k); responder:E(2)] when the responder's
// best piece is `pick`: checks that a, the cutter and the responder all keep
// at least two preferred pieces.
FourEval evaluate_four(const SymState& st, const StepOutcome& step, int cutter, int k,
                       const SymPiece& pick) {
    FourEval ev;
    std::set<int> trimmed_origins;
    for (const auto& t : step.trims) trimmed_origins.insert(t.origin);
    int a_count = st.n_originals - static_cast<int>(trimmed_origins.size());
    if (pick.original() && !trimmed_origins.count(pick.origin)) a_count -= 1;
    bool pick_hits_cutter =
        pick == step.kth_best ||
        std::find(step.trims.begin(), step.trims.end(), pick) != step.trims.end();
    int x_count = k - (pick_hits_cutter ? 1 : 0);
    ev.fails = a_count < 2 || x_count < 2;
    (void)cutter;
    return ev;
}

struct ExploreResult {
    ProofNode node;
    bool ok = false;
    int deepest_branch = -1;
    std::vector<std::string> relations;
};

ExploreResult explore_four(SymState st, int branch_idx) {
    ExploreResult res;
    if (branch_idx >= FourCtx::kBranches)
        throw contradiction_error("all branches of the 4-agent template failed");
    const auto& step = FourCtx::steps()[static_cast<std::size_t>(branch_idx)];
    StepOutcome out = apply_opening_equalize(st, step.cutter, step.k);

    std::ostringstream line;
    line << letter(step.cutter) << ":Equalize(" << step.k << ") makes " << letter(step.cutter)
         << "'s best pieces: " << out.kth_best.name();
    for (const auto& t : out.trims) line << "=" << t.name();
    if (!out.new_relations.empty()) {
        line << ", so globally:";
        for (const auto& [small, big] : out.new_relations) {
            line << " " << small.name() << "<" << big.name();
            res.relations.push_back(small.name() + "<" + big.name());
        }
        line << " .";
    } else {
        line << ".";
    }

    int responder = step.responder;
    std::vector<SymPiece> cands = best_candidates(st, responder, out.pieces_after);
    assert(!cands.empty());
    bool top_untouched = false;
    {
        const auto& asc = st.asc_order[static_cast<std::size_t>(responder)];
        int top = asc.back();
        top_untouched = std::any_of(out.pieces_after.begin(), out.pieces_after.end(),
                                    [&](const SymPiece& p) { return p.original() && p.origin == top; });
    }

    std::vector<SymPiece> failing;
    for (const auto& c : cands)
        if (evaluate_four(st, out, step.cutter, step.k, c).fails) failing.push_back(c);

    if (failing.empty()) {
        line << " This always succeeds.";
        res.node.line = line.str();
        res.ok = true;
        res.deepest_branch = branch_idx;
        return res;
    }

    auto assume_text = [&](const SymPiece& pick) {
        std::vector<SymPiece> others;
        for (const auto& p : out.pieces_after)
            if (!(p == pick)) others.push_back(p);
        others = sort_by_cutter_ascending(st, step.cutter, std::move(others));
        return std::string(1, letter(responder)) + " prefers " + pick.name() + " to " +
               piece_list(others);
    };

    if (cands.size() == 1 && top_untouched) {
        line << " This must fail because of " << letter(responder) << ".";
        res.node.line = line.str();
        ExploreResult child = explore_four(std::move(st), branch_idx + 1);
        res.node.children.emplace_back("", std::move(child.node));
        res.ok = child.ok;
        res.deepest_branch = child.deepest_branch;
        res.relations.insert(res.relations.end(), child.relations.begin(), child.relations.end());
        return res;
    }

    line << " This may fail in " << failing.size() << (failing.size() == 1 ? " case : " : " cases : ");
    for (std::size_t i = 0; i < failing.size(); ++i) {
        if (i) line << ";  ";
        line << assume_text(failing[i]);
    }
    line << " .";
    res.node.line = line.str();
    res.ok = true;
    res.deepest_branch = branch_idx;
    for (const auto& pick : failing) {
        SymState sub = st;
        for (const auto& q : out.pieces_after) {
            if (q == pick) continue;
            sub.facts.push_back({responder, pick, q, true, false});
        }
        ExploreResult child = explore_four(std::move(sub), branch_idx + 1);
        res.node.children.emplace_back("Assume the case   " + assume_text(pick) + ". Then:",
                                       std::move(child.node));
        res.ok = res.ok && child.ok;
        res.deepest_branch = std::max(res.deepest_branch, child.deepest_branch);
        res.relations.insert(res.relations.end(), child.relations.begin(), child.relations.end());
    }
    return res;
}

void render_node(std::ostringstream& os, const ProofNode& node, int depth) {
    os << std::string(static_cast<std::size_t>(2 + 2 * depth), ' ') << node.line << "\n";
    for (const auto& [assume, child] : node.children) {
        if (!assume.empty())
            os << std::string(static_cast<std::size_t>(3 + 2 * depth), ' ') << assume << "\n";
        render_node(os, child, depth + 1);
    }
}

}  // namespace

ProofDoc prove_4agent() {
    ProofDoc doc;
    doc.proved = true;
    // Carl's 24 orders, enumerated descending-lexicographically on the
    // ascending (worst..best) tuple.
    std::vector<int> perm{1, 2, 3, 4};
    std::vector<std::vector<int>> orders;
    std::sort(perm.begin(), perm.end(), std::greater<int>());
    do {
        orders.push_back(perm);
    } while (std::prev_permutation(perm.begin(), perm.end()));
    assert(orders.size() == 24);

    int index = 0;
    for (const auto& carl : orders) {
        SymState st;
        st.n_agents = 4;
        st.n_originals = 4;
        st.asc_order.assign(4, {});
        st.asc_order[1] = {1, 2, 3, 4};
        st.asc_order[2] = carl;
        for (int o = 1; o <= 4; ++o) st.note(SymPiece{o, {}});

        ProofCase pc;
        pc.index = ++index;
        pc.carl_order = carl;
        ExploreResult res = explore_four(std::move(st), 0);
        if (!res.ok) doc.proved = false;
        pc.root = std::move(res.node);
        pc.succeeded_branch = res.deepest_branch;
        pc.relations = std::move(res.relations);
        doc.cases.push_back(std::move(pc));
    }
    return doc;
}

std::string ProofDoc::render() const {
    std::ostringstream os;
    os << "Initially, agent a cuts four equal pieces:  1,2,3,4 .\n";
    os << "Assume w.l.o.g. that b's preferences are 1<2<3<4 .\n";
    os << "Consider the following 24 cases regarding the preferences of c:\n";
    for (const auto& pc : cases) {
        os << "\n";
        os << "CASE " << pc.index << " OF 24 : c's order is ";
        for (std::size_t i = 0; i < pc.carl_order.size(); ++i)
            os << (i ? "<" : "") << pc.carl_order[i];
        os << " :\n";
        render_node(os, pc.root, 0);
    }
    os << "\n" << (proved ? "Q.E.D!" : "PROOF FAILED") << "\n";
    return os.str();
}

std::vector<SymPiece> consistent_best_pieces(const SymState& st, int agent,
                                             const std::vector<SymPiece>& pieces) {
    return best_candidates(st, agent, pieces);
}

BranchSim simulate_branch(const SymState& st_in, int cutter, int k, int responder) {
    SymState st = st_in;
    StepOutcome out = apply_opening_equalize(st, cutter, k);
    BranchSim sim;
    std::ostringstream line;
    line << letter(cutter) << ":Equalize(" << k << ") makes " << letter(cutter)
         << "'s best pieces: " << out.kth_best.name();
    for (const auto& t : out.trims) line << "=" << t.name();
    sim.answer_line = line.str();
    std::vector<SymPiece> cands = best_candidates(st, responder, out.pieces_after);
    std::vector<SymPiece> failing;
    for (const auto& c : cands)
        if (evaluate_four(st, out, cutter, k, c).fails) failing.push_back(c);
    sim.always_succeeds = failing.empty();
    sim.forced_fail = cands.size() == 1 && !failing.empty();
    for (const auto& f : failing) {
        std::vector<SymPiece> others;
        for (const auto& p : out.pieces_after)
            if (!(p == f)) others.push_back(p);
        sim.fail_cases.push_back(std::string(1, letter(responder)) + " prefers " + f.name() +
                                 " to " + piece_list(sort_by_cutter_ascending(st, cutter, others)));
    }
    return sim;
}

// ---------------------------------------------------------------------------
// Template search (general n)
// ---------------------------------------------------------------------------

namespace {

struct SearchState {
    SymState sym;
    std::map<int, std::set<SymPiece>> pref;  // per agent: current preferred set
    std::set<int> untouched;                 // originals never trimmed (agent a's set)
    std::vector<SymPiece> pieces;            // current table
    std::vector<std::string> world;          // accumulated assumption texts
};

void apply_trim_bookkeeping(SearchState& ss, int cutter, const SymPiece& before,
                            const SymPiece& after) {
    ss.untouched.erase(before.origin);
    for (auto& [agent, set] : ss.pref) {
        if (agent == cutter) continue;
        auto it = set.find(before);
        if (it == set.end()) continue;
        set.erase(it);
        if (set.empty()) set.insert(after);  // lone preferred piece: keep its trimmed form
    }
    for (auto& p : ss.pieces)
        if (p == before) p = after;
}

// Applies one Equalize(k) by `cutter` inside a running branch; enumerates
// consistent resolutions of the cutter's top pieces and calls `next` for
// each. Returns true if some resolution leads the caller's continuation to
// success (for the search: to an all-branches-fail world).
bool resolve_and_apply(SearchState ss, int cutter, int k,
                       const std::function<bool(SearchState)>& next) {
    const auto& pieces = ss.pieces;
    Web web(ss.sym, cutter);
    const int m = static_cast<int>(pieces.size());
    assert(k <= m);

    // Choose the unordered top set of k-1 pieces and the k-th best.
    std::vector<int> sel(static_cast<std::size_t>(k - 1));
    std::function<bool(int, int)> choose = [&](int start, int chosen) -> bool {
        if (chosen == k - 1) {
            for (int kth = 0; kth < m; ++kth) {
                if (std::find(sel.begin(), sel.end(), kth) != sel.end()) continue;
                std::vector<SymPiece> top;
                for (int i : sel) top.push_back(pieces[static_cast<std::size_t>(i)]);
                const SymPiece& kth_piece = pieces[static_cast<std::size_t>(kth)];
                if (!web.can_be_top_set(top, kth_piece, pieces)) continue;

                SearchState sub = ss;
                // Record the resolution as facts and human-readable text.
                for (const auto& t : top)
                    sub.sym.facts.push_back({cutter, t, kth_piece, true, false});
                for (const auto& q : pieces) {
                    if (q == kth_piece) continue;
                    if (std::find(top.begin(), top.end(), q) != top.end()) continue;
                    sub.sym.facts.push_back({cutter, kth_piece, q, true, false});
                }
                {
                    std::ostringstream w;
                    w << letter(cutter) << "'s top pieces: {";
                    for (std::size_t i = 0; i < top.size(); ++i) w << (i ? "," : "") << top[i].name();
                    w << "} then " << kth_piece.name();
                    sub.world.push_back(w.str());
                }
                // Perform the trims; answer equalities first, then one web
                // decides every same-origin containment.
                std::set<SymPiece> new_pref{kth_piece};
                std::vector<std::pair<SymPiece, SymPiece>> replaced;
                for (const auto& t : top) {
                    SymPiece trimmed = t;
                    trimmed.trail.push_back(repeat(letter(cutter), k - 1));
                    sub.sym.note(trimmed);
                    sub.sym.facts.push_back({cutter, trimmed, kth_piece, false, true});
                    sub.sym.facts.push_back({cutter, kth_piece, trimmed, false, true});
                    replaced.emplace_back(t, trimmed);
                    new_pref.insert(trimmed);
                }
                Web w2(sub.sym, cutter);
                for (const auto& [before, after] : replaced) {
                    for (const auto& q : sub.sym.seen) {
                        if (q.origin != after.origin || q == after) continue;
                        if (q == before) {
                            sub.sym.containments.emplace_back(after, before);
                            continue;
                        }
                        if (w2.entails_gt(q, after))
                            sub.sym.containments.emplace_back(after, q);
                        else if (w2.entails_gt(after, q))
                            sub.sym.containments.emplace_back(q, after);
                    }
                    apply_trim_bookkeeping(sub, cutter, before, after);
                }
                sub.pref[cutter] = std::move(new_pref);
                if (next(std::move(sub))) return true;
            }
            return false;
        }
        for (int i = start; i < m; ++i) {
            sel[static_cast<std::size_t>(chosen)] = i;
            if (choose(i + 1, chosen + 1)) return true;
        }
        return false;
    };
    return choose(0, 0);
}

bool branch_fails_here(const SearchState& ss, int n_agents) {
    if (static_cast<int>(ss.untouched.size()) < 2) return true;
    for (const auto& [agent, set] : ss.pref)
        if (static_cast<int>(set.size()) < 2) return true;
    (void)n_agents;
    return false;
}

bool all_branches_can_fail(SearchState ss, const SearchTemplate& tmpl,
                           const std::vector<std::size_t>& order, std::size_t pos,
                           std::vector<std::string>* world_out);

bool run_branch_queries(SearchState ss, const SearchTemplate& tmpl,
                        const std::vector<std::size_t>& order, std::size_t pos,
                        const BranchScript& script, std::size_t qi,
                        std::vector<std::string>* world_out) {
    if (qi == script.size()) {
        if (!branch_fails_here(ss, tmpl.n_agents)) return false;
        return all_branches_can_fail(std::move(ss), tmpl, order, pos + 1, world_out);
    }
    const auto& step = script[static_cast<std::size_t>(qi)];
    return resolve_and_apply(std::move(ss), step.agent, step.k,
                             [&](SearchState sub) {
                                 return run_branch_queries(std::move(sub), tmpl, order, pos,
                                                           script, qi + 1, world_out);
                             });
}

bool all_branches_can_fail(SearchState ss, const SearchTemplate& tmpl,
                           const std::vector<std::size_t>& order, std::size_t pos,
                           std::vector<std::string>* world_out) {
    if (pos == order.size()) {
        if (world_out) *world_out = ss.world;
        return true;
    }
    // Each branch restarts from the opening cut: fresh pieces and preference
    // bookkeeping, but the accumulated facts carry over.
    std::size_t branch_idx = order[pos];
    SearchState fresh;
    fresh.sym = ss.sym;
    fresh.world = ss.world;
    for (int o = 1; o <= ss.sym.n_originals; ++o) {
        fresh.pieces.push_back(SymPiece{o, {}});
        fresh.untouched.insert(o);
    }
    for (int agent = 1; agent <= ss.sym.n_agents - 2; ++agent) fresh.pref[agent] = {};
    fresh.world.push_back("branch " + std::to_string(branch_idx + 1) + " fails:");
    return run_branch_queries(std::move(fresh), tmpl, order, pos,
                              tmpl.scripts[branch_idx], 0, world_out);
}

// Number of consistent failing resolutions of one branch under the given
// base state, capped at `cap`.
long count_fail_resolutions(const SearchState& base, const SearchTemplate& tmpl,
                            const BranchScript& script, long cap) {
    long count = 0;
    SearchState fresh;
    fresh.sym = base.sym;
    for (int o = 1; o <= base.sym.n_originals; ++o) {
        fresh.pieces.push_back(SymPiece{o, {}});
        fresh.untouched.insert(o);
    }
    for (int agent = 1; agent <= base.sym.n_agents - 2; ++agent) fresh.pref[agent] = {};
    std::function<bool(SearchState, std::size_t)> walk = [&](SearchState ss, std::size_t qi) {
        if (qi == script.size()) {
            if (branch_fails_here(ss, tmpl.n_agents)) ++count;
            return count >= cap;
        }
        const auto& step = script[qi];
        return resolve_and_apply(std::move(ss), step.agent, step.k, [&](SearchState sub) {
            return walk(std::move(sub), qi + 1);
        });
    };
    walk(std::move(fresh), 0);
    return count;
}

}  // namespace

SearchTemplate remark_template_5() {
    // Twelve branches: the first cutter after the opening cut is always the
    // same agent (whose order is the fixed ascending one), the remaining two
    // cutters take both orders, and the final query is always Equalize(2).
    SearchTemplate t;
    t.n_agents = 5;
    const std::vector<std::pair<int, int>> patterns{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}, {4, 3}};
    for (const auto& [mid, lastc] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}})
        for (const auto& [k1, k2] : patterns)
            t.scripts.push_back({{1, k1}, {mid, k2}, {lastc, 2}});
    return t;
}

SearchTemplate algorithm_template_4() {
    SearchTemplate t;
    t.n_agents = 4;
    t.scripts = {{{1, 2}, {2, 2}}, {{1, 3}, {2, 2}}, {{2, 2}, {1, 2}}, {{2, 3}, {1, 2}}};
    return t;
}

bool profile_defeats_all_branches(const SearchTemplate& tmpl,
                                  const std::vector<std::vector<int>>& orders,
                                  std::vector<std::string>* world) {
    SearchState ss;
    ss.sym.n_agents = tmpl.n_agents;
    ss.sym.n_originals = tmpl.n_agents;
    ss.sym.asc_order.assign(static_cast<std::size_t>(tmpl.n_agents), {});
    for (int agent = 1; agent <= tmpl.n_agents - 2; ++agent)
        ss.sym.asc_order[static_cast<std::size_t>(agent)] =
            orders[static_cast<std::size_t>(agent - 1)];
    for (int o = 1; o <= tmpl.n_agents; ++o) ss.sym.note(SymPiece{o, {}});

    // A branch with no independently-failing resolution already clears the
    // profile; otherwise search most-constrained branches first.
    std::vector<std::pair<long, std::size_t>> ranked;
    for (std::size_t i = 0; i < tmpl.scripts.size(); ++i) {
        long c = count_fail_resolutions(ss, tmpl, tmpl.scripts[i], 64);
        if (c == 0) return false;
        ranked.emplace_back(c, i);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::size_t> order;
    for (const auto& [c, i] : ranked) order.push_back(i);
    return all_branches_can_fail(std::move(ss), tmpl, order, 0, world);
}

std::optional<CounterExample> search_template(const SearchTemplate& tmpl) {
    const int cutters = tmpl.n_agents - 2;
    std::vector<int> base(static_cast<std::size_t>(tmpl.n_agents));
    for (int i = 0; i < tmpl.n_agents; ++i) base[static_cast<std::size_t>(i)] = i + 1;

    // First cutter's order is fixed ascending; the others are enumerated in
    // ascending lexicographic order.
    std::vector<std::vector<int>> free_orders;
    std::vector<int> perm = base;
    do {
        free_orders.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<std::vector<int>> orders(static_cast<std::size_t>(cutters), base);
    std::function<std::optional<CounterExample>(int)> rec =
        [&](int pos) -> std::optional<CounterExample> {
        if (pos == cutters) {
            std::vector<std::string> world;
            if (profile_defeats_all_branches(tmpl, orders, &world)) {
                CounterExample ce;
                ce.orders = orders;
                ce.world = world;
                return ce;
            }
            return std::nullopt;
        }
        for (const auto& o : free_orders) {
            orders[static_cast<std::size_t>(pos)] = o;
            if (auto found = rec(pos + 1)) return found;
        }
        return std::nullopt;
    };
    if (tmpl.scripts.empty()) {
        CounterExample ce;
        ce.orders = orders;
        return ce;
    }
    return rec(1);
}

}  // namespace cakecut::symbolic
