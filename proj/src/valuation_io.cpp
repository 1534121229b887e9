#include "cakecut/valuation_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cakecut {

int ValuationProfile::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw input_error("unknown agent name: " + name);
    return static_cast<int>(it - names.begin());
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

Rat parse_rat_or_throw(const std::string& s, const std::string& what) {
    auto q = parse_rat(s);
    if (!q) throw input_error("malformed rational in " + what + ": '" + s + "'");
    return *q;
}

}  // namespace

ValuationProfile parse_valuations(std::istream& in, bool normalize) {
    ValuationProfile profile;
    std::string line;
    long expected = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tok = tokens(line);
        if (tok.empty()) continue;
        if (tok[0] == "agents:") {
            if (tok.size() != 2) throw input_error("bad agents header");
            expected = std::stol(tok[1]);
            continue;
        }
        if (tok[0] != "agent" || tok.size() < 3 || tok[1].back() != ':')
            throw input_error("bad valuation line: " + line);
        std::string name = tok[1].substr(0, tok[1].size() - 1);
        if (std::find(profile.names.begin(), profile.names.end(), name) != profile.names.end())
            throw input_error("duplicate agent name: " + name);
        std::vector<Rat> numbers;
        for (std::size_t i = 2; i < tok.size(); ++i)
            numbers.push_back(parse_rat_or_throw(tok[i], "agent " + name));
        if (numbers.size() < 3 || numbers.size() % 2 == 0)
            throw input_error("agent " + name + ": need b0 d1 b1 ... bk");
        std::vector<Rat> breakpoints, densities;
        for (std::size_t i = 0; i < numbers.size(); ++i)
            (i % 2 == 0 ? breakpoints : densities).push_back(numbers[i]);
        try {
            profile.measures.push_back(normalize
                                           ? ValueMeasure::normalized(breakpoints, densities)
                                           : ValueMeasure(breakpoints, densities));
        } catch (const std::invalid_argument& e) {
            throw input_error("agent " + name + ": " + e.what());
        }
        profile.names.push_back(name);
    }
    if (expected < 0) throw input_error("missing 'agents:' header");
    if (static_cast<long>(profile.names.size()) != expected)
        throw input_error("agent count mismatch: header says " + std::to_string(expected) +
                          ", found " + std::to_string(profile.names.size()));
    return profile;
}

ValuationProfile parse_valuations_file(const std::string& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    return parse_valuations(in, normalize);
}

std::string format_valuations(const ValuationProfile& profile) {
    std::ostringstream os;
    os << "agents: " << profile.names.size() << "\n";
    for (std::size_t a = 0; a < profile.names.size(); ++a) {
        os << "agent " << profile.names[a] << ":";
        const auto& m = profile.measures[a];
        for (std::size_t i = 0; i < m.breakpoints().size(); ++i) {
            os << " " << rat_str(m.breakpoints()[i]);
            if (i < m.densities().size()) os << " " << rat_str(m.densities()[i]);
        }
        os << "\n";
    }
    return os.str();
}

std::string render_report(const ValuationProfile& profile, const Allocation& al,
                          const ReportOptions& opts) {
    std::ostringstream os;
    const std::size_t n = profile.names.size();
    Rat floor_v = al.min_own_value();
    if (opts.machine) {
        os << "mode=" << opts.mode << "\n";
        os << "agents=" << n << "\n";
        for (std::size_t a = 0; a < n; ++a) {
            os << "agent." << a << ".name=" << profile.names[a] << "\n";
            os << "agent." << a << ".piece=" << al.bundles[a].to_string() << "\n";
            os << "agent." << a << ".value=" << rat_str(al.envy[a][a]) << "\n";
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                os << "envy." << i << "." << j << "=" << rat_str(al.envy[i][j]) << "\n";
        os << "floor=" << rat_str(floor_v) << "\n";
        os << "pieces=" << al.piece_count << "\n";
        os << "envy_free=" << (al.envy_free() ? "yes" : "no") << "\n";
        os << "remainder=" << al.remainder.to_string() << "\n";
        for (std::size_t a = 0; a < n; ++a)
            os << "remainder.value." << a << "="
               << rat_str(eval(profile.measures[a], al.remainder)) << "\n";
        for (std::size_t a = 0; a < al.log.agents.size(); ++a) {
            const auto& c = al.log.agents[a];
            os << "queries." << a << "=eval:" << c.evals << ",mark:" << c.marks
               << ",equalize:" << c.equalize << ",equalize_star:" << c.equalize_star << "\n";
        }
        os << "queries.total=" << al.log.total() << "\n";
        if (al.chosen_branch >= 0) os << "branch=" << al.chosen_branch << "\n";
        for (std::size_t i = 0; i < al.trace.size(); ++i)
            os << "trace." << i << "=" << al.trace[i] << "\n";
        return os.str();
    }
    os << "allocation (" << opts.mode << ", " << n << " agents)\n";
    for (std::size_t a = 0; a < n; ++a)
        os << "  " << profile.names[a] << ": value " << rat_str(al.envy[a][a]) << "  piece "
           << al.bundles[a].to_string() << "\n";
    os << "envy matrix (V_i of bundle_j):\n";
    for (std::size_t i = 0; i < n; ++i) {
        os << " ";
        for (std::size_t j = 0; j < n; ++j) os << " " << rat_str(al.envy[i][j]);
        os << "\n";
    }
    os << "envy-free: " << (al.envy_free() ? "yes" : "NO") << "\n";
    os << "proportionality floor: " << rat_str(floor_v) << "\n";
    os << "pieces cut: " << al.piece_count << "\n";
    os << "remainder: "
       << (al.remainder.empty() ? std::string("none") : al.remainder.to_string()) << "\n";
    os << "queries: " << al.log.total() << "\n";
    for (const auto& t : al.trace) os << "  " << t << "\n";
    return os.str();
}

std::map<std::string, std::string> parse_machine_report(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

}  // namespace cakecut
