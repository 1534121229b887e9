#include "cakecut/entirecake.hpp"
#include "cakecut/proofsearch.hpp"
#include "cakecut/reductions.hpp"
#include "cakecut/valuation_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace cakecut;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitContradiction = 3;

int cmd_divide(const std::string& input, const std::string& mode, const std::string& eps_str,
               const std::string& vip_name, const std::string& report, bool normalize) {
    ValuationProfile profile = parse_valuations_file(input, normalize);
    const int n = static_cast<int>(profile.measures.size());
    int vip = vip_name.empty() ? 0 : profile.index_of(vip_name);
    Piece cake = make_whole_cake();

    Rat eps = make_rat(1, 10);
    if (!eps_str.empty()) {
        auto parsed = parse_rat(eps_str);
        if (!parsed || sgn(*parsed) <= 0 || *parsed >= 1)
            throw input_error("epsilon must be a rational in (0,1)");
        eps = *parsed;
    }

    Allocation al;
    if (mode == "connected-n") {
        al = divide_n_connected(profile.measures, cake, vip);
    } else if (mode == "connected-n-improved") {
        al = divide_n_connected_improved(profile.measures, cake, vip);
    } else if (mode == "connected-3") {
        if (n != 3) throw input_error("connected-3 needs exactly 3 agents");
        al = divide_3_connected(profile.measures, cake);
    } else if (mode == "connected-4") {
        if (n != 4) throw input_error("connected-4 needs exactly 4 agents");
        al = divide_4_connected(profile.measures, cake, vip);
    } else if (mode == "disconnected-4") {
        if (n != 4) throw input_error("disconnected-4 needs exactly 4 agents");
        al = weak_reduction(profile.measures, cake, [](const auto& ms, const Piece& c, int v) {
            return divide_4_connected(ms, c, v);
        });
    } else if (mode == "disconnected-n") {
        al = divide_n_disconnected(profile.measures, cake, eps);
    } else if (mode == "entire") {
        if (n > 4) throw input_error("entire-cake division supports at most 4 agents");
        al = divide_entire(profile.measures);
    } else {
        throw input_error("unknown mode: " + mode);
    }

    ReportOptions opts;
    opts.machine = report == "machine";
    opts.mode = mode;
    std::cout << render_report(profile, al, opts);
    return kExitOk;
}

int cmd_prove4(int only_case) {
    symbolic::ProofDoc doc = symbolic::prove_4agent();
    if (only_case > 0) {
        if (only_case > static_cast<int>(doc.cases.size()))
            throw input_error("cases are 1..24");
        symbolic::ProofDoc one;
        one.proved = doc.proved;
        one.cases.push_back(doc.cases[static_cast<std::size_t>(only_case - 1)]);
        std::cout << one.render();
    } else {
        std::cout << doc.render();
    }
    return doc.proved ? kExitOk : kExitContradiction;
}

symbolic::SearchTemplate load_template(const std::string& path) {
    // One branch per line: "agent:k agent:k ..." with agents as 1-based
    // cutter indices (agent 0 is the opening cutter).
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    symbolic::SearchTemplate tmpl;
    tmpl.n_agents = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("agents:", 0) == 0) {
            tmpl.n_agents = std::stoi(line.substr(7));
            continue;
        }
        std::istringstream is(line);
        std::string tok;
        BranchScript script;
        while (is >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos) throw input_error("bad template token: " + tok);
            script.push_back({std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
        }
        if (!script.empty()) tmpl.scripts.push_back(std::move(script));
    }
    if (tmpl.n_agents == 0) throw input_error("template needs an 'agents:' header");
    return tmpl;
}

int cmd_search5(const std::string& template_file) {
    symbolic::SearchTemplate tmpl =
        template_file.empty() ? symbolic::remark_template_5() : load_template(template_file);
    std::cout << "template: " << tmpl.scripts.size() << " branches, " << tmpl.n_agents
              << " agents\n";
    auto found = symbolic::search_template(tmpl);
    if (!found) {
        std::cout << "no counterexample: some branch succeeds for every preference profile\n";
        return kExitOk;
    }
    std::cout << "counterexample profile (ascending orders, worst to best):\n";
    for (std::size_t i = 0; i < found->orders.size(); ++i) {
        std::cout << "  " << static_cast<char>('b' + i) << ":";
        for (std::size_t j = 0; j < found->orders[i].size(); ++j)
            std::cout << (j ? "<" : " ") << found->orders[i][j];
        std::cout << "\n";
    }
    std::cout << "failing assignment:\n";
    for (const auto& w : found->world) std::cout << "  " << w << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact envy-free cake cutting with free disposal"};
    app.require_subcommand(1);

    std::string input, mode, eps, vip, report = "text", template_file;
    bool normalize = false;
    long seed = 0;
    int only_case = -1;

    auto* divide = app.add_subcommand("divide", "divide a cake given a valuation file");
    divide->add_option("--input", input, "valuation file")->required();
    divide->add_option("--mode", mode,
                       "connected-n|connected-3|connected-4|connected-n-improved|"
                       "disconnected-4|disconnected-n|entire")
        ->required();
    divide->add_option("--epsilon", eps, "rational p/q in (0,1) for disconnected-n");
    divide->add_option("--vip", vip, "agent name performing the first cut");
    divide->add_option("--report", report, "text|machine")->check(CLI::IsMember({"text", "machine"}));
    divide->add_flag("--normalize", normalize, "rescale densities so the total is 1");
    divide->add_option("--seed", seed,
                       "reserved for harness-side instance generation; no algorithmic effect");

    auto* prove = app.add_subcommand("prove4", "emit the 24-case proof of the 4-agent guarantee");
    prove->add_option("--case", only_case, "print a single case (1..24)");

    auto* search = app.add_subcommand("search5", "search for a 5-agent counterexample profile");
    search->add_option("--template-file", template_file, "custom branch template");

    try {
        app.parse(argc, argv);
        if (divide->parsed()) return cmd_divide(input, mode, eps, vip, report, normalize);
        if (prove->parsed()) {
            if (prove->count("--case") && only_case < 1)
                throw cakecut::input_error("cases are 1..24");
            return cmd_prove4(prove->count("--case") ? only_case : 0);
        }
        if (search->parsed()) return cmd_search5(template_file);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInput : kExitOk;
    } catch (const cakecut::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const cakecut::contradiction_error& e) {
        std::cerr << "internal contradiction: " << e.what() << "\n";
        return kExitContradiction;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
