#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hdcw/hdcw.hpp"

using namespace hdcw;

namespace {

struct Config {
    std::string input, output, sample, word, a, b, family, format = "native", dot;
    int k = 1;
    int extend = 0;
    uint64_t seed = 0;
    size_t det_cap = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void emit(const Config& c, const std::string& text) {
    if (c.output.empty() || c.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(c.output);
    if (!out) throw std::runtime_error("cannot write " + c.output);
    out << text;
}

void emit_automaton(const Config& c, const Automaton& A, const std::vector<PairState>* labels = nullptr) {
    std::vector<std::pair<Word, Word>> lp;
    if (labels)
        for (const auto& l : *labels) lp.push_back({l.u, l.v});
    emit(c, c.format == "hoa" ? write_hoa(A) : write_native(A, labels ? &lp : nullptr));
    if (!c.dot.empty()) {
        std::ofstream out(c.dot);
        out << write_dot(A, labels ? &lp : nullptr);
    }
}

Automaton load(const std::string& path) {
    if (path.empty()) throw ParseError("missing input automaton");
    return parse_automaton(slurp(path));
}

Limits limits(const Config& c) {
    Limits l = Limits::from_env();
    if (c.det_cap) l.det_states = c.det_cap;
    return l;
}

int safe_scc_count(const Automaton& A) {
    int count = 0;
    scc(A.n,
        [&](int p, std::vector<int>& out) {
            for (Letter a = 0; a < A.letters(); ++a)
                for (const auto& e : A.edges(p, a))
                    if (e.rank == 2) out.push_back(e.dst);
        },
        &count);
    return count;
}

int run(const std::string& cmd, const Config& c) {
    const Limits lim = limits(c);
    if (cmd == "gen") {
        auto f = parse_family(c.family);
        if (!f) throw ParseError("unknown family '" + c.family + "'");
        emit_automaton(c, make({*f, c.k}));
        return 0;
    }
    if (cmd == "minimize") {
        auto ca = minimize(load(c.input), nullptr, lim);
        emit_automaton(c, ca.aut, &ca.labels);
        return 0;
    }
    if (cmd == "charsample") {
        LanguageOracle o(load(c.input), lim);
        Sample S = characteristic_sample(o);
        if (c.extend > 0) S = extend_consistently(S, o, c.extend, c.seed);
        emit(c, write_sample(S));
        return 0;
    }
    if (cmd == "learn") {
        if (c.sample.empty()) throw ParseError("missing sample");
        auto r = learn(parse_sample(slurp(c.sample)), nullptr, lim.det_states);
        if (r.aborted) std::cerr << "learn: fell back to the default automaton (" << r.reason << ")\n";
        emit_automaton(c, r.aut, r.aborted ? nullptr : &r.labels);
        return 0;
    }
    if (cmd == "member") {
        Automaton A = load(c.input);
        bool in = member_up(A, A.sigma.parse_up(c.word));
        std::cout << (in ? "true" : "false") << '\n';
        return in ? 0 : 1;
    }
    if (cmd == "equiv") {
        Automaton A = load(c.a), B = load(c.b);
        if (!(A.sigma == B.sigma)) throw ParseError("alphabets differ");
        auto r = equivalent(A, B, lim.det_states);
        if (r.equal) {
            std::cout << "true\n";
            return 0;
        }
        std::cout << "false " << A.sigma.format(*r.witness) << '\n';
        return 1;
    }
    if (cmd == "stats") {
        Automaton A = load(c.input);
        auto f = structural_checks(A, lim.det_states);
        std::cout << "states " << A.n << "\ntransitions " << A.transition_count() << "\ninitial " << A.initial.size()
                  << "\nnormalized " << f.normalized << "\nsemantically_deterministic " << f.semantically_deterministic
                  << "\nunsafe_saturated " << f.unsafe_saturated << "\nsafe_deterministic " << f.safe_deterministic
                  << "\nhd_certificate " << hd_certificate(A, lim.det_states) << "\nsafe_sccs " << safe_scc_count(A)
                  << '\n';
        return 0;
    }
    throw ParseError("unknown command");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-Buchi automata: canonical minimization and passive learning"};
    app.require_subcommand(1, 1);
    Config c;
    auto io = [&](CLI::App* s, bool in, bool out) {
        if (in) s->add_option("-i,--input", c.input, "input automaton (native or HOA)")->required();
        if (out) {
            s->add_option("-o,--output", c.output, "output file, stdout by default");
            s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"native", "hoa"}));
            s->add_option("--dot", c.dot, "also write a Graphviz file");
        }
        s->add_option("--det-cap", c.det_cap, "cap on determinized states");
    };
    io(app.add_subcommand("minimize", "canonical HD co-Buchi automaton of the input language"), true, true);
    auto* learn_cmd = app.add_subcommand("learn", "learn an automaton from a labeled sample");
    learn_cmd->add_option("-s,--sample", c.sample, "sample file")->required();
    io(learn_cmd, false, true);
    auto* cs = app.add_subcommand("charsample", "characteristic sample of the input language");
    io(cs, true, false);
    cs->add_option("-o,--output", c.output, "output file, stdout by default");
    cs->add_option("--extend", c.extend, "add this many random consistent words");
    cs->add_option("--seed", c.seed, "seed for --extend");
    auto* mem = app.add_subcommand("member", "membership of an ultimately periodic word u:v");
    io(mem, true, false);
    mem->add_option("-w,--word", c.word, "word u:v")->required();
    auto* eq = app.add_subcommand("equiv", "language equivalence with a counterexample");
    eq->add_option("-a", c.a, "first automaton")->required();
    eq->add_option("-b", c.b, "second automaton")->required();
    eq->add_option("--det-cap", c.det_cap, "cap on determinized states");
    auto* gen = app.add_subcommand("gen", "reference automaton of a family");
    gen->add_option("--family", c.family, "allfin, astart or counter")->required();
    gen->add_option("-k", c.k, "family parameter")->check(CLI::PositiveNumber);
    io(gen, false, true);
    io(app.add_subcommand("stats", "structural summary"), true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 2;
    }
    try {
        return run(app.get_subcommands().front()->get_name(), c);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
