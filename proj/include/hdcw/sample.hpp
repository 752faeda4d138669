#pragma once

#include <map>
#include <random>
#include <sstream>

#include "io.hpp"
#include "oracle.hpp"

namespace hdcw {

// Labeled ultimately periodic words, stored in canonical form.
struct Sample {
    Alphabet sigma;
    std::map<UPWord, bool> entries;  // canonical word -> label (true = positive)

    Sample() = default;
    explicit Sample(Alphabet s) : sigma(std::move(s)) {}

    // Returns false if the word was already present with the same label;
    // throws ParseError on a label conflict.
    bool add(const UPWord& w, bool positive) {
        auto c = canonicalize(w);
        for (Letter a : c.spoke)
            if (a < 0 || a >= sigma.size()) throw std::out_of_range("letter outside alphabet");
        for (Letter a : c.period)
            if (a < 0 || a >= sigma.size()) throw std::out_of_range("letter outside alphabet");
        auto [it, fresh] = entries.emplace(c, positive);
        if (!fresh && it->second != positive) throw ParseError("conflicting labels for " + sigma.format(c));
        return fresh;
    }
    bool add(const Word& u, const Word& v, bool positive) { return add(UPWord{u, v}, positive); }

    std::optional<bool> label(const UPWord& w) const {
        auto it = entries.find(canonicalize(w));
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }

    std::vector<UPWord> positives() const {
        std::vector<UPWord> r;
        for (const auto& [w, l] : entries)
            if (l) r.push_back(w);
        return r;
    }
    std::vector<UPWord> negatives() const {
        std::vector<UPWord> r;
        for (const auto& [w, l] : entries)
            if (!l) r.push_back(w);
        return r;
    }

    size_t count() const { return entries.size(); }
    size_t size() const {
        size_t s = 0;
        for (const auto& [w, l] : entries) s += w.size();
        return s;
    }
    bool operator==(const Sample& o) const { return sigma == o.sigma && entries == o.entries; }
};

inline std::string write_sample(const Sample& S) {
    std::ostringstream o;
    o << "sample v1\nalphabet";
    for (const auto& s : S.sigma.symbols()) o << ' ' << s;
    o << '\n';
    for (const auto& [w, l] : S.entries) o << (l ? "+ " : "- ") << S.sigma.format(w) << '\n';
    return o.str();
}

inline Sample parse_sample(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next = [&](std::vector<std::string>& tok) {
        while (std::getline(in, line)) {
            ++lineno;
            tok = detail::split_ws(detail::strip_comment(line));
            if (!tok.empty()) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
    std::vector<std::string> tok;
    if (!next(tok) || tok.size() != 2 || tok[0] != "sample" || tok[1] != "v1") fail("expected 'sample v1'");
    if (!next(tok) || tok[0] != "alphabet" || tok.size() < 2) fail("expected alphabet line");
    Sample S(Alphabet(std::vector<std::string>(tok.begin() + 1, tok.end())));
    while (next(tok)) {
        if (tok[0] != "+" && tok[0] != "-") fail("expected '+' or '-'");
        std::string w;
        for (size_t i = 1; i < tok.size(); ++i) w += tok[i];
        try {
            S.add(S.sigma.parse_up(w), tok[0] == "+");
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }
    return S;
}

inline bool consistent_with(const Sample& S, const LanguageOracle& o) {
    for (const auto& [w, l] : S.entries)
        if (o.mem_up(w) != l) return false;
    return true;
}

inline bool consistent_with(const Sample& S, const Automaton& A) {
    for (const auto& [w, l] : S.entries)
        if (member_up(A, w) != l) return false;
    return true;
}

inline UPWord random_up(std::mt19937_64& rng, int letters, int max_spoke, int max_period) {
    std::uniform_int_distribution<int> ls(0, max_spoke), lp(1, max_period), le(0, letters - 1);
    UPWord w;
    for (int i = ls(rng); i > 0; --i) w.spoke.push_back(le(rng));
    for (int i = lp(rng); i > 0; --i) w.period.push_back(le(rng));
    return w;
}

// Adds n fresh words (spoke and period of length at most 6) labeled by o.
inline Sample extend_consistently(const Sample& S, const LanguageOracle& o, int n, uint64_t seed) {
    Sample r = S;
    std::mt19937_64 rng(seed);
    for (int added = 0, tries = 0; added < n && tries < 100 * n + 100; ++tries) {
        auto w = random_up(rng, o.letters(), 6, 6);
        if (!r.label(w)) {
            r.add(w, o.mem_up(w));
            ++added;
        }
    }
    return r;
}

// Deterministic automaton accepting exactly the positive words, made
// normalized and unsafe-saturated.
inline Automaton default_automaton(const Sample& S) {
    Automaton N(S.sigma, 0);
    for (const auto& w : S.positives()) {
        int p = N.add_state();
        N.add_initial(p);
        for (Letter a : w.spoke) {
            int q = N.add_state();
            N.add(p, a, 1, q);
            p = q;
        }
        int loop = p;
        for (size_t i = 0; i + 1 < w.period.size(); ++i) {
            int q = N.add_state();
            N.add(p, w.period[i], 2, q);
            p = q;
        }
        N.add(p, w.period.back(), 2, loop);
    }
    return unsafe_saturate(normalize(determinize_breakpoint(complete(N))));
}

}  // namespace hdcw
