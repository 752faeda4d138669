#pragma once

#include <optional>
#include <string>

#include "automaton.hpp"

namespace hdcw {

enum class Family { allfin, astart, counter };

struct FamilySpec {
    Family family = Family::astart;
    int k = 1;
};

inline std::string family_name(Family f) {
    switch (f) {
        case Family::allfin: return "allfin";
        case Family::astart: return "astart";
        case Family::counter: return "counter";
    }
    return "?";
}

inline std::optional<Family> parse_family(const std::string& s) {
    if (s == "allfin") return Family::allfin;
    if (s == "astart") return Family::astart;
    if (s == "counter") return Family::counter;
    return std::nullopt;
}

inline Alphabet family_alphabet(const FamilySpec& s) {
    std::vector<std::string> syms;
    switch (s.family) {
        case Family::allfin:
            for (int i = 1; i <= s.k; ++i) syms.push_back("a" + std::to_string(i));
            break;
        case Family::astart: syms = {"a", "b", "c"}; break;
        case Family::counter:
            for (int i = 0; i <= s.k + 1; ++i) syms.push_back("a" + std::to_string(i));
            break;
    }
    return Alphabet(syms);
}

// Words in which some letter occurs only finitely often.
inline Automaton make_allfin(int k) {
    Automaton A(family_alphabet({Family::allfin, k}), k);
    for (int i = 0; i < k; ++i) {
        A.add_initial(i);
        for (Letter a = 0; a < k; ++a) {
            if (a != i) A.add(i, a, 2, i);
            for (int j = 0; j < k; ++j) A.add(i, a, 1, j);
        }
    }
    return A;
}

// Words over {a,b,c} starting with a and having finitely many c or a finite
// odd number of b. States: 0 = (e,e), 1 = (b,e), 2 = (a,e), 3 = (a,b), 4 = (ab,c).
inline Automaton make_astart(bool with_rank1 = true) {
    Automaton A(family_alphabet({Family::astart, 1}), 5);
    A.add_initial(0);
    const Letter a = 0, b = 1, c = 2;
    A.add(2, a, 2, 2);
    A.add(2, b, 2, 3);
    A.add(3, b, 2, 2);
    A.add(3, a, 2, 3);
    A.add(4, a, 2, 4);
    A.add(4, c, 2, 4);
    if (!with_rank1) return A;
    // residual classes: e -> {0}, b -> {1}, a -> {2}, ab -> {3,4}
    const std::vector<StateSet> cls{{0}, {1}, {2}, {3, 4}};
    const int of[5] = {0, 1, 2, 3, 3};
    const int delta[4][3] = {{2, 1, 1}, {1, 1, 1}, {2, 3, 2}, {3, 2, 3}};
    for (int p = 0; p < 5; ++p)
        for (Letter l = 0; l < 3; ++l)
            for (int q : cls[delta[of[p]][l]]) A.add(p, l, 1, q);
    return A;
}

// Letters a0..a(k+1); state q_i^h is 2i+h. See the counter construction:
// a_i lifts component i, resets lower components, keeps higher ones.
inline Automaton make_counter(int k) {
    const int n = 2 * (k + 1);
    Automaton A(family_alphabet({Family::counter, k}), n);
    auto st = [](int i, int h) { return 2 * i + h; };
    for (int i = 0; i <= k; ++i) {
        A.add(st(i, 0), i, 2, st(i, 1));
        for (int j = i + 1; j <= k + 1; ++j) A.add(st(i, 1), j, 2, st(i, 0));
        for (int j = 0; j < i; ++j) {
            A.add(st(i, 0), j, 2, st(i, 0));
            A.add(st(i, 1), j, 2, st(i, 1));
        }
    }
    for (int p = 0; p < n; ++p) {
        A.add_initial(p);
        for (Letter a = 0; a < A.letters(); ++a)
            for (int q = 0; q < n; ++q) A.add(p, a, 1, q);
    }
    return A;
}

inline Automaton make(const FamilySpec& s) {
    if (s.k < 1) throw std::invalid_argument("k must be positive");
    switch (s.family) {
        case Family::allfin: return make_allfin(s.k);
        case Family::astart: return make_astart();
        case Family::counter: return make_counter(s.k);
    }
    throw std::invalid_argument("unknown family");
}

struct FamilyFacts {
    int canonical_states = 0;
    std::optional<int> equivL_classes;
    std::optional<int> pointed_classes;
    std::optional<int> nonbot_classes;
    std::optional<int> nonpointed_classes;
    std::optional<int> sim_classes;
    std::optional<int> v_length;  // shortest word lifting every component of the counter
};

inline FamilyFacts family_facts(const FamilySpec& s) {
    FamilyFacts f;
    switch (s.family) {
        case Family::allfin:
            f.canonical_states = s.k;
            f.equivL_classes = 1 << s.k;
            f.pointed_classes = s.k;
            f.sim_classes = 1;
            break;
        case Family::astart:
            f.canonical_states = 5;
            f.nonbot_classes = 6;
            f.nonpointed_classes = 1;
            f.sim_classes = 4;
            break;
        case Family::counter:
            f.canonical_states = 2 * (s.k + 1);
            f.sim_classes = 1;
            f.v_length = (1 << (s.k + 1)) - 1;
            break;
    }
    return f;
}

// v_0 = e, v_{j+1} = v_j a_j v_j: the greedy counter word of length 2^j - 1.
inline Word counter_v(int j) {
    Word v;
    for (int i = 0; i < j; ++i) v = cat(v, Word{i}, v);
    return v;
}

}  // namespace hdcw
