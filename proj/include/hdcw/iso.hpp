#pragma once

#include <functional>

#include "automaton.hpp"

namespace hdcw {

// Bijection between states preserving initial states, letters, ranks and
// targets; state labels are ignored. Returns the map A-state -> B-state.
inline std::optional<std::vector<int>> isomorphism(const Automaton& A, const Automaton& B) {
    if (A.n != B.n || A.letters() != B.letters() || A.initial.size() != B.initial.size()) return std::nullopt;
    if (A.transition_count() != B.transition_count()) return std::nullopt;
    const int n = A.n, K = A.letters();
    auto sig = [&](const Automaton& X, int p) {
        std::vector<int> s{X.is_initial(p) ? 1 : 0};
        for (Letter a = 0; a < K; ++a) {
            int r1 = 0, r2 = 0, self = 0;
            for (const auto& e : X.edges(p, a)) {
                (e.rank == 1 ? r1 : r2)++;
                if (e.dst == p) self += e.rank;
            }
            s.insert(s.end(), {r1, r2, self});
        }
        return s;
    };
    std::vector<std::vector<int>> sa(n), sb(n);
    for (int p = 0; p < n; ++p) {
        sa[p] = sig(A, p);
        sb[p] = sig(B, p);
    }
    std::vector<int> f(n, -1), g(n, -1);
    auto consistent = [&](int p) {
        for (Letter a = 0; a < K; ++a)
            for (const auto& e : A.edges(p, a)) {
                if (f[e.dst] >= 0 && !B.has(f[p], a, e.rank, f[e.dst])) return false;
            }
        for (int q = 0; q < n; ++q) {
            if (f[q] < 0 || q == p) continue;
            for (Letter a = 0; a < K; ++a)
                for (const auto& e : A.edges(q, a))
                    if (e.dst == p && !B.has(f[q], a, e.rank, f[p])) return false;
        }
        return true;
    };
    std::function<bool(int)> go = [&](int p) {
        if (p == n) return true;
        for (int q = 0; q < n; ++q) {
            if (g[q] >= 0 || sa[p] != sb[q]) continue;
            f[p] = q;
            g[q] = p;
            if (consistent(p) && go(p + 1)) return true;
            f[p] = -1;
            g[q] = -1;
        }
        return false;
    };
    if (!go(0)) return std::nullopt;
    return f;
}

inline bool isomorphic(const Automaton& A, const Automaton& B) { return isomorphism(A, B).has_value(); }

}  // namespace hdcw
