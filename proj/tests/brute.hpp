#pragma once

#include <map>
#include <set>

#include "hdcw/hdcw.hpp"

namespace brute {

using namespace hdcw;

// All words over K letters of length lo..hi in length-lex order.
inline std::vector<Word> words(int K, size_t lo, size_t hi) {
    std::vector<Word> r;
    std::vector<Word> layer{Word{}};
    for (size_t len = 0; len <= hi; ++len) {
        if (len >= lo) r.insert(r.end(), layer.begin(), layer.end());
        std::vector<Word> next;
        for (const auto& w : layer)
            for (Letter a = 0; a < K; ++a) {
                Word x = w;
                x.push_back(a);
                next.push_back(std::move(x));
            }
        layer = std::move(next);
    }
    return r;
}

// Acceptance of u v^omega from the given start states: product of states
// and lasso positions, accepted iff a reachable loop position sits on a
// cycle of rank-2 edges.
inline bool accepts_from(const Automaton& A, const StateSet& start, const Word& u, const Word& v) {
    const int P = static_cast<int>(u.size() + v.size());
    const int loop = static_cast<int>(u.size());
    auto letter = [&](int i) { return i < loop ? u[i] : v[i - loop]; };
    auto next_pos = [&](int i) { return i + 1 == P ? loop : i + 1; };
    auto id = [&](int q, int i) { return i * A.n + q; };
    const int N = A.n * P;
    std::vector<char> reach(N, 0);
    std::vector<int> todo;
    for (int q : start) {
        reach[id(q, 0)] = 1;
        todo.push_back(id(q, 0));
    }
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        int q = x % A.n, i = x / A.n;
        for (const auto& e : A.edges(q, letter(i))) {
            int y = id(e.dst, next_pos(i));
            if (!reach[y]) {
                reach[y] = 1;
                todo.push_back(y);
            }
        }
    }
    for (int x = 0; x < N; ++x) {
        if (!reach[x] || x / A.n < loop) continue;
        std::vector<char> seen(N, 0);
        std::vector<int> st{x};
        while (!st.empty()) {
            int y = st.back();
            st.pop_back();
            int q = y % A.n, i = y / A.n;
            for (const auto& e : A.edges(q, letter(i))) {
                if (e.rank != 2) continue;
                int z = id(e.dst, next_pos(i));
                if (z == x) return true;
                if (!seen[z]) {
                    seen[z] = 1;
                    st.push_back(z);
                }
            }
        }
    }
    return false;
}

inline bool accepts(const Automaton& A, const Word& u, const Word& v) { return accepts_from(A, A.initial, u, v); }

inline StateSet reach(const Automaton& A, const Word& u) {
    std::set<int> cur(A.initial.begin(), A.initial.end());
    for (Letter a : u) {
        std::set<int> nx;
        for (int q : cur)
            for (const auto& e : A.edges(q, a)) nx.insert(e.dst);
        cur = std::move(nx);
    }
    return StateSet(cur.begin(), cur.end());
}

// Residual signature of a finite word: acceptance of y z^omega after it
// for every short lasso (y, z).
class Residuals {
public:
    Residuals(const Automaton& A, size_t ylen, size_t zlen) : A_(A) {
        auto ys = words(A.letters(), 0, ylen);
        auto zs = words(A.letters(), 1, zlen);
        for (const auto& y : ys)
            for (const auto& z : zs) tests_.push_back({y, z});
    }
    const std::vector<bool>& of(const Word& w) {
        StateSet S = reach(A_, w);
        auto it = cache_.find(S);
        if (it != cache_.end()) return it->second;
        std::vector<bool> sig;
        for (const auto& [y, z] : tests_) sig.push_back(accepts_from(A_, S, y, z));
        return cache_[S] = sig;
    }
    bool same(const Word& x, const Word& y) { return of(x) == of(y); }

private:
    const Automaton& A_;
    std::vector<std::pair<Word, Word>> tests_;
    std::map<StateSet, std::vector<bool>> cache_;
};

// (u, v) is bottom: no x with u v x ~ u and u (v x)^omega accepted.
inline bool bottom(const Automaton& A, Residuals& res, const Word& u, const Word& v, size_t xlen) {
    if (v.empty()) return false;
    for (const auto& x : words(A.letters(), 0, xlen)) {
        Word vx = cat(v, x);
        if (accepts(A, u, vx) && res.same(cat(u, vx), u)) return false;
    }
    return true;
}

// (u, v) and (u2, v2) agree on all extensions x up to xlen.
inline bool related(const Automaton& A, Residuals& res, const Word& u, const Word& v, const Word& u2, const Word& v2,
                    size_t xlen) {
    if (!res.same(u, u2) || !res.same(cat(u, v), cat(u2, v2))) return false;
    for (const auto& x : words(A.letters(), 0, xlen)) {
        Word vx = cat(v, x), vx2 = cat(v2, x);
        bool b1 = !vx.empty() && accepts(A, u, vx) && res.same(cat(u, vx), u);
        bool b2 = !vx2.empty() && accepts(A, u2, vx2) && res.same(cat(u2, vx2), u2);
        if (b1 != b2) return false;
    }
    return true;
}

// Shortest safe runs lifting q_j^0 to q_j^1 for every j <= top in the counter
// automaton: level-wise search over the tuple of safe images.
inline size_t shortest_lift(const Automaton& A, int top) {
    std::vector<int> start, goal;
    for (int j = 0; j <= top; ++j) {
        start.push_back(2 * j);
        goal.push_back(2 * j + 1);
    }
    std::set<std::vector<int>> seen{start};
    std::vector<std::vector<int>> layer{start};
    for (size_t len = 0; !layer.empty(); ++len) {
        for (const auto& t : layer)
            if (t == goal) return len;
        std::vector<std::vector<int>> next;
        for (const auto& t : layer)
            for (Letter a = 0; a < A.letters(); ++a) {
                std::vector<int> nx;
                bool ok = true;
                for (int q : t) {
                    int s = -1;
                    for (const auto& e : A.edges(q, a))
                        if (e.rank == 2) s = e.dst;
                    if (s < 0) ok = false;
                    nx.push_back(s);
                }
                if (ok && seen.insert(nx).second) next.push_back(nx);
            }
        layer = std::move(next);
    }
    return static_cast<size_t>(-1);
}

// Two states are safe-equivalent if they share residual language and safe
// language; the pair search runs over safe successors.
inline bool safe_minimal(const Automaton& A) {
    StateLanguages L(A);
    for (int p = 0; p < A.n; ++p)
        for (int q = p + 1; q < A.n; ++q) {
            if (L.of(p) != L.of(q)) continue;
            std::set<std::pair<int, int>> seen{{p, q}};
            std::vector<std::pair<int, int>> todo{{p, q}};
            bool same = true;
            while (!todo.empty() && same) {
                auto [x, y] = todo.back();
                todo.pop_back();
                for (Letter a = 0; a < A.letters(); ++a) {
                    int sx = safe_succ(A, x, a), sy = safe_succ(A, y, a);
                    if ((sx < 0) != (sy < 0)) {
                        same = false;
                        break;
                    }
                    if (sx >= 0 && seen.insert({sx, sy}).second) todo.push_back({sx, sy});
                }
            }
            if (same) return false;
        }
    return true;
}

inline Automaton random_automaton(std::mt19937_64& rng, int max_states, int letters) {
    int n = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_states));
    std::vector<std::string> syms;
    for (int i = 0; i < letters; ++i) syms.push_back(std::string(1, static_cast<char>('a' + i)));
    Automaton A(Alphabet(syms), n);
    A.add_initial(static_cast<int>(rng() % static_cast<uint64_t>(n)));
    for (int p = 0; p < n; ++p)
        for (Letter a = 0; a < letters; ++a) {
            int m = 1 + static_cast<int>(rng() % 2);
            for (int j = 0; j < m; ++j)
                A.add(p, a, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % static_cast<uint64_t>(n)));
        }
    return A;
}

}  // namespace brute
