#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "word.hpp"

namespace hdcw {

using StateSet = std::vector<int>;  // sorted, duplicate free

struct Edge {
    int dst;
    int rank;
    auto operator<=>(const Edge&) const = default;
};

struct Transition {
    int src;
    Letter letter;
    int rank;
    int dst;
    auto operator<=>(const Transition&) const = default;
};

// Transition-based co-Buechi automaton; a run accepts iff it takes
// finitely many rank-1 transitions.
struct Automaton {
    Alphabet sigma;
    int n = 0;
    StateSet initial;
    std::vector<std::vector<std::vector<Edge>>> out;  // out[state][letter]

    Automaton() = default;
    Automaton(Alphabet s, int states) : sigma(std::move(s)) {
        for (int i = 0; i < states; ++i) add_state();
    }

    int letters() const { return sigma.size(); }

    int add_state() {
        out.emplace_back(static_cast<size_t>(sigma.size()));
        return n++;
    }

    void add_initial(int p) {
        auto it = std::lower_bound(initial.begin(), initial.end(), p);
        if (it == initial.end() || *it != p) initial.insert(it, p);
    }

    bool is_initial(int p) const { return std::binary_search(initial.begin(), initial.end(), p); }

    void add(int p, Letter a, int rank, int q) {
        if (rank != 1 && rank != 2) throw std::invalid_argument("rank must be 1 or 2");
        if (p < 0 || q < 0 || p >= n || q >= n || a < 0 || a >= letters())
            throw std::out_of_range("transition endpoint out of range");
        auto& v = out[p][a];
        Edge e{q, rank};
        auto it = std::lower_bound(v.begin(), v.end(), e);
        if (it == v.end() || *it != e) v.insert(it, e);
    }

    bool has(int p, Letter a, int rank, int q) const {
        const auto& v = out[p][a];
        return std::binary_search(v.begin(), v.end(), Edge{q, rank});
    }

    const std::vector<Edge>& edges(int p, Letter a) const { return out[p][a]; }

    std::vector<Transition> transitions() const {
        std::vector<Transition> r;
        for (int p = 0; p < n; ++p)
            for (Letter a = 0; a < letters(); ++a)
                for (auto e : out[p][a]) r.push_back({p, a, e.rank, e.dst});
        return r;
    }

    size_t transition_count() const {
        size_t c = 0;
        for (const auto& row : out)
            for (const auto& v : row) c += v.size();
        return c;
    }

    bool deterministic() const {
        if (initial.size() > 1) return false;
        for (const auto& row : out)
            for (const auto& v : row)
                if (v.size() > 1) return false;
        return true;
    }

    bool is_complete() const {
        if (initial.empty()) return false;
        for (const auto& row : out)
            for (const auto& v : row)
                if (v.empty()) return false;
        return true;
    }

    // Successor in a deterministic automaton.
    const Edge& step(int p, Letter a) const { return out[p][a].front(); }

    bool operator==(const Automaton& o) const {
        return sigma == o.sigma && n == o.n && initial == o.initial && out == o.out;
    }
};

// Tarjan's algorithm, iterative. Returns component ids; ids are a reverse
// topological order of the condensation.
inline std::vector<int> scc(int n, const std::function<void(int, std::vector<int>&)>& succ, int* count = nullptr) {
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on(n, 0);
    std::vector<int> stack;
    int next = 0, ncomp = 0;
    struct Frame {
        int v;
        std::vector<int> s;
        size_t i;
    };
    std::vector<Frame> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, {}, 0});
        succ(root, call.back().s);
        index[root] = low[root] = next++;
        stack.push_back(root);
        on[root] = 1;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.i < f.s.size()) {
                int w = f.s[f.i++];
                if (index[w] == -1) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on[w] = 1;
                    Frame g{w, {}, 0};
                    succ(w, g.s);
                    call.push_back(std::move(g));
                } else if (on[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int v = f.v;
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }
    if (count) *count = ncomp;
    return comp;
}

// All states reachable from `from` on x, any rank.
inline StateSet post(const Automaton& A, const StateSet& from, const Word& x) {
    std::vector<char> cur(A.n, 0);
    for (int p : from) cur[p] = 1;
    for (Letter a : x) {
        std::vector<char> nxt(A.n, 0);
        for (int p = 0; p < A.n; ++p)
            if (cur[p])
                for (auto e : A.out[p][a]) nxt[e.dst] = 1;
        cur.swap(nxt);
    }
    StateSet r;
    for (int p = 0; p < A.n; ++p)
        if (cur[p]) r.push_back(p);
    return r;
}

// States reachable from `from` on x using rank-2 transitions only.
inline StateSet safe_reach(const Automaton& A, const StateSet& from, const Word& x) {
    std::vector<char> cur(A.n, 0);
    for (int p : from) cur[p] = 1;
    for (Letter a : x) {
        if (a < 0 || a >= A.letters()) throw std::out_of_range("letter outside alphabet");
        std::vector<char> nxt(A.n, 0);
        for (int p = 0; p < A.n; ++p)
            if (cur[p])
                for (auto e : A.out[p][a])
                    if (e.rank == 2) nxt[e.dst] = 1;
        cur.swap(nxt);
    }
    StateSet r;
    for (int p = 0; p < A.n; ++p)
        if (cur[p]) r.push_back(p);
    return r;
}

inline void check_word(const Automaton& A, const Word& w) {
    for (Letter a : w)
        if (a < 0 || a >= A.letters()) throw std::out_of_range("letter outside alphabet");
}

// Adds a rejecting sink for missing (state, letter) pairs.
inline Automaton complete(const Automaton& A) {
    if (A.is_complete()) return A;
    Automaton B = A;
    int sink = B.add_state();
    for (Letter a = 0; a < B.letters(); ++a) B.add(sink, a, 1, sink);
    for (int p = 0; p < sink; ++p)
        for (Letter a = 0; a < B.letters(); ++a)
            if (B.out[p][a].empty()) B.add(p, a, 1, sink);
    if (B.initial.empty()) B.add_initial(sink);
    return B;
}

// Membership of spoke.period^omega: search the graph of (state, offset in
// period) for a reachable cycle of rank-2 edges.
inline bool member_up(const Automaton& A, const UPWord& w) {
    if (w.period.empty()) throw std::invalid_argument("empty period");
    check_word(A, w.spoke);
    check_word(A, w.period);
    const int m = static_cast<int>(w.period.size());
    const int N = A.n * m;
    auto id = [&](int q, int i) { return q * m + i; };
    StateSet start = post(A, A.initial, w.spoke);
    std::vector<char> seen(N, 0);
    std::vector<int> todo;
    for (int q : start) {
        seen[id(q, 0)] = 1;
        todo.push_back(id(q, 0));
    }
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        int q = x / m, i = x % m;
        for (auto e : A.out[q][w.period[i]]) {
            int y = id(e.dst, (i + 1) % m);
            if (!seen[y]) {
                seen[y] = 1;
                todo.push_back(y);
            }
        }
    }
    auto succ2 = [&](int x, std::vector<int>& s) {
        if (!seen[x]) return;
        int q = x / m, i = x % m;
        for (auto e : A.out[q][w.period[i]])
            if (e.rank == 2) s.push_back(id(e.dst, (i + 1) % m));
    };
    auto comp = scc(N, succ2);
    std::vector<int> s;
    for (int x = 0; x < N; ++x) {
        if (!seen[x]) continue;
        s.clear();
        succ2(x, s);
        for (int y : s)
            if (comp[y] == comp[x]) return true;
    }
    return false;
}

}  // namespace hdcw
