#pragma once

#include <cstdlib>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>

#include "automaton.hpp"

namespace hdcw {

struct Limits {
    size_t det_states = 1000000;
    size_t profiles = 1000000;

    // HDCW_PROFILE_CAP overrides the profile-monoid cap.
    static Limits from_env() {
        Limits l;
        if (const char* s = std::getenv("HDCW_PROFILE_CAP")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(s, &end, 10);
            if (end != s && v > 0) l.profiles = static_cast<size_t>(v);
        }
        return l;
    }
};

// Rank-2 transitions leaving their rank-2 SCC become rank 1.
inline Automaton normalize(const Automaton& A) {
    auto comp = scc(A.n, [&](int p, std::vector<int>& s) {
        for (Letter a = 0; a < A.letters(); ++a)
            for (auto e : A.out[p][a])
                if (e.rank == 2) s.push_back(e.dst);
    });
    Automaton B(A.sigma, A.n);
    B.initial = A.initial;
    for (int p = 0; p < A.n; ++p)
        for (Letter a = 0; a < A.letters(); ++a)
            for (auto e : A.out[p][a]) B.add(p, a, (e.rank == 2 && comp[e.dst] != comp[p]) ? 1 : e.rank, e.dst);
    return B;
}

namespace detail {

struct BitsHash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (auto x : v) h = (h ^ x) * 0x100000001b3ull + (h >> 29);
        return static_cast<size_t>(h);
    }
};

}  // namespace detail

struct MultiDet {
    Automaton D;
    std::vector<int> start;  // D-state for each requested start set
};

// Breakpoint construction from several start sets sharing one state space.
// States are (reachable set R, safe subset S); a letter moves to rank 1 when
// the safe subset dies, and S is then reseeded with the new R.
inline MultiDet determinize_multi(const Automaton& A, const std::vector<StateSet>& starts, size_t cap = Limits{}.det_states) {
    const int W = (A.n + 63) / 64;
    using Key = std::vector<uint64_t>;
    std::unordered_map<Key, int, detail::BitsHash> ids;
    std::vector<Key> keys;
    MultiDet md;
    md.D = Automaton(A.sigma, 0);
    auto intern = [&](const Key& k) {
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        if (keys.size() >= cap) throw CapError("determinization exceeded " + std::to_string(cap) + " states");
        int id = md.D.add_state();
        ids.emplace(k, id);
        keys.push_back(k);
        return id;
    };
    for (const auto& s : starts) {
        Key k(2 * W, 0);
        for (int p : s) {
            k[p / 64] |= 1ull << (p % 64);
            k[W + p / 64] |= 1ull << (p % 64);
        }
        md.start.push_back(intern(k));
    }
    for (size_t cur = 0; cur < keys.size(); ++cur) {
        for (Letter a = 0; a < A.letters(); ++a) {
            Key k = keys[cur];
            Key nk(2 * W, 0);
            for (int p = 0; p < A.n; ++p) {
                bool inR = (k[p / 64] >> (p % 64)) & 1;
                if (!inR) continue;
                bool inS = (k[W + p / 64] >> (p % 64)) & 1;
                for (auto e : A.out[p][a]) {
                    nk[e.dst / 64] |= 1ull << (e.dst % 64);
                    if (inS && e.rank == 2) nk[W + e.dst / 64] |= 1ull << (e.dst % 64);
                }
            }
            bool safe = false;
            for (int i = 0; i < W; ++i) safe = safe || nk[W + i];
            if (!safe)
                for (int i = 0; i < W; ++i) nk[W + i] = nk[i];
            int t = intern(nk);
            md.D.add(static_cast<int>(cur), a, safe ? 2 : 1, t);
        }
    }
    return md;
}

inline Automaton determinize_breakpoint(const Automaton& A, size_t cap = Limits{}.det_states) {
    auto md = determinize_multi(A, {A.initial}, cap);
    md.D.add_initial(md.start[0]);
    return normalize(md.D);
}

inline Automaton as_deterministic(const Automaton& A, size_t cap = Limits{}.det_states) {
    if (A.deterministic() && A.is_complete()) return A;
    return determinize_breakpoint(A, cap);
}

inline bool up_less(const UPWord& a, const UPWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    if (a.spoke.size() != b.spoke.size()) return a.spoke.size() < b.spoke.size();
    return a < b;
}

// A lasso in L(DA) - L(DB) for deterministic complete DA, DB started at the
// given states, or nothing if the inclusion holds.
inline std::optional<UPWord> inclusion_witness(const Automaton& DA, int sa, const Automaton& DB, int sb) {
    const int K = DA.letters();
    std::unordered_map<int64_t, int> id;
    std::vector<std::pair<int, int>> node;
    std::vector<int> parent;
    std::vector<Letter> via;
    auto key = [&](int p, int q) { return static_cast<int64_t>(p) * DB.n + q; };
    id[key(sa, sb)] = 0;
    node.push_back({sa, sb});
    parent.push_back(-1);
    via.push_back(-1);
    std::vector<std::vector<int>> next;
    for (size_t i = 0; i < node.size(); ++i) {
        next.emplace_back(K);
        for (Letter a = 0; a < K; ++a) {
            int p = DA.step(node[i].first, a).dst, q = DB.step(node[i].second, a).dst;
            auto [it, fresh] = id.emplace(key(p, q), static_cast<int>(node.size()));
            if (fresh) {
                node.push_back({p, q});
                parent.push_back(static_cast<int>(i));
                via.push_back(a);
            }
            next[i][a] = it->second;
        }
    }
    const int N = static_cast<int>(node.size());
    auto arank = [&](int x, Letter a) { return DA.step(node[x].first, a).rank; };
    auto brank = [&](int x, Letter a) { return DB.step(node[x].second, a).rank; };
    auto comp = scc(N, [&](int x, std::vector<int>& s) {
        for (Letter a = 0; a < K; ++a)
            if (arank(x, a) == 2) s.push_back(next[x][a]);
    });
    int ncomp = 0;
    for (int c : comp) ncomp = std::max(ncomp, c + 1);
    std::vector<char> bad(ncomp, 0);
    for (int x = 0; x < N; ++x)
        for (Letter a = 0; a < K; ++a)
            if (arank(x, a) == 2 && brank(x, a) == 1 && comp[next[x][a]] == comp[x]) bad[comp[x]] = 1;
    int anchor = -1;
    for (int x = 0; x < N && anchor < 0; ++x)
        if (bad[comp[x]]) anchor = x;
    if (anchor < 0) return std::nullopt;

    auto access = [&](int x) {
        Word w;
        for (; parent[x] >= 0; x = parent[x]) w.push_back(via[x]);
        std::reverse(w.begin(), w.end());
        return w;
    };
    const int c = comp[anchor];
    // forward BFS inside the component from the anchor
    std::vector<int> fpar(N, -2), fvia(N, -1);
    std::deque<int> q{anchor};
    fpar[anchor] = -1;
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (Letter a = 0; a < K; ++a) {
            int y = next[x][a];
            if (arank(x, a) != 2 || comp[y] != c || fpar[y] != -2) continue;
            fpar[y] = x;
            fvia[y] = a;
            q.push_back(y);
        }
    }
    // backward BFS to the anchor
    std::vector<std::vector<std::pair<int, Letter>>> pred(N);
    for (int x = 0; x < N; ++x)
        if (comp[x] == c)
            for (Letter a = 0; a < K; ++a)
                if (arank(x, a) == 2 && comp[next[x][a]] == c) pred[next[x][a]].push_back({x, a});
    std::vector<int> bnext(N, -2), bvia(N, -1);
    bnext[anchor] = -1;
    q.push_back(anchor);
    while (!q.empty()) {
        int y = q.front();
        q.pop_front();
        for (auto [x, a] : pred[y]) {
            if (bnext[x] != -2) continue;
            bnext[x] = y;
            bvia[x] = a;
            q.push_back(x);
        }
    }
    auto path_to = [&](int y) {
        Word w;
        for (; fpar[y] >= 0; y = fpar[y]) w.push_back(fvia[y]);
        std::reverse(w.begin(), w.end());
        return w;
    };
    auto path_from = [&](int x) {
        Word w;
        for (; bnext[x] >= 0; x = bnext[x]) w.push_back(bvia[x]);
        return w;
    };
    std::optional<Word> best;
    for (int x = 0; x < N; ++x) {
        if (comp[x] != c) continue;
        for (Letter a = 0; a < K; ++a) {
            int y = next[x][a];
            if (arank(x, a) != 2 || brank(x, a) != 1 || comp[y] != c) continue;
            Word cyc = cat(path_to(x), Word{a}, path_from(y));
            if (!best || lenlex_less(cyc, *best)) best = cyc;
        }
    }
    return UPWord{access(anchor), *best};
}

struct EquivResult {
    bool equal = true;
    std::optional<UPWord> witness;  // in exactly one of the two languages
    explicit operator bool() const { return equal; }
};

inline std::optional<UPWord> not_included(const Automaton& A, const Automaton& B, size_t cap = Limits{}.det_states) {
    if (!(A.sigma == B.sigma)) throw std::invalid_argument("alphabet mismatch");
    auto DA = as_deterministic(A, cap), DB = as_deterministic(B, cap);
    return inclusion_witness(DA, DA.initial[0], DB, DB.initial[0]);
}

inline EquivResult equivalent(const Automaton& A, const Automaton& B, size_t cap = Limits{}.det_states) {
    if (!(A.sigma == B.sigma)) throw std::invalid_argument("alphabet mismatch");
    auto DA = as_deterministic(A, cap), DB = as_deterministic(B, cap);
    auto w1 = inclusion_witness(DA, DA.initial[0], DB, DB.initial[0]);
    auto w2 = inclusion_witness(DB, DB.initial[0], DA, DA.initial[0]);
    EquivResult r;
    r.equal = !w1 && !w2;
    if (w1 && w2) r.witness = up_less(*w2, *w1) ? w2 : w1;
    else if (w1) r.witness = w1;
    else if (w2) r.witness = w2;
    return r;
}

// Language-equivalence classes of the states of a deterministic complete
// automaton, numbered by first occurrence in state order.
inline std::vector<int> language_classes(const Automaton& D) {
    const int n = D.n, K = D.letters();
    const int N = n * n;
    auto nxt = [&](int x, Letter a) { return D.step(x / n, a).dst * n + D.step(x % n, a).dst; };
    // left run safe while the right run keeps breaking
    auto comp = scc(N, [&](int x, std::vector<int>& s) {
        for (Letter a = 0; a < K; ++a)
            if (D.step(x / n, a).rank == 2) s.push_back(nxt(x, a));
    });
    int nc = 0;
    for (int c : comp) nc = std::max(nc, c + 1);
    std::vector<char> badc(nc, 0);
    for (int x = 0; x < N; ++x)
        for (Letter a = 0; a < K; ++a)
            if (D.step(x / n, a).rank == 2 && D.step(x % n, a).rank == 1 && comp[nxt(x, a)] == comp[x]) badc[comp[x]] = 1;
    std::vector<char> bad(N, 0);
    for (int x = 0; x < N; ++x) {
        int swapped = (x % n) * n + x / n;
        if (badc[comp[x]]) bad[x] = bad[swapped] = 1;
    }
    std::vector<std::vector<int>> pred(N);
    for (int x = 0; x < N; ++x)
        for (Letter a = 0; a < K; ++a) pred[nxt(x, a)].push_back(x);
    std::vector<int> todo;
    for (int x = 0; x < N; ++x)
        if (bad[x]) todo.push_back(x);
    while (!todo.empty()) {
        int y = todo.back();
        todo.pop_back();
        for (int x : pred[y])
            if (!bad[x]) {
                bad[x] = 1;
                todo.push_back(x);
            }
    }
    std::vector<int> cls(n, -1);
    int next = 0;
    for (int p = 0; p < n; ++p) {
        if (cls[p] >= 0) continue;
        cls[p] = next;
        for (int q = p + 1; q < n; ++q)
            if (cls[q] < 0 && !bad[p * n + q]) cls[q] = next;
        ++next;
    }
    return cls;
}

// Per-state residual languages of an arbitrary automaton.
struct StateLanguages {
    MultiDet md;
    std::vector<int> cls;  // class of each D-state

    explicit StateLanguages(const Automaton& A, size_t cap = Limits{}.det_states) {
        std::vector<StateSet> starts;
        for (int q = 0; q < A.n; ++q) starts.push_back({q});
        md = determinize_multi(A, starts, cap);
        cls = language_classes(md.D);
    }
    int of(int q) const { return cls[md.start[q]]; }
    int after(int q, Letter a) const { return cls[md.D.step(md.start[q], a).dst]; }
};

inline Automaton unsafe_saturate(const Automaton& A, size_t cap = Limits{}.det_states) {
    StateLanguages L(A, cap);
    Automaton B = A;
    for (int p = 0; p < A.n; ++p)
        for (Letter a = 0; a < A.letters(); ++a) {
            int c = L.after(p, a);
            for (int q = 0; q < A.n; ++q)
                if (L.of(q) == c) B.add(p, a, 1, q);
        }
    return B;
}

inline Automaton semantic_prune(const Automaton& A, size_t cap = Limits{}.det_states) {
    StateLanguages L(A, cap);
    Automaton B(A.sigma, A.n);
    B.initial = A.initial;
    for (int p = 0; p < A.n; ++p)
        for (Letter a = 0; a < A.letters(); ++a)
            for (auto e : A.out[p][a])
                if (L.of(e.dst) == L.after(p, a)) B.add(p, a, e.rank, e.dst);
    return complete(B);
}

struct StructuralFlags {
    bool normalized = false;
    bool semantically_deterministic = false;
    bool unsafe_saturated = false;
    bool safe_deterministic = false;
};

inline StructuralFlags structural_checks(const Automaton& A, size_t cap = Limits{}.det_states) {
    StructuralFlags f;
    f.normalized = normalize(A) == A;
    f.safe_deterministic = true;
    for (int p = 0; p < A.n; ++p)
        for (Letter a = 0; a < A.letters(); ++a) {
            int safe = 0;
            for (auto e : A.out[p][a]) safe += e.rank == 2;
            if (safe > 1) f.safe_deterministic = false;
        }
    StateLanguages L(A, cap);
    f.semantically_deterministic = true;
    f.unsafe_saturated = true;
    for (int p = 0; p < A.n; ++p)
        for (Letter a = 0; a < A.letters(); ++a) {
            int c = L.after(p, a);
            for (auto e : A.out[p][a])
                if (L.of(e.dst) != c) f.semantically_deterministic = false;
            for (int q = 0; q < A.n; ++q)
                if (L.of(q) == c && !A.has(p, a, 1, q)) f.unsafe_saturated = false;
        }
    return f;
}

// Sufficient condition for history-determinism.
inline bool hd_certificate(const Automaton& A, size_t cap = Limits{}.det_states) {
    auto f = structural_checks(A, cap);
    return f.semantically_deterministic && f.unsafe_saturated && f.safe_deterministic;
}

inline int safe_succ(const Automaton& A, int p, Letter a) {
    for (auto e : A.out[p][a])
        if (e.rank == 2) return e.dst;
    return -1;
}

struct ResolverState {
    size_t base_prefix_len = 0;
    int base_state = -1;
    int top_state = -1;
    size_t word_read_len = 0;
    bool operator==(const ResolverState&) const = default;
};

// Smallest prefix length >= from_len, then least state in `order`, from which
// the rest of u can be read safely.
inline ResolverState resolver_base(const Automaton& A, const Word& u, size_t from_len, const std::vector<int>& order) {
    std::vector<int> rank_of(A.n);
    for (int i = 0; i < A.n; ++i) rank_of[order[i]] = i;
    StateSet reach = post(A, A.initial, Word(u.begin(), u.begin() + from_len));
    for (size_t i = from_len; i <= u.size(); ++i) {
        StateSet cand = reach;
        std::sort(cand.begin(), cand.end(), [&](int a, int b) { return rank_of[a] < rank_of[b]; });
        for (int p : cand) {
            int q = p;
            for (size_t j = i; j < u.size() && q >= 0; ++j) q = safe_succ(A, q, u[j]);
            if (q >= 0) return {i, p, q, u.size()};
        }
        if (i < u.size()) reach = post(A, reach, Word{u[i]});
    }
    throw std::logic_error("resolver: no support (automaton not complete)");
}

inline std::vector<int> identity_order(int n) {
    std::vector<int> o(n);
    for (int i = 0; i < n; ++i) o[i] = i;
    return o;
}

// One step of the base/top-state strategy. `u` is the word read so far.
inline ResolverState resolver_step(const Automaton& A, const ResolverState& rs, const Word& u, Letter a,
                                   const std::vector<int>& order) {
    int q = safe_succ(A, rs.top_state, a);
    if (q >= 0) return {rs.base_prefix_len, rs.base_state, q, rs.word_read_len + 1};
    Word ua = u;
    ua.push_back(a);
    return resolver_base(A, ua, rs.base_prefix_len, order);
}

// Incremental driver; step() reports the rank of the transition taken.
class Resolver {
public:
    Resolver(const Automaton& A, std::vector<int> order) : A_(A), order_(std::move(order)) {
        st_ = resolver_base(A_, {}, 0, order_);
    }
    explicit Resolver(const Automaton& A) : Resolver(A, identity_order(A.n)) {}

    int step(Letter a) {
        auto nx = resolver_step(A_, st_, read_, a, order_);
        read_.push_back(a);
        int rank = (nx.base_prefix_len == st_.base_prefix_len && nx.base_state == st_.base_state) ? 2 : 1;
        if (!A_.has(st_.top_state, a, rank, nx.top_state)) throw std::logic_error("resolver moved along a missing transition");
        st_ = nx;
        return rank;
    }
    const ResolverState& state() const { return st_; }

private:
    const Automaton& A_;
    std::vector<int> order_;
    Word read_;
    ResolverState st_;
};

}  // namespace hdcw
