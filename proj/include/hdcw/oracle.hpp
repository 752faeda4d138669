#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

#include "transform.hpp"

namespace hdcw {

// Keeps the states reachable from the initial state, renumbered in BFS order.
inline Automaton trim_reachable(const Automaton& A) {
    std::vector<int> id(A.n, -1), order;
    for (int p : A.initial) {
        id[p] = static_cast<int>(order.size());
        order.push_back(p);
    }
    for (size_t i = 0; i < order.size(); ++i)
        for (Letter a = 0; a < A.letters(); ++a)
            for (auto e : A.out[order[i]][a])
                if (id[e.dst] < 0) {
                    id[e.dst] = static_cast<int>(order.size());
                    order.push_back(e.dst);
                }
    Automaton B(A.sigma, static_cast<int>(order.size()));
    for (int p : A.initial) B.add_initial(id[p]);
    for (int p : order)
        for (Letter a = 0; a < A.letters(); ++a)
            for (auto e : A.out[p][a]) B.add(id[p], a, e.rank, id[e.dst]);
    return B;
}

// Effect of a finite word on the reference automaton: the induced map on
// residual classes, and the partial map on states along rank-2 runs (-1 when
// the run takes a rank-1 transition).
struct Profile {
    std::vector<int> cm;
    std::vector<int> g;
    bool operator==(const Profile&) const = default;

    // this word followed by y
    Profile then(const Profile& y) const {
        Profile r;
        r.cm.resize(cm.size());
        for (size_t c = 0; c < cm.size(); ++c) r.cm[c] = y.cm[cm[c]];
        r.g.resize(g.size());
        for (size_t p = 0; p < g.size(); ++p) r.g[p] = g[p] < 0 ? -1 : y.g[g[p]];
        return r;
    }
};

struct ProfileHash {
    size_t operator()(const Profile& p) const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        for (int x : p.cm) h = (h ^ static_cast<uint64_t>(x + 1)) * 0x100000001b3ull;
        for (int x : p.g) h = (h ^ static_cast<uint64_t>(x + 2)) * 0x100000001b3ull;
        return static_cast<size_t>(h);
    }
};

// Signature deciding the approximation relation for pairs with first
// component in a fixed class: equal signatures iff the pairs are related.
struct ApproxSig {
    int cu = -1;
    int cuv = -1;
    std::vector<uint64_t> bits;
    bool operator==(const ApproxSig&) const = default;
};

struct ApproxSigHash {
    size_t operator()(const ApproxSig& s) const {
        uint64_t h = static_cast<uint64_t>(s.cu) * 1000003u + static_cast<uint64_t>(s.cuv);
        for (auto b : s.bits) h = (h ^ b) * 0x100000001b3ull + (h >> 31);
        return static_cast<size_t>(h);
    }
};

// Nodes of the partial map g lying on a cycle.
inline std::vector<char> cyclic_nodes(const std::vector<int>& g) {
    const int n = static_cast<int>(g.size());
    std::vector<char> color(n, 0), cyc(n, 0);
    std::vector<int> path;
    for (int s = 0; s < n; ++s) {
        if (color[s]) continue;
        path.clear();
        int x = s;
        while (x >= 0 && !color[x]) {
            color[x] = 1;
            path.push_back(x);
            x = g[x];
        }
        if (x >= 0 && color[x] == 1)
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                cyc[*it] = 1;
                if (*it == x) break;
            }
        for (int y : path) color[y] = 2;
    }
    return cyc;
}

class LanguageOracle {
public:
    explicit LanguageOracle(const Automaton& in, Limits lim = Limits::from_env()) : lim_(lim) {
        Automaton A = complete(in);
        if (A.deterministic()) D_ = trim_reachable(normalize(A));
        else D_ = trim_reachable(determinize_breakpoint(A, lim.det_states));
        n_ = D_.n;
        K_ = D_.letters();
        init_ = D_.initial.at(0);
        // classes renumbered by length-lex least representative
        auto raw = language_classes(D_);
        std::vector<int> remap(n_, -1);
        std::vector<Word> acc(n_);
        std::vector<int> order{init_};
        std::vector<char> seen(n_, 0);
        seen[init_] = 1;
        for (size_t i = 0; i < order.size(); ++i)
            for (Letter a = 0; a < K_; ++a) {
                int q = D_.step(order[i], a).dst;
                if (!seen[q]) {
                    seen[q] = 1;
                    acc[q] = cat(acc[order[i]], Word{a});
                    order.push_back(q);
                }
            }
        for (int p : order)
            if (remap[raw[p]] < 0) {
                remap[raw[p]] = static_cast<int>(reps_.size());
                reps_.push_back(acc[p]);
            }
        nc_ = static_cast<int>(reps_.size());
        cls_.resize(n_);
        members_.assign(nc_, {});
        for (int p = 0; p < n_; ++p) {
            cls_[p] = remap[raw[p]];
            members_[cls_[p]].push_back(p);
        }
        build_monoid();
    }

    const Automaton& D() const { return D_; }
    int states() const { return n_; }
    int letters() const { return K_; }
    const Alphabet& sigma() const { return D_.sigma; }
    int class_count() const { return nc_; }
    int lang_class(int state) const { return cls_[state]; }
    // length-lex least word of each residual class, in class-id order
    const std::vector<Word>& residual_reps() const { return reps_; }
    const StateSet& class_states(int c) const { return members_[c]; }

    int run(int p, const Word& u) const {
        for (Letter a : u) {
            if (a < 0 || a >= K_) throw std::out_of_range("letter outside alphabet");
            p = D_.step(p, a).dst;
        }
        return p;
    }
    int state_of(const Word& u) const { return run(init_, u); }
    int class_of(const Word& u) const { return cls_[state_of(u)]; }
    const StateSet& R(const Word& u) const { return members_[class_of(u)]; }

    // ---- profile monoid ----

    size_t profile_count() const { return prof_.size(); }
    const Profile& profile(int id) const { return prof_[id]; }
    Word witness(int id) const {
        Word w;
        for (; parent_[id] >= 0; id = parent_[id]) w.push_back(via_[id]);
        std::reverse(w.begin(), w.end());
        return w;
    }
    size_t witness_len(int id) const { return depth_[id]; }
    int profile_id(const Word& x) const {
        int id = 0;
        for (Letter a : x) id = right_[id][a];
        return id;
    }
    int profile_id(const Profile& p) const {
        auto it = ids_.find(p);
        if (it == ids_.end()) throw std::logic_error("profile outside the monoid");
        return it->second;
    }
    Profile profile_of(const Word& x) const { return prof_[profile_id(x)]; }
    int extend(int id, Letter a) const { return right_[id][a]; }

    // ---- queries ----

    bool mem_up(const UPWord& w) const {
        if (w.period.empty()) throw std::invalid_argument("empty period");
        int p = state_of(w.spoke);
        std::vector<int> first(n_, -1);
        std::vector<int> seq;
        std::vector<char> safe;
        while (first[p] < 0) {
            first[p] = static_cast<int>(seq.size());
            seq.push_back(p);
            bool s = true;
            for (Letter a : w.period) {
                const auto& e = D_.step(p, a);
                s = s && e.rank == 2;
                p = e.dst;
            }
            safe.push_back(s);
        }
        for (size_t i = first[p]; i < seq.size(); ++i)
            if (!safe[i]) return false;
        return true;
    }
    bool mem_up(const Word& u, const Word& v) const { return mem_up(UPWord{u, v}); }

    StateSet safe_image(const StateSet& S, const Word& v) const { return safe_reach(D_, S, v); }
    static StateSet image(const std::vector<int>& g, const StateSet& S) {
        std::set<int> r;
        for (int p : S)
            if (g[p] >= 0) r.insert(g[p]);
        return StateSet(r.begin(), r.end());
    }

    bool bot_test(const Word& u, const Word& v) const {
        if (v.empty()) return false;
        return safe_image(R(u), v).empty();
    }

    bool nt_test(const Word& u) const {
        for (Letter a = 0; a < K_; ++a)
            if (!bot_test(u, Word{a})) return true;
        return false;
    }

    std::pair<int, StateSet> sfl_signature(const Word& u, const Word& v) const {
        return {class_of(cat(u, v)), safe_image(R(u), v)};
    }

    // Same residual class of uv and same safe finite-word language of the
    // two safe sets.
    bool equivL_test(const std::pair<Word, Word>& p1, const std::pair<Word, Word>& p2) const {
        auto s1 = sfl_signature(p1.first, p1.second), s2 = sfl_signature(p2.first, p2.second);
        if (s1.first != s2.first) return false;
        return same_safe_language(s1.second, s2.second);
    }

    bool same_safe_language(const StateSet& a, const StateSet& b) const {
        std::set<std::pair<StateSet, StateSet>> seen{{a, b}};
        std::vector<std::pair<StateSet, StateSet>> todo{{a, b}};
        while (!todo.empty()) {
            auto [x, y] = todo.back();
            todo.pop_back();
            if (x.empty() != y.empty()) return false;
            if (x.empty()) continue;
            for (Letter l = 0; l < K_; ++l) {
                std::pair<StateSet, StateSet> nx{safe_image(x, Word{l}), safe_image(y, Word{l})};
                if (seen.insert(nx).second) {
                    if (seen.size() > lim_.det_states) throw CapError("safe-language comparison exceeded cap");
                    todo.push_back(std::move(nx));
                }
            }
        }
        return true;
    }

    // Signature of (u, v) for nonempty v over all right extensions x: bit x
    // is set iff uvx returns to the class of u and u(vx)^omega is accepted.
    ApproxSig approx_sig(const Word& u, const Word& v) const { return approx_sig(class_of(u), profile_of(v)); }

    ApproxSig approx_sig(int cu, const Profile& pv) const {
        ApproxSig s;
        s.cu = cu;
        s.cuv = pv.cm[cu];
        const size_t M = prof_.size();
        s.bits.assign((M + 63) / 64, 0);
        for (size_t i = 0; i < M; ++i)
            if (approx_bit(cu, pv, prof_[i])) s.bits[i / 64] |= 1ull << (i % 64);
        return s;
    }

    bool approx_bit(int cu, const Profile& pv, const Profile& px) const {
        if (px.cm[pv.cm[cu]] != cu) return false;
        return loops(pv.then(px).g, members_[cu]);
    }

    // Index of the least extension profile telling (u1,v1) and (u2,v2)
    // apart; -1 when the classes of u or uv already differ; nullopt when
    // the pairs are related.
    std::optional<int> approx_diff(int c1, const Profile& p1, int c2, const Profile& p2) const {
        if (c1 != c2 || p1.cm[c1] != p2.cm[c2]) return -1;
        for (size_t i = 0; i < prof_.size(); ++i)
            if (approx_bit(c1, p1, prof_[i]) != approx_bit(c2, p2, prof_[i])) return static_cast<int>(i);
        return std::nullopt;
    }

    struct ApproxResult {
        bool related = true;
        std::optional<Word> witness;  // x with exactly one of u(vx)^omega, u'(v'x)^omega in L
        explicit operator bool() const { return related; }
    };

    ApproxResult approx_test(const std::pair<Word, Word>& a, const std::pair<Word, Word>& b) const {
        if (a.second.empty() || b.second.empty()) throw std::invalid_argument("approx_test needs nonempty periods");
        auto d = approx_diff(class_of(a.first), profile_of(a.second), class_of(b.first), profile_of(b.second));
        ApproxResult r;
        if (!d) return r;
        r.related = false;
        if (*d >= 0) r.witness = witness(*d);
        return r;
    }

    static bool loops(const std::vector<int>& g, const StateSet& S) {
        auto cyc = cyclic_nodes(g);
        for (int p : S)
            if (cyc[p]) return true;
        return false;
    }

    // Least x (in length-lex order of profile witnesses) whose profile
    // satisfies pred.
    std::optional<Word> least_x(const std::function<bool(const Profile&)>& pred) const {
        for (size_t i = 0; i < prof_.size(); ++i)
            if (pred(prof_[i])) return witness(static_cast<int>(i));
        return std::nullopt;
    }

    // First loop of the pointed-pair search: u ~ u vbar x, (u, vbar x vbar)
    // not bottom, u (vbar x)^omega rejected.
    std::optional<Word> find_pointed_x1(const Word& u, const Word& vbar) const {
        const int cu = class_of(u);
        const Profile pv = profile_of(vbar);
        const auto& Ru = members_[cu];
        return least_x([&](const Profile& px) {
            Profile vx = pv.then(px);
            if (vx.cm[cu] != cu) return false;
            if (image(vx.then(pv).g, Ru).empty()) return false;
            return !loops(vx.g, Ru);
        });
    }

    // Largest m with (u, vbar (x vbar)^m) not bottom.
    int max_m(const Word& u, const Word& vbar, const Word& x) const {
        StateSet S = safe_image(R(u), vbar);
        if (S.empty()) throw std::logic_error("max_m: (u, vbar) is bottom");
        const auto g = profile_of(cat(x, vbar)).g;
        for (int m = 0; m <= n_; ++m) {
            S = image(g, S);
            if (S.empty()) return m;
        }
        throw std::logic_error("max_m: safe set did not shrink");
    }

    // Second loop: u ~ u w vbar x and (u, w vbar x vbar) neither bottom nor
    // related to (u, w vbar).
    std::optional<Word> find_pointed_x2(const Word& u, const Word& w, const Word& vbar) const {
        const int cu = class_of(u);
        const Profile pwv = profile_of(cat(w, vbar));
        const Profile pv = profile_of(vbar);
        const auto& Ru = members_[cu];
        std::unordered_map<Profile, bool, ProfileHash> memo;
        return least_x([&](const Profile& px) {
            Profile wvx = pwv.then(px);
            if (wvx.cm[cu] != cu) return false;
            Profile full = wvx.then(pv);
            if (image(full.g, Ru).empty()) return false;
            auto it = memo.find(full);
            if (it != memo.end()) return it->second;
            bool differs = approx_diff(cu, full, cu, pwv).has_value();
            memo.emplace(full, differs);
            return differs;
        });
    }

    // Least u in residual_reps() with some x such that u x ~ u and
    // u x^omega in L but not in L(H), together with the least such x.
    // H must be complete over the same alphabet.
    std::optional<std::pair<int, Word>> find_missing(const Automaton& H) const {
        const int m = H.n;
        using Mat = std::string;  // m*m entries in {0,1,2}
        std::vector<Mat> letter_mat(K_, Mat(static_cast<size_t>(m * m), 0));
        for (int p = 0; p < m; ++p)
            for (Letter a = 0; a < K_; ++a)
                for (auto e : H.out[p][a]) {
                    char& c = letter_mat[a][p * m + e.dst];
                    c = std::max<char>(c, static_cast<char>(e.rank));
                }
        auto mul = [&](const Mat& x, const Mat& y) {
            Mat r(static_cast<size_t>(m * m), 0);
            for (int p = 0; p < m; ++p)
                for (int q = 0; q < m; ++q) {
                    char a = x[p * m + q];
                    if (!a) continue;
                    for (int s = 0; s < m; ++s) {
                        char v = std::min(a, y[q * m + s]);
                        if (v > r[p * m + s]) r[p * m + s] = v;
                    }
                }
            return r;
        };
        std::vector<StateSet> start(nc_);
        for (int c = 0; c < nc_; ++c) start[c] = post(H, H.initial, reps_[c]);
        auto accepts = [&](const Mat& x, const StateSet& from) {
            auto comp = scc(m, [&](int p, std::vector<int>& s) {
                for (int q = 0; q < m; ++q)
                    if (x[p * m + q] == 2) s.push_back(q);
            });
            std::vector<char> good(m, 0);
            for (int p = 0; p < m; ++p)
                for (int q = 0; q < m; ++q)
                    if (x[p * m + q] == 2 && comp[p] == comp[q]) good[p] = 1;
            std::vector<char> seen(m, 0);
            std::vector<int> todo(from.begin(), from.end());
            for (int p : from) seen[p] = 1;
            while (!todo.empty()) {
                int p = todo.back();
                todo.pop_back();
                if (good[p]) return true;
                for (int q = 0; q < m; ++q)
                    if (x[p * m + q] && !seen[q]) {
                        seen[q] = 1;
                        todo.push_back(q);
                    }
            }
            return false;
        };
        struct Node {
            int pid;
            Mat mat;
            int parent;
            Letter via;
        };
        std::vector<Node> nodes;
        std::unordered_map<std::string, int> seen;
        auto key = [](int pid, const Mat& x) { return std::to_string(pid) + '/' + x; };
        Mat id(static_cast<size_t>(m * m), 0);
        for (int p = 0; p < m; ++p) id[p * m + p] = 2;
        nodes.push_back({0, id, -1, -1});
        seen.emplace(key(0, id), 0);
        std::optional<std::pair<int, int>> best;  // (class, node)
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (i > 0) {
                const Profile& px = prof_[nodes[i].pid];
                for (int c = 0; c < nc_ && (!best || c < best->first); ++c) {
                    if (px.cm[c] != c || !loops(px.g, members_[c])) continue;
                    if (accepts(nodes[i].mat, start[c])) continue;
                    best = {c, static_cast<int>(i)};
                }
                if (best && best->first == 0) break;
            }
            for (Letter a = 0; a < K_; ++a) {
                int pid = right_[nodes[i].pid][a];
                Mat nm = mul(nodes[i].mat, letter_mat[a]);
                auto k = key(pid, nm);
                if (seen.count(k)) continue;
                if (nodes.size() >= lim_.profiles) throw CapError("joint profile search exceeded cap");
                seen.emplace(std::move(k), static_cast<int>(nodes.size()));
                nodes.push_back({pid, std::move(nm), static_cast<int>(i), a});
            }
        }
        if (!best) return std::nullopt;
        Word x;
        for (int j = best->second; nodes[j].parent >= 0; j = nodes[j].parent) x.push_back(nodes[j].via);
        std::reverse(x.begin(), x.end());
        return std::make_pair(best->first, x);
    }

private:
    void build_monoid() {
        Profile idp;
        idp.cm.resize(nc_);
        for (int c = 0; c < nc_; ++c) idp.cm[c] = c;
        idp.g.resize(n_);
        for (int p = 0; p < n_; ++p) idp.g[p] = p;
        std::vector<Profile> letter(K_);
        for (Letter a = 0; a < K_; ++a) {
            letter[a].cm.resize(nc_);
            for (int c = 0; c < nc_; ++c) letter[a].cm[c] = cls_[D_.step(members_[c][0], a).dst];
            letter[a].g.resize(n_);
            for (int p = 0; p < n_; ++p) {
                const auto& e = D_.step(p, a);
                letter[a].g[p] = e.rank == 2 ? e.dst : -1;
            }
        }
        prof_.push_back(idp);
        ids_.emplace(idp, 0);
        parent_.push_back(-1);
        via_.push_back(-1);
        depth_.push_back(0);
        for (size_t i = 0; i < prof_.size(); ++i) {
            right_.emplace_back(K_);
            for (Letter a = 0; a < K_; ++a) {
                Profile nx = prof_[i].then(letter[a]);
                auto it = ids_.find(nx);
                if (it == ids_.end()) {
                    if (prof_.size() >= lim_.profiles)
                        throw CapError("profile monoid exceeded " + std::to_string(lim_.profiles) + " elements");
                    it = ids_.emplace(nx, static_cast<int>(prof_.size())).first;
                    prof_.push_back(std::move(nx));
                    parent_.push_back(static_cast<int>(i));
                    via_.push_back(a);
                    depth_.push_back(depth_[i] + 1);
                }
                right_[i][a] = it->second;
            }
        }
    }

    Limits lim_;
    Automaton D_;
    int n_ = 0, K_ = 0, init_ = 0, nc_ = 0;
    std::vector<int> cls_;
    std::vector<Word> reps_;
    std::vector<StateSet> members_;

    std::vector<Profile> prof_;
    std::unordered_map<Profile, int, ProfileHash> ids_;
    std::vector<int> parent_;
    std::vector<Letter> via_;
    std::vector<size_t> depth_;
    std::vector<std::vector<int>> right_;
};

}  // namespace hdcw
