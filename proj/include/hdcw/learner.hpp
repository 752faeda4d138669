#pragma once

#include <set>
#include <string>
#include <unordered_map>

#include "canonical.hpp"
#include "sample.hpp"

namespace hdcw {

// Sample-relative versions of the language tests. Every "true" verdict
// is backed by sample entries, so verdicts survive consistent extensions.
class SampleContext {
public:
    explicit SampleContext(const Sample& S) : S_(S) {
        for (const auto& [w, l] : S.entries) {
            entries_.push_back({w, l});
            lmax_ = std::max(lmax_, w.size());
        }
    }

    const Sample& sample() const { return S_; }
    size_t lmax() const { return lmax_; }
    const std::vector<Word>& R() const { return R_; }
    void set_R(std::vector<Word> R) {
        R_ = std::move(R);
        cand_.clear();
        nbot_.clear();
        napprox_.clear();
    }

    std::optional<bool> label(const Word& u, const Word& v) const {
        if (v.empty()) return std::nullopt;
        return S_.label(UPWord{u, v});
    }
    bool in_S(const Word& u, const Word& v) const { return label(u, v) == std::optional<bool>(true); }
    bool notin_S(const Word& u, const Word& v) const { return label(u, v) == std::optional<bool>(false); }

    // Some (u,v) with xu v^omega and yu v^omega labeled differently.
    bool nsim(const Word& x, const Word& y) {
        if (x == y) return false;
        auto k = key({x, y});
        auto it = nsim_.find(k);
        if (it != nsim_.end()) return it->second;
        bool r = nsim_dir(x, y) || nsim_dir(y, x);
        nsim_[k] = r;
        nsim_[key({y, x})] = r;
        return r;
    }

    // Indices of representatives x may be equivalent to: all others are
    // separated from x.
    const std::vector<int>& cand(const Word& x) {
        auto k = key({x});
        auto it = cand_.find(k);
        if (it != cand_.end()) return it->second;
        std::vector<int> open;
        for (size_t i = 0; i < R_.size(); ++i)
            if (!nsim(x, R_[i])) open.push_back(static_cast<int>(i));
        std::vector<int> r;
        if (open.empty())
            for (size_t i = 0; i < R_.size(); ++i) r.push_back(static_cast<int>(i));
        else if (open.size() == 1)
            r = open;
        return cand_[k] = r;
    }

    bool sim(const Word& x, const Word& y) {
        const auto& a = cand(x);
        const auto& b = cand(y);
        for (int i : a)
            if (std::find(b.begin(), b.end(), i) != b.end()) return true;
        return false;
    }

    // Sample words u gamma^omega after the prefix u, gamma primitive.
    struct Lasso {
        size_t entry;
        Word gamma;
    };
    std::vector<Lasso> lassos_after(const Word& u, int want) const {
        std::vector<Lasso> r;
        for (size_t i = 0; i < entries_.size(); ++i) {
            const auto& [w, l] = entries_[i];
            if (want >= 0 && l != (want == 1)) continue;
            if (!is_prefix(u, w)) continue;
            auto b = canonicalize(drop(w, u.size()));
            if (b.spoke.empty()) r.push_back({i, b.period});
        }
        return r;
    }
    bool entry_label(size_t i) const { return entries_[i].second; }

    static bool prefix_of_power(const Word& v, const Word& g) {
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != g[i % g.size()]) return false;
        return true;
    }
    // Exponents j for which gamma^j may serve as v x.
    std::pair<size_t, size_t> j_range(size_t need, size_t glen) const {
        size_t lo = std::max<size_t>(1, (need + glen - 1) / glen);
        size_t hi = lo + (2 * lmax_ + glen - 1) / glen + R_.size() + 2;
        return {lo, hi};
    }

    // (u,v) is not bottom: v empty, or some u(vx)^omega in S+ with uvx ~ u.
    bool nbot(const Word& u, const Word& v) {
        if (v.empty()) return true;
        auto k = key({u, v});
        auto it = nbot_.find(k);
        if (it != nbot_.end()) return it->second;
        bool r = false;
        for (const auto& ls : lassos_after(u, 1)) {
            if (!prefix_of_power(v, ls.gamma)) continue;
            auto [lo, hi] = j_range(v.size(), ls.gamma.size());
            for (size_t j = lo; j <= hi && !r; ++j)
                if (sim(cat(u, power(ls.gamma, j)), u)) r = true;
            if (r) break;
        }
        return nbot_[k] = r;
    }

    bool napprox(const Word& u, const Word& v, const Word& u2, const Word& v2) {
        auto k = key({u, v, u2, v2});
        auto it = napprox_.find(k);
        if (it != napprox_.end()) return it->second;
        bool r = nsim(u, u2) || nsim(cat(u, v), cat(u2, v2));
        if (!r)
            for (const auto& ls : lassos_after(u, -1)) {
                if (!prefix_of_power(v, ls.gamma)) continue;
                const bool l = entries_[ls.entry].second;
                auto [lo, hi] = j_range(v.size(), ls.gamma.size());
                for (size_t j = lo; j <= hi && !r; ++j) {
                    Word vx = power(ls.gamma, j);
                    Word x(vx.begin() + static_cast<long>(v.size()), vx.end());
                    auto l2 = label(u2, cat(v2, x));
                    if (l2 && *l2 != l && sim(cat(u, vx), u)) r = true;
                }
                if (r) break;
            }
        return napprox_[k] = r;
    }

private:
    bool nsim_dir(const Word& x, const Word& y) const {
        for (const auto& [w, l] : entries_) {
            if (!is_prefix(x, w)) continue;
            auto b = drop(w, x.size());
            auto other = S_.label(UPWord{cat(y, b.spoke), b.period});
            if (other && *other != l) return true;
        }
        return false;
    }

    static std::string key(std::initializer_list<Word> ws) {
        std::string k;
        for (const auto& w : ws) {
            for (Letter a : w) k += static_cast<char>(a + 1);
            k += '\0';
        }
        return k;
    }

    const Sample& S_;
    std::vector<std::pair<UPWord, bool>> entries_;
    size_t lmax_ = 0;
    std::vector<Word> R_;
    std::unordered_map<std::string, bool> nsim_, nbot_, napprox_;
    std::unordered_map<std::string, std::vector<int>> cand_;
};

struct SampleComponent {
    PairState anchor;
    std::vector<Word> ext;
    std::vector<std::tuple<int, Letter, int>> edges;
    size_t size() const { return ext.size(); }
};

struct LearnResult {
    Automaton aut;
    std::vector<PairState> labels;
    bool aborted = false;
    std::string reason;
};

namespace detail {

struct Abort {
    std::string reason;
};

inline std::vector<Word> sorted_unique(std::vector<Word> v) {
    std::sort(v.begin(), v.end(), LenLexLess{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace detail

inline std::vector<Word> find_R_S(SampleContext& ctx) {
    std::vector<Word> cands;
    for (const auto& [w, l] : ctx.sample().entries) {
        size_t len = w.size() + ctx.lmax();
        Word x;
        cands.push_back(x);
        for (size_t i = 0; i < len; ++i) {
            x.push_back(w.at(i));
            cands.push_back(x);
        }
    }
    cands = detail::sorted_unique(std::move(cands));
    std::vector<Word> R{Word{}};
    for (;;) {
        const Word* pick = nullptr;
        for (const auto& x : cands) {
            bool all = true;
            for (const auto& y : R)
                if (!ctx.nsim(x, y)) {
                    all = false;
                    break;
                }
            if (all) {
                pick = &x;
                break;
            }
        }
        if (!pick) break;
        R.push_back(*pick);
    }
    return R;
}

// Powers gamma^j (j >= 1) of positive words u gamma^omega.
inline std::vector<Word> positive_loops(SampleContext& ctx, const Word& u) {
    std::vector<Word> r;
    for (const auto& ls : ctx.lassos_after(u, 1)) {
        auto [lo, hi] = ctx.j_range(0, ls.gamma.size());
        for (size_t j = lo; j <= hi; ++j) r.push_back(power(ls.gamma, j));
    }
    return detail::sorted_unique(std::move(r));
}

inline std::vector<Word> find_NT_S(SampleContext& ctx) {
    std::vector<Word> NT;
    for (const auto& u : ctx.R())
        for (const auto& x : positive_loops(ctx, u))
            if (ctx.sim(cat(u, x), u)) {
                NT.push_back(u);
                break;
            }
    return NT;
}

inline Automaton automaton_S(SampleContext& ctx, const std::vector<SampleComponent>& comps,
                             std::vector<PairState>* labels = nullptr) {
    std::vector<PairState> st;
    std::vector<int> base;
    for (const auto& c : comps) {
        base.push_back(static_cast<int>(st.size()));
        for (const auto& e : c.ext) st.push_back({c.anchor.u, cat(c.anchor.v, e)});
    }
    const int n = static_cast<int>(st.size());
    const int K = ctx.sample().sigma.size();
    Automaton A(ctx.sample().sigma, n);
    for (size_t ci = 0; ci < comps.size(); ++ci)
        for (auto [x, a, y] : comps[ci].edges) A.add(base[ci] + x, a, 2, base[ci] + y);
    for (int s = 0; s < n; ++s) {
        Word uv = cat(st[s].u, st[s].v);
        if (ctx.sim(uv, {})) A.add_initial(s);
        for (Letter a = 0; a < K; ++a) {
            Word uva = cat(uv, Word{a});
            for (int t = 0; t < n; ++t)
                if (ctx.sim(uva, cat(st[t].u, st[t].v))) A.add(s, a, 1, t);
        }
    }
    if (labels) *labels = st;
    return complete(A);
}

inline std::optional<Word> find_u_S(SampleContext& ctx, const Automaton& A) {
    for (const auto& u : ctx.R())
        for (const auto& x : positive_loops(ctx, u))
            if (ctx.sim(cat(u, x), u) && !member_up(A, UPWord{u, x})) return u;
    return std::nullopt;
}

inline std::optional<Word> find_x_S(SampleContext& ctx, const Word& u, const Automaton& A) {
    for (const auto& x : positive_loops(ctx, u))
        if (ctx.sim(cat(u, x), u) && !member_up(A, UPWord{u, x})) return x;
    return std::nullopt;
}

inline PairState find_pointed_in_S(SampleContext& ctx, const Word& u, const Word& v, FindPointedTrace* trace = nullptr) {
    const size_t limit = 4 * ctx.sample().size() + 16;
    FindPointedTrace t;
    t.input = {u, v};
    Word vbar = v;
    for (;;) {
        if (vbar.size() > limit) throw detail::Abort{"pointed search grew too long"};
        std::vector<Word> cands;
        for (const auto& ls : ctx.lassos_after(u, 0)) {
            if (!SampleContext::prefix_of_power(vbar, ls.gamma)) continue;
            auto [lo, hi] = ctx.j_range(vbar.size(), ls.gamma.size());
            for (size_t j = lo; j <= hi; ++j) {
                Word s = power(ls.gamma, j);
                cands.push_back(Word(s.begin() + static_cast<long>(vbar.size()), s.end()));
            }
        }
        std::optional<Word> x;
        for (const auto& c : detail::sorted_unique(std::move(cands)))
            if (ctx.sim(cat(u, vbar, c), u) && ctx.nbot(u, cat(vbar, c, vbar))) {
                x = c;
                break;
            }
        if (!x) break;
        int m = 1;
        Word xv = cat(*x, vbar);
        for (int k = static_cast<int>(ctx.lmax()) + 2; k > 1; --k)
            if (ctx.nbot(u, cat(vbar, power(xv, static_cast<size_t>(k))))) {
                m = k;
                break;
            }
        t.loop1.push_back({*x, m});
        vbar = cat(vbar, power(xv, static_cast<size_t>(m)));
    }
    Word w;
    for (;;) {
        Word head = cat(w, vbar);
        if (head.size() > limit) throw detail::Abort{"pointed search grew too long"};
        std::vector<Word> cands;
        for (const auto& ls : ctx.lassos_after(u, 1)) {
            if (!SampleContext::prefix_of_power(head, ls.gamma)) continue;
            auto [lo, hi] = ctx.j_range(head.size() + vbar.size(), ls.gamma.size());
            for (size_t j = lo; j <= hi; ++j) {
                Word s = power(ls.gamma, j);
                for (size_t i = head.size(); i + vbar.size() <= s.size(); ++i)
                    if (std::equal(vbar.begin(), vbar.end(), s.begin() + static_cast<long>(i)))
                        cands.push_back(Word(s.begin() + static_cast<long>(head.size()), s.begin() + static_cast<long>(i)));
            }
        }
        std::optional<Word> x;
        for (const auto& c : detail::sorted_unique(std::move(cands))) {
            Word full = cat(head, c, vbar);
            if (ctx.sim(cat(u, head, c), u) && ctx.nbot(u, full) && ctx.napprox(u, full, u, head)) {
                x = c;
                break;
            }
        }
        if (!x) break;
        t.loop2.push_back(*x);
        w = cat(head, *x);
    }
    t.result = {u, cat(w, vbar)};
    if (trace) *trace = t;
    return t.result;
}

inline SampleComponent construct_S(SampleContext& ctx, const Word& u, const Word& v) {
    const size_t limit = 4 * ctx.sample().size() + 16;
    SampleComponent c;
    c.anchor = {u, v};
    c.ext.push_back({});
    if (v.empty()) return c;
    std::vector<Word> cands;
    for (const auto& ls : ctx.lassos_after(u, 1)) {
        if (!SampleContext::prefix_of_power(v, ls.gamma)) continue;
        auto [lo, hi] = ctx.j_range(v.size(), ls.gamma.size());
        Word s = power(ls.gamma, hi);
        for (size_t i = v.size(); i <= s.size(); ++i)
            cands.push_back(Word(s.begin() + static_cast<long>(v.size()), s.begin() + static_cast<long>(i)));
    }
    cands = detail::sorted_unique(std::move(cands));
    for (;;) {
        std::optional<Word> pick;
        for (const auto& x : cands) {
            if (std::find(c.ext.begin(), c.ext.end(), x) != c.ext.end()) continue;
            Word vx = cat(v, x);
            if (!ctx.nbot(u, vx)) continue;
            bool all = true;
            for (const auto& y : c.ext)
                if (!ctx.napprox(u, vx, u, cat(v, y))) {
                    all = false;
                    break;
                }
            if (all) {
                pick = x;
                break;
            }
        }
        if (!pick) break;
        if (c.ext.size() > limit) throw detail::Abort{"component grew too large"};
        c.ext.push_back(*pick);
    }
    const int K = ctx.sample().sigma.size();
    for (size_t x = 0; x < c.ext.size(); ++x)
        for (Letter a = 0; a < K; ++a) {
            Word vxa = cat(v, c.ext[x], Word{a});
            if (!ctx.nbot(u, vxa)) continue;
            for (size_t y = 0; y < c.ext.size(); ++y) {
                bool ok = true;
                for (size_t z = 0; z < c.ext.size() && ok; ++z)
                    if (z != y && !ctx.napprox(u, vxa, u, cat(v, c.ext[z]))) ok = false;
                if (ok) c.edges.push_back({static_cast<int>(x), a, static_cast<int>(y)});
            }
        }
    return c;
}

struct SampleLearnLog {
    std::vector<Word> R, NT;
    std::vector<FindPointedTrace> find_pointed;
};

inline LearnResult learn(const Sample& S, SampleLearnLog* log = nullptr, size_t det_cap = 200000) {
    SampleContext ctx(S);
    LearnResult res;
    SampleLearnLog lg;
    try {
        ctx.set_R(find_R_S(ctx));
        lg.R = ctx.R();
        lg.NT = find_NT_S(ctx);
        std::vector<SampleComponent> comps;
        for (const auto& u : ctx.R())
            if (std::find(lg.NT.begin(), lg.NT.end(), u) == lg.NT.end()) comps.push_back(construct_S(ctx, u, {}));
        std::vector<PairState> labels;
        Automaton A = automaton_S(ctx, comps, &labels);
        const size_t limit = 4 * S.size() + 16;
        while (!consistent_with(S, A)) {
            auto u = find_u_S(ctx, A);
            if (!u) throw detail::Abort{"no u"};
            auto x = find_x_S(ctx, *u, A);
            if (!x) throw detail::Abort{"no x"};
            size_t d = 1;
            for (const auto& c : comps) d = std::max(d, c.size());
            FindPointedTrace tr;
            auto p = find_pointed_in_S(ctx, *u, power(*x, d), &tr);
            lg.find_pointed.push_back(tr);
            comps.push_back(construct_S(ctx, p.u, p.v));
            std::vector<PairState> nl;
            Automaton B = automaton_S(ctx, comps, &nl);
            if (static_cast<size_t>(B.n) > limit) throw detail::Abort{"too many states"};
            for (const auto& w : S.negatives())
                if (member_up(B, w)) throw detail::Abort{"hypothesis accepts a negative word"};
            try {
                if (not_included(A, B, det_cap) || !not_included(B, A, det_cap)) throw detail::Abort{"no strict growth"};
            } catch (const CapError&) {
                throw detail::Abort{"determinization cap"};
            }
            A = std::move(B);
            labels = std::move(nl);
        }
        res.aut = std::move(A);
        res.labels = std::move(labels);
    } catch (const detail::Abort& a) {
        res = LearnResult{};
        res.aut = default_automaton(S);
        res.aborted = true;
        res.reason = a.reason;
    }
    if (log) *log = std::move(lg);
    return res;
}

}  // namespace hdcw
