#pragma once

#include <deque>
#include <map>
#include <optional>

#include "oracle.hpp"

namespace hdcw {

struct PairState {
    Word u;
    Word v;
    bool operator==(const PairState&) const = default;
};

struct Component {
    PairState anchor;
    std::vector<Word> ext;                 // member i is (u, v ext[i]); ext[0] = e
    std::vector<std::vector<int>> delta2;  // [member][letter] -> member, -1 when bottom

    size_t size() const { return ext.size(); }
    PairState member(size_t i) const { return {anchor.u, cat(anchor.v, ext[i])}; }
};

struct CanonicalAutomaton {
    Automaton aut;
    std::vector<PairState> labels;  // one per component member; a completion sink has none
    std::vector<int> component_of;
    int alpha = 0;

    std::vector<std::pair<Word, Word>> label_pairs() const {
        std::vector<std::pair<Word, Word>> r;
        for (const auto& l : labels) r.push_back({l.u, l.v});
        return r;
    }
};

struct FindPointedTrace {
    PairState input;
    std::vector<std::pair<Word, int>> loop1;  // (x, m)
    std::vector<Word> loop2;
    PairState result;
};

inline PairState find_pointed(const LanguageOracle& o, const Word& u, const Word& v, FindPointedTrace* trace = nullptr) {
    if (v.empty()) throw std::invalid_argument("find_pointed needs a nonempty v");
    FindPointedTrace t;
    t.input = {u, v};
    const int guard = 4 * o.states() + 8;
    Word vbar = v;
    for (int it = 0;; ++it) {
        if (it > guard) throw std::logic_error("find_pointed: first loop does not terminate");
        auto x = o.find_pointed_x1(u, vbar);
        if (!x) break;
        int m = o.max_m(u, vbar, *x);
        t.loop1.push_back({*x, m});
        vbar = cat(vbar, power(cat(*x, vbar), static_cast<size_t>(m)));
    }
    Word w;
    for (int it = 0;; ++it) {
        if (it > guard) throw std::logic_error("find_pointed: second loop does not terminate");
        auto x = o.find_pointed_x2(u, w, vbar);
        if (!x) break;
        t.loop2.push_back(*x);
        w = cat(w, vbar, *x);
    }
    t.result = {u, cat(w, vbar)};
    if (trace) *trace = t;
    return t.result;
}

// Members are the length-lex least extensions of each new approximation
// class; extensions are enumerated through their profiles.
inline Component build_component(const LanguageOracle& o, const PairState& p) {
    const int K = o.letters();
    if (p.v.empty()) {
        Component c;
        c.anchor = p;
        c.ext.push_back({});
        c.delta2.assign(1, std::vector<int>(K, -1));
        return c;
    }
    Component c;
    c.anchor = p;
    const int cu = o.class_of(p.u);
    const auto& Ru = o.class_states(cu);
    const Profile pv = o.profile_of(p.v);
    std::unordered_map<ApproxSig, int, ApproxSigHash> member;
    std::unordered_map<Profile, char, ProfileHash> done;
    for (size_t i = 0; i < o.profile_count(); ++i) {
        Profile pvw = pv.then(o.profile(static_cast<int>(i)));
        if (!done.emplace(pvw, 1).second) continue;
        if (LanguageOracle::image(pvw.g, Ru).empty()) continue;
        auto sig = o.approx_sig(cu, pvw);
        if (member.emplace(std::move(sig), static_cast<int>(c.ext.size())).second)
            c.ext.push_back(o.witness(static_cast<int>(i)));
    }
    if (c.ext.empty() || !c.ext[0].empty()) throw std::logic_error("build_component: anchor is bottom");
    c.delta2.assign(c.ext.size(), std::vector<int>(K, -1));
    for (size_t m = 0; m < c.ext.size(); ++m)
        for (Letter a = 0; a < K; ++a) {
            Profile q = o.profile_of(cat(p.v, c.ext[m], Word{a}));
            if (LanguageOracle::image(q.g, Ru).empty()) continue;
            auto it = member.find(o.approx_sig(cu, q));
            if (it == member.end()) throw std::logic_error("build_component: extension outside the component");
            c.delta2[m][a] = it->second;
        }
    return c;
}

inline CanonicalAutomaton assemble(const LanguageOracle& o, const std::vector<Component>& comps) {
    CanonicalAutomaton ca;
    const int K = o.letters();
    std::vector<int> base;
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        base.push_back(static_cast<int>(ca.labels.size()));
        for (size_t m = 0; m < comps[ci].size(); ++m) {
            ca.labels.push_back(comps[ci].member(m));
            ca.component_of.push_back(static_cast<int>(ci));
        }
    }
    const int n = static_cast<int>(ca.labels.size());
    Automaton A(o.sigma(), n);
    std::vector<int> cls(n);
    std::vector<std::vector<int>> next_cls(n, std::vector<int>(K));
    for (int s = 0; s < n; ++s) {
        int st = o.state_of(cat(ca.labels[s].u, ca.labels[s].v));
        cls[s] = o.lang_class(st);
        for (Letter a = 0; a < K; ++a) next_cls[s][a] = o.lang_class(o.D().step(st, a).dst);
        if (cls[s] == o.class_of({})) A.add_initial(s);
    }
    for (size_t ci = 0; ci < comps.size(); ++ci)
        for (size_t m = 0; m < comps[ci].size(); ++m)
            for (Letter a = 0; a < K; ++a)
                if (comps[ci].delta2[m][a] >= 0) A.add(base[ci] + static_cast<int>(m), a, 2, base[ci] + comps[ci].delta2[m][a]);
    for (int s = 0; s < n; ++s)
        for (Letter a = 0; a < K; ++a)
            for (int t = 0; t < n; ++t)
                if (next_cls[s][a] == cls[t]) A.add(s, a, 1, t);
    ca.aut = complete(A);
    ca.alpha = ca.aut.n;
    return ca;
}

struct LearnLog {
    std::vector<FindPointedTrace> find_pointed;
    std::vector<std::pair<int, Word>> missing;  // (class of u_i, x) per iteration
    std::vector<Component> components;
};

inline CanonicalAutomaton idealized_learn(const LanguageOracle& o, LearnLog* log = nullptr) {
    const auto& R = o.residual_reps();
    std::vector<Component> comps;
    for (const auto& u : R)
        if (!o.nt_test(u)) comps.push_back(build_component(o, {u, {}}));
    CanonicalAutomaton ca = assemble(o, comps);
    LearnLog lg;
    for (int iter = 0;; ++iter) {
        if (equivalent(o.D(), ca.aut)) break;
        if (iter > o.states() + 1) throw std::logic_error("idealized_learn: too many iterations");
        auto miss = o.find_missing(ca.aut);
        if (!miss) throw std::logic_error("idealized_learn: languages differ but no missing lasso");
        lg.missing.push_back(*miss);
        const Word& u = R[miss->first];
        size_t d = 1;
        for (const auto& c : comps) d = std::max(d, c.size());
        FindPointedTrace tr;
        PairState p = find_pointed(o, u, power(miss->second, d), &tr);
        lg.find_pointed.push_back(tr);
        for (const auto& l : ca.labels)
            if (o.equivL_test({l.u, l.v}, {p.u, p.v})) throw std::logic_error("idealized_learn: component already present");
        comps.push_back(build_component(o, p));
        ca = assemble(o, comps);
    }
    lg.components = comps;
    if (log) *log = std::move(lg);
    return ca;
}

// States reachable on u from an initial state, then safely on v.
inline StateSet theta_diag(const Automaton& A, const Word& u, const Word& v) {
    return safe_reach(A, post(A, A.initial, u), v);
}
inline StateSet theta_diag(const CanonicalAutomaton& ca, const Word& u, const Word& v) { return theta_diag(ca.aut, u, v); }

// Shortest z looping safely on q such that every state with the language of
// q either moves safely to q on z or has no safe run on z.
inline Word central_sequence(const Automaton& A, int q, size_t cap = Limits{}.det_states) {
    StateLanguages L(A, cap);
    std::vector<int> P;
    for (int p = 0; p < A.n; ++p)
        if (L.of(p) == L.of(q)) P.push_back(p);
    auto done = [&](const std::vector<int>& img) {
        for (size_t i = 0; i < P.size(); ++i) {
            if (P[i] == q && img[i] != q) return false;
            if (img[i] != q && img[i] != -1) return false;
        }
        return true;
    };
    std::map<std::vector<int>, std::pair<std::vector<int>, Letter>> parent;
    std::deque<std::vector<int>> todo{P};
    parent[P] = {{}, -1};
    while (!todo.empty()) {
        auto img = todo.front();
        todo.pop_front();
        if (done(img)) {
            Word z;
            for (auto cur = img; parent[cur].second >= 0; cur = parent[cur].first) z.push_back(parent[cur].second);
            std::reverse(z.begin(), z.end());
            return z;
        }
        for (Letter a = 0; a < A.letters(); ++a) {
            std::vector<int> nx(img.size());
            for (size_t i = 0; i < img.size(); ++i) nx[i] = img[i] < 0 ? -1 : safe_succ(A, img[i], a);
            if (parent.count(nx)) continue;
            if (parent.size() >= cap) throw CapError("central sequence search exceeded cap");
            parent[nx] = {img, a};
            todo.push_back(std::move(nx));
        }
    }
    throw std::logic_error("central_sequence: none exists");
}

// Complete -> deterministic -> normalized -> oracle -> canonical automaton.
inline CanonicalAutomaton minimize(const Automaton& A, LearnLog* log = nullptr, Limits lim = Limits::from_env()) {
    LanguageOracle o(A, lim);
    return idealized_learn(o, log);
}

}  // namespace hdcw
