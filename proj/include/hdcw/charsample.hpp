#pragma once

#include "canonical.hpp"
#include "sample.hpp"

namespace hdcw {

namespace detail {

// Records, along a run of the oracle-driven construction, the labeled
// words the sample learner needs to reproduce each decision.
class Recorder {
public:
    explicit Recorder(const LanguageOracle& o) : o_(o), S_(o.sigma()) {}

    Sample take() { return std::move(S_); }

    void add(const Word& u, const Word& v) {
        if (!v.empty()) S_.add(UPWord{u, v}, o_.mem_up(u, v));
    }

    // A lasso separating the residuals of x and y, when they differ.
    void separate(const Word& x, const Word& y) {
        int p = o_.state_of(x), q = o_.state_of(y);
        if (o_.lang_class(p) == o_.lang_class(q)) return;
        auto w = inclusion_witness(o_.D(), p, o_.D(), q);
        if (!w) w = inclusion_witness(o_.D(), q, o_.D(), p);
        add(cat(x, w->spoke), w->period);
        add(cat(y, w->spoke), w->period);
    }

    // Separates x from every representative outside its class.
    void pin_class(const Word& x) {
        const int c = o_.class_of(x);
        for (const auto& r : o_.residual_reps())
            if (o_.class_of(r) != c) separate(x, r);
    }

    void residuals() {
        const auto& R = o_.residual_reps();
        for (size_t i = 0; i < R.size(); ++i)
            for (size_t j = i + 1; j < R.size(); ++j) separate(R[i], R[j]);
    }

    // u (v x)^omega in L with u v x ~ u.
    void not_bottom(const Word& u, const Word& v) {
        if (v.empty()) return;
        const int cu = o_.class_of(u);
        const Profile pv = o_.profile_of(v);
        auto x = o_.least_x([&](const Profile& px) { return o_.approx_bit(cu, pv, px); });
        if (!x) throw std::logic_error("charsample: pair is bottom");
        Word vx = cat(v, *x);
        add(u, vx);
        pin_class(cat(u, vx));
    }

    // Evidence that (u, v1) and (u, v2) are not related.
    void not_related(const Word& u, const Word& v1, const Word& v2) {
        const int cu = o_.class_of(u);
        auto d = o_.approx_diff(cu, o_.profile_of(v1), cu, o_.profile_of(v2));
        if (!d) throw std::logic_error("charsample: pairs are related");
        if (*d < 0) {
            separate(cat(u, v1), cat(u, v2));
            return;
        }
        Word z = o_.witness(*d);
        add(u, cat(v1, z));
        add(u, cat(v2, z));
        pin_class(cat(u, v1, z));
        pin_class(cat(u, v2, z));
    }

    void hypothesis(const CanonicalAutomaton& ca) {
        for (const auto& l : ca.labels) {
            Word uv = cat(l.u, l.v);
            pin_class(uv);
            for (Letter a = 0; a < o_.letters(); ++a) pin_class(cat(uv, Word{a}));
        }
    }

    void nontrivial(const Word& u) {
        for (Letter a = 0; a < o_.letters(); ++a)
            if (!o_.bot_test(u, Word{a})) {
                not_bottom(u, Word{a});
                return;
            }
    }

    void pointed(const FindPointedTrace& t) {
        const Word& u = t.input.u;
        Word vbar = t.input.v;
        for (const auto& [x, m] : t.loop1) {
            Word vx = cat(vbar, x);
            pin_class(cat(u, vx));
            not_bottom(u, cat(vx, vbar));
            add(u, vx);
            Word next = cat(vbar, power(cat(x, vbar), static_cast<size_t>(m)));
            not_bottom(u, next);
            vbar = next;
        }
        Word w;
        for (const auto& x : t.loop2) {
            Word head = cat(w, vbar);
            pin_class(cat(u, head, x));
            Word full = cat(head, x, vbar);
            not_bottom(u, full);
            not_related(u, full, head);
            w = cat(head, x);
        }
    }

    void component(const Component& c) {
        const Word& u = c.anchor.u;
        const Word& v = c.anchor.v;
        if (v.empty()) return;
        for (size_t i = 1; i < c.size(); ++i) {
            not_bottom(u, cat(v, c.ext[i]));
            for (size_t j = 0; j < i; ++j) not_related(u, cat(v, c.ext[i]), cat(v, c.ext[j]));
        }
        for (size_t m = 0; m < c.size(); ++m)
            for (Letter a = 0; a < o_.letters(); ++a) {
                int t = c.delta2[m][a];
                if (t < 0) continue;
                Word vma = cat(v, c.ext[m], Word{a});
                not_bottom(u, vma);
                for (size_t z = 0; z < c.size(); ++z)
                    if (static_cast<int>(z) != t) not_related(u, vma, cat(v, c.ext[z]));
            }
    }

private:
    const LanguageOracle& o_;
    Sample S_;
};

}  // namespace detail

// A sample from which the sample learner rebuilds the canonical automaton,
// and keeps doing so for every consistent extension.
inline Sample characteristic_sample(const LanguageOracle& o) {
    LearnLog log;
    idealized_learn(o, &log);
    detail::Recorder rec(o);
    rec.residuals();
    const auto& R = o.residual_reps();
    std::vector<Component> comps;
    for (const auto& u : R) {
        if (o.nt_test(u))
            rec.nontrivial(u);
        else
            comps.push_back(build_component(o, {u, {}}));
    }
    CanonicalAutomaton ca = assemble(o, comps);
    rec.hypothesis(ca);
    for (size_t i = 0; i < log.missing.size(); ++i) {
        const auto& [cls, x] = log.missing[i];
        const Word& u = R[cls];
        rec.add(u, x);
        rec.pin_class(cat(u, x));
        rec.pointed(log.find_pointed[i]);
        const Component& c = log.components[comps.size()];
        rec.component(c);
        comps.push_back(c);
        ca = assemble(o, comps);
        rec.hypothesis(ca);
    }
    return rec.take();
}

inline Sample characteristic_sample(const Automaton& A, Limits lim = Limits::from_env()) {
    LanguageOracle o(A, lim);
    return characteristic_sample(o);
}

}  // namespace hdcw
