#include <gtest/gtest.h>

#include "brute.hpp"

using namespace hdcw;

namespace {

struct Fixture {
    LanguageOracle o;
    CanonicalAutomaton ca;
    Sample S;
    explicit Fixture(const Automaton& A) : o(A), ca(idealized_learn(o)), S(characteristic_sample(o)) {}
    Word w(const char* s) const { return o.sigma().parse_word(s); }
};

Automaton single_lasso(const Alphabet& sigma, const Word& u, const Word& v) {
    Automaton N(sigma, 0);
    int p = N.add_state();
    N.add_initial(p);
    for (Letter a : u) {
        int q = N.add_state();
        N.add(p, a, 1, q);
        p = q;
    }
    int loop = p;
    for (size_t i = 0; i < v.size(); ++i) {
        int q = i + 1 == v.size() ? loop : N.add_state();
        N.add(p, v[i], 2, q);
        p = q;
    }
    return complete(N);
}

}  // namespace

TEST(SampleRelations, Membership) {
    Sample S(Alphabet({"a", "b"}));
    S.add({{0}, {1}}, true);
    SampleContext ctx(S);
    EXPECT_TRUE(ctx.in_S({0, 1}, {1, 1}));
    EXPECT_FALSE(ctx.notin_S({0, 1}, {1, 1}));
    EXPECT_FALSE(ctx.in_S({}, {0}));
    EXPECT_FALSE(ctx.notin_S({}, {0}));
}

TEST(SampleRelations, EmptySample) {
    Sample S(Alphabet({"a", "b"}));
    SampleContext ctx(S);
    for (const auto& x : brute::words(2, 0, 2))
        for (const auto& y : brute::words(2, 0, 2)) EXPECT_FALSE(ctx.nsim(x, y));
    EXPECT_EQ(find_R_S(ctx), std::vector<Word>{Word{}});
    auto r = learn(S);
    EXPECT_EQ(r.aut.n, 1);
    EXPECT_FALSE(member_up(r.aut, {{}, {0}}));
}

TEST(SampleRelations, AstartCharacteristicSample) {
    Fixture f(make_astart());
    EXPECT_TRUE(consistent_with(f.S, f.o));
    SampleContext ctx(f.S);
    for (const auto& [w, l] : f.S.entries) EXPECT_EQ(ctx.in_S(w.spoke, w.period), f.o.mem_up(w));
    EXPECT_TRUE(ctx.nsim(f.w("a"), f.w("b")));
    for (const auto& x : brute::words(3, 0, 3)) EXPECT_FALSE(ctx.nsim(x, x));
    ctx.set_R(find_R_S(ctx));
    EXPECT_EQ(ctx.R(), (std::vector<Word>{{}, f.w("a"), f.w("b"), f.w("ab")}));
    EXPECT_EQ(find_NT_S(ctx), (std::vector<Word>{f.w("a"), f.w("ab")}));
}

TEST(SampleRelations, SoundAgainstTheOracle) {
    for (const auto& A : {make_astart(), make_counter(1), make_allfin(2)}) {
        Fixture f(A);
        SampleContext ctx(f.S);
        ctx.set_R(find_R_S(ctx));
        const int K = f.o.letters();
        auto ws = brute::words(K, 0, 3);
        for (const auto& x : ws)
            for (const auto& y : ws) {
                if (ctx.nsim(x, y)) EXPECT_NE(f.o.class_of(x), f.o.class_of(y));
                if (ctx.sim(x, y)) EXPECT_EQ(f.o.class_of(x), f.o.class_of(y));
            }
        for (const auto& u : brute::words(K, 0, 2))
            for (const auto& v : ws) {
                if (v.empty()) EXPECT_TRUE(ctx.nbot(u, v));
                else if (ctx.nbot(u, v)) EXPECT_FALSE(f.o.bot_test(u, v));
            }
        for (const auto& v : brute::words(K, 1, 2))
            for (const auto& v2 : brute::words(K, 1, 2)) {
                if (v == v2) EXPECT_FALSE(ctx.napprox({}, v, {}, v2));
                if (ctx.napprox({}, v, {}, v2)) EXPECT_FALSE(f.o.approx_test({{}, v}, {{}, v2}));
            }
    }
}

TEST(SampleRelations, VerdictsSurviveExtensions) {
    Fixture f(make_astart());
    SampleContext base(f.S);
    base.set_R(find_R_S(base));
    Sample big = extend_consistently(f.S, f.o, 60, 3);
    SampleContext ext(big);
    ext.set_R(find_R_S(ext));
    auto ws = brute::words(3, 0, 2);
    for (const auto& x : ws)
        for (const auto& y : ws) {
            if (base.nsim(x, y)) EXPECT_TRUE(ext.nsim(x, y));
            if (base.sim(x, y)) EXPECT_TRUE(ext.sim(x, y));
        }
    for (const auto& u : ws)
        for (const auto& v : ws)
            if (base.nbot(u, v)) EXPECT_TRUE(ext.nbot(u, v));
}

TEST(SampleSearch, AstartMissingLasso) {
    Fixture f(make_astart());
    SampleContext ctx(f.S);
    ctx.set_R(find_R_S(ctx));
    auto NT = find_NT_S(ctx);
    std::vector<SampleComponent> comps;
    for (const auto& u : ctx.R())
        if (std::find(NT.begin(), NT.end(), u) == NT.end()) comps.push_back(construct_S(ctx, u, {}));
    Automaton A = automaton_S(ctx, comps);
    auto u = find_u_S(ctx, A);
    ASSERT_TRUE(u);
    EXPECT_EQ(*u, f.w("a"));
    auto x = find_x_S(ctx, *u, A);
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, f.w("a"));
}

TEST(SampleSearch, CounterPointedPair) {
    Fixture f(make_counter(2));
    SampleContext ctx(f.S);
    ctx.set_R(find_R_S(ctx));
    auto p = find_pointed(f.o, {}, f.w("a0a0"));
    EXPECT_TRUE(p.u.empty());
    EXPECT_EQ(p.v, f.w("a0a0a2a0a0a1a0a0a2a0a0"));

    LearnLog log;
    idealized_learn(f.o, &log);
    ASSERT_FALSE(log.find_pointed.empty());
    for (const auto& t : log.find_pointed) {
        FindPointedTrace tr;
        auto q = find_pointed_in_S(ctx, t.input.u, t.input.v, &tr);
        EXPECT_EQ(q.u, t.result.u);
        EXPECT_EQ(q.v, t.result.v);
        EXPECT_EQ(tr.loop1, t.loop1);
        EXPECT_EQ(tr.loop2, t.loop2);
    }
}

TEST(Learn, CharacteristicSamplesGiveCanonicalAutomata) {
    for (int k = 1; k <= 3; ++k)
        for (const auto& A : {make_allfin(k), make_astart(), make_counter(k)}) {
            Fixture f(A);
            auto r = learn(f.S);
            EXPECT_FALSE(r.aborted) << r.reason;
            EXPECT_TRUE(isomorphic(r.aut, f.ca.aut));
        }
    EXPECT_EQ(learn(Fixture(make_astart()).S).aut.n, 5);
    EXPECT_EQ(learn(Fixture(make_allfin(3)).S).aut.n, 3);
    EXPECT_EQ(learn(Fixture(make_counter(2)).S).aut.n, 6);
}

TEST(Learn, StableUnderExtensions) {
    Fixture f(make_astart());
    auto r = learn(f.S);
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Sample big = extend_consistently(f.S, f.o, 25, seed);
        SampleContext ctx(big);
        EXPECT_EQ(find_R_S(ctx), (std::vector<Word>{{}, f.w("a"), f.w("b"), f.w("ab")}));
        EXPECT_EQ(learn(big).aut, r.aut);
    }
}

TEST(Learn, AlwaysConsistent) {
    std::mt19937_64 rng(21);
    for (int it = 0; it < 200; ++it) {
        Sample S(Alphabet({"a", "b"}));
        for (int i = 0, m = 1 + static_cast<int>(rng() % 8); i < m; ++i) {
            auto w = random_up(rng, 2, 3, 3);
            if (!S.label(w)) S.add(w, rng() % 2 == 0);
        }
        auto r = learn(S);
        EXPECT_TRUE(consistent_with(S, r.aut));
        EXPECT_TRUE(hd_certificate(r.aut));
    }
}

TEST(Learn, SinglePositiveLasso) {
    Sample S(Alphabet({"a", "b"}));
    S.add({{}, {0}}, true);
    auto r = learn(S);
    EXPECT_TRUE(consistent_with(S, r.aut));
    EXPECT_TRUE(equivalent(default_automaton(S), single_lasso(S.sigma, {}, {0})).equal);
}

TEST(DefaultAutomaton, AcceptsExactlyThePositives) {
    Sample E(Alphabet({"a", "b"}));
    Automaton D0 = default_automaton(E);
    EXPECT_FALSE(member_up(D0, {{}, {0}}));
    EXPECT_TRUE(hd_certificate(D0));

    Sample S(Alphabet({"a", "b"}));
    S.add({{}, {0}}, true);
    S.add({{1}, {0}}, true);
    S.add({{}, {1}}, false);
    Automaton D = default_automaton(S);
    EXPECT_TRUE(hd_certificate(D));
    EXPECT_TRUE(member_up(D, {{}, {0}}));
    EXPECT_TRUE(member_up(D, {{1}, {0}}));
    std::mt19937_64 rng(6);
    int checked = 0;
    while (checked < 20) {
        auto w = random_up(rng, 2, 3, 3);
        if (S.label(w) == std::optional<bool>(true)) continue;
        EXPECT_FALSE(member_up(D, w));
        ++checked;
    }
}
