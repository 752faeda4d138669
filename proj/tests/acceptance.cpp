#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "brute.hpp"

using namespace hdcw;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.pass) ++failures;
    std::printf("criterion %d %s: %s (%.2fs) %s\n", id, title, r.pass ? "PASS" : "FAIL", s, r.detail.c_str());
    std::fflush(stdout);
}

std::vector<FamilySpec> families_upto(int kmax) {
    std::vector<FamilySpec> r;
    for (int k = 1; k <= kmax; ++k) r.push_back({Family::allfin, k});
    r.push_back({Family::astart, 1});
    for (int k = 1; k <= kmax; ++k) r.push_back({Family::counter, k});
    return r;
}

std::string tag(const FamilySpec& f) {
    return f.family == Family::astart ? "astart" : family_name(f.family) + std::to_string(f.k);
}

// Groups items into equivalence classes under eq; returns class index per item.
template <class T>
std::vector<int> cluster(const std::vector<T>& items, const std::function<bool(const T&, const T&)>& eq, int* count) {
    std::vector<int> rep, cls(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        int found = -1;
        for (size_t c = 0; c < rep.size() && found < 0; ++c)
            if (eq(items[rep[c]], items[i])) found = static_cast<int>(c);
        if (found < 0) {
            found = static_cast<int>(rep.size());
            rep.push_back(static_cast<int>(i));
        }
        cls[i] = found;
    }
    *count = static_cast<int>(rep.size());
    return cls;
}

Outcome canonical_sizes() {
    std::ostringstream d;
    bool ok = true;
    std::vector<std::pair<FamilySpec, int>> want;
    for (int k = 1; k <= 4; ++k) want.push_back({{Family::allfin, k}, k});
    want.push_back({{Family::astart, 1}, 5});
    for (int k = 1; k <= 3; ++k) want.push_back({{Family::counter, k}, 2 * (k + 1)});
    for (const auto& [f, n] : want) {
        int got = minimize(make(f)).aut.n;
        d << tag(f) << '=' << got << ' ';
        ok &= got == n;
    }
    return {ok, d.str()};
}

Outcome class_counts() {
    std::ostringstream d;
    bool ok = true;
    using Pair = std::pair<Word, Word>;
    for (int k = 1; k <= 3; ++k) {
        LanguageOracle o(make({Family::allfin, k}));
        auto ca = idealized_learn(o);
        std::vector<Pair> reps{{{}, {}}};
        for (int mask = 1; mask < (1 << k); ++mask) {
            Word v;
            for (int i = 0; i < k; ++i)
                if (mask >> i & 1) v.push_back(i);
            reps.push_back({{}, v});
        }
        int classes = 0;
        auto cls = cluster<Pair>(reps, [&](const Pair& a, const Pair& b) { return o.equivL_test(a, b); }, &classes);
        // every short pair falls into one of the representative classes
        bool covered = true;
        for (const auto& v : brute::words(k, 0, 4)) {
            bool hit = false;
            for (const auto& r : reps)
                if (o.equivL_test({{}, v}, r)) hit = true;
            covered &= hit;
        }
        std::vector<char> pointed(classes, 0);
        for (size_t i = 0; i < reps.size(); ++i)
            if (theta_diag(ca, reps[i].first, reps[i].second).size() == 1) pointed[cls[i]] = 1;
        int np = static_cast<int>(std::count(pointed.begin(), pointed.end(), 1));
        d << "allfin" << k << ": classes=" << classes << " pointed=" << np << (covered ? "" : " (uncovered pair)") << "; ";
        ok &= classes == (1 << k) && np == k && covered;
    }
    LanguageOracle o(make_astart());
    auto ca = idealized_learn(o);
    std::vector<Pair> pairs;
    for (const auto& u : brute::words(3, 0, 2))
        for (const auto& v : brute::words(3, 0, 3))
            if (!o.bot_test(u, v)) pairs.push_back({u, v});
    int classes = 0;
    auto cls = cluster<Pair>(pairs, [&](const Pair& a, const Pair& b) { return o.equivL_test(a, b); }, &classes);
    std::vector<char> pointed(classes, 0);
    for (size_t i = 0; i < pairs.size(); ++i)
        if (theta_diag(ca, pairs[i].first, pairs[i].second).size() == 1) pointed[cls[i]] = 1;
    int nonpointed = static_cast<int>(std::count(pointed.begin(), pointed.end(), 0));
    d << "astart: nonbot=" << classes << " nonpointed=" << nonpointed;
    ok &= classes == 6 && nonpointed == 1;
    return {ok, d.str()};
}

Outcome pointed_trace() {
    LanguageOracle o(make_counter(2));
    FindPointedTrace t;
    auto p = find_pointed(o, {}, {0, 0}, &t);
    const auto& S = o.sigma();
    bool ok = p.u.empty() && p.v == S.parse_word("a0a0a2a0a0a1a0a0a2a0a0") && t.loop1.size() == 1 &&
              t.loop1[0].first == Word{2} && t.loop1[0].second == 1 && t.loop2.size() == 1 && t.loop2[0] == Word{1};
    std::ostringstream d;
    d << "result (" << S.format(p.u) << ", " << S.format(p.v) << ")";
    for (const auto& [x, m] : t.loop1) d << " x1=" << S.format(x) << " m=" << m;
    for (const auto& x : t.loop2) d << " x2=" << S.format(x);
    return {ok, d.str()};
}

Outcome exponential_representatives() {
    std::ostringstream d;
    bool ok = true;
    for (int k = 1; k <= 3; ++k) {
        Automaton A = make_counter(k);
        size_t lift_all = brute::shortest_lift(A, k);
        size_t lift_lower = brute::shortest_lift(A, k - 1);
        size_t want = static_cast<size_t>(*family_facts({Family::counter, k}).v_length);
        Word vk = counter_v(k);
        bool lengths = lift_all == want && want == (size_t{1} << (k + 1)) - 1 && lift_lower == vk.size();

        LanguageOracle o(A);
        Word target = cat(Word{k}, vk);
        auto [tc, tset] = o.sfl_signature({}, target);
        std::map<StateSet, bool> memo;
        size_t shorter = 0;
        for (const auto& w : brute::words(o.letters(), 0, target.size() - 1))
            for (size_t cut = 0; cut <= w.size(); ++cut) {
                Word u(w.begin(), w.begin() + static_cast<long>(cut)), v(w.begin() + static_cast<long>(cut), w.end());
                auto [c, s] = o.sfl_signature(u, v);
                if (c != tc) continue;
                auto it = memo.find(s);
                if (it == memo.end()) it = memo.emplace(s, o.same_safe_language(s, tset)).first;
                if (it->second) ++shorter;
            }
        d << "k=" << k << ": lift=" << lift_all << " |v_k|=" << vk.size() << " |a_k v_k|=" << target.size()
          << " shorter reps=" << shorter << "; ";
        ok &= lengths && shorter == 0;
    }
    return {ok, d.str()};
}

struct MinimizeRun {
    std::string name;
    CanonicalAutomaton ca;
    LearnLog log;
};

std::vector<MinimizeRun> structural_runs;

Outcome structural() {
    std::vector<std::pair<std::string, Automaton>> inputs;
    for (const auto& f : families_upto(3)) inputs.push_back({tag(f), make(f)});
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) inputs.push_back({"random" + std::to_string(i), brute::random_automaton(rng, 5, 2)});
    int bad = 0;
    std::string first;
    for (const auto& [name, A] : inputs) {
        MinimizeRun r{name, {}, {}};
        r.ca = minimize(A, &r.log);
        bool good = hd_certificate(r.ca.aut) && structural_checks(r.ca.aut).normalized && brute::safe_minimal(r.ca.aut) &&
                    equivalent(r.ca.aut, A).equal;
        if (!good && bad++ == 0) first = name;
        structural_runs.push_back(std::move(r));
    }
    std::ostringstream d;
    d << inputs.size() << " automata, " << bad << " failing" << (bad ? " first " + first : "");
    return {bad == 0, d.str()};
}

Outcome pointed_bound() {
    size_t calls = 0, bad = 0, worst_len = 0;
    for (const auto& r : structural_runs)
        for (const auto& t : r.log.find_pointed) {
            ++calls;
            const uint64_t a = static_cast<uint64_t>(r.ca.alpha);
            const uint64_t bound = 2 * a * a * t.input.v.size() + 4 * a * a * a * a * a * a;
            worst_len = std::max(worst_len, t.result.v.size());
            if (t.result.v.size() > bound || !is_prefix(t.input.v, t.result.v)) ++bad;
        }
    std::ostringstream d;
    d << calls << " invocations, " << bad << " violations, longest result " << worst_len;
    return {bad == 0 && calls > 0, d.str()};
}

Outcome learning_in_the_limit() {
    std::ostringstream d;
    bool ok = true;
    for (const auto& f : families_upto(3)) {
        LanguageOracle o(make(f));
        auto ca = idealized_learn(o);
        Sample S = characteristic_sample(o);
        auto r = learn(S);
        bool iso = !r.aborted && isomorphic(r.aut, ca.aut);
        int same = 0;
        for (uint64_t seed = 0; seed < 50; ++seed) {
            auto r2 = learn(extend_consistently(S, o, 25, seed));
            if (!r2.aborted && r2.aut == r.aut) ++same;
        }
        d << tag(f) << ": |S|=" << S.count() << " iso=" << iso << " stable=" << same << "/50; ";
        ok &= iso && same == 50;
    }
    return {ok, d.str()};
}

Outcome consistency() {
    std::mt19937_64 rng(99);
    int bad = 0, aborted = 0;
    for (int it = 0; it < 1000; ++it) {
        Sample S(Alphabet({"a", "b"}));
        int m = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < m; ++i) {
            int len = 1 + static_cast<int>(rng() % 6);
            int spoke = static_cast<int>(rng() % static_cast<uint64_t>(len));
            UPWord w;
            for (int j = 0; j < len; ++j) (j < spoke ? w.spoke : w.period).push_back(static_cast<Letter>(rng() % 2));
            if (!S.label(w)) S.add(w, rng() % 2 == 0);
        }
        auto r = learn(S);
        aborted += r.aborted;
        for (const auto& w : S.positives()) bad += !member_up(r.aut, w);
        for (const auto& w : S.negatives()) bad += member_up(r.aut, w);
    }
    std::ostringstream d;
    d << "1000 samples, " << bad << " misclassified entries, " << aborted << " fell back to the default automaton";
    return {bad == 0, d.str()};
}

Outcome oracle_soundness() {
    std::ostringstream d;
    bool ok = true;
    std::vector<FamilySpec> fams{{Family::allfin, 1}, {Family::allfin, 2}, {Family::astart, 1}, {Family::counter, 1},
                                 {Family::counter, 2}};
    for (const auto& f : fams) {
        Automaton A = make(f);
        LanguageOracle o(A);
        brute::Residuals res(A, 2, 2);
        std::mt19937_64 rng(7 + static_cast<uint64_t>(f.k) * 31 + static_cast<uint64_t>(f.family) * 1000);
        const int K = o.letters();
        auto rw = [&](size_t lo, size_t hi) {
            size_t len = lo + rng() % (hi - lo + 1);
            Word w;
            for (size_t i = 0; i < len; ++i) w.push_back(static_cast<Letter>(rng() % static_cast<uint64_t>(K)));
            return w;
        };
        int mem_bad = 0, bot_bad = 0, approx_bad = 0, related = 0;
        for (int q = 0; q < 1000; ++q) {
            Word u = rw(0, 4), v = rw(1, 4);
            mem_bad += o.mem_up(u, v) != brute::accepts(A, u, v);
        }
        for (int q = 0; q < 1000; ++q) {
            Word u = rw(0, 3), v = rw(0, 3);
            bot_bad += o.bot_test(u, v) != brute::bottom(A, res, u, v, 6);
        }
        for (int q = 0; q < 1000; ++q) {
            Word u = rw(0, 2), v = rw(1, 3);
            Word u2 = rng() % 2 ? u : rw(0, 2);
            Word v2 = rng() % 3 ? cat(v, rw(0, 2)) : rw(1, 3);
            bool a = static_cast<bool>(o.approx_test({u, v}, {u2, v2}));
            related += a;
            approx_bad += a != brute::related(A, res, u, v, u2, v2, 6);
        }
        d << tag(f) << ": mem " << mem_bad << ", bot " << bot_bad << ", approx " << approx_bad << " (" << related
          << " related); ";
        ok &= mem_bad == 0 && bot_bad == 0 && approx_bad == 0;
    }
    return {ok, d.str()};
}

Outcome resolver() {
    std::ostringstream d;
    bool ok = true;
    for (const auto& f : families_upto(3)) {
        auto ca = minimize(make(f));
        const Automaton& A = ca.aut;
        std::mt19937_64 rng(5);
        int words = 0, late = 0;
        for (int tries = 0; words < 100 && tries < 20000; ++tries) {
            UPWord w = random_up(rng, A.letters(), 4, 4);
            if (!member_up(A, w)) continue;
            ++words;
            const size_t horizon = static_cast<size_t>(A.n) * static_cast<size_t>(A.n) * w.period.size();
            const size_t total = w.spoke.size() + horizon + 4 * static_cast<size_t>(A.n) * w.period.size();
            Resolver r(A);
            bool bad = false;
            for (size_t i = 0; i < total; ++i) {
                int rank = r.step(w.at(i));
                if (rank == 1 && i >= w.spoke.size() + horizon) bad = true;
            }
            late += bad;
        }
        d << tag(f) << ": " << words << " words, " << late << " late; ";
        ok &= late == 0;
    }
    return {ok, d.str()};
}

}  // namespace

int main() {
    report(1, "canonical sizes", canonical_sizes);
    report(2, "class counts", class_counts);
    report(3, "pointed-pair trace", pointed_trace);
    report(4, "exponential representatives", exponential_representatives);
    report(5, "structural guarantees", structural);
    report(6, "pointed-pair size bound", pointed_bound);
    report(7, "learning in the limit", learning_in_the_limit);
    report(8, "sample consistency", consistency);
    report(9, "oracle soundness", oracle_soundness);
    report(10, "resolver stabilization", resolver);
    return failures == 0 ? 0 : 1;
}
