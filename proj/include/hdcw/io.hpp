#pragma once

#include <functional>
#include <cstring>
#include <sstream>
#include <string>

#include "automaton.hpp"

namespace hdcw {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> t;
    for (std::string s; in >> s;) t.push_back(s);
    return t;
}

inline int parse_int(const std::string& s, const char* what) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + s + "'");
    }
    if (pos != s.size() || v < 0) throw ParseError(std::string("bad ") + what + " '" + s + "'");
    return v;
}

inline std::string strip_comment(const std::string& line) {
    auto h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

}  // namespace detail

inline std::string write_native(const Automaton& A, const std::vector<std::pair<Word, Word>>* labels = nullptr) {
    std::ostringstream o;
    o << "coBuchi v1\nalphabet";
    for (const auto& s : A.sigma.symbols()) o << ' ' << s;
    o << "\nstates " << A.n << "\ninitial";
    for (int p : A.initial) o << ' ' << p;
    o << '\n';
    if (labels)
        for (size_t i = 0; i < labels->size(); ++i)
            o << "# pair " << i << ' ' << A.sigma.format((*labels)[i].first) << ':' << A.sigma.format((*labels)[i].second)
              << '\n';
    for (const auto& t : A.transitions())
        o << "trans " << t.src << ' ' << A.sigma.name(t.letter) << ' ' << t.rank << ' ' << t.dst << '\n';
    return o.str();
}

inline Automaton read_native(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next = [&](std::vector<std::string>& tok) {
        while (std::getline(in, line)) {
            ++lineno;
            tok = detail::split_ws(detail::strip_comment(line));
            if (!tok.empty()) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
    std::vector<std::string> tok;
    if (!next(tok) || tok.size() != 2 || tok[0] != "coBuchi" || tok[1] != "v1") fail("expected 'coBuchi v1'");
    if (!next(tok) || tok[0] != "alphabet" || tok.size() < 2) fail("expected alphabet line");
    Alphabet sigma(std::vector<std::string>(tok.begin() + 1, tok.end()));
    if (!next(tok) || tok[0] != "states" || tok.size() != 2) fail("expected states line");
    Automaton A(sigma, detail::parse_int(tok[1], "state count"));
    while (next(tok)) {
        if (tok[0] == "initial") {
            for (size_t i = 1; i < tok.size(); ++i) {
                int p = detail::parse_int(tok[i], "state");
                if (p >= A.n) fail("initial state out of range");
                A.add_initial(p);
            }
        } else if (tok[0] == "trans") {
            if (tok.size() != 5) fail("expected 'trans src letter rank dst'");
            auto a = sigma.find(tok[2]);
            if (!a) fail("unknown letter '" + tok[2] + "'");
            int p = detail::parse_int(tok[1], "state"), r = detail::parse_int(tok[3], "rank"),
                q = detail::parse_int(tok[4], "state");
            if (r != 1 && r != 2) fail("rank must be 1 or 2");
            if (p >= A.n || q >= A.n) fail("state out of range");
            A.add(p, *a, r, q);
        } else {
            fail("unexpected '" + tok[0] + "'");
        }
    }
    return A;
}

inline Automaton parse_native(const std::string& text) {
    std::istringstream in(text);
    return read_native(in);
}

// HOA subset: one atomic proposition per letter, exactly one true at a time;
// acceptance "1 Fin(0)" with mark {0} on rank-1 transitions.
inline std::string write_hoa(const Automaton& A) {
    std::ostringstream o;
    const int K = A.letters();
    o << "HOA: v1\nStates: " << A.n << '\n';
    for (int p : A.initial) o << "Start: " << p << '\n';
    o << "AP: " << K;
    for (const auto& s : A.sigma.symbols()) o << " \"" << s << '"';
    o << "\nacc-name: co-Buchi\nAcceptance: 1 Fin(0)\n--BODY--\n";
    for (int p = 0; p < A.n; ++p) {
        o << "State: " << p << '\n';
        for (Letter a = 0; a < K; ++a)
            for (auto e : A.out[p][a]) {
                o << '[';
                for (int b = 0; b < K; ++b) o << (b ? "&" : "") << (b == a ? "" : "!") << b;
                o << "] " << e.dst << (e.rank == 1 ? " {0}" : "") << '\n';
            }
    }
    o << "--END--\n";
    return o.str();
}

namespace detail {

class HoaLexer {
public:
    explicit HoaLexer(std::string s) : s_(std::move(s)) {}

    // Token kinds: 'h' header name (ends with ':'), 'i' int, 's' string,
    // 'w' identifier, 'm' body marker, 'e' end, otherwise the punctuation character.
    struct Tok {
        char kind;
        std::string text;
    };

    Tok peek() {
        if (!have_) {
            cur_ = lex();
            have_ = true;
        }
        return cur_;
    }
    Tok next() {
        Tok t = peek();
        have_ = false;
        return t;
    }

private:
    Tok lex() {
        for (;;) {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (i_ + 1 < s_.size() && s_[i_] == '/' && s_[i_ + 1] == '*') {
                auto e = s_.find("*/", i_ + 2);
                if (e == std::string::npos) throw ParseError("HOA: unterminated comment");
                i_ = e + 2;
                continue;
            }
            break;
        }
        if (i_ >= s_.size()) return {'e', ""};
        for (const char* m : {"--BODY--", "--END--"})
            if (s_.compare(i_, std::strlen(m), m) == 0) {
                i_ += std::strlen(m);
                return {'m', m};
            }
        char c = s_[i_];
        if (c == '"') {
            std::string r;
            ++i_;
            while (i_ < s_.size() && s_[i_] != '"') {
                if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
                r += s_[i_++];
            }
            if (i_ >= s_.size()) throw ParseError("HOA: unterminated string");
            ++i_;
            return {'s', r};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            std::string r = s_.substr(i_, j - i_);
            i_ = j;
            return {'i', r};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '-'))
                ++j;
            std::string r = s_.substr(i_, j - i_);
            i_ = j;
            if (i_ < s_.size() && s_[i_] == ':') {
                ++i_;
                return {'h', r};
            }
            return {'w', r};
        }
        ++i_;
        return {c, std::string(1, c)};
    }

    std::string s_;
    size_t i_ = 0;
    bool have_ = false;
    Tok cur_{};
};

struct LabelExpr {
    // evaluates a label for the valuation where only AP `letter` is true
    HoaLexer& lx;
    int aps;

    std::function<bool(int)> parse_or() {
        auto l = parse_and();
        while (lx.peek().kind == '|') {
            lx.next();
            auto r = parse_and();
            l = [l, r](int x) { return l(x) || r(x); };
        }
        return l;
    }
    std::function<bool(int)> parse_and() {
        auto l = parse_not();
        while (lx.peek().kind == '&') {
            lx.next();
            auto r = parse_not();
            l = [l, r](int x) { return l(x) && r(x); };
        }
        return l;
    }
    std::function<bool(int)> parse_not() {
        auto t = lx.next();
        if (t.kind == '!') {
            auto e = parse_not();
            return [e](int x) { return !e(x); };
        }
        if (t.kind == '(') {
            auto e = parse_or();
            if (lx.next().kind != ')') throw ParseError("HOA: expected ')'");
            return e;
        }
        if (t.kind == 'w' && t.text == "t") return [](int) { return true; };
        if (t.kind == 'w' && t.text == "f") return [](int) { return false; };
        if (t.kind == 'i') {
            int ap = parse_int(t.text, "AP index");
            if (ap >= aps) throw ParseError("HOA: AP index out of range");
            return [ap](int x) { return x == ap; };
        }
        throw ParseError("HOA: bad label token '" + t.text + "'");
    }
};

}  // namespace detail

inline Automaton parse_hoa(const std::string& text) {
    detail::HoaLexer lx(text);
    auto expect = [&](char kind, const char* what) {
        auto t = lx.next();
        if (t.kind != kind) throw ParseError(std::string("HOA: expected ") + what + ", got '" + t.text + "'");
        return t;
    };
    auto h = lx.next();
    if (h.kind != 'h' || h.text != "HOA") throw ParseError("HOA: missing 'HOA:' header");
    expect('w', "version");
    int states = -1;
    StateSet starts;
    std::vector<std::string> aps;
    bool acc_ok = false, have_acc = false;
    for (;;) {
        auto t = lx.next();
        if (t.kind == 'e') throw ParseError("HOA: missing --BODY--");
        if (t.kind == 'm' && t.text == "--BODY--") break;
        if (t.kind != 'h') throw ParseError("HOA: expected header item, got '" + t.text + "'");
        if (t.text == "States") {
            states = detail::parse_int(expect('i', "state count").text, "state count");
        } else if (t.text == "Start") {
            starts.push_back(detail::parse_int(expect('i', "start state").text, "state"));
            if (lx.peek().kind == '&') throw ParseError("HOA: conjunctive start states are not supported");
        } else if (t.text == "AP") {
            int n = detail::parse_int(expect('i', "AP count").text, "AP count");
            for (int i = 0; i < n; ++i) aps.push_back(expect('s', "AP name").text);
        } else if (t.text == "Acceptance") {
            have_acc = true;
            auto n = lx.next();
            auto f = lx.next();
            auto lp = lx.next();
            auto z = lx.next();
            auto rp = lx.next();
            acc_ok = n.text == "1" && f.text == "Fin" && lp.kind == '(' && z.text == "0" && rp.kind == ')';
            auto after = lx.peek();
            if (after.kind == '&' || after.kind == '|') acc_ok = false;
            if (!acc_ok) throw ParseError("HOA: only 'Acceptance: 1 Fin(0)' is supported");
        } else {
            // skip the values of any other header item
            while (lx.peek().kind != 'h' && lx.peek().kind != 'm' && lx.peek().kind != 'e') lx.next();
        }
    }
    if (!have_acc || !acc_ok) throw ParseError("HOA: missing acceptance condition");
    if (states < 0) throw ParseError("HOA: missing States");
    if (aps.empty()) throw ParseError("HOA: missing AP");
    std::sort(starts.begin(), starts.end());
    Automaton A(Alphabet(aps), states);
    for (int p : starts) {
        if (p >= states) throw ParseError("HOA: start state out of range");
        A.add_initial(p);
    }
    const int K = static_cast<int>(aps.size());
    auto read_marks = [&]() {
        bool marked = false;
        if (lx.peek().kind != '{') return false;
        lx.next();
        while (lx.peek().kind == 'i') {
            auto m = lx.next();
            if (m.text != "0") throw ParseError("HOA: unknown acceptance set " + m.text);
            marked = true;
        }
        expect('}', "'}'");
        return marked;
    };
    int cur = -1;
    bool state_marked = false;
    for (;;) {
        auto t = lx.peek();
        if (t.kind == 'm') {
            if (lx.next().text != "--END--") throw ParseError("HOA: expected --END--");
            break;
        }
        if (t.kind == 'e') throw ParseError("HOA: missing --END--");
        if (t.kind == 'h' && t.text == "State") {
            lx.next();
            if (lx.peek().kind == '[') throw ParseError("HOA: state labels are not supported");
            cur = detail::parse_int(expect('i', "state").text, "state");
            if (cur >= states) throw ParseError("HOA: state out of range");
            if (lx.peek().kind == 's') lx.next();
            state_marked = read_marks();
            continue;
        }
        if (cur < 0) throw ParseError("HOA: edge before State");
        if (t.kind != '[') throw ParseError("HOA: implicit edge labels are not supported");
        lx.next();
        detail::LabelExpr le{lx, K};
        auto label = le.parse_or();
        expect(']', "']'");
        int dst = detail::parse_int(expect('i', "edge target").text, "state");
        if (dst >= states) throw ParseError("HOA: edge target out of range");
        if (lx.peek().kind == '&') throw ParseError("HOA: universal edges are not supported");
        bool marked = read_marks() || state_marked;
        for (Letter a = 0; a < K; ++a)
            if (label(a)) A.add(cur, a, marked ? 1 : 2, dst);
    }
    return A;
}

// Native or HOA, chosen by the first token.
inline Automaton parse_automaton(const std::string& text) {
    auto p = text.find_first_not_of(" \t\r\n");
    if (p != std::string::npos && text.compare(p, 4, "HOA:") == 0) return parse_hoa(text);
    return parse_native(text);
}

inline std::string write_dot(const Automaton& A, const std::vector<std::pair<Word, Word>>* labels = nullptr) {
    std::ostringstream o;
    o << "digraph A {\n  rankdir=LR;\n";
    for (int p = 0; p < A.n; ++p) {
        o << "  " << p << " [label=\"" << p;
        if (labels && p < static_cast<int>(labels->size()))
            o << "\\n(" << A.sigma.format((*labels)[p].first) << ',' << A.sigma.format((*labels)[p].second) << ')';
        o << '"' << (A.is_initial(p) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    }
    for (const auto& t : A.transitions())
        o << "  " << t.src << " -> " << t.dst << " [label=\"" << A.sigma.name(t.letter) << ':' << t.rank << '"'
          << (t.rank == 1 ? ", style=dashed" : "") << "];\n";
    o << "}\n";
    return o.str();
}

}  // namespace hdcw
