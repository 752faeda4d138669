#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hdcw {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a configurable size limit (determinization, profile monoid) is hit.
struct CapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Letter = int;
using Word = std::vector<Letter>;

inline bool lenlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

struct LenLexLess {
    bool operator()(const Word& a, const Word& b) const { return lenlex_less(a, b); }
};

struct WordHash {
    size_t operator()(const Word& w) const {
        uint64_t h = 1469598103934665603ull ^ w.size();
        for (Letter a : w) {
            h ^= static_cast<uint64_t>(a) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

inline Word cat(const Word& a, const Word& b) {
    Word r;
    r.reserve(a.size() + b.size());
    r.insert(r.end(), a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

template <class... Ws>
Word cat(const Word& a, const Word& b, const Ws&... rest) {
    return cat(cat(a, b), rest...);
}

inline Word power(const Word& w, size_t n) {
    Word r;
    r.reserve(w.size() * n);
    for (size_t i = 0; i < n; ++i) r.insert(r.end(), w.begin(), w.end());
    return r;
}

inline bool is_prefix(const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

// Ultimately periodic word spoke . period^omega.
struct UPWord {
    Word spoke;
    Word period;

    bool operator==(const UPWord&) const = default;
    auto operator<=>(const UPWord&) const = default;
    size_t size() const { return spoke.size() + period.size(); }
    Letter at(size_t i) const {
        if (i < spoke.size()) return spoke[i];
        return period[(i - spoke.size()) % period.size()];
    }
};

struct UPWordHash {
    size_t operator()(const UPWord& w) const {
        WordHash h;
        return h(w.spoke) * 31 + h(w.period);
    }
};

// Primitive root of a nonempty word.
inline Word primitive_root(const Word& v) {
    const size_t n = v.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (size_t i = d; i < n && ok; ++i) ok = v[i] == v[i - d];
        if (ok) return Word(v.begin(), v.begin() + d);
    }
    return v;
}

// Shortest spoke, primitive period. Two pairs denote the same omega-word
// iff their canonical forms coincide.
inline UPWord canonicalize(const UPWord& w) {
    if (w.period.empty()) throw std::invalid_argument("empty period");
    UPWord r{w.spoke, primitive_root(w.period)};
    while (!r.spoke.empty() && r.spoke.back() == r.period.back()) {
        r.spoke.pop_back();
        std::rotate(r.period.begin(), r.period.end() - 1, r.period.end());
    }
    return r;
}

// The omega-word after dropping its first n letters.
inline UPWord drop(const UPWord& w, size_t n) {
    if (n <= w.spoke.size()) return UPWord{Word(w.spoke.begin() + n, w.spoke.end()), w.period};
    size_t r = (n - w.spoke.size()) % w.period.size();
    Word p(w.period);
    std::rotate(p.begin(), p.begin() + r, p.end());
    return UPWord{{}, p};
}

inline bool is_prefix(const Word& p, const UPWord& w) {
    for (size_t i = 0; i < p.size(); ++i)
        if (w.at(i) != p[i]) return false;
    return true;
}

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> syms) : syms_(std::move(syms)) {
        for (size_t i = 0; i < syms_.size(); ++i) {
            const auto& s = syms_[i];
            if (s.empty()) throw ParseError("empty symbol");
            for (char c : s)
                if (c == ':' || c == '.' || c == '#' || c == ',' || std::isspace(static_cast<unsigned char>(c)))
                    throw ParseError("bad character in symbol '" + s + "'");
            if (!index_.emplace(s, static_cast<Letter>(i)).second) throw ParseError("duplicate symbol '" + s + "'");
        }
        for (const auto& a : syms_)
            for (const auto& b : syms_)
                if (&a != &b && b.size() > a.size() && b.compare(0, a.size(), a) == 0) compact_ = false;
        for (const auto& a : syms_) max_len_ = std::max(max_len_, a.size());
    }

    int size() const { return static_cast<int>(syms_.size()); }
    const std::vector<std::string>& symbols() const { return syms_; }
    const std::string& name(Letter a) const { return syms_.at(static_cast<size_t>(a)); }
    bool operator==(const Alphabet& o) const { return syms_ == o.syms_; }

    std::optional<Letter> find(std::string_view s) const {
        auto it = index_.find(std::string(s));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Greedy longest match; '.' and whitespace act as optional separators.
    Word parse_word(std::string_view s) const {
        Word w;
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            if (c == '.' || std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            size_t best = 0;
            Letter bl = -1;
            for (size_t len = std::min(max_len_, s.size() - i); len >= 1; --len) {
                auto f = find(s.substr(i, len));
                if (f) {
                    best = len;
                    bl = *f;
                    break;
                }
            }
            if (!best) throw ParseError("unknown symbol at '" + std::string(s.substr(i)) + "'");
            w.push_back(bl);
            i += best;
        }
        return w;
    }

    std::string format(const Word& w) const {
        std::string r;
        for (size_t i = 0; i < w.size(); ++i) {
            if (i && !compact_) r += '.';
            r += name(w[i]);
        }
        return r;
    }

    UPWord parse_up(std::string_view s) const {
        auto c = s.find(':');
        if (c == std::string_view::npos) throw ParseError("expected u:v, got '" + std::string(s) + "'");
        UPWord w{parse_word(s.substr(0, c)), parse_word(s.substr(c + 1))};
        if (w.period.empty()) throw ParseError("empty period in '" + std::string(s) + "'");
        return w;
    }

    std::string format(const UPWord& w) const { return format(w.spoke) + ":" + format(w.period); }

private:
    std::vector<std::string> syms_;
    std::unordered_map<std::string, Letter> index_;
    bool compact_ = true;
    size_t max_len_ = 0;
};

}  // namespace hdcw
