#pragma once

#include "plmap.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace thompson {

struct Letter {
    std::int64_t index = 0;
    int sign = 1;

    friend bool operator==(const Letter& a, const Letter& b) { return a.index == b.index && a.sign == b.sign; }
};

/* A word in the generators x_k^{±1}.  The product a·b is the composite a∘b: b acts first. */
struct Word {
    std::vector<Letter> letters;
    bool normal = false; // set when letters are known to be in normal form

    Word() = default;
    explicit Word(std::vector<Letter> ls, bool nf = false) : letters(std::move(ls)), normal(nf) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
};

inline Word gen(std::int64_t k, int sign = 1) { return Word({Letter{k, sign}}); }

inline Word operator*(const Word& a, const Word& b)
{
    Word r;
    r.letters.reserve(a.size() + b.size());
    r.letters.insert(r.letters.end(), a.letters.begin(), a.letters.end());
    r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
    return r;
}

inline Word inverse(const Word& w)
{
    Word r;
    r.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        r.letters.push_back(Letter{it->index, -it->sign});
    return r;
}

inline Word power(const Word& w, long n)
{
    Word base = n < 0 ? inverse(w) : w;
    Word r;
    long m = n < 0 ? -n : n;
    r.letters.reserve(static_cast<std::size_t>(m) * base.size());
    for (long i = 0; i < m; ++i)
        r.letters.insert(r.letters.end(), base.letters.begin(), base.letters.end());
    return r;
}

inline std::string to_string(const Word& w)
{
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ' ';
        s += 'x' + std::to_string(w.letters[i].index);
        if (w.letters[i].sign < 0)
            s += "^-1";
    }
    return s;
}

/* Tokens "x<k>" or "x<k>^-1", separated by whitespace.  The empty string is the identity. */
inline Word parse_word(const std::string& text)
{
    std::istringstream in(text);
    std::string tok;
    Word w;
    while (in >> tok) {
        if (tok.size() < 2 || tok[0] != 'x')
            throw std::invalid_argument("bad letter '" + tok + "'");
        std::size_t pos = 1;
        while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos])))
            ++pos;
        if (pos == 1 || pos - 1 > 17)
            throw std::invalid_argument("bad letter '" + tok + "'");
        std::int64_t k = std::stoll(tok.substr(1, pos - 1));
        int sign = 1;
        if (pos != tok.size()) {
            if (tok.substr(pos) == "^-1")
                sign = -1;
            else if (tok.substr(pos) != "^1")
                throw std::invalid_argument("bad exponent in '" + tok + "'");
        }
        w.letters.push_back(Letter{k, sign});
    }
    return w;
}

/* x_0 is 0↦0, 1/2↦1/4, 3/4↦1/2, 1↦1; x_k is x_0 rescaled onto [1-2^-k, 1]. */
inline PLMap generator_map(std::int64_t k, int sign = 1)
{
    if (k < 0)
        throw std::invalid_argument("negative generator index");
    Rational L = pow2(-static_cast<long>(k));
    Rational a = 1 - L;
    std::vector<Rational> xs, ys;
    if (k > 0) {
        xs.push_back(Rational(0));
        ys.push_back(Rational(0));
    }
    xs.insert(xs.end(), {a, a + L / 2, a + 3 * L / 4, Rational(1)});
    ys.insert(ys.end(), {a, a + L / 4, a + L / 2, Rational(1)});
    PLMap f = PLMap::from_points(std::move(xs), std::move(ys));
    return sign > 0 ? f : inverse(f);
}

namespace detail {

inline PLMap word_range_to_plmap(const Word& w, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1)
        return generator_map(w.letters[lo].index, w.letters[lo].sign);
    std::size_t mid = lo + (hi - lo) / 2;
    return compose(word_range_to_plmap(w, lo, mid), word_range_to_plmap(w, mid, hi));
}

} // namespace detail

inline PLMap word_to_plmap(const Word& w)
{
    if (w.empty())
        return PLMap();
    return detail::word_range_to_plmap(w, 0, w.size());
}

/* x_k(t) without building the map */
inline Rational apply_generator(std::int64_t k, int sign, const Rational& t)
{
    Rational a = 1 - pow2(-static_cast<long>(k));
    if (t <= a)
        return t;
    Rational L = 1 - a;
    Rational u = (t - a) / L;
    Rational v;
    if (sign > 0) {
        if (u <= Rational(1, 2))
            v = u / 2;
        else if (u <= Rational(3, 4))
            v = u - Rational(1, 4);
        else
            v = 2 * u - 1;
    } else {
        if (u <= Rational(1, 4))
            v = 2 * u;
        else if (u <= Rational(1, 2))
            v = u + Rational(1, 4);
        else
            v = (u + 1) / 2;
    }
    return a + v * L;
}

/* w(t), letters applied last to first */
inline Rational evaluate(const Word& w, Rational t)
{
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        t = apply_generator(it->index, it->sign, t);
    return t;
}

} // namespace thompson
