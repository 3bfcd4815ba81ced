#pragma once

#include <thompson/dynamics.hpp>
#include <thompson/normal_form.hpp>
#include <thompson/plmap.hpp>

#include <ostream>

#include <random>
#include <string>

namespace thompson {
inline std::ostream& operator<<(std::ostream& os, const PLMap& f) { return os << f.str(); }
} // namespace thompson

namespace testing_support {

using namespace thompson;

inline Word random_word(std::mt19937_64& rng, std::size_t len, std::int64_t max_index)
{
    std::uniform_int_distribution<std::int64_t> idx(0, max_index);
    std::bernoulli_distribution sgn(0.5);
    Word w;
    for (std::size_t i = 0; i < len; ++i)
        w.letters.push_back(Letter{idx(rng), sgn(rng) ? 1 : -1});
    return w;
}

/* word over x0, x1 with no immediate cancellation */
inline Word random_f2_word(std::mt19937_64& rng, std::size_t len)
{
    std::uniform_int_distribution<int> pick(0, 3);
    Word w;
    while (w.size() < len) {
        int c = pick(rng);
        Letter l{c / 2, (c % 2) ? -1 : 1};
        if (!w.empty() && w.letters.back().index == l.index && w.letters.back().sign == -l.sign)
            continue;
        w.letters.push_back(l);
    }
    return w;
}

inline PLMap random_element(std::mt19937_64& rng, std::size_t len, std::int64_t max_index = 3)
{
    return word_to_plmap(random_word(rng, len, max_index));
}

inline bool is_one_bump(const PLMap& f)
{
    auto c = fixed_set(f).components;
    return c.size() == 2 && c[0].is_point() && c[1].is_point();
}

/* random element of F with no fixed points inside (0,1) */
inline PLMap random_one_bump(std::mt19937_64& rng, std::size_t len)
{
    while (true) {
        PLMap f = random_element(rng, len);
        if (is_one_bump(f))
            return f;
    }
}

inline std::string primitive_rotation(const std::string& s)
{
    if (s.empty())
        return s;
    std::size_t n = s.size(), p = n;
    for (std::size_t d = 1; d <= n; ++d)
        if (n % d == 0 && s == std::string(s.begin() + static_cast<long>(d), s.end()) + s.substr(0, d)) {
            p = d;
            break;
        }
    std::string root = s.substr(0, p), best = root;
    for (std::size_t i = 1; i < p; ++i) {
        std::string r = root.substr(i) + root.substr(0, i);
        best = std::min(best, r);
    }
    return best;
}

/* periodic block of the binary expansion of a non-dyadic rational in (0,1) */
inline std::string period_block(const Rational& p)
{
    Integer den = p.get_den();
    while (mpz_even_p(den.get_mpz_t()))
        den /= 2;
    Rational x = p;
    // skip the preperiod
    Integer full = p.get_den();
    while (mpz_even_p(full.get_mpz_t())) {
        full /= 2;
        x = frac_q(2 * x);
    }
    std::string bits;
    Rational y = x;
    do {
        y *= 2;
        bits.push_back(y >= 1 ? '1' : '0');
        y = frac_q(y);
    } while (y != x);
    return bits;
}

inline Rational random_dyadic(std::mt19937_64& rng, int bits)
{
    std::uniform_int_distribution<long> d(1, (1L << bits) - 1);
    Rational r(d(rng), 1L << bits);
    r.canonicalize();
    return r;
}

} // namespace testing_support
