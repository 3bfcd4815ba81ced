#pragma once

#include "dynamics.hpp"

#include <stdexcept>
#include <vector>

namespace thompson {

/* A lift of a map R/mZ -> R/nZ on [0,m]; lift(t+m) = lift(t)+n, lift(0) in [0,n). */
struct CircleMapPL {
    long m, n;
    PLMap lift;

    Rational operator()(const Rational& t) const
    {
        Rational q = t / m;
        Integer k;
        mpz_fdiv_q(k.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        Rational r = t - Rational(k) * m;
        return lift(r) + Rational(k) * n;
    }
};

/* maps [2^k, 2^(k+1)] linearly onto [k, k+1] */
inline Rational plog(const Rational& t)
{
    long k = floor_log2(t);
    return k + (t - pow2(k)) / pow2(k);
}

inline Rational plog_inverse(const Rational& s)
{
    Integer k;
    mpz_fdiv_q(k.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    long kk = k.get_si();
    return pow2(kk) * (1 + (s - kk));
}

namespace detail {

struct BumpData {
    long m, n;
};

inline BumpData one_bump_slopes(const PLMap& f)
{
    if (!f.in_F())
        throw std::invalid_argument("Mather invariant needs an element of F");
    auto c = fixed_set(f).components;
    if (c.size() != 2 || !c[0].is_point() || !c[1].is_point())
        throw std::invalid_argument("Mather invariant needs a one-bump function");
    long m = slope_exp(f.slope(0));
    long n = -slope_exp(f.slope(f.pieces() - 1));
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("Mather invariant needs f(t) > t on (0,1)");
    return {m, n};
}

} // namespace detail

inline CircleMapPL mather_invariant(const PLMap& f)
{
    auto [m, n] = detail::one_bump_slopes(f);
    // fundamental domain [2^-(mj), 2^-(mj)+m] inside the initial linear piece
    const Rational& eps = f.xs()[1];
    long j = 1;
    while (pow2(m - m * j) > eps)
        ++j;
    std::vector<Rational> px, py;
    for (long i = 0; i <= m; ++i) {
        px.push_back(Rational(i));
        py.push_back(pow2(i - m * j));
    }
    PLMap P = PLMap::from_points(px, py);
    // f^N carries it into the final linear piece
    const Rational& tail = f.xs()[f.xs().size() - 2];
    PLMap h = P;
    while (h.rng_lo() < tail)
        h = compose(f, h);
    // s -> -plog(1 - s) on the range of h
    const Rational& s0 = h.rng_lo();
    const Rational& s1 = h.rng_hi();
    std::vector<Rational> qx{s0}, qy{-plog(1 - s0)};
    for (long k = floor_log2(1 - s0); pow2(k) > 1 - s1; --k) {
        Rational s = 1 - pow2(k);
        if (s > s0 && s < s1) {
            qx.push_back(s);
            qy.push_back(-plog(1 - s));
        }
    }
    qx.push_back(s1);
    qy.push_back(-plog(1 - s1));
    PLMap L = compose(PLMap::from_points(qx, qy), h);
    Rational l0 = L(Rational(0)) / n;
    Integer c;
    mpz_fdiv_q(c.get_mpz_t(), l0.get_num_mpz_t(), l0.get_den_mpz_t());
    std::vector<Rational> ys = L.ys();
    for (auto& y : ys)
        y -= Rational(c) * n;
    return {m, n, PLMap::from_points(L.xs(), ys)};
}

/* conjugacy of two one-bump elements of F via their Mather invariants */
inline bool mather_conjugate(const PLMap& f, const PLMap& g)
{
    auto dir = [](const PLMap& h) {
        auto c = fixed_set(h).components;
        if (!h.in_F() || c.size() != 2 || !c[0].is_point() || !c[1].is_point())
            throw std::invalid_argument("mather_conjugate needs one-bump elements of F");
        return h(Rational(1, 2)) > Rational(1, 2);
    };
    bool uf = dir(f), ug = dir(g);
    if (uf != ug)
        return false;
    if (!uf)
        return mather_conjugate(inverse(f), inverse(g));
    CircleMapPL a = mather_invariant(f);
    CircleMapPL b = mather_invariant(g);
    if (a.m != b.m || a.n != b.n)
        return false;
    for (long k = 0; k < a.m; ++k) {
        // b(θ + k) - a(θ) must be a constant integer
        std::vector<Rational> pts = a.lift.xs();
        for (const auto& x : b.lift.xs()) {
            for (Rational t : {Rational(x - k), Rational(x - k + a.m)})
                if (t >= 0 && t <= a.m)
                    pts.push_back(t);
        }
        Rational c = b(Rational(k)) - a(Rational(0));
        if (c.get_den() != 1)
            continue;
        bool ok = true;
        for (const auto& t : pts)
            if (b(t + k) - a(t) != c) {
                ok = false;
                break;
            }
        if (ok)
            return true;
    }
    return false;
}

} // namespace thompson
