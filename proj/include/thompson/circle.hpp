#pragma once

#include "mather.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace thompson {

/* A PL homeomorphism of R/Z given by a lift L on [0,1] with L(1) = L(0) + 1. */
class CircleMap {
public:
    CircleMap() : lift_(PLMap::identity(0, 1)) {}

    explicit CircleMap(PLMap lift) : lift_(std::move(lift))
    {
        if (lift_.dom_lo() != 0 || lift_.dom_hi() != 1 || lift_.rng_hi() - lift_.rng_lo() != 1)
            throw std::invalid_argument("CircleMap: lift must map [0,1] onto an interval of length 1");
    }

    static CircleMap identity() { return CircleMap(); }

    static CircleMap rotation(const Rational& a) { return CircleMap(PLMap::linear(0, 1, a, a + 1)); }

    /* an element of F acting on [0,1] with 0 ~ 1 */
    static CircleMap from_interval_map(const PLMap& f)
    {
        if (!f.is_endomorphism() || f.dom_lo() != 0 || f.dom_hi() != 1)
            throw std::invalid_argument("CircleMap: interval map must be an endomorphism of [0,1]");
        return CircleMap(f);
    }

    const PLMap& lift() const { return lift_; }

    /* lift extended to R by L(t + k) = L(t) + k */
    Rational operator()(const Rational& t) const
    {
        Integer k = floor_q(t);
        return lift_(t - Rational(k)) + Rational(k);
    }

    /* the lift on [a, b] */
    PLMap lift_on(const Rational& a, const Rational& b) const
    {
        Integer lo = floor_q(a), hi = floor_q(b);
        if (Rational(hi) == b)
            hi -= 1;
        std::vector<PLMap> parts;
        for (Integer k = lo; k <= hi; ++k) {
            std::vector<Rational> xs = lift_.xs(), ys = lift_.ys();
            for (auto& x : xs)
                x += Rational(k);
            for (auto& y : ys)
                y += Rational(k);
            parts.push_back(PLMap::from_points(xs, ys));
        }
        return glue(parts).restrict(a, b);
    }

    /* the lift with L(0) in [0,1) */
    CircleMap normalized() const { return shifted(-Rational(floor_q(lift_.rng_lo()))); }

    CircleMap shifted(const Rational& k) const
    {
        std::vector<Rational> ys = lift_.ys();
        for (auto& y : ys)
            y += k;
        return CircleMap(PLMap::from_points(lift_.xs(), ys));
    }

    bool same_circle_map(const CircleMap& o) const { return normalized().lift_ == o.normalized().lift_; }

    friend bool operator==(const CircleMap& a, const CircleMap& b) { return a.lift_ == b.lift_; }

    bool is_pl2() const
    {
        for (const auto& x : lift_.xs())
            if (!is_dyadic(x))
                return false;
        for (const auto& y : lift_.ys())
            if (!is_dyadic(y))
                return false;
        for (std::size_t i = 0; i < lift_.pieces(); ++i)
            if (!log2_exact(lift_.slope(i)))
                return false;
        return true;
    }

private:
    PLMap lift_;
};

/* f∘g on lifts */
inline CircleMap compose(const CircleMap& f, const CircleMap& g)
{
    const PLMap& gl = g.lift();
    return CircleMap(compose(f.lift_on(gl.rng_lo(), gl.rng_hi()), gl));
}

inline CircleMap inverse(const CircleMap& f)
{
    // with L(0) in [0,1), L on [-1,1] covers [0,1]
    Rational k(floor_q(f.lift().rng_lo()));
    CircleMap g = f.shifted(-k);
    return CircleMap(inverse(g.lift_on(-1, 1)).restrict(0, 1)).shifted(-k);
}

inline CircleMap power(const CircleMap& f, long n)
{
    CircleMap base = n < 0 ? inverse(f) : f;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    CircleMap result;
    while (e) {
        if (e & 1)
            result = compose(result, base);
        e >>= 1;
        if (e)
            base = compose(base, base);
    }
    return result;
}

/* g^{-1}∘f∘g */
inline CircleMap conjugate(const CircleMap& f, const CircleMap& g) { return compose(inverse(g), compose(f, g)); }

struct RotationResult {
    bool exact = false;
    Rational value;      // rotation number in [0,1) when exact
    Rational point;      // ŝ with L^q(ŝ) = ŝ + p
    long p = 0, q = 0;   // for the lift used
    Rational lo, hi;     // enclosure of the translation number of the lift otherwise
};

namespace detail {

inline Rational mod1(const Rational& x) { return x - Rational(floor_q(x)); }

/* a point of [0,1] where D(t) = L(t) - t equals c, given min D <= c <= max D */
inline Rational solve_displacement(const PLMap& l, const Rational& c)
{
    const auto& xs = l.xs();
    const auto& ys = l.ys();
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Rational d0 = ys[i] - xs[i], d1 = ys[i + 1] - xs[i + 1];
        if (d0 == c)
            return xs[i];
        if ((d0 < c && c <= d1) || (d1 <= c && c < d0))
            return xs[i] + (c - d0) * (xs[i + 1] - xs[i]) / (d1 - d0);
    }
    throw std::logic_error("solve_displacement: value not attained");
}

} // namespace detail

/* rotation number, certified by a periodic point when one of period <= q_max exists */
inline RotationResult rotation_number(const CircleMap& f, long q_max = 64)
{
    if (q_max < 1)
        throw std::invalid_argument("rotation_number: q_max must be >= 1");
    RotationResult r;
    CircleMap fq;
    bool have_bounds = false;
    for (long q = 1; q <= q_max; ++q) {
        fq = compose(f, fq);
        const PLMap& l = fq.lift();
        Rational dmin = l.ys()[0] - l.xs()[0], dmax = dmin;
        for (std::size_t i = 0; i < l.xs().size(); ++i) {
            Rational d = l.ys()[i] - l.xs()[i];
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), dmin.get_num_mpz_t(), dmin.get_den_mpz_t());
        if (Rational(c) <= dmax) {
            r.exact = true;
            r.p = c.get_si();
            r.q = q;
            r.point = detail::solve_displacement(l, Rational(c));
            r.value = detail::mod1(Rational(r.p) / q);
            r.lo = r.hi = Rational(r.p) / q;
            return r;
        }
        // min D_q / q <= translation number <= max D_q / q
        Rational lo = dmin / q, hi = dmax / q;
        if (!have_bounds || lo > r.lo)
            r.lo = lo;
        if (!have_bounds || hi < r.hi)
            r.hi = hi;
        have_bounds = true;
    }
    return r;
}

/* smallest q <= q_max with f^q = identity */
inline std::optional<long> is_torsion(const CircleMap& f, long q_max = 64)
{
    CircleMap fq;
    for (long q = 1; q <= q_max; ++q) {
        fq = compose(f, fq);
        if (fq.normalized().lift().is_identity())
            return q;
    }
    return std::nullopt;
}

/* the "shift by 2" on a partition of the circle into an even number of intervals */
inline CircleMap shift_by_two(const std::vector<Rational>& cuts)
{
    // cuts: 0 = c_0 < c_1 < ... < c_{2m} = 1
    std::size_t n = cuts.size() - 1;
    if (n < 2 || n % 2 != 0 || cuts.front() != 0 || cuts.back() != 1)
        throw std::invalid_argument("shift_by_two: need an even partition of [0,1]");
    std::vector<Rational> xs, ys;
    for (std::size_t i = 0; i <= n; ++i) {
        xs.push_back(cuts[i]);
        std::size_t j = i + 2;
        ys.push_back(j <= n ? cuts[j] : cuts[j - n] + 1);
    }
    return CircleMap(PLMap::from_points(xs, ys));
}

/* the dyadic partition (1/2, 1/4, ..., 2^-(k-1), 2^-(k-1)) of [0,1] into k pieces, as proportions */
inline std::vector<Rational> halving_partition(long k)
{
    std::vector<Rational> out;
    for (long i = 1; i < k; ++i)
        out.push_back(pow2(-i));
    out.push_back(pow2(-(k - 1)));
    return out;
}

/* the balanced dyadic partition of [0,1] into m pieces: lengths 2^-k and 2^-(k+1) with 2^k <= m < 2^(k+1) */
inline std::vector<Rational> balanced_partition(long m)
{
    if (m < 1)
        throw std::invalid_argument("balanced_partition: m must be >= 1");
    long k = 0;
    while ((2L << k) <= m)
        ++k;
    long longer = (2L << k) - m;
    std::vector<Rational> cuts{0};
    for (long i = 0; i < m; ++i)
        cuts.push_back(cuts.back() + pow2(i < longer ? -k : -(k + 1)));
    return cuts;
}

/* element of PL_2(S^1) with rotation number 1/n and order n */
inline CircleMap construct_torsion(long n)
{
    if (n < 1)
        throw std::invalid_argument("construct_torsion: n must be >= 1");
    if (n == 1)
        return CircleMap::identity();
    return shift_by_two(balanced_partition(2 * n));
}

/* partition of the circle on which X_n shifts by 2: 2 n! intervals J, I, J, I, ... */
inline std::vector<Rational> qz_partition(long n)
{
    if (n < 1)
        throw std::invalid_argument("qz_partition: n must be >= 1");
    std::vector<Rational> cuts{0, Rational(1, 2), 1};
    if (n == 1)
        return cuts;
    cuts = {0, Rational(1, 4), Rational(1, 2), Rational(3, 4), 1};
    for (long k = 2; k < n; ++k) {
        // cut every I interval (odd position) by the proportions of the (2k+1)-piece partition
        auto props = halving_partition(2 * k + 1);
        std::vector<Rational> next{0};
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            Rational a = cuts[i], len = cuts[i + 1] - cuts[i];
            if (i % 2 == 0) {
                next.push_back(cuts[i + 1]);
                continue;
            }
            for (const auto& p : props) {
                a += p * len;
                next.push_back(a);
            }
        }
        cuts = std::move(next);
    }
    return cuts;
}

/* X_n: rotation number 1/n!, order n!, with (X_{n+1})^{n+1} = X_n */
inline CircleMap qz_generator(long n)
{
    if (n == 1)
        return CircleMap::identity();
    return shift_by_two(qz_partition(n));
}

/* H on the stretched circle with H(f(x)) = H(x) + 1: a map R/pZ -> R/qZ for f of order q and lift f^q = id + p */
inline CircleMapPL conjugate_torsion_to_shift(const CircleMap& f, long q_max = 64)
{
    auto q = is_torsion(f, q_max);
    if (!q)
        throw std::invalid_argument("conjugate_torsion_to_shift: not torsion within q_max");
    if (*q == 1)
        throw std::invalid_argument("conjugate_torsion_to_shift: identity has no fundamental domain");
    // lift with 0 < translation number < 1, so F(x) > x
    RotationResult rot = rotation_number(f, *q);
    CircleMap g = f.shifted(-Rational(floor_q(Rational(rot.p) / rot.q)));
    long p = floor_q(power(g, *q)(Rational(0))).get_si();
    // D = [0, g(0)], H linear on D, H(g^k(x)) = H(x) + k
    Rational g0 = g(Rational(0));
    PLMap base = PLMap::linear(0, g0, 0, 1);
    std::vector<PLMap> parts;
    CircleMap gk;
    for (long k = 0; k < *q; ++k) {
        PLMap piece = compose(base, inverse(gk.lift_on(0, g0)));
        std::vector<Rational> ys = piece.ys();
        for (auto& y : ys)
            y += k;
        parts.push_back(PLMap::from_points(piece.xs(), ys));
        gk = compose(g, gk);
    }
    return CircleMapPL{p, *q, glue(parts)};
}

struct RotArithmeticReport {
    bool checked = false;
    bool conjugation_invariant = false;
    bool power_multiplicative = false;
    std::string notice;
};

/* rot(g^-1 f g) = rot(f) and rot(f^k) = k rot(f) for k = 2, 3, on certified rational rotation numbers */
inline RotArithmeticReport rot_arithmetic_checks(const CircleMap& f, const CircleMap& g, long q_max = 64)
{
    RotArithmeticReport rep;
    RotationResult rf = rotation_number(f, q_max);
    RotationResult rc = rotation_number(conjugate(f, g), q_max);
    if (!rf.exact || !rc.exact) {
        rep.notice = "rotation number not certified within q_max; skipped";
        return rep;
    }
    rep.checked = true;
    rep.conjugation_invariant = rf.value == rc.value;
    rep.power_multiplicative = true;
    for (long k : {2L, 3L}) {
        RotationResult rk = rotation_number(power(f, k), q_max);
        if (!rk.exact || rk.value != detail::mod1(rf.value * k))
            rep.power_multiplicative = false;
    }
    return rep;
}

} // namespace thompson
