#pragma once

#include "dyadic_maps.hpp"
#include "plmap.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

namespace thompson {

struct FixedComponent {
    Rational lo, hi;
    bool is_point() const { return lo == hi; }
    friend bool operator==(const FixedComponent& a, const FixedComponent& b) { return a.lo == b.lo && a.hi == b.hi; }
};

struct FixedSet {
    std::vector<FixedComponent> components;
    std::vector<Rational> dyadic_boundary;

    bool contains(const Rational& t) const
    {
        for (const auto& c : components)
            if (c.lo <= t && t <= c.hi)
                return true;
        return false;
    }
    friend bool operator==(const FixedSet& a, const FixedSet& b) { return a.components == b.components; }
    friend bool operator!=(const FixedSet& a, const FixedSet& b) { return !(a == b); }
};

inline FixedSet fixed_set(const PLMap& f)
{
    const auto& xs = f.xs();
    const auto& ys = f.ys();
    std::vector<FixedComponent> raw;
    auto add = [&](const Rational& a, const Rational& b) {
        if (!raw.empty() && raw.back().hi >= a)
            raw.back().hi = std::max(raw.back().hi, b);
        else
            raw.push_back({a, b});
    };
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        Rational d0 = ys[i] - xs[i];
        Rational d1 = ys[i + 1] - xs[i + 1];
        if (d0 == 0 && d1 == 0) {
            add(xs[i], xs[i + 1]);
        } else if (d0 == 0) {
            add(xs[i], xs[i]);
        } else if (d1 == 0) {
            add(xs[i + 1], xs[i + 1]);
        } else if ((d0 > 0) != (d1 > 0)) {
            Rational t = xs[i] + d0 / (d0 - d1) * (xs[i + 1] - xs[i]);
            add(t, t);
        }
    }
    FixedSet s;
    s.components = std::move(raw);
    for (const auto& c : s.components) {
        if (is_dyadic(c.lo))
            s.dyadic_boundary.push_back(c.lo);
        if (!c.is_point() && is_dyadic(c.hi))
            s.dyadic_boundary.push_back(c.hi);
    }
    return s;
}

/* A maximal interval between consecutive dyadic fixed boundary points; either f is the
 * identity there, or its fixed points inside are isolated and non-dyadic. */
struct WorkingInterval {
    Rational lo, hi;
    bool fixed;
};

inline std::vector<Rational> cut_points(const PLMap& f)
{
    std::vector<Rational> c{f.dom_lo()};
    for (const auto& t : fixed_set(f).dyadic_boundary)
        if (t > c.back() && t < f.dom_hi())
            c.push_back(t);
    c.push_back(f.dom_hi());
    return c;
}

inline std::vector<WorkingInterval> working_intervals(const PLMap& f)
{
    auto c = cut_points(f);
    std::vector<WorkingInterval> out;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        out.push_back({c[i], c[i + 1], f.restrict(c[i], c[i + 1]).is_identity()});
    return out;
}

namespace detail {

inline long slope_exp(const Rational& s)
{
    auto e = log2_exact(s);
    if (!e)
        throw std::invalid_argument("slope " + s.get_str() + " is not a power of 2");
    return *e;
}

inline long sign(long v) { return (v > 0) - (v < 0); }

/* power-of-two slopes, dyadic interior breakpoints, dyadic intercepts on every piece */
inline bool is_pl2(const PLMap& f)
{
    const auto& xs = f.xs();
    const auto& ys = f.ys();
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        Rational s = f.slope(i);
        if (!log2_exact(s) || !is_dyadic(ys[i] - s * xs[i]))
            return false;
    }
    for (std::size_t i = 1; i + 1 < xs.size(); ++i)
        if (!is_dyadic(xs[i]))
            return false;
    return true;
}

inline std::vector<Rational> interior_fixed_points(const PLMap& f)
{
    std::vector<Rational> out;
    for (const auto& c : fixed_set(f).components) {
        if (!c.is_point()) {
            if (c.lo < f.dom_hi() && c.hi > f.dom_lo())
                throw std::invalid_argument("map is the identity on a subinterval");
            continue;
        }
        if (c.lo > f.dom_lo() && c.lo < f.dom_hi())
            out.push_back(c.lo);
    }
    return out;
}

/* q = 2^t * m / n with m, n odd */
struct OddForm {
    long t;
    Integer m, n;
};

inline OddForm odd_form(const Rational& q)
{
    OddForm r{0, q.get_num(), q.get_den()};
    long a = static_cast<long>(mpz_scan1(r.m.get_mpz_t(), 0));
    long b = static_cast<long>(mpz_scan1(r.n.get_mpz_t(), 0));
    mpz_fdiv_q_2exp(r.m.get_mpz_t(), r.m.get_mpz_t(), static_cast<mp_bitcnt_t>(a));
    mpz_fdiv_q_2exp(r.n.get_mpz_t(), r.n.get_mpz_t(), static_cast<mp_bitcnt_t>(b));
    r.t = a - b;
    return r;
}

/* t -> 2^e t + c */
struct Germ {
    long e;
    Rational c;
    Rational operator()(const Rational& t) const { return pow2(e) * t + c; }
};

/* a germ of PL_2 carrying α to β, for α, β > 0 */
inline std::optional<Germ> orbit_germ(const Rational& alpha, const Rational& beta)
{
    bool da = is_dyadic(alpha), db = is_dyadic(beta);
    if (da != db)
        return std::nullopt;
    if (da)
        return Germ{0, beta - alpha};
    OddForm a = odd_form(alpha), b = odd_form(beta);
    if (a.n != b.n)
        return std::nullopt;
    // u ≡ 2^R m (mod n) for R in [0, ord_n(2))
    Integer x = a.m % a.n;
    Integer target = b.m % a.n;
    if (x < 0)
        x += a.n;
    if (target < 0)
        target += a.n;
    Integer start = x;
    long R = 0;
    while (x != target) {
        x = (x * 2) % a.n;
        ++R;
        if (x == start)
            return std::nullopt;
    }
    long e = b.t + R - a.t;
    Rational c = beta - pow2(e) * alpha;
    if (!is_dyadic(c))
        return std::nullopt;
    return Germ{e, c};
}

} // namespace detail

/*
 * g ∈ PL_2([lo,hi]) with g(src[i]) = dst[i]; lo, hi dyadic and both lists strictly increasing
 * inside (lo,hi).
 */
inline std::optional<PLMap> transport_points(const std::vector<Rational>& src, const std::vector<Rational>& dst,
                                             const Rational& lo, const Rational& hi)
{
    if (src.size() != dst.size())
        throw std::invalid_argument("transport_points: lists of different length");
    if (!is_dyadic(lo) || !is_dyadic(hi) || !(lo < hi))
        throw std::invalid_argument("transport_points: bad interval");
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!(src[i] > lo && src[i] < hi && dst[i] > lo && dst[i] < hi))
            throw std::invalid_argument("transport_points: point outside the open interval");
        if (i > 0 && (!(src[i - 1] < src[i]) || !(dst[i - 1] < dst[i])))
            throw std::invalid_argument("transport_points: lists must be strictly increasing");
    }
    std::vector<detail::Germ> germs;
    for (std::size_t i = 0; i < src.size(); ++i) {
        auto gm = detail::orbit_germ(src[i] - lo, dst[i] - lo);
        if (!gm)
            return std::nullopt;
        // shift to absolute coordinates: t -> 2^e (t - lo) + c + lo
        germs.push_back({gm->e, gm->c + lo - pow2(gm->e) * lo});
    }
    struct Knot {
        Rational x, y;
        bool linear_to_next;
    };
    for (long K = 1;; ++K) {
        std::vector<Knot> knots{{lo, lo, false}};
        bool ok = true;
        Rational step = pow2(-K);
        for (std::size_t i = 0; i < src.size() && ok; ++i) {
            if (is_dyadic(src[i])) {
                knots.push_back({src[i], dst[i], false});
            } else {
                Rational g0 = src[i] / step;
                Integer fl;
                mpz_fdiv_q(fl.get_mpz_t(), g0.get_num_mpz_t(), g0.get_den_mpz_t());
                Rational a = Rational(fl) * step;
                Rational b = a + step;
                knots.push_back({a, germs[i](a), true});
                knots.push_back({b, germs[i](b), false});
            }
        }
        knots.push_back({hi, hi, false});
        for (std::size_t i = 1; i < knots.size() && ok; ++i)
            ok = knots[i - 1].x < knots[i].x && knots[i - 1].y < knots[i].y;
        if (!ok) {
            if (K > 100000)
                throw std::runtime_error("transport_points: no separating scale found");
            continue;
        }
        std::vector<PLMap> parts;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const Knot& p = knots[i];
            const Knot& q = knots[i + 1];
            if (p.linear_to_next)
                parts.push_back(PLMap::linear(p.x, q.x, p.y, q.y));
            else
                parts.push_back(dyadic_interval_map(p.x, q.x, p.y, q.y));
        }
        return glue(parts);
    }
}

/* g ∈ F with g(α) = β, if α and β lie in one orbit */
inline std::optional<PLMap> same_orbit(const Rational& alpha, const Rational& beta)
{
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1))
        throw std::invalid_argument("same_orbit: points must lie in (0,1)");
    return transport_points({alpha}, {beta}, Rational(0), Rational(1));
}

/* g ∈ PL_2 with D(g^{-1} y g) = D(z), i.e. g carries D(z) onto D(y) */
inline std::optional<PLMap> align_fixed_sets(const PLMap& y, const PLMap& z)
{
    if (y.dom_lo() != z.dom_lo() || y.dom_hi() != z.dom_hi())
        throw std::invalid_argument("align_fixed_sets: different domains");
    auto dy = fixed_set(y).components;
    auto dz = fixed_set(z).components;
    if (dy.size() != dz.size())
        return std::nullopt;
    const Rational& lo = y.dom_lo();
    const Rational& hi = y.dom_hi();
    std::vector<Rational> src, dst;
    for (std::size_t i = 0; i < dy.size(); ++i) {
        if (dy[i].is_point() != dz[i].is_point())
            return std::nullopt;
        if ((dy[i].lo == lo) != (dz[i].lo == lo) || (dy[i].hi == hi) != (dz[i].hi == hi))
            return std::nullopt;
        if (dz[i].lo != lo && dz[i].lo != hi) {
            src.push_back(dz[i].lo);
            dst.push_back(dy[i].lo);
        }
        if (!dz[i].is_point() && dz[i].hi != hi) {
            src.push_back(dz[i].hi);
            dst.push_back(dy[i].hi);
        }
    }
    return transport_points(src, dst, lo, hi);
}

namespace detail {

/*
 * The conjugator g with g^{-1} y g = z and initial slope q, for y, z strictly below the
 * diagonal on the interior of their common domain [a,b].
 */
inline std::optional<PLMap> stair_below(const PLMap& y, const PLMap& z, const Rational& q)
{
    const Rational& a = y.dom_lo();
    const Rational& b = y.dom_hi();
    if (y.slope(0) != z.slope(0) || y.slope(y.pieces() - 1) != z.slope(z.pieces() - 1))
        return std::nullopt;
    Rational alpha = std::min(y.xs()[1], z.xs()[1]);
    Rational beta = std::max(y.xs()[y.xs().size() - 2], z.xs()[z.xs().size() - 2]);
    Rational p = a + (alpha - a) * (q <= 1 ? Rational(1) : Rational(1 / q));
    PLMap h = PLMap::linear(a, p, a, a + q * (p - a));
    PLMap yinv = inverse(y), zinv = inverse(z);
    Rational P = p;
    // y^{-1} h z on [P, z^{-1}(P)] extends g one fundamental domain to the right
    for (long guard = 0; !(P >= beta && h(P) >= beta); ++guard) {
        if (guard > 1000000)
            throw std::runtime_error("stair algorithm did not reach the final linear zone");
        Rational Pn = zinv(P);
        PLMap piece = compose(yinv, compose(h.restrict(z(P), P), z.restrict(P, Pn)));
        h = glue({h, piece});
        P = Pn;
    }
    if (P < b) {
        Rational hp = h(P);
        if (!(hp < b))
            return std::nullopt;
        h = glue({h, PLMap::linear(P, b, hp, b)});
    }
    if (conjugate(y, h) != z)
        return std::nullopt;
    return h;
}

/* Stair algorithm across isolated interior fixed points shared by y and z. */
inline std::optional<PLMap> stair_chain(const PLMap& y, const PLMap& z, Rational q)
{
    auto py = interior_fixed_points(y);
    auto pz = interior_fixed_points(z);
    if (py != pz)
        return std::nullopt;
    std::vector<Rational> s{y.dom_lo()};
    s.insert(s.end(), pz.begin(), pz.end());
    s.push_back(y.dom_hi());
    std::vector<PLMap> parts;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        PLMap yr = y.restrict(s[i], s[i + 1]);
        PLMap zr = z.restrict(s[i], s[i + 1]);
        Rational mid = (s[i] + s[i + 1]) / 2;
        bool by = yr(mid) < mid, bz = zr(mid) < mid;
        if (by != bz)
            return std::nullopt;
        if (!by) {
            yr = inverse(yr);
            zr = inverse(zr);
        }
        auto g = stair_below(yr, zr, q);
        if (!g)
            return std::nullopt;
        q = g->slope(g->pieces() - 1);
        parts.push_back(std::move(*g));
    }
    PLMap g = glue(parts);
    if (!is_pl2(g))
        return std::nullopt;
    return g;
}

/* d = gcd(a,b) >= 0 with a x + b y = d */
inline long ext_gcd(long a, long b, long& x, long& y)
{
    long r0 = std::abs(a), r1 = std::abs(b), s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        long q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    x = a < 0 ? -s0 : s0;
    y = b < 0 ? -t0 : t0;
    return r0;
}

} // namespace detail

/*
 * The unique g ∈ PL_2 with g^{-1} y g = z and g'(a+) = q, for y, z without fixed points
 * inside their common domain.
 */
inline std::optional<PLMap> stair_conjugator(const PLMap& y, const PLMap& z, const Rational& q)
{
    if (y.dom_lo() != z.dom_lo() || y.dom_hi() != z.dom_hi() || !y.is_endomorphism() || !z.is_endomorphism())
        throw std::invalid_argument("stair_conjugator: maps must share a domain and fix its ends");
    if (!log2_exact(q))
        throw std::invalid_argument("stair_conjugator: initial slope must be a power of 2");
    auto bump = [](const PLMap& f) {
        auto c = fixed_set(f).components;
        return c.size() == 2 && c[0].is_point() && c[1].is_point();
    };
    if (!bump(y) || !bump(z))
        throw std::invalid_argument("stair_conjugator: maps touch the diagonal inside the interval");
    Rational mid = (y.dom_lo() + y.dom_hi()) / 2;
    bool by = y(mid) < mid, bz = z(mid) < mid;
    if (by != bz)
        return std::nullopt;
    auto g = by ? detail::stair_below(y, z, q) : detail::stair_below(inverse(y), inverse(z), q);
    if (!g || !detail::is_pl2(*g))
        return std::nullopt;
    return g;
}

/* g ∈ PL_2 with g^{-1} y g = z */
inline std::optional<PLMap> conjugate_pl(const PLMap& y, const PLMap& z)
{
    if (y.dom_lo() != z.dom_lo() || y.dom_hi() != z.dom_hi())
        throw std::invalid_argument("conjugate_pl: different domains");
    if (y == z)
        return PLMap::identity(y.dom_lo(), y.dom_hi());
    auto g1 = align_fixed_sets(y, z);
    if (!g1)
        return std::nullopt;
    PLMap yh = conjugate(y, *g1);
    if (fixed_set(yh) != fixed_set(z))
        return std::nullopt;
    std::vector<PLMap> parts;
    for (const auto& w : working_intervals(z)) {
        if (w.fixed) {
            parts.push_back(PLMap::identity(w.lo, w.hi));
            continue;
        }
        PLMap yr = yh.restrict(w.lo, w.hi);
        PLMap zr = z.restrict(w.lo, w.hi);
        long u = detail::slope_exp(yr.slope(0));
        if (u != detail::slope_exp(zr.slope(0)))
            return std::nullopt;
        std::optional<PLMap> g;
        for (long k = -std::abs(u); k <= -1 && !g; ++k)
            g = detail::stair_chain(yr, zr, pow2(k));
        if (!g)
            return std::nullopt;
        parts.push_back(std::move(*g));
    }
    PLMap g = compose(*g1, glue(parts));
    if (conjugate(y, g) != z || !detail::is_pl2(g))
        throw std::logic_error("conjugate_pl produced a map that does not conjugate");
    return g;
}

/* h with h^n = f */
inline std::optional<PLMap> nth_root(const PLMap& f, long n)
{
    if (n < 1)
        throw std::invalid_argument("nth_root: n must be positive");
    if (n == 1)
        return f;
    std::vector<PLMap> parts;
    for (const auto& w : working_intervals(f)) {
        if (w.fixed) {
            parts.push_back(PLMap::identity(w.lo, w.hi));
            continue;
        }
        PLMap fr = f.restrict(w.lo, w.hi);
        long k = detail::slope_exp(fr.slope(0));
        if (k % n != 0)
            return std::nullopt;
        auto h = detail::stair_chain(fr, fr, pow2(k / n));
        if (!h || power(*h, n) != fr)
            return std::nullopt;
        parts.push_back(std::move(*h));
    }
    PLMap h = glue(parts);
    if (power(h, n) != f)
        throw std::logic_error("nth_root produced a wrong root");
    return h;
}

enum class CentralizerKind { Full, Cyclic, Trivial };

struct CentralizerPart {
    Rational lo, hi;
    CentralizerKind kind;
    PLMap generator; // minimal root for Cyclic, identity otherwise
};

struct CentralizerDescription {
    std::vector<CentralizerPart> parts;

    static CentralizerDescription full(const Rational& lo, const Rational& hi)
    {
        return {{{lo, hi, CentralizerKind::Full, PLMap::identity(lo, hi)}}};
    }
    const CentralizerPart& part_containing(const Rational& a, const Rational& b) const
    {
        for (const auto& p : parts)
            if (p.lo <= a && b <= p.hi)
                return p;
        throw std::out_of_range("no centralizer part contains the interval");
    }
    std::vector<Rational> boundaries() const
    {
        std::vector<Rational> b;
        for (const auto& p : parts)
            b.push_back(p.lo);
        b.push_back(parts.back().hi);
        return b;
    }
};

inline CentralizerDescription centralizer(const PLMap& f)
{
    CentralizerDescription c;
    for (const auto& w : working_intervals(f)) {
        if (w.fixed) {
            c.parts.push_back({w.lo, w.hi, CentralizerKind::Full, PLMap::identity(w.lo, w.hi)});
            continue;
        }
        PLMap fr = f.restrict(w.lo, w.hi);
        long k = detail::slope_exp(fr.slope(0));
        std::optional<PLMap> r;
        for (long d = 1; d <= std::abs(k) && !r; ++d)
            if (k % d == 0)
                r = detail::stair_chain(fr, fr, pow2(d * detail::sign(k)));
        if (!r)
            throw std::logic_error("centralizer: f has no root of itself on a working interval");
        c.parts.push_back({w.lo, w.hi, CentralizerKind::Cyclic, std::move(*r)});
    }
    return c;
}

namespace detail {

/* generator of ⟨a⟩ ∩ ⟨b⟩ for one-bump-chain roots on the same interval */
inline std::optional<PLMap> intersect_cyclic(const PLMap& a, const PLMap& b)
{
    long ea = slope_exp(a.slope(0)), eb = slope_exp(b.slope(0));
    long L = std::lcm(std::abs(ea), std::abs(eb));
    PLMap pa = power(a, L / std::abs(ea));
    PLMap pb = power(b, sign(ea) * sign(eb) * (L / std::abs(eb)));
    if (pa != pb)
        return std::nullopt;
    return pa;
}

} // namespace detail

inline CentralizerDescription centralizer_intersection(const std::vector<PLMap>& fs)
{
    if (fs.empty())
        return CentralizerDescription::full(Rational(0), Rational(1));
    std::vector<CentralizerDescription> cs;
    std::vector<Rational> cuts;
    for (const auto& f : fs) {
        if (f.dom_lo() != fs[0].dom_lo() || f.dom_hi() != fs[0].dom_hi())
            throw std::invalid_argument("centralizer_intersection: different domains");
        cs.push_back(centralizer(f));
        auto b = cs.back().boundaries();
        cuts.insert(cuts.end(), b.begin(), b.end());
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    CentralizerDescription out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational& a = cuts[i];
        const Rational& b = cuts[i + 1];
        CentralizerPart part{a, b, CentralizerKind::Full, PLMap::identity(a, b)};
        for (const auto& c : cs) {
            const auto& p = c.part_containing(a, b);
            if (p.kind == CentralizerKind::Full)
                continue;
            if (p.kind == CentralizerKind::Trivial || p.lo != a || p.hi != b) {
                part.kind = CentralizerKind::Trivial;
                part.generator = PLMap::identity(a, b);
                break;
            }
            if (part.kind == CentralizerKind::Full) {
                part.kind = CentralizerKind::Cyclic;
                part.generator = p.generator;
                continue;
            }
            auto r = detail::intersect_cyclic(part.generator, p.generator);
            if (!r) {
                part.kind = CentralizerKind::Trivial;
                part.generator = PLMap::identity(a, b);
                break;
            }
            part.generator = std::move(*r);
        }
        out.parts.push_back(std::move(part));
    }
    return out;
}

/* n with h^n(τ) = μ */
inline std::optional<long> orbit_power(const PLMap& h, const Rational& tau, const Rational& mu)
{
    if (!h.in_domain(tau) || !h.in_domain(mu))
        throw std::out_of_range("orbit_power: point outside domain");
    if (h(tau) == tau)
        return mu == tau ? std::optional<long>(0) : std::nullopt;
    if (mu == tau)
        return 0;
    // fixed points of h adjacent to τ bound the orbit
    Rational left = h.dom_lo(), right = h.dom_hi();
    for (const auto& c : fixed_set(h).components) {
        if (c.hi < tau)
            left = c.hi;
        else if (c.lo > tau) {
            right = c.lo;
            break;
        }
    }
    if (!(mu > left && mu < right))
        return std::nullopt;
    bool up = h(tau) > tau;
    PLMap step = (up == (mu > tau)) ? h : inverse(h);
    long dir = (up == (mu > tau)) ? 1 : -1;
    Rational t = tau;
    for (long n = 1;; ++n) {
        t = step(t);
        if (t == mu)
            return dir * n;
        if ((mu > tau && t > mu) || (mu < tau && t < mu))
            return std::nullopt;
    }
}

namespace detail {

/*
 * For x, y strictly below the diagonal inside [u,v] with equal slopes at u, and g fixing u, v
 * with slope 1 at u: a K such that x^t = g y^t has no solution t >= K.
 */
inline long power_upper_bound(const PLMap& x, const PLMap& g, const PLMap& y, long cap)
{
    if (x == y)
        return 1;
    std::vector<Rational> bp = x.xs();
    bp.insert(bp.end(), y.xs().begin(), y.xs().end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    Rational delta, psi;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        if (x(bp[i + 1]) != y(bp[i + 1])) {
            delta = bp[i];
            psi = bp[i + 1];
            break;
        }
    const PLMap* B = &y;
    PLMap G = g;
    if (x(psi) > y(psi)) {
        B = &x;
        G = inverse(g);
    }
    Rational theta = delta;
    if (!G.is_identity())
        theta = std::min(theta, G.xs()[1]);
    Rational t = psi;
    long k = 0;
    while (!(t < theta)) {
        t = (*B)(t);
        if (++k > cap)
            throw std::runtime_error("solve_power_equation: bound exceeds the cap");
    }
    return std::max<long>(k, 1);
}

struct PowerRange {
    bool any;
    long lo, hi;
};

/* solutions of x^t = g y^t on one segment without interior fixed points */
inline std::optional<PowerRange> power_segment(const PLMap& x, const PLMap& g, const PLMap& y, long cap)
{
    long xi = slope_exp(x.slope(0)), up = slope_exp(y.slope(0)), ga = slope_exp(g.slope(0));
    if (xi != up) {
        if (ga % (xi - up) != 0)
            return std::nullopt;
        long t = ga / (xi - up);
        return PowerRange{false, t, t};
    }
    if (ga != 0)
        return std::nullopt;
    if (x == y)
        return g.is_identity() ? std::optional<PowerRange>(PowerRange{true, 0, 0}) : std::nullopt;
    bool above = xi > 0;
    PLMap X = above ? inverse(x) : x;
    PLMap Y = above ? inverse(y) : y;
    long hi = power_upper_bound(X, g, Y, cap);
    long lo = power_upper_bound(Y, g, conjugate(X, g), cap);
    // solutions t' of X^t' = g Y^t' lie in (-lo, hi); t = ±t'
    if (above)
        return PowerRange{false, -hi + 1, lo - 1};
    return PowerRange{false, -lo + 1, hi - 1};
}

} // namespace detail

/* t with x^t = g0 ∘ y^t */
inline std::optional<long> solve_power_equation(const PLMap& x, const PLMap& g0, const PLMap& y, long cap = 10000)
{
    if (x.dom_lo() != y.dom_lo() || x.dom_hi() != y.dom_hi() || g0.dom_lo() != x.dom_lo() ||
        g0.dom_hi() != x.dom_hi() || !x.is_endomorphism() || !y.is_endomorphism() || !g0.is_endomorphism())
        throw std::invalid_argument("solve_power_equation: maps must be endomorphisms of one interval");
    if (g0.is_identity())
        return 0;
    auto check = [&](long t) -> std::optional<long> {
        if (power(x, t) == compose(g0, power(y, t)))
            return t;
        return std::nullopt;
    };
    auto px = detail::interior_fixed_points(x);
    auto py = detail::interior_fixed_points(y);
    if (px != py) {
        for (const auto& tau : px)
            if (!std::binary_search(py.begin(), py.end(), tau)) {
                auto t = orbit_power(y, tau, inverse(g0)(tau));
                return t ? check(*t) : std::nullopt;
            }
        for (const auto& tau : py)
            if (!std::binary_search(px.begin(), px.end(), tau)) {
                auto t = orbit_power(x, tau, g0(tau));
                return t ? check(*t) : std::nullopt;
            }
    }
    for (const auto& r : px)
        if (g0(r) != r)
            return std::nullopt;
    std::vector<Rational> s{x.dom_lo()};
    s.insert(s.end(), px.begin(), px.end());
    s.push_back(x.dom_hi());
    long lo = std::numeric_limits<long>::min(), hi = std::numeric_limits<long>::max();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        auto r = detail::power_segment(x.restrict(s[i], s[i + 1]), g0.restrict(s[i], s[i + 1]),
                                       y.restrict(s[i], s[i + 1]), cap);
        if (!r)
            return std::nullopt;
        if (r->any)
            continue;
        lo = std::max(lo, r->lo);
        hi = std::min(hi, r->hi);
    }
    if (lo == std::numeric_limits<long>::min())
        return check(0);
    for (long t = lo; t <= hi; ++t)
        if (auto ok = check(t))
            return ok;
    return std::nullopt;
}

/* does g lie in the subgroup described by h? */
inline bool in_subgroup(const CentralizerDescription& h, const PLMap& g)
{
    for (const auto& p : h.parts) {
        if (g(p.lo) != p.lo || g(p.hi) != p.hi)
            return false;
        PLMap gr = g.restrict(p.lo, p.hi);
        switch (p.kind) {
        case CentralizerKind::Full:
            break;
        case CentralizerKind::Trivial:
            if (!gr.is_identity())
                return false;
            break;
        case CentralizerKind::Cyclic: {
            Rational t = (p.lo + p.hi) / 2;
            auto m = orbit_power(p.generator, t, gr(t));
            if (!m || power(p.generator, *m) != gr)
                return false;
            break;
        }
        }
    }
    return true;
}

/* g ∈ H with g^{-1} y g = z */
inline std::optional<PLMap> conjugate_in(const CentralizerDescription& H, const PLMap& y, const PLMap& z)
{
    auto g1o = conjugate_pl(y, z);
    if (!g1o)
        return std::nullopt;
    const PLMap& g1 = *g1o;
    PLMap g1inv = inverse(g1);
    CentralizerDescription cz = centralizer(z);
    auto ph = H.boundaries();
    auto pz = cz.boundaries();
    auto in_pz = [&](const Rational& t) { return std::binary_search(pz.begin(), pz.end(), t); };
    for (const auto& p : ph)
        if (in_pz(p) && g1(p) != p)
            return std::nullopt;

    // exponent m_J of each cyclic part of H, when forced by a P_z point inside it
    std::vector<std::optional<long>> mj(H.parts.size());
    for (std::size_t j = 0; j < H.parts.size(); ++j) {
        const auto& J = H.parts[j];
        if (J.kind != CentralizerKind::Cyclic)
            continue;
        for (const auto& q : pz)
            if (q > J.lo && q < J.hi) {
                mj[j] = orbit_power(J.generator, q, g1(q));
                if (!mj[j])
                    return std::nullopt;
                break;
            }
        if (!mj[j]) {
            bool same = false;
            for (const auto& w : cz.parts)
                if (w.lo == J.lo && w.hi == J.hi && w.kind == CentralizerKind::Cyclic)
                    same = true;
            if (!same)
                mj[j] = 0;
        }
    }

    std::vector<PLMap> pieces;
    for (const auto& W : cz.parts) {
        PLMap g1w = g1.restrict(W.lo, W.hi);
        if (W.kind == CentralizerKind::Cyclic) {
            const PLMap& s = W.generator;
            std::optional<long> k;
            bool decided = false;
            for (const auto& p : ph)
                if (p > W.lo && p < W.hi) {
                    k = orbit_power(s, p, g1inv(p));
                    decided = true;
                    break;
                }
            for (std::size_t j = 0; j < H.parts.size() && !decided; ++j) {
                const auto& J = H.parts[j];
                Rational a = std::max(J.lo, W.lo), b = std::min(J.hi, W.hi);
                if (!(a < b))
                    continue;
                Rational t = (a + b) / 2;
                if (J.kind == CentralizerKind::Trivial) {
                    k = orbit_power(s, t, g1inv(t));
                    decided = true;
                } else if (J.kind == CentralizerKind::Cyclic && mj[j]) {
                    k = orbit_power(s, t, g1inv(power(J.generator, *mj[j])(t)));
                    decided = true;
                } else if (J.kind == CentralizerKind::Cyclic) {
                    // J = W: r^m = g1 s^k on W
                    const PLMap& r = J.generator;
                    long al = detail::slope_exp(r.slope(0));
                    long be = detail::slope_exp(s.slope(0));
                    long ga = detail::slope_exp(g1w.slope(0));
                    long m0, k0n;
                    long d = detail::ext_gcd(al, -be, m0, k0n);
                    if (ga % d != 0)
                        return std::nullopt;
                    m0 *= ga / d;
                    k0n *= ga / d;
                    long k0 = k0n;
                    PLMap X = power(r, be / d);
                    PLMap Y = power(s, al / d);
                    PLMap G0 = compose(power(r, -m0), compose(g1w, power(s, k0)));
                    auto t0 = solve_power_equation(X, G0, Y);
                    if (!t0)
                        return std::nullopt;
                    k = k0 + (al / d) * *t0;
                    decided = true;
                }
            }
            if (!decided)
                k = 0;
            if (!k)
                return std::nullopt;
            pieces.push_back(compose(g1w, power(s, *k)));
            continue;
        }
        // Full or Trivial W: interpolate through H's constraints
        if (W.kind == CentralizerKind::Trivial)
            throw std::logic_error("centralizer of a single map has no trivial part");
        std::vector<Rational> br{W.lo};
        for (const auto& p : ph)
            if (p > W.lo && p < W.hi)
                br.push_back(p);
        br.push_back(W.hi);
        auto target = [&](std::size_t i) {
            if (i == 0)
                return g1(W.lo);
            if (i + 1 == br.size())
                return g1(W.hi);
            return br[i];
        };
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            const Rational& a = br[i];
            const Rational& b = br[i + 1];
            Rational ta = target(i), tb = target(i + 1);
            if (!(ta < tb))
                return std::nullopt;
            const auto& J = H.part_containing(a, b);
            if (J.kind == CentralizerKind::Full) {
                pieces.push_back(dyadic_interval_map(a, b, ta, tb));
            } else if (J.kind == CentralizerKind::Trivial) {
                if (ta != a || tb != b)
                    return std::nullopt;
                pieces.push_back(PLMap::identity(a, b));
            } else {
                std::size_t j = static_cast<std::size_t>(&J - H.parts.data());
                long m = mj[j] ? *mj[j] : 0;
                PLMap rm = power(J.generator, m);
                PLMap piece = rm.restrict(a, b);
                if (piece.rng_lo() != ta || piece.rng_hi() != tb)
                    return std::nullopt;
                pieces.push_back(std::move(piece));
            }
        }
    }
    PLMap g = glue(pieces);
    if (conjugate(y, g) != z || !in_subgroup(H, g))
        return std::nullopt;
    return g;
}

/* g with g^{-1} x_i g = y_i for every i */
inline std::optional<PLMap> simultaneous_conjugate(const std::vector<PLMap>& xs, const std::vector<PLMap>& ys)
{
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("simultaneous_conjugate: tuples must be non-empty and of equal length");
    const Rational& lo = xs[0].dom_lo();
    const Rational& hi = xs[0].dom_hi();
    CentralizerDescription H = CentralizerDescription::full(lo, hi);
    PLMap g = PLMap::identity(lo, hi);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        PLMap target = compose(g, compose(ys[j], inverse(g)));
        auto c = conjugate_in(H, xs[j], target);
        if (!c)
            return std::nullopt;
        g = compose(*c, g);
        H = centralizer_intersection(std::vector<PLMap>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(j) + 1));
    }
    for (std::size_t j = 0; j < xs.size(); ++j)
        if (conjugate(xs[j], g) != ys[j])
            throw std::logic_error("simultaneous_conjugate produced a wrong conjugator");
    return g;
}

struct PowerConjugacy {
    long m, n;
    PLMap g;
};

/* the primitive (m,n) with m > 0 and g such that g^{-1} y^m g = z^n */
inline std::optional<PowerConjugacy> power_conjugate(const PLMap& y, const PLMap& z)
{
    if (y.dom_lo() != z.dom_lo() || y.dom_hi() != z.dom_hi())
        throw std::invalid_argument("power_conjugate: different domains");
    if (y.is_identity() || z.is_identity()) {
        if (y.is_identity() && z.is_identity())
            return PowerConjugacy{1, 1, y};
        return std::nullopt;
    }
    auto g1 = align_fixed_sets(y, z);
    if (!g1)
        return std::nullopt;
    PLMap yh = conjugate(y, *g1);
    long m = 0, n = 0;
    for (const auto& w : working_intervals(z)) {
        if (w.fixed)
            continue;
        if (yh.restrict(w.lo, w.hi).is_identity())
            return std::nullopt;
        long a = detail::slope_exp(yh.right_slope(w.lo));
        long b = detail::slope_exp(z.right_slope(w.lo));
        if (a == 0 || b == 0 || detail::sign(a) != detail::sign(b))
            return std::nullopt;
        if (m == 0) {
            long d = std::gcd(a, b);
            m = std::abs(b / d);
            n = std::abs(a / d);
        } else if (m * a != n * b) {
            return std::nullopt;
        }
    }
    auto g = conjugate_pl(power(y, m), power(z, n));
    if (!g)
        return std::nullopt;
    return PowerConjugacy{m, n, std::move(*g)};
}

} // namespace thompson
